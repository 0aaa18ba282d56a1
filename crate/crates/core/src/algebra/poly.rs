//! Function elements: polynomials over a scalar context, always in normal form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::context::{add_term, const_terms, mul_terms, unit_mono, GenKind, Mono, ScalarContext, Terms};
use super::scalar::GaussRat;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct FunctionElement {
    ctx: Arc<ScalarContext>,
    terms: Terms,
}

/// Exact values for some generators (coordinates, and optionally formal
/// symbols); everything else is left symbolic on substitution.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Point {
    pub values: BTreeMap<usize, GaussRat>,
}

impl Point {
    pub fn new() -> Self {
        Point::default()
    }

    pub fn set(&mut self, gen: usize, v: GaussRat) {
        self.values.insert(gen, v);
    }
}

impl FunctionElement {
    /// Normalize raw terms into the context.
    pub fn from_terms(ctx: &Arc<ScalarContext>, terms: Terms) -> Self {
        FunctionElement { ctx: ctx.clone(), terms: ctx.reduce(terms) }
    }

    pub fn zero(ctx: &Arc<ScalarContext>) -> Self {
        FunctionElement { ctx: ctx.clone(), terms: Terms::new() }
    }

    pub fn one(ctx: &Arc<ScalarContext>) -> Self {
        Self::constant(ctx, GaussRat::one())
    }

    pub fn constant(ctx: &Arc<ScalarContext>, c: GaussRat) -> Self {
        FunctionElement { ctx: ctx.clone(), terms: const_terms(ctx.ngens(), c) }
    }

    pub fn int(ctx: &Arc<ScalarContext>, n: i64) -> Self {
        Self::constant(ctx, GaussRat::from_int(n))
    }

    pub fn i(ctx: &Arc<ScalarContext>) -> Self {
        Self::constant(ctx, GaussRat::i())
    }

    pub fn gen_at(ctx: &Arc<ScalarContext>, g: usize) -> Self {
        let mut t = Terms::new();
        t.insert(unit_mono(ctx.ngens(), g, 1), GaussRat::one());
        Self::from_terms(ctx, t)
    }

    pub fn gen(ctx: &Arc<ScalarContext>, name: &str) -> Result<Self> {
        let g = ctx.gen_index(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(Self::gen_at(ctx, g))
    }

    pub fn ctx(&self) -> &Arc<ScalarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    /// Same value moved into a compatible context (identical generators).
    pub fn rebase(&self, ctx: &Arc<ScalarContext>) -> Result<Self> {
        if ctx.gens != self.ctx.gens {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::from_terms(ctx, self.terms.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    fn check(&self, o: &Self) {
        assert!(
            ScalarContext::compatible(&self.ctx, &o.ctx),
            "function elements from different scalar contexts ({} vs {})",
            self.ctx.name,
            o.ctx.name
        );
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if !ScalarContext::compatible(&self.ctx, &o.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(self + o)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if !ScalarContext::compatible(&self.ctx, &o.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(self * o)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        FunctionElement { ctx: self.ctx.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugate; every generator is real-valued.
    pub fn conj(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect();
        FunctionElement { ctx: self.ctx.clone(), terms }
    }

    pub fn re(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), GaussRat::real(c.re.clone()))).filter(|(_, c)| !c.is_zero()).collect();
        FunctionElement { ctx: self.ctx.clone(), terms }
    }

    pub fn im(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), GaussRat::real(c.im.clone()))).filter(|(_, c)| !c.is_zero()).collect();
        FunctionElement { ctx: self.ctx.clone(), terms }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    pub fn derive(&self, name: &str) -> Result<Self> {
        let d = self.ctx.derivation_index(name).ok_or_else(|| Error::UnknownDerivation(name.to_string()))?;
        self.derive_idx(d)
    }

    pub fn derive_idx(&self, d: usize) -> Result<Self> {
        let terms = self.ctx.derive_terms(d, &self.terms)?;
        Ok(FunctionElement { ctx: self.ctx.clone(), terms })
    }

    /// Generators that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let n = self.ctx.ngens();
        (0..n).filter(|&g| self.terms.keys().any(|m| m[g] > 0)).collect()
    }

    /// Substitute the point's values; unassigned generators stay symbolic.
    pub fn subs(&self, p: &Point) -> Self {
        let mut out = Terms::new();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut nm = m.clone();
            for (&g, v) in &p.values {
                if nm[g] > 0 {
                    coef = &coef * &v.pow(nm[g] as u32);
                    nm[g] = 0;
                }
            }
            add_term(&mut out, nm, coef);
        }
        Self::from_terms(&self.ctx, out)
    }

    /// Substitute and insist that only algebraic constants remain.
    pub fn eval(&self, p: &Point) -> Result<Self> {
        let v = self.subs(p);
        for g in v.support() {
            if v.ctx.gens[g].kind != GenKind::Constant {
                return Err(Error::NotEvaluable(v.ctx.gens[g].name.clone()));
            }
        }
        Ok(v)
    }

    /// Substitute generator `g` by `val`.
    pub fn substitute(&self, g: usize, val: &Self) -> Self {
        self.check(val);
        let mut acc = Self::zero(&self.ctx);
        let mut powers: Vec<Self> = vec![Self::one(&self.ctx)];
        for (m, c) in &self.terms {
            let e = m[g] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * val;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest[g] = 0;
            let mut t = Terms::new();
            t.insert(rest, c.clone());
            let base = FunctionElement { ctx: self.ctx.clone(), terms: t };
            acc = &acc + &(&base * &powers[e]);
        }
        acc
    }

    fn leading(&self) -> Option<(&Mono, &GaussRat)> {
        self.terms.iter().max_by(|a, b| self.ctx.order_key(a.0).cmp(&self.ctx.order_key(b.0)))
    }

    /// Exact quotient `self / d` when one is found by leading-term division.
    /// `None` means no polynomial quotient was found (it may still exist in
    /// a quotient ring; callers then keep a fraction).
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check(d);
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        let (dm, dc) = d.leading()?;
        let dm = dm.clone();
        let dinv = dc.inv()?;
        let mut rem = self.clone();
        let mut q = Self::zero(&self.ctx);
        let mut steps = 0usize;
        while let Some((rm, rc)) = rem.leading() {
            steps += 1;
            if steps > 10_000 || rm.iter().zip(&dm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Mono = rm.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let mut t = Terms::new();
            t.insert(qm, rc * &dinv);
            let qt = FunctionElement { ctx: self.ctx.clone(), terms: t };
            let next = &rem - &(&qt * d);
            if let (Some((nm, _)), Some((om, _))) = (next.leading(), rem.leading()) {
                if self.ctx.order_key(nm) > self.ctx.order_key(om) {
                    return None;
                }
            }
            q = &q + &qt;
            rem = next;
        }
        Some(q)
    }

    /// Rational content: a positive rational dividing every real and
    /// imaginary coefficient, chosen so the result has coprime integer parts.
    pub fn content(&self) -> Option<BigRational> {
        use num_integer::Integer;
        use num_traits::Signed;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::from(1);
        for c in self.terms.values() {
            for r in [&c.re, &c.im] {
                if r.is_zero() {
                    continue;
                }
                num = num.gcd(r.numer());
                den = den.lcm(r.denom());
            }
        }
        if num.is_zero() {
            return None;
        }
        Some(BigRational::new(num.abs(), den))
    }
}

impl PartialEq for FunctionElement {
    fn eq(&self, o: &Self) -> bool {
        ScalarContext::compatible(&self.ctx, &o.ctx) && self.terms == o.terms
    }
}

impl Eq for FunctionElement {}

impl fmt::Debug for FunctionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn mono_string(ctx: &ScalarContext, m: &Mono) -> String {
    let mut parts = Vec::new();
    for &g in &ctx.priority {
        match m[g] {
            0 => {}
            1 => parts.push(ctx.gens[g].name.clone()),
            e => parts.push(format!("{}^{}", ctx.gens[g].name, e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for FunctionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ts: Vec<(&Mono, &GaussRat)> = self.terms.iter().collect();
        ts.sort_by(|a, b| {
            let o = self.ctx.order_key(b.0).cmp(&self.ctx.order_key(a.0));
            if o == Ordering::Equal {
                b.0.cmp(a.0)
            } else {
                o
            }
        });
        let mut out = String::new();
        for (k, (m, c)) in ts.into_iter().enumerate() {
            let ms = mono_string(&self.ctx, m);
            let neg = c.im.is_zero() && c.re < BigRational::from_integer(0.into())
                || c.re.is_zero() && c.im < BigRational::from_integer(0.into());
            let a = if neg { -c } else { c.clone() };
            let body = if ms.is_empty() {
                a.to_string()
            } else if a.is_one() {
                ms
            } else {
                format!("{}*{}", a, ms)
            };
            match (k, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body)
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body)
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body)
                }
            }
        }
        write!(f, "{}", out)
    }
}

impl<'a> Add<&'a FunctionElement> for &'a FunctionElement {
    type Output = FunctionElement;
    fn add(self, o: &FunctionElement) -> FunctionElement {
        self.check(o);
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        FunctionElement { ctx: self.ctx.clone(), terms }
    }
}

impl<'a> Sub<&'a FunctionElement> for &'a FunctionElement {
    type Output = FunctionElement;
    fn sub(self, o: &FunctionElement) -> FunctionElement {
        self.check(o);
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut terms, m.clone(), -c);
        }
        FunctionElement { ctx: self.ctx.clone(), terms }
    }
}

impl<'a> Mul<&'a FunctionElement> for &'a FunctionElement {
    type Output = FunctionElement;
    fn mul(self, o: &FunctionElement) -> FunctionElement {
        self.check(o);
        FunctionElement::from_terms(&self.ctx, mul_terms(&self.terms, &o.terms))
    }
}

impl Neg for &FunctionElement {
    type Output = FunctionElement;
    fn neg(self) -> FunctionElement {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        FunctionElement { ctx: self.ctx.clone(), terms }
    }
}

impl Neg for FunctionElement {
    type Output = FunctionElement;
    fn neg(self) -> FunctionElement {
        -&self
    }
}

impl Add for FunctionElement {
    type Output = FunctionElement;
    fn add(self, o: FunctionElement) -> FunctionElement {
        &self + &o
    }
}

impl Sub for FunctionElement {
    type Output = FunctionElement;
    fn sub(self, o: FunctionElement) -> FunctionElement {
        &self - &o
    }
}

impl Mul for FunctionElement {
    type Output = FunctionElement;
    fn mul(self, o: FunctionElement) -> FunctionElement {
        &self * &o
    }
}
