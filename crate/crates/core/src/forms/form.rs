//! Differential forms in a coframe: bitmask monomials with function coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{FunctionElement, GaussRat, Point, ScalarContext};
use crate::error::Result;

pub type Mask = u32;

#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    ctx: Arc<ScalarContext>,
    dim: usize,
    terms: BTreeMap<Mask, FunctionElement>,
}

/// Sign of moving the single index `a` in front of the indices in `mask`
/// (number of set bits of `mask` below `a`).
pub fn insertion_sign(mask: Mask, a: usize) -> bool {
    let below = mask & ((1u32 << a) - 1);
    below.count_ones() % 2 == 1
}

/// `(mask_a) ^ (mask_b)` as a sorted monomial: `None` if they overlap,
/// else the sign flip (true = negative).
pub fn wedge_sign(a: Mask, b: Mask) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut neg = false;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        // elements of b below i must hop over a's element i
        let below = b & ((1u32 << i) - 1);
        if below.count_ones() % 2 == 1 {
            neg = !neg;
        }
        rest &= rest - 1;
    }
    Some(neg)
}

impl Form {
    pub fn zero(ctx: &Arc<ScalarContext>, dim: usize) -> Self {
        Form { ctx: ctx.clone(), dim, terms: BTreeMap::new() }
    }

    pub fn scalar(x: FunctionElement, dim: usize) -> Self {
        let mut f = Form::zero(x.ctx(), dim);
        f.add_term(0, x);
        f
    }

    pub fn one(ctx: &Arc<ScalarContext>, dim: usize) -> Self {
        Form::scalar(FunctionElement::one(ctx), dim)
    }

    /// The coframe 1-form with index `a`.
    pub fn basis(ctx: &Arc<ScalarContext>, dim: usize, a: usize) -> Self {
        Self::monomial(ctx, dim, 1 << a, FunctionElement::one(ctx))
    }

    pub fn monomial(ctx: &Arc<ScalarContext>, dim: usize, mask: Mask, c: FunctionElement) -> Self {
        let mut f = Form::zero(ctx, dim);
        f.add_term(mask, c);
        f
    }

    /// One-form from coefficient list.
    pub fn one_form(ctx: &Arc<ScalarContext>, coeffs: &[FunctionElement]) -> Self {
        let mut f = Form::zero(ctx, coeffs.len());
        for (a, c) in coeffs.iter().enumerate() {
            f.add_term(1 << a, c.clone());
        }
        f
    }

    pub fn ctx(&self) -> &Arc<ScalarContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Mask, FunctionElement> {
        &self.terms
    }

    pub fn coeff(&self, mask: Mask) -> FunctionElement {
        self.terms.get(&mask).cloned().unwrap_or_else(|| FunctionElement::zero(&self.ctx))
    }

    pub fn add_term(&mut self, mask: Mask, c: FunctionElement) {
        if c.is_zero() {
            return;
        }
        let next = match self.terms.get(&mask) {
            Some(v) => v + &c,
            None => c,
        };
        if next.is_zero() {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, next);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Form {
        self.map_coeffs(|c| -c)
    }

    pub fn mul_fn(&self, f: &FunctionElement) -> Form {
        self.map_coeffs(|c| c * f)
    }

    pub fn scale(&self, s: &GaussRat) -> Form {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn conj(&self) -> Form {
        self.map_coeffs(|c| c.conj())
    }

    pub fn map_coeffs(&self, f: impl Fn(&FunctionElement) -> FunctionElement) -> Form {
        let mut r = Form::zero(&self.ctx, self.dim);
        for (m, c) in &self.terms {
            r.add_term(*m, f(c));
        }
        r
    }

    pub fn wedge(&self, o: &Form) -> Form {
        let mut r = Form::zero(&self.ctx, self.dim.max(o.dim));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if let Some(neg) = wedge_sign(*ma, *mb) {
                    let p = ca * cb;
                    r.add_term(ma | mb, if neg { -p } else { p });
                }
            }
        }
        r
    }

    /// Interior product with the frame vector `X_a`.
    pub fn interior_basis(&self, a: usize) -> Form {
        let mut r = Form::zero(&self.ctx, self.dim);
        for (m, c) in &self.terms {
            if m & (1 << a) != 0 {
                let v = if insertion_sign(*m, a) { -c } else { c.clone() };
                r.add_term(m & !(1 << a), v);
            }
        }
        r
    }

    /// Interior product with the vector field `sum v^a X_a`.
    pub fn interior(&self, v: &[FunctionElement]) -> Form {
        let mut r = Form::zero(&self.ctx, self.dim);
        for (a, va) in v.iter().enumerate() {
            if !va.is_zero() {
                r = r.add(&self.interior_basis(a).mul_fn(va));
            }
        }
        r
    }

    pub fn degree_part(&self, k: usize) -> Form {
        let mut r = Form::zero(&self.ctx, self.dim);
        for (m, c) in &self.terms {
            if m.count_ones() as usize == k {
                r.add_term(*m, c.clone());
            }
        }
        r
    }

    pub fn top_coeff(&self) -> FunctionElement {
        self.coeff(((1u64 << self.dim) - 1) as Mask)
    }

    /// `Some(0|1)` for definite parity, `None` for mixed; zero is even.
    pub fn parity(&self) -> Option<u32> {
        let mut ps = self.terms.keys().map(|m| m.count_ones() % 2);
        let first = ps.next().unwrap_or(0);
        ps.all(|p| p == first).then_some(first)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| m.count_ones() as usize).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn subs(&self, p: &Point) -> Form {
        self.map_coeffs(|c| c.subs(p))
    }

    pub fn eval(&self, p: &Point) -> Result<Form> {
        let mut r = Form::zero(&self.ctx, self.dim);
        for (m, c) in &self.terms {
            r.add_term(*m, c.eval(p)?);
        }
        Ok(r)
    }

    /// Same form viewed in a higher-dimensional coframe whose first indices
    /// agree with this one.
    pub fn widen(&self, dim: usize) -> Form {
        assert!(dim >= self.dim);
        Form { ctx: self.ctx.clone(), dim, terms: self.terms.clone() }
    }

    /// Reindex through `map[old] = new` into a coframe of dimension `dim`.
    pub fn reindex(&self, map: &[usize], dim: usize) -> Form {
        let mut r = Form::zero(&self.ctx, dim);
        for (m, c) in &self.terms {
            let mut acc = Form::one(&self.ctx, dim);
            let mut k = *m;
            while k != 0 {
                let i = k.trailing_zeros() as usize;
                acc = acc.wedge(&Form::basis(&self.ctx, dim, map[i]));
                k &= k - 1;
            }
            r = r.add(&acc.mul_fn(c));
        }
        r
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Mask> = self.terms.keys().collect();
        keys.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
        let mut out = String::new();
        for (k, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let mono: Vec<&str> = (0..self.dim).filter(|i| m & (1 << i) != 0).map(|i| names[i].as_str()).collect();
            let mono = mono.join("^");
            let cs = c.to_string();
            let (neg, body) = if mono.is_empty() {
                if c.terms().len() > 1 {
                    (false, format!("({})", cs))
                } else if let Some(stripped) = cs.strip_prefix('-') {
                    (true, stripped.to_string())
                } else {
                    (false, cs)
                }
            } else if c.is_one() {
                (false, mono)
            } else if (-c).is_one() {
                (true, mono)
            } else if c.terms().len() > 1 {
                (false, format!("({})*{}", cs, mono))
            } else if let Some(stripped) = cs.strip_prefix('-') {
                (true, format!("{}*{}", stripped, mono))
            } else {
                (false, format!("{}*{}", cs, mono))
            };
            match (k, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{}", body)),
                (_, false) => out.push_str(&format!(" + {}", body)),
                (_, true) => out.push_str(&format!(" - {}", body)),
            }
        }
        out
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim).map(|i| format!("e{}", i + 1)).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ContextBuilder;

    fn ctx() -> Arc<ScalarContext> {
        ContextBuilder::new("t").coords(&["x"]).build().unwrap()
    }

    #[test]
    fn wedge_signs() {
        let c = ctx();
        let e = |a| Form::basis(&c, 3, a);
        assert!(e(0).wedge(&e(0)).is_zero());
        assert_eq!(e(1).wedge(&e(0)), e(0).wedge(&e(1)).neg());
        let e012 = e(0).wedge(&e(1)).wedge(&e(2));
        assert_eq!(e(2).wedge(&e(0).wedge(&e(1))), e012);
        assert_eq!(e(1).wedge(&e(0).wedge(&e(2))), e012.neg());
    }

    #[test]
    fn interior_is_antiderivation() {
        let c = ctx();
        let e = |a| Form::basis(&c, 3, a);
        let w = e(0).wedge(&e(1));
        assert_eq!(w.interior_basis(0), e(1));
        assert_eq!(w.interior_basis(1), e(0).neg());
        assert!(w.interior_basis(2).is_zero());
    }
}
