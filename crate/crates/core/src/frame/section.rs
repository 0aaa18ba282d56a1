//! Sections of the generalized tangent bundle and their brackets.

use std::fmt;

use crate::algebra::{FunctionElement, GaussRat, Point};
use crate::error::{Error, Result};
use crate::forms::form::Form;

use super::model::FrameModel;

/// `sum v^a X_a + sum w_a alpha^a` in frame coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct GenSection {
    pub v: Vec<FunctionElement>,
    pub w: Vec<FunctionElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Bracket0,
    Bracket1,
}

impl GenSection {
    pub fn zero(model: &FrameModel) -> Self {
        let m = model.dim();
        GenSection { v: vec![model.zero(); m], w: vec![model.zero(); m] }
    }

    pub fn vector(model: &FrameModel, a: usize) -> Self {
        let mut s = Self::zero(model);
        s.v[a] = model.one();
        s
    }

    pub fn coform(model: &FrameModel, a: usize) -> Self {
        let mut s = Self::zero(model);
        s.w[a] = model.one();
        s
    }

    pub fn from_parts(v: Vec<FunctionElement>, w: Vec<FunctionElement>) -> Self {
        assert_eq!(v.len(), w.len());
        GenSection { v, w }
    }

    /// The `2m` generators `X_1..X_m, alpha^1..alpha^m`.
    pub fn generators(model: &FrameModel) -> Vec<GenSection> {
        let m = model.dim();
        (0..m).map(|a| Self::vector(model, a)).chain((0..m).map(|a| Self::coform(model, a))).collect()
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Coordinates as one vector `(v, w)` of length `2m`.
    pub fn coords(&self) -> Vec<FunctionElement> {
        self.v.iter().chain(self.w.iter()).cloned().collect()
    }

    pub fn from_coords(c: &[FunctionElement]) -> Self {
        let m = c.len() / 2;
        GenSection { v: c[..m].to_vec(), w: c[m..].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().chain(self.w.iter()).all(|x| x.is_zero())
    }

    pub fn map(&self, f: impl Fn(&FunctionElement) -> FunctionElement) -> Self {
        GenSection { v: self.v.iter().map(&f).collect(), w: self.w.iter().map(&f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        GenSection { v: self.v.iter().zip(&o.v).map(|(a, b)| a + b).collect(), w: self.w.iter().zip(&o.w).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn mul_fn(&self, f: &FunctionElement) -> Self {
        self.map(|x| x * f)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn subs(&self, p: &Point) -> Self {
        self.map(|x| x.subs(p))
    }

    pub fn eval(&self, p: &Point) -> Result<Self> {
        Ok(GenSection {
            v: self.v.iter().map(|x| x.eval(p)).collect::<Result<_>>()?,
            w: self.w.iter().map(|x| x.eval(p)).collect::<Result<_>>()?,
        })
    }

    pub fn form_part(&self) -> Form {
        Form::one_form(self.v[0].ctx(), &self.w)
    }

    pub fn is_vector(&self) -> bool {
        self.w.iter().all(|x| x.is_zero())
    }

    pub fn is_coform(&self) -> bool {
        self.v.iter().all(|x| x.is_zero())
    }

    /// Embed into a model whose frame extends this one by trailing directions.
    pub fn widen(&self, dim: usize) -> Self {
        let z = FunctionElement::zero(self.v[0].ctx());
        let mut s = self.clone();
        s.v.resize(dim, z.clone());
        s.w.resize(dim, z);
        s
    }

    pub fn display(&self, model: &FrameModel) -> String {
        let mut parts: Vec<(String, &FunctionElement)> = Vec::new();
        for (a, c) in self.v.iter().enumerate() {
            if !c.is_zero() {
                parts.push((model.frame[a].clone(), c));
            }
        }
        for (a, c) in self.w.iter().enumerate() {
            if !c.is_zero() {
                parts.push((model.coframe[a].clone(), c));
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (name, c)) in parts.into_iter().enumerate() {
            let cs = c.to_string();
            let (neg, body) = if c.is_one() {
                (false, name)
            } else if (-c).is_one() {
                (true, name)
            } else if c.terms().len() > 1 {
                (false, format!("({})*{}", cs, name))
            } else if let Some(s) = cs.strip_prefix('-') {
                (true, format!("{}*{}", s, name))
            } else {
                (false, format!("{}*{}", cs, name))
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

impl fmt::Debug for GenSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v={:?} w={:?}", self.v, self.w)
    }
}

fn check_dims(model: &FrameModel, xs: &[&GenSection]) -> Result<()> {
    for x in xs {
        if x.dim() != model.dim() {
            return Err(Error::ModelMismatch(format!(
                "section of dimension {} used on model `{}` of dimension {}",
                x.dim(),
                model.name,
                model.dim()
            )));
        }
    }
    Ok(())
}

impl FrameModel {
    /// `<X+a, Y+b> = (a(Y) + b(X)) / 2`.
    pub fn inner(&self, x: &GenSection, y: &GenSection) -> Result<FunctionElement> {
        check_dims(self, &[x, y])?;
        let mut acc = self.zero();
        for a in 0..self.dim() {
            acc = &acc + &(&x.w[a] * &y.v[a]);
            acc = &acc + &(&y.w[a] * &x.v[a]);
        }
        Ok(acc.scale(&GaussRat::ratio(1, 2)))
    }

    /// Dorfman bracket `[X,Y] + L_X b - i_Y da`, optionally twisted by `H`.
    pub fn dorfman(&self, x: &GenSection, y: &GenSection, twist: Option<&Form>) -> Result<GenSection> {
        check_dims(self, &[x, y])?;
        let v = self.vec_bracket(&x.v, &y.v)?;
        let alpha = x.form_part();
        let beta = y.form_part();
        let mut form = self.d(&beta)?.interior(&x.v);
        let bx = beta.interior(&x.v);
        form = form.add(&self.d(&bx)?);
        form = form.sub(&self.d(&alpha)?.interior(&y.v));
        if let Some(h) = twist {
            form = form.sub(&h.interior(&y.v).interior(&x.v));
        }
        let mut w = vec![self.zero(); self.dim()];
        for (m, c) in form.terms() {
            if m.count_ones() != 1 {
                return Err(Error::Other("bracket produced a non-1-form".into()));
            }
            w[m.trailing_zeros() as usize] = c.clone();
        }
        Ok(GenSection { v, w })
    }

    /// Bracket on a cone model. `Bracket0` is the Dorfman bracket of the
    /// extended model; `Bracket1` adds the terms coming from weighting the
    /// form part by `e^t`.
    pub fn cone_bracket(&self, x: &GenSection, y: &GenSection, twist: Option<&Form>, variant: Variant) -> Result<GenSection> {
        let base = self.dorfman(x, y, twist)?;
        match variant {
            Variant::Bracket0 => Ok(base),
            Variant::Bracket1 => {
                let t = self.cone_index.ok_or(Error::NotACone)?;
                let f1 = &x.v[t];
                let f2 = &y.v[t];
                let mut out = base;
                for a in 0..self.dim() {
                    out.w[a] = &(&out.w[a] + &(f1 * &y.w[a])) - &(f2 * &x.w[a]);
                }
                let mut pair = self.zero();
                for a in 0..self.dim() {
                    pair = &pair + &(&x.w[a] * &y.v[a]);
                }
                out.w[t] = &out.w[t] + &pair;
                Ok(out)
            }
        }
    }

    /// `e^omega (X + a) = X + a + i_X omega`.
    pub fn b_transform(&self, omega: &Form, x: &GenSection) -> Result<GenSection> {
        check_dims(self, &[x])?;
        let shift = omega.interior(&x.v);
        let mut out = x.clone();
        for (m, c) in shift.terms() {
            if m.count_ones() != 1 {
                return Err(Error::Precondition("gauge form must be a 2-form".into()));
            }
            let a = m.trailing_zeros() as usize;
            out.w[a] = &out.w[a] + c;
        }
        Ok(out)
    }

    /// Section `df` of a function.
    pub fn exact(&self, f: &FunctionElement) -> Result<GenSection> {
        Ok(GenSection { v: vec![self.zero(); self.dim()], w: self.d_fn(f)? })
    }

    pub fn courant_axioms_check(&self, sections: &[GenSection], twist: Option<&Form>) -> Result<CourantReport> {
        if sections.len() < 3 {
            return Err(Error::Precondition("at least three sections are required".into()));
        }
        let mut rep = CourantReport::default();
        let br = |a: &GenSection, b: &GenSection| self.dorfman(a, b, twist);
        let n = sections.len();
        let mut brackets = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                brackets[i][j] = Some(br(&sections[i], &sections[j])?);
            }
        }
        let b = |i: usize, j: usize| brackets[i][j].as_ref().unwrap();
        for i in 0..n {
            for j in 0..n {
                let defect = b(i, j).add(b(j, i)).sub(&self.exact(&self.inner(&sections[i], &sections[j])?)?.scale(&GaussRat::from_int(2)));
                rep.checked[2] += 1;
                if !defect.is_zero() {
                    rep.residuals[2].push(format!("({}, {}): {}", i, j, defect.display(self)));
                }
                for k in 0..n {
                    let (x, y, z) = (&sections[i], &sections[j], &sections[k]);
                    let lhs = self.apply_vec(&x.v, &self.inner(y, z)?)?;
                    let rhs = &self.inner(b(i, j), z)? + &self.inner(y, b(i, k))?;
                    rep.checked[0] += 1;
                    let r = &lhs - &rhs;
                    if !r.is_zero() {
                        rep.residuals[0].push(format!("({}, {}, {}): {}", i, j, k, r));
                    }
                    let l = br(x, b(j, k))?;
                    let r2 = br(b(i, j), z)?.add(&br(y, b(i, k))?);
                    let d = l.sub(&r2);
                    rep.checked[1] += 1;
                    if !d.is_zero() {
                        rep.residuals[1].push(format!("({}, {}, {}): {}", i, j, k, d.display(self)));
                    }
                }
            }
        }
        Ok(rep)
    }
}

/// Residuals of the three Courant axioms (anchor compatibility, Leibniz
/// identity, symmetric defect); empty lists mean the axiom holds.
#[derive(Clone, Debug, Default)]
pub struct CourantReport {
    pub checked: [usize; 3],
    pub residuals: [Vec<String>; 3],
}

impl CourantReport {
    pub fn ok(&self) -> bool {
        self.residuals.iter().all(|r| r.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::builtin_model;

    #[test]
    fn s3_frame_brackets() {
        let m = builtin_model("s3").unwrap();
        let br = |a: &str, b: &str| m.dorfman(&m.section(a).unwrap(), &m.section(b).unwrap(), None).unwrap();
        assert_eq!(br("V1", "V2"), m.section("2*V3").unwrap());
        assert_eq!(br("V2", "V3"), m.section("2*V1").unwrap());
        assert_eq!(br("V1", "nu2"), m.section("2*nu3").unwrap());
        assert_eq!(br("V2", "nu1"), m.section("-2*nu3").unwrap());
    }

    #[test]
    fn s3_orientation_search() {
        // the table [V_i, nu_j] = 2 eps_ijk nu_k fixes the coframe sign
        let m = builtin_model("s3").unwrap();
        let mut hits = 0;
        for s in [1i64, -1] {
            let mut mm = m.clone();
            for e in 0..3 {
                mm.dco[e] = m.dco[e].scale(&GaussRat::from_int(s));
            }
            if mm.validate().is_err() {
                continue;
            }
            let ok = (0..3).all(|i| {
                (0..3).all(|j| {
                    let got = mm.dorfman(&GenSection::vector(&mm, i), &GenSection::coform(&mm, j), None).unwrap();
                    let expect = if i == j {
                        GenSection::zero(&mm)
                    } else {
                        let k = 3 - i - j;
                        let eps = if (j + 3 - i) % 3 == 1 { 2 } else { -2 };
                        GenSection::coform(&mm, k).scale(&GaussRat::from_int(eps))
                    };
                    got == expect
                })
            });
            if ok {
                hits += 1;
                assert_eq!(s, 1);
            }
        }
        assert_eq!(hits, 1);
    }

    #[test]
    fn heisenberg_brackets() {
        let m = builtin_model("heisenberg").unwrap();
        let br = |a: &str, b: &str| m.dorfman(&m.section(a).unwrap(), &m.section(b).unwrap(), None).unwrap();
        assert_eq!(br("X1", "alpha3"), m.section("alpha2").unwrap());
        assert_eq!(br("X2", "alpha3"), m.section("-alpha1").unwrap());
        assert_eq!(br("X1", "X2"), m.section("-X3").unwrap());
    }

    #[test]
    fn heisenberg_dual_twisted_brackets() {
        let m = builtin_model("heisenberg-dual").unwrap();
        let h = m.named_form("H").unwrap().clone();
        let br = |a: &str, b: &str| m.dorfman(&m.section(a).unwrap(), &m.section(b).unwrap(), Some(&h)).unwrap();
        assert_eq!(br("X1", "X2"), m.section("alpha3'").unwrap());
        assert_eq!(br("X1", "X3'"), m.section("-alpha2").unwrap());
        assert_eq!(br("X2", "X3'"), m.section("alpha1").unwrap());
    }

    #[test]
    fn inner_products() {
        let m = builtin_model("s3").unwrap();
        let e1 = m.section("-V1").unwrap();
        let e2 = m.section("-nu1 - f*V2 - g*V3").unwrap();
        assert_eq!(m.inner(&e1, &e2).unwrap(), m.scalar("1/2").unwrap());
        assert!(m.inner(&e1, &e1).unwrap().is_zero());
        assert!(m.inner(&e2, &e2).unwrap().is_zero());
        let c = m.cone();
        assert_eq!(c.inner(&c.section("T").unwrap(), &c.section("dt").unwrap()).unwrap(), c.scalar("1/2").unwrap());
    }

    #[test]
    fn cone_brackets() {
        let c = builtin_model("torus3").unwrap().cone();
        let s = |x: &str| c.section(x).unwrap();
        let b1 = |x: &str, y: &str| c.cone_bracket(&s(x), &s(y), None, Variant::Bracket1).unwrap();
        let b0 = |x: &str, y: &str| c.cone_bracket(&s(x), &s(y), None, Variant::Bracket0).unwrap();
        assert_eq!(b1("T", "dt"), s("dt"));
        assert_eq!(b1("T", "e1"), s("e1"));
        assert!(b0("T", "dt").is_zero());
        assert!(b0("dt", "T").is_zero());
        assert_eq!(b1("e2", "E2"), s("dt"));
        let plain = builtin_model("torus3").unwrap();
        let err = plain.cone_bracket(&GenSection::vector(&plain, 0), &GenSection::vector(&plain, 1), None, Variant::Bracket1);
        assert_eq!(err.unwrap_err(), Error::NotACone);
    }

    #[test]
    fn gauge_shift() {
        let m = builtin_model("torus3").unwrap();
        let omega = m.form("e1^e2").unwrap();
        let e1 = m.section("E2 + e1").unwrap();
        assert_eq!(m.b_transform(&omega, &e1).unwrap(), m.section("E2").unwrap());
        let x = m.section("x*E1 + y*e3").unwrap();
        assert_eq!(m.b_transform(&m.zero_form(), &x).unwrap(), x);
        let beta = m.section("e3").unwrap();
        assert_eq!(m.b_transform(&omega, &beta).unwrap(), beta);
    }

    #[test]
    fn courant_axioms_on_builtins() {
        for name in ["s3", "heisenberg", "heisenberg-dual", "torus3", "hopf-dual"] {
            let m = builtin_model(name).unwrap();
            let gens = GenSection::generators(&m);
            let rep = m.courant_axioms_check(&gens, None).unwrap();
            assert!(rep.ok(), "{}: {:?}", name, rep);
            for (_, h) in m.named_forms.iter().filter(|(_, f)| f.degrees() == vec![3]) {
                let rep = m.courant_axioms_check(&gens, Some(h)).unwrap();
                assert!(rep.ok(), "{} twisted: {:?}", name, rep);
            }
        }
    }

    #[test]
    fn too_few_sections() {
        let m = builtin_model("torus3").unwrap();
        let g = GenSection::generators(&m);
        assert!(matches!(m.courant_axioms_check(&g[..2], None), Err(Error::Precondition(_))));
    }
}
