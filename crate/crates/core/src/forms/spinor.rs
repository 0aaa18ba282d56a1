//! Spinor side of the generalized tangent bundle: Clifford action on forms,
//! Mukai pairing, type and pointwise annihilators.

use crate::algebra::{kernel, FunctionElement, GaussRat, Point};
use crate::error::{Error, Result};
use crate::frame::{FrameModel, GenSection};

use super::form::{Form, Mask};

fn binom2(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Reversal anti-automorphism of the exterior algebra.
pub fn reversal(r: &Form) -> Form {
    let mut out = Form::zero(r.ctx(), r.dim());
    for (&mask, c) in r.terms() {
        let k = mask.count_ones() as usize;
        out.add_term(mask, if binom2(k) % 2 == 1 { -c } else { c.clone() });
    }
    out
}

impl FrameModel {
    /// `(X + a) . rho = i_X rho + a ^ rho`.
    pub fn clifford_act(&self, x: &GenSection, r: &Form) -> Result<Form> {
        if x.dim() != self.dim() || r.dim() != self.dim() {
            return Err(Error::ModelMismatch(format!("operand dimension differs from model `{}`", self.name)));
        }
        Ok(r.interior(&x.v).add(&x.form_part().wedge(r)))
    }

    pub fn annihilates(&self, x: &GenSection, r: &Form) -> Result<bool> {
        Ok(self.clifford_act(x, r)?.is_zero())
    }

    /// `(-1)^(m choose 2)` times the top-degree part of `rev(r1) ^ r2`,
    /// where `rev` is the reversal `(-1)^(k choose 2)` on `k`-forms.
    pub fn mukai(&self, r1: &Form, r2: &Form) -> Form {
        let top = reversal(r1).wedge(r2).degree_part(self.dim());
        if binom2(self.dim()) % 2 == 1 {
            top.neg()
        } else {
            top
        }
    }

    /// Top coefficient of the Mukai pairing.
    pub fn mukai_coeff(&self, r1: &Form, r2: &Form) -> FunctionElement {
        self.mukai(r1, r2).top_coeff()
    }

    /// Exponential of an even form without degree-0 part.
    pub fn exp_form(&self, w: &Form) -> Result<Form> {
        if w.parity() != Some(0) || !w.degree_part(0).is_zero() {
            return Err(Error::Precondition("exponential needs an even form with zero scalar part".into()));
        }
        let mut out = Form::one(&self.ctx, self.dim());
        let mut power = out.clone();
        let mut k = 1i64;
        loop {
            power = power.wedge(w).scale(&GaussRat::ratio(1, k));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
            k += 1;
        }
        Ok(out)
    }

    pub fn point(&self, k: usize) -> Result<&Point> {
        self.points.get(k).ok_or_else(|| Error::Precondition(format!("model `{}` has no sample point {}", self.name, k)))
    }

    fn eval_nonzero(&self, r: &Form, k: usize) -> Result<Form> {
        let v = r.eval(self.point(k)?)?;
        if v.is_zero() {
            return Err(Error::ZeroSpinorAtPoint(k));
        }
        Ok(v)
    }

    /// Lowest degree with a nonvanishing coefficient at sample point `k`.
    pub fn spinor_type_at(&self, r: &Form, k: usize) -> Result<usize> {
        let v = self.eval_nonzero(r, k)?;
        Ok(v.terms().keys().map(|m| m.count_ones() as usize).min().unwrap_or(0))
    }

    /// Matrix of `x -> x . rho` on the constant generators, rows indexed by
    /// the monomials in `masks`.
    fn clifford_matrix(&self, v: &Form) -> Result<Vec<Vec<FunctionElement>>> {
        let gens = GenSection::generators(self);
        let images: Vec<Form> = gens.iter().map(|g| self.clifford_act(g, v)).collect::<Result<_>>()?;
        let mut masks: Vec<Mask> = images.iter().flat_map(|f| f.terms().keys().copied()).collect();
        masks.sort_unstable();
        masks.dedup();
        Ok(masks.iter().map(|&m| images.iter().map(|f| f.coeff(m)).collect()).collect())
    }

    /// Basis of the annihilator of `rho` at sample point `k`, as sections
    /// with constant coefficients.
    pub fn annihilator_basis_at(&self, r: &Form, k: usize) -> Result<Vec<GenSection>> {
        let v = self.eval_nonzero(r, k)?;
        let a = self.clifford_matrix(&v)?;
        let n = 2 * self.dim();
        if a.is_empty() {
            return Ok(GenSection::generators(self));
        }
        Ok(kernel(&a, n).into_iter().map(|c| GenSection::from_coords(&c)).collect())
    }

    /// Annihilator of maximal dimension and definite parity.
    pub fn is_pure_at(&self, r: &Form, k: usize) -> Result<bool> {
        if r.eval(self.point(k)?)?.parity().is_none() {
            return Ok(false);
        }
        Ok(self.annihilator_basis_at(r, k)?.len() == self.dim())
    }

    /// Twisting 3-form: must be closed.
    pub fn check_twist(&self, h: &Form) -> Result<()> {
        if h.dim() != self.dim() || h.degrees().iter().any(|&d| d != 3) {
            return Err(Error::Validation("twist must be a 3-form on the model".into()));
        }
        if !self.d(h)?.is_zero() {
            return Err(Error::Validation(format!("twist {} is not closed", self.form_string(h))));
        }
        Ok(())
    }
}

/// Rank of a list of sections evaluated at a point (as a real/complex span).
pub fn span_rank(sections: &[GenSection]) -> usize {
    let rows: Vec<Vec<FunctionElement>> = sections.iter().map(|s| s.coords()).collect();
    crate::algebra::rank(&rows)
}

/// Do two lists of constant sections span the same space?
pub fn same_span(a: &[GenSection], b: &[GenSection]) -> bool {
    let ra = span_rank(a);
    let rb = span_rank(b);
    let both: Vec<GenSection> = a.iter().chain(b.iter()).cloned().collect();
    ra == rb && span_rank(&both) == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::builtin_model;

    fn s3() -> FrameModel {
        builtin_model("s3").unwrap()
    }

    #[test]
    fn wedge_examples() {
        let m = s3();
        let n1 = m.form("nu1").unwrap();
        assert!(n1.wedge(&n1).is_zero());
        let r = m.form("i*nu2 + nu3").unwrap();
        assert_eq!(r.wedge(&n1), n1.wedge(&r).neg());
    }

    #[test]
    fn s3_differential_of_rho1() {
        let m = s3();
        let r = m.form("i*nu2 + nu3").unwrap();
        let expect = m.form("nu1").unwrap().wedge(&r).scale(&(GaussRat::i() * GaussRat::from_int(2)));
        assert_eq!(m.d(&r).unwrap(), expect);
    }

    #[test]
    fn d_squared_vanishes() {
        for name in ["s3", "heisenberg", "heisenberg-dual", "torus3", "hopf-dual", "triple-contact-7d"] {
            let m = builtin_model(name).unwrap();
            let coords: Vec<FunctionElement> = (0..m.ctx.ngens())
                .filter(|&g| m.ctx.gens[g].kind == crate::algebra::GenKind::Coordinate)
                .map(|g| FunctionElement::gen_at(&m.ctx, g))
                .collect();
            let twists: Vec<Option<Form>> = std::iter::once(None)
                .chain(m.named_forms.iter().filter(|(_, f)| f.degrees() == vec![3]).map(|(_, f)| Some(f.clone())))
                .collect();
            for a in 0..m.dim() {
                for b in 0..m.dim() {
                    let mut coeff = m.one();
                    if let Some(x) = coords.get((a + b) % coords.len().max(1)) {
                        coeff = &(x * x) + &m.one();
                    }
                    let f = m.one_form_basis(a).wedge(&m.one_form_basis(b)).add(&m.one_form_basis(a)).mul_fn(&coeff);
                    for h in &twists {
                        let dd = m.d_twisted(&m.d_twisted(&f, h.as_ref()).unwrap(), h.as_ref()).unwrap();
                        assert!(dd.is_zero(), "{}: {:?}", name, dd);
                    }
                }
            }
        }
    }

    #[test]
    fn clifford_relation() {
        let m = builtin_model("heisenberg").unwrap();
        let x = m.section("x*X1 + alpha2 + y*X3").unwrap();
        let y = m.section("X2 - z*alpha1 + alpha3").unwrap();
        let r = m.form("1 + x*alpha1^alpha3 + alpha2 + alpha1^alpha2^alpha3").unwrap();
        let xx = m.clifford_act(&x, &m.clifford_act(&x, &r).unwrap()).unwrap();
        assert_eq!(xx, r.mul_fn(&m.inner(&x, &x).unwrap()));
        let xy = m.clifford_act(&x, &m.clifford_act(&y, &r).unwrap()).unwrap();
        let yx = m.clifford_act(&y, &m.clifford_act(&x, &r).unwrap()).unwrap();
        let two = m.inner(&x, &y).unwrap().scale(&GaussRat::from_int(2));
        assert_eq!(xy.add(&yx), r.mul_fn(&two));
    }

    #[test]
    fn s3_clifford_example() {
        let m = s3();
        let e2 = m.section("-nu1 - f*V2 - g*V3").unwrap();
        let r1 = m.form("i*nu2 + nu3").unwrap();
        let expect = m.form("-(g + i*f) - nu1^(i*nu2 + nu3)").unwrap();
        assert_eq!(m.clifford_act(&e2, &r1).unwrap(), expect);
        assert!(m.annihilates(&m.section("V1").unwrap(), &r1).unwrap());
        assert!(!m.annihilates(&m.section("nu1").unwrap(), &r1).unwrap());
        let c = m.cone();
        let t = c.section("T").unwrap();
        assert!(c.clifford_act(&t, &c.form("i*nu2 + nu3").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn mukai_examples() {
        let m = s3();
        let got = m.mukai(&m.form("nu1").unwrap(), &m.form("nu2^nu3").unwrap());
        assert_eq!(got, m.form("-nu1^nu2^nu3").unwrap());
        let r1 = m.form("i*nu2 + nu3").unwrap();
        let r2 = m.form("(g + i*f) + nu1^(i*nu2 + nu3)").unwrap();
        assert_eq!(m.mukai(&r1, &r2.conj()), m.form("2*i*nu1^nu2^nu3").unwrap());
        assert!(m.mukai(&r1, &r1).is_zero());
    }

    #[test]
    fn mukai_symmetry_sign() {
        for name in ["s3", "triple-contact-7d", "heisenberg-cone"] {
            let m = builtin_model(name).unwrap();
            let n = m.dim();
            let eps = if binom2(n) % 2 == 1 { -1 } else { 1 };
            let a = m.one_form_basis(0).wedge(&m.one_form_basis(1)).add(&Form::one(&m.ctx, n)).add(&m.one_form_basis(2));
            let mut b = m.one_form_basis(n - 1);
            for k in 2..n - 1 {
                b = b.add(&m.one_form_basis(k).wedge(&b));
            }
            let lhs = m.mukai(&a, &b);
            let rhs = m.mukai(&b, &a).scale(&GaussRat::from_int(eps));
            assert_eq!(lhs, rhs, "{}", name);
        }
    }

    #[test]
    fn cosymplectic_pair_is_nondegenerate() {
        let m = builtin_model("heisenberg").unwrap();
        let theta = m.form("alpha2^alpha3").unwrap();
        let rho1 = m.exp_form(&theta.scale(&GaussRat::i())).unwrap();
        let rho2 = rho1.wedge(&m.form("alpha1").unwrap());
        assert_eq!(m.mukai_coeff(&rho1, &rho2.conj()), m.scalar("2*i").unwrap());
        assert_eq!(
            reversal(&m.form("1 + alpha1 + alpha1^alpha2 + alpha1^alpha2^alpha3").unwrap()),
            m.form("1 + alpha1 - alpha1^alpha2 - alpha1^alpha2^alpha3").unwrap()
        );
    }

    #[test]
    fn types_and_annihilators() {
        let m = s3();
        let r1 = m.form("i*nu2 + nu3").unwrap();
        let r2 = m.form("(g + i*f) + nu1^(i*nu2 + nu3)").unwrap();
        for k in 0..m.points.len() {
            assert_eq!(m.spinor_type_at(&r1, k).unwrap(), 1);
            let p = m.point(k).unwrap();
            let fg_zero = m.scalar("f").unwrap().eval(p).unwrap().is_zero() && m.scalar("g").unwrap().eval(p).unwrap().is_zero();
            assert_eq!(m.spinor_type_at(&r2, k).unwrap(), if fg_zero { 2 } else { 0 });
            let ann = m.annihilator_basis_at(&r1, k).unwrap();
            assert_eq!(ann.len(), 3);
            assert!(m.is_pure_at(&r1, k).unwrap());
            let v1 = [GenSection::vector(&m, 0)];
            assert_eq!(span_rank(&[ann.clone(), v1.to_vec()].concat()), 3);
            for a in &ann {
                for b in &ann {
                    assert!(m.inner(a, b).unwrap().is_zero());
                }
            }
            // in dimension 3 every form of definite parity is pure
            assert!(m.is_pure_at(&m.form("nu1 + nu1^nu2^nu3").unwrap(), k).unwrap());
            assert!(!m.is_pure_at(&m.form("1 + nu1").unwrap(), k).unwrap());
            let one = Form::one(&m.ctx, 3);
            assert_eq!(m.annihilator_basis_at(&one, k).unwrap().len(), 3);
            assert_eq!(m.spinor_type_at(&one, k).unwrap(), 0);
        }
        assert_eq!(m.spinor_type_at(&m.zero_form(), 0), Err(Error::ZeroSpinorAtPoint(0)));
    }

    #[test]
    fn non_pure_even_form() {
        let m = builtin_model("triple-contact-7d").unwrap();
        let r = m.form("1 + eta1^eta2^eta3^th4").unwrap();
        for k in 0..m.points.len() {
            assert!(m.annihilator_basis_at(&r, k).unwrap().len() < 7);
            assert!(!m.is_pure_at(&r, k).unwrap());
            assert!(m.is_pure_at(&m.exp_form(&m.form("eta1^eta2 + eta3^th4").unwrap()).unwrap(), k).unwrap());
        }
    }

    #[test]
    fn exponential() {
        let m = builtin_model("torus3").unwrap();
        let w = m.form("e1^e2").unwrap();
        assert_eq!(m.exp_form(&w).unwrap(), m.form("1 + e1^e2").unwrap());
        let s = builtin_model("s3").unwrap();
        let f = s.form("-nu1^nu2").unwrap();
        let one_f = Form::one(&s.ctx, 3).add(&f);
        assert_eq!(one_f.wedge(&one_f), s.form("1 - 2*nu1^nu2").unwrap());
        assert!(m.exp_form(&m.form("e1").unwrap()).is_err());
    }

    #[test]
    fn twist_checks() {
        let m = builtin_model("heisenberg").unwrap();
        assert!(m.check_twist(&m.form("alpha1^alpha2^alpha3").unwrap()).is_ok());
        assert!(m.check_twist(&m.form("alpha1^alpha2").unwrap()).is_err());
    }
}
