use std::sync::Arc;

use crate::algebra::{solve_linear, Frac, FunctionElement, GaussRat, Solution};
use crate::error::{Error, Result};
use crate::forms::{same_span, Form, Mask};
use crate::frame::{FrameModel, GenSection};

use super::structures::{rank_at, ContactPair};

/// Mixed pair `(rho1, rho2)` with isotropic witnesses `rho1 = e1 . rho2`,
/// `rho2 = e2 . rho1`.
#[derive(Clone, Debug)]
pub struct MixedPair {
    pub model: Arc<FrameModel>,
    pub rho1: Form,
    pub rho2: Form,
    pub e1: GenSection,
    pub e2: GenSection,
}

/// Witness `v` of `d_H rho = v . rho`, with coefficients over the fraction
/// field on the generators `X_1..X_m, alpha^1..alpha^m`.
#[derive(Clone, Debug)]
pub enum SpinorVerdict {
    Witness(Vec<Frac>),
    /// The linear system has no solution: `0 = residual` after elimination.
    Obstructed {
        residual: FunctionElement,
    },
}

impl SpinorVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SpinorVerdict::Witness(_))
    }

    /// The witness as a section when all coefficients are polynomial.
    pub fn section(&self) -> Option<GenSection> {
        match self {
            SpinorVerdict::Witness(c) => {
                let coords: Option<Vec<FunctionElement>> = c.iter().map(|x| x.as_elem()).collect();
                coords.map(|c| GenSection::from_coords(&c))
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MixedIntegrability {
    pub rho1: SpinorVerdict,
    pub rho2: SpinorVerdict,
}

impl MixedIntegrability {
    pub fn integrable(&self) -> bool {
        self.rho1.holds() || self.rho2.holds()
    }

    pub fn strong(&self) -> bool {
        self.rho1.holds() && self.rho2.holds()
    }
}

/// Row of the type-sum table at one sample point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeSumRow {
    pub point: usize,
    pub t_l: usize,
    pub type1: usize,
    pub type2: usize,
}

impl TypeSumRow {
    pub fn holds(&self) -> bool {
        2 * self.t_l == self.type1 + self.type2 + 1
    }
}

impl MixedPair {
    pub fn new(model: Arc<FrameModel>, rho1: Form, rho2: Form, e1: GenSection, e2: GenSection) -> Result<Self> {
        let mp = MixedPair { model, rho1, rho2, e1, e2 };
        mp.validate()?;
        Ok(mp)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &*self.model;
        for (name, e) in [("e1", &self.e1), ("e2", &self.e2)] {
            let r = m.inner(e, e)?;
            if !r.is_zero() {
                return Err(Error::validation(format!("{} is not isotropic: <{0},{0}> = {}", name, r)));
            }
        }
        let r1 = m.clifford_act(&self.e1, &self.rho2)?;
        if r1 != self.rho1 {
            return Err(Error::validation(format!("e1 . rho2 = {} differs from rho1", m.form_string(&r1))));
        }
        let r2 = m.clifford_act(&self.e2, &self.rho1)?;
        if r2 != self.rho2 {
            return Err(Error::validation(format!("e2 . rho1 = {} differs from rho2", m.form_string(&r2))));
        }
        let (p1, p2) = (self.rho1.parity(), self.rho2.parity());
        match (p1, p2) {
            (Some(a), Some(b)) if a != b => {}
            _ => return Err(Error::validation("rho1 and rho2 must have definite and opposite parities")),
        }
        let mu = m.mukai_coeff(&self.rho1, &self.rho2.conj());
        for k in 0..m.points.len() {
            if mu.eval(m.point(k)?)?.is_zero() {
                return Err(Error::validation(format!("mu(rho1, conj rho2) vanishes at sample point {}", k)));
            }
        }
        Ok(())
    }

    pub fn rho(&self, i: usize) -> &Form {
        if i == 1 {
            &self.rho1
        } else {
            &self.rho2
        }
    }

    /// Do the annihilators match `L + C e1` and `L + C e2` at every sample point?
    pub fn matches_pair(&self, pair: &ContactPair) -> Result<bool> {
        let m = &*self.model;
        for k in 0..m.points.len() {
            let p = m.point(k)?;
            for i in [1, 2] {
                let ann = m.annihilator_basis_at(self.rho(i), k)?;
                let ext: Vec<GenSection> = pair.extended(i).iter().map(|x| x.eval(p)).collect::<Result<_>>()?;
                if !same_span(&ann, &ext) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Solve `d_H rho_i = v . rho_i` for `v`.
    pub fn solve_witness(&self, i: usize, twist: Option<&Form>) -> Result<SpinorVerdict> {
        let m = &*self.model;
        let rho = self.rho(i);
        let target = m.d_twisted(rho, twist)?;
        let gens = GenSection::generators(m);
        let images: Vec<Form> = gens.iter().map(|g| m.clifford_act(g, rho)).collect::<Result<_>>()?;
        let mut masks: Vec<Mask> = images.iter().chain(std::iter::once(&target)).flat_map(|f| f.terms().keys().copied()).collect();
        masks.sort_unstable();
        masks.dedup();
        let rows: Vec<Vec<FunctionElement>> = masks.iter().map(|&k| images.iter().map(|f| f.coeff(k)).collect()).collect();
        let rhs: Vec<FunctionElement> = masks.iter().map(|&k| target.coeff(k)).collect();
        if rows.is_empty() {
            return Ok(SpinorVerdict::Witness(vec![Frac::from_elem(m.zero()); gens.len()]));
        }
        Ok(match solve_linear(&rows, &rhs)? {
            Solution::Solved(v) => SpinorVerdict::Witness(v),
            Solution::NoSolution { residual, .. } => SpinorVerdict::Obstructed { residual },
        })
    }

    pub fn integrability(&self, twist: Option<&Form>) -> Result<MixedIntegrability> {
        Ok(MixedIntegrability { rho1: self.solve_witness(1, twist)?, rho2: self.solve_witness(2, twist)? })
    }

    /// `rho = rho1 + i dt ^ rho2` on the cone model.
    pub fn cone_spinor(&self) -> Result<(FrameModel, Form)> {
        let cone = self.model.cone();
        let n = cone.dim();
        let dt = Form::basis(&cone.ctx, n, n - 1).scale(&GaussRat::i());
        let rho = self.rho1.widen(n).add(&dt.wedge(&self.rho2.widen(n)));
        Ok((cone, rho))
    }

    pub fn type_sum_table(&self, pair: &ContactPair) -> Result<Vec<TypeSumRow>> {
        let m = &*self.model;
        let mut out = Vec::new();
        for k in 0..m.points.len() {
            let al: Vec<GenSection> = pair.l.iter().map(super::structures::anchor).collect();
            let t_l = m.dim() - rank_at(m, &al, k)?;
            out.push(TypeSumRow { point: k, t_l, type1: m.spinor_type_at(&self.rho1, k)?, type2: m.spinor_type_at(&self.rho2, k)? });
        }
        Ok(out)
    }
}

/// Check `v . rho == d_H rho` for a polynomial witness.
pub fn verify_witness(model: &FrameModel, v: &GenSection, rho: &Form, twist: Option<&Form>) -> Result<bool> {
    Ok(model.clifford_act(v, rho)? == model.d_twisted(rho, twist)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::builders::{cosymplectic_example, heisenberg, s3_family};
    use crate::contact::checks::integrability_check;

    fn mixed_examples() -> Vec<(ContactPair, MixedPair)> {
        let mut out = Vec::new();
        for ex in [
            s3_family("s3", None, None, None).unwrap(),
            s3_family("s3", None, None, Some("z^2 - w")).unwrap(),
            heisenberg(&GaussRat::from_int(1), &GaussRat::from_int(-1)).unwrap(),
            cosymplectic_example("heisenberg", "alpha3", "alpha1^alpha2").unwrap(),
            cosymplectic_example("torus3", "e1", "e2^e3").unwrap(),
        ] {
            out.push((ex.pair.clone(), ex.mixed.clone().unwrap()));
        }
        out
    }

    #[test]
    fn s3_witness() {
        let ex = s3_family("s3", None, None, None).unwrap();
        let mx = ex.mixed.unwrap();
        let m = &*mx.model;
        let v = mx.solve_witness(1, None).unwrap().section().unwrap();
        assert_eq!(v.form_part(), m.form("2*i*nu1").unwrap());
        assert!(verify_witness(m, &v, &mx.rho1, None).unwrap());
        assert!(!mx.solve_witness(2, None).unwrap().holds());
        assert_eq!(mx.rho2, m.form("-(g + i*f) - nu1^(i*nu2 + nu3)").unwrap());
    }

    #[test]
    fn annihilators_and_type_law() {
        for (pair, mx) in mixed_examples() {
            assert!(mx.matches_pair(&pair).unwrap(), "{}", pair.model.name);
            for row in mx.type_sum_table(&pair).unwrap() {
                assert!(row.holds(), "{}: {:?}", pair.model.name, row);
            }
        }
    }

    #[test]
    fn witnesses_agree_with_involutivity() {
        for (pair, mx) in mixed_examples() {
            let inv = integrability_check(&pair, None, &[]).unwrap();
            let spin = mx.integrability(None).unwrap();
            assert_eq!(spin.rho1.holds(), inv.line(1).unwrap().involutive(), "{}", pair.model.name);
            assert_eq!(spin.rho2.holds(), inv.line(2).unwrap().involutive(), "{}", pair.model.name);
        }
    }

    #[test]
    fn cosymplectic_integrability() {
        let good = cosymplectic_example("heisenberg", "alpha1", "alpha2^alpha3").unwrap().mixed.unwrap();
        assert!(good.integrability(None).unwrap().strong());
        let bad = cosymplectic_example("heisenberg", "alpha3", "alpha1^alpha2").unwrap().mixed.unwrap();
        let r = bad.integrability(None).unwrap();
        assert!(r.integrable() && !r.strong());
    }

    #[test]
    fn cone_spinor_is_pure_and_nondegenerate() {
        for (pair, mx) in mixed_examples() {
            let (cone, rho) = mx.cone_spinor().unwrap();
            let n = cone.dim();
            let i = FunctionElement::i(&cone.ctx);
            let t = GenSection::vector(&cone, n - 1);
            let dt = GenSection::coform(&cone, n - 1);
            assert!(cone.clifford_act(&dt.sub(&pair.e1.widen(n).mul_fn(&i)), &rho).unwrap().is_zero());
            assert!(cone.clifford_act(&t.sub(&pair.e2.widen(n).mul_fn(&i)), &rho).unwrap().is_zero());
            let mu_c = cone.mukai_coeff(&rho, &rho.conj());
            let mu_m = mx.model.mukai_coeff(&mx.rho1, &mx.rho2.conj());
            for k in 0..cone.points.len() {
                assert!(cone.is_pure_at(&rho, k).unwrap());
                let p = cone.point(k).unwrap();
                assert_eq!(mu_c.eval(p).unwrap().is_zero(), mu_m.eval(p).unwrap().is_zero());
                assert!(!mu_c.eval(p).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn validation_rejects_bad_pairs() {
        let ex = s3_family("s3", None, None, None).unwrap();
        let mx = ex.mixed.unwrap();
        let m = mx.model.clone();
        let wrong = m.form("nu2").unwrap();
        assert!(MixedPair::new(m.clone(), mx.rho1.clone(), wrong, mx.e1.clone(), mx.e2.clone()).is_err());
        let e = m.section("V1 + nu1").unwrap();
        assert!(MixedPair::new(m.clone(), mx.rho1.clone(), mx.rho2.clone(), e, mx.e2.clone()).is_err());
    }
}
