use std::sync::Arc;

use crate::algebra::{rank, solve_linear, FunctionElement, GaussRat, Solution};
use crate::error::{Error, Result};
use crate::forms::span_rank;
use crate::frame::{FrameModel, GenSection};

use super::endo::Endo;

/// Pointwise numerical invariants `(p_E, t_L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeometricType {
    pub p_e: usize,
    pub t_l: usize,
}

/// Generalized almost contact pair `(E, L)`: `E` given by a frame with
/// `<e1,e1> = <e2,e2> = 0`, `<e1,e2> = 1/2`; `L` by a spanning list.
#[derive(Clone, Debug)]
pub struct ContactPair {
    pub model: Arc<FrameModel>,
    pub e1: GenSection,
    pub e2: GenSection,
    pub l: Vec<GenSection>,
}

/// Generalized almost contact triple `(Phi, e1, e2)`.
#[derive(Clone, Debug)]
pub struct ContactTriple {
    pub model: Arc<FrameModel>,
    pub phi: Endo,
    pub e1: GenSection,
    pub e2: GenSection,
}

pub(crate) fn anchor(x: &GenSection) -> GenSection {
    let mut y = x.clone();
    for w in y.w.iter_mut() {
        *w = FunctionElement::zero(w.ctx());
    }
    y
}

/// Rank of the span of `sections` at sample point `k`.
pub fn rank_at(model: &FrameModel, sections: &[GenSection], k: usize) -> Result<usize> {
    let p = model.point(k)?;
    let ev: Vec<GenSection> = sections.iter().map(|s| s.eval(p)).collect::<Result<_>>()?;
    Ok(span_rank(&ev))
}

/// Generic rank over the fraction field.
pub fn symbolic_rank(sections: &[GenSection]) -> usize {
    let rows: Vec<Vec<FunctionElement>> = sections.iter().map(|s| s.coords()).collect();
    rank(&rows)
}

pub(crate) fn half(model: &FrameModel) -> FunctionElement {
    FunctionElement::constant(&model.ctx, GaussRat::ratio(1, 2))
}

pub(crate) fn check_frame(model: &FrameModel, e1: &GenSection, e2: &GenSection) -> Result<()> {
    if e1.dim() != model.dim() || e2.dim() != model.dim() {
        return Err(Error::ModelMismatch(format!("frame of E does not live on `{}`", model.name)));
    }
    let g11 = model.inner(e1, e1)?;
    let g22 = model.inner(e2, e2)?;
    let g12 = model.inner(e1, e2)?;
    if !g11.is_zero() || !g22.is_zero() {
        return Err(Error::validation(format!("E frame is not isotropic: <e1,e1> = {}, <e2,e2> = {}", g11, g22)));
    }
    if g12 != half(model) {
        return Err(Error::validation(format!("E frame is not normalized: <e1,e2> = {}", g12)));
    }
    Ok(())
}

/// `x - 2<x,e2> e1 - 2<x,e1> e2`, the orthogonal projection onto `E^perp`.
pub fn project_perp(model: &FrameModel, e1: &GenSection, e2: &GenSection, x: &GenSection) -> Result<GenSection> {
    let two = GaussRat::from_int(2);
    let a = model.inner(x, e2)?.scale(&two);
    let b = model.inner(x, e1)?.scale(&two);
    Ok(x.sub(&e1.mul_fn(&a)).sub(&e2.mul_fn(&b)))
}

/// Greedy subset of `cands` with the largest generic rank, dropping zeros.
pub fn reduce_frame(model: &FrameModel, cands: Vec<GenSection>, target: usize) -> Result<Vec<GenSection>> {
    let mut chosen: Vec<GenSection> = Vec::new();
    for c in &cands {
        if c.is_zero() {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(c.clone());
        if symbolic_rank(&trial) > chosen.len() {
            chosen = trial;
        }
        if chosen.len() == target {
            break;
        }
    }
    let ok = (0..model.points.len()).all(|k| rank_at(model, &chosen, k).map(|r| r == target).unwrap_or(false));
    if ok {
        return Ok(chosen);
    }
    let mut all: Vec<GenSection> = Vec::new();
    for c in cands {
        if !c.is_zero() && !all.contains(&c) {
            all.push(c);
        }
    }
    Ok(all)
}

impl ContactPair {
    pub fn new(model: Arc<FrameModel>, e1: GenSection, e2: GenSection, l: Vec<GenSection>) -> Result<Self> {
        let p = ContactPair { model, e1, e2, l };
        p.validate()?;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let m = &*self.model;
        if m.dim().is_multiple_of(2) {
            return Err(Error::InvalidContext(format!("model `{}` has even dimension {}", m.name, m.dim())));
        }
        check_frame(m, &self.e1, &self.e2)?;
        for (j, x) in self.l.iter().enumerate() {
            if x.dim() != m.dim() {
                return Err(Error::ModelMismatch(format!("generator {} of L does not live on `{}`", j, m.name)));
            }
            for (name, e) in [("e1", &self.e1), ("e2", &self.e2)] {
                let r = m.inner(x, e)?;
                if !r.is_zero() {
                    return Err(Error::validation(format!("L is not orthogonal to E: <l{}, {}> = {}", j, name, r)));
                }
            }
            for (k, y) in self.l.iter().enumerate().skip(j) {
                let r = m.inner(x, y)?;
                if !r.is_zero() {
                    return Err(Error::validation(format!("L is not isotropic: <l{}, l{}> = {}", j, k, r)));
                }
            }
        }
        let want = m.dim() - 1;
        let both: Vec<GenSection> = self.l.iter().cloned().chain(self.l.iter().map(|x| x.conj())).collect();
        for k in 0..m.points.len() {
            let r = rank_at(m, &self.l, k)?;
            if r != want {
                return Err(Error::validation(format!("L has rank {} at sample point {}, expected {}", r, k, want)));
            }
            let rb = rank_at(m, &both, k)?;
            if rb != 2 * want {
                return Err(Error::validation(format!("L meets its conjugate at sample point {}", k)));
            }
        }
        Ok(())
    }

    pub fn geometric_type_at(&self, k: usize) -> Result<GeometricType> {
        let m = &*self.model;
        let p_e = rank_at(m, &[anchor(&self.e1), anchor(&self.e2)], k)?;
        let al: Vec<GenSection> = self.l.iter().map(anchor).collect();
        let t_l = m.dim() - rank_at(m, &al, k)?;
        Ok(GeometricType { p_e, t_l })
    }

    pub fn geometric_type(&self) -> Result<Vec<GeometricType>> {
        (0..self.model.points.len()).map(|k| self.geometric_type_at(k)).collect()
    }

    pub fn e_frame(&self) -> [GenSection; 2] {
        [self.e1.clone(), self.e2.clone()]
    }

    /// `L + C e_i` for `i = 1, 2`.
    pub fn extended(&self, i: usize) -> Vec<GenSection> {
        let mut v = self.l.clone();
        v.push(if i == 1 { self.e1.clone() } else { self.e2.clone() });
        v
    }

    pub fn display(&self) -> String {
        let m = &*self.model;
        let ls: Vec<String> = self.l.iter().map(|x| x.display(m)).collect();
        format!("e1 = {}\ne2 = {}\nL = span({})", self.e1.display(m), self.e2.display(m), ls.join(", "))
    }
}

/// Frame change of `E` by an element of `O(1,1)`: `Scale(c)` sends
/// `(e1, e2)` to `(c e1, e2 / c)`, `Swap` exchanges them.
#[derive(Clone, Debug, PartialEq)]
pub enum O11 {
    Scale(GaussRat),
    Swap,
}

impl O11 {
    pub fn act(&self, e1: &GenSection, e2: &GenSection) -> Result<(GenSection, GenSection)> {
        match self {
            O11::Scale(c) => {
                let inv = c.inv().ok_or_else(|| Error::Precondition("O(1,1) scale must be nonzero".into()))?;
                Ok((e1.scale(c), e2.scale(&inv)))
            }
            O11::Swap => Ok((e2.clone(), e1.clone())),
        }
    }
}

impl ContactTriple {
    pub fn new(model: Arc<FrameModel>, phi: Endo, e1: GenSection, e2: GenSection) -> Result<Self> {
        let t = ContactTriple { model, phi, e1, e2 };
        t.validate()?;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let m = &*self.model;
        if m.dim().is_multiple_of(2) {
            return Err(Error::InvalidContext(format!("model `{}` has even dimension {}", m.name, m.dim())));
        }
        self.phi.check_size(m)?;
        check_frame(m, &self.e1, &self.e2)?;
        if let Some((i, j, r)) = self.phi.skew_defect(m)? {
            return Err(Error::validation(format!("Phi is not skew: generators ({}, {}) give {}", i, j, r)));
        }
        for (name, e) in [("e1", &self.e1), ("e2", &self.e2)] {
            let r = self.phi.apply(e);
            if !r.is_zero() {
                return Err(Error::validation(format!("Phi({}) = {} is not zero", name, r.display(m))));
            }
        }
        let sq = self.phi.compose(&self.phi);
        for (j, g) in GenSection::generators(m).iter().enumerate() {
            let want = project_perp(m, &self.e1, &self.e2, g)?.neg();
            let got = sq.apply(g);
            if got != want {
                return Err(Error::validation(format!("Phi^2 fails on generator {}: residual {}", j, got.sub(&want).display(m))));
            }
        }
        Ok(())
    }

    pub fn project(&self, x: &GenSection) -> Result<GenSection> {
        project_perp(&self.model, &self.e1, &self.e2, x)
    }

    /// Spanning list of `E^perp` built from the projections of the generators.
    pub fn perp_frame(&self) -> Result<Vec<GenSection>> {
        let m = &*self.model;
        let cands = GenSection::generators(m).iter().map(|g| self.project(g)).collect::<Result<Vec<_>>>()?;
        reduce_frame(m, cands, 2 * m.dim() - 2)
    }

    pub fn act(&self, g: &O11) -> Result<ContactTriple> {
        let (e1, e2) = g.act(&self.e1, &self.e2)?;
        Ok(ContactTriple { model: self.model.clone(), phi: self.phi.clone(), e1, e2 })
    }

    pub fn display(&self) -> String {
        let m = &*self.model;
        format!("e1 = {}\ne2 = {}\nPhi: {}", self.e1.display(m), self.e2.display(m), self.phi.display(m))
    }
}

impl ContactPair {
    pub fn act(&self, g: &O11) -> Result<ContactPair> {
        let (e1, e2) = g.act(&self.e1, &self.e2)?;
        Ok(ContactPair { model: self.model.clone(), e1, e2, l: self.l.clone() })
    }
}

/// `L` is the `+i` eigenbundle of `Phi` on `E^perp`.
pub fn pair_from_triple(t: &ContactTriple) -> Result<ContactPair> {
    let m = &*t.model;
    let i = FunctionElement::i(&m.ctx);
    let mut cands = Vec::new();
    for g in GenSection::generators(m) {
        let p = t.project(&g)?;
        cands.push(p.sub(&t.phi.apply(&p).mul_fn(&i)));
    }
    let l = reduce_frame(m, cands, m.dim() - 1)?;
    ContactPair::new(t.model.clone(), t.e1.clone(), t.e2.clone(), l)
}

/// `Phi = 0` on `E`, `+i` on `L`, `-i` on `conj(L)`.
pub fn triple_from_pair(p: &ContactPair) -> Result<ContactTriple> {
    let m = &*p.model;
    let lbar: Vec<GenSection> = p.l.iter().map(|x| x.conj()).collect();
    let gram: Vec<Vec<FunctionElement>> =
        lbar.iter().map(|b| p.l.iter().map(|a| m.inner(a, b)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let i = FunctionElement::i(&m.ctx);
    let two = GaussRat::from_int(2);
    let phi = Endo::from_fn(m, |g| {
        let x = project_perp(m, &p.e1, &p.e2, g)?;
        let rhs: Vec<FunctionElement> = lbar.iter().map(|b| m.inner(&x, b)).collect::<Result<_>>()?;
        let coeffs = match solve_linear(&gram, &rhs)? {
            Solution::Solved(c) => c,
            Solution::NoSolution { .. } => {
                return Err(Error::validation("E^perp does not split as L + conj(L)"));
            }
        };
        let mut xl = GenSection::zero(m);
        for (c, l) in coeffs.iter().zip(&p.l) {
            let c = c.as_elem().ok_or_else(|| Error::NotDivisible(format!("Phi has non-polynomial coefficient {} on `{}`", c, m.name)))?;
            xl = xl.add(&l.mul_fn(&c));
        }
        Ok(xl.scale(&two).sub(&x).mul_fn(&i))
    })?;
    ContactTriple::new(p.model.clone(), phi, p.e1.clone(), p.e2.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::builders::{flat_contact, heisenberg, s3_family, triple_contact};

    #[test]
    fn s3_types() {
        let ex = s3_family("s3", None, None, None).unwrap();
        let m = &*ex.pair.model;
        for (k, ty) in ex.pair.geometric_type().unwrap().into_iter().enumerate() {
            let p = m.point(k).unwrap();
            let zero = ["f", "g"].iter().all(|s| m.scalar(s).unwrap().eval(p).unwrap().is_zero());
            let want = if zero { (1, 2) } else { (2, 1) };
            assert_eq!((ty.p_e, ty.t_l), want, "point {}", k);
        }
    }

    #[test]
    fn heisenberg_types_and_rank() {
        let ex = heisenberg(&GaussRat::from_int(2), &GaussRat::from_int(-1)).unwrap();
        assert!(ex.pair.geometric_type().unwrap().iter().all(|t| (t.p_e, t.t_l) == (1, 1)));
        assert_eq!(ex.pair.l.len(), ex.pair.dim() - 1);
    }

    #[test]
    fn pair_triple_roundtrip() {
        for ex in [
            s3_family("s3", None, None, None).unwrap(),
            heisenberg(&GaussRat::from_int(1), &GaussRat::from_int(1)).unwrap(),
            flat_contact().unwrap(),
            triple_contact().unwrap(),
        ] {
            let m = &*ex.pair.model;
            let back = pair_from_triple(&ex.triple).unwrap();
            for k in 0..m.points.len() {
                let p = m.point(k).unwrap();
                let ev = |v: &[GenSection]| v.iter().map(|x| x.eval(p).unwrap()).collect::<Vec<_>>();
                assert!(crate::forms::same_span(&ev(&back.l), &ev(&ex.pair.l)), "{} at {}", ex.name, k);
            }
            assert_eq!(triple_from_pair(&back).unwrap().phi, ex.triple.phi);
        }
    }

    #[test]
    fn o11_equivariance() {
        let ex = s3_family("s3", None, None, None).unwrap();
        for g in [O11::Scale(GaussRat::from_int(3)), O11::Scale(GaussRat::ratio(-1, 2)), O11::Swap] {
            let p = ex.pair.act(&g).unwrap();
            p.validate().unwrap();
            let t = triple_from_pair(&p).unwrap();
            assert_eq!(t.phi, ex.triple.phi);
            let t2 = ex.triple.act(&g).unwrap();
            t2.validate().unwrap();
            assert_eq!((&t2.e1, &t2.e2), (&p.e1, &p.e2));
        }
        assert!(O11::Scale(GaussRat::zero()).act(&ex.pair.e1, &ex.pair.e2).is_err());
    }

    #[test]
    fn validation_rejects_bad_data() {
        let ex = s3_family("s3", None, None, None).unwrap();
        let m = ex.pair.model.clone();
        let s = |x: &str| m.section(x).unwrap();
        // L not orthogonal to E
        assert!(ContactPair::new(m.clone(), ex.pair.e1.clone(), ex.pair.e2.clone(), vec![s("V2 - i*V3"), s("V1 + i*nu1")]).is_err());
        // L real, so L meets conj(L)
        assert!(ContactPair::new(m.clone(), ex.pair.e1.clone(), ex.pair.e2.clone(), vec![s("V2"), s("nu3")]).is_err());
        // frame not normalized
        assert!(ContactPair::new(m.clone(), s("V1"), s("2*nu1"), ex.pair.l.clone()).is_err());
        let mut bad = ex.triple.clone();
        bad.phi = bad.phi.scale(&GaussRat::from_int(2));
        assert!(bad.validate().is_err());
    }

    #[test]
    fn projection_properties() {
        let ex = heisenberg(&GaussRat::from_int(1), &GaussRat::zero()).unwrap();
        let m = &*ex.pair.model;
        for g in GenSection::generators(m) {
            let p = ex.triple.project(&g).unwrap();
            assert!(m.inner(&p, &ex.pair.e1).unwrap().is_zero());
            assert!(m.inner(&p, &ex.pair.e2).unwrap().is_zero());
            assert_eq!(ex.triple.project(&p).unwrap(), p);
        }
        assert_eq!(ex.triple.perp_frame().unwrap().len(), 4);
    }
}
