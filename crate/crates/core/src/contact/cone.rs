//! Sekiya quadruples and generalized almost complex structures on the cone.

use std::sync::Arc;

use num_traits::Signed;

use crate::algebra::{FunctionElement, GaussRat};
use crate::error::{Error, Result};
use crate::frame::{FrameModel, GenSection};

use super::endo::Endo;
use super::structures::{anchor, check_frame, rank_at, ContactPair, ContactTriple};

#[derive(Clone, Debug)]
pub struct SekiyaQuadruple {
    pub model: Arc<FrameModel>,
    pub phi: Endo,
    pub e1: GenSection,
    pub e2: GenSection,
    pub lambda: FunctionElement,
    /// `(1 + lambda^2)^{1/2}`.
    pub root: FunctionElement,
}

/// A generalized almost complex structure on the cone together with the
/// cone model it acts on.
#[derive(Clone, Debug)]
pub struct ConeStructure {
    pub cone: FrameModel,
    pub j: Endo,
}

fn two() -> GaussRat {
    GaussRat::from_int(2)
}

/// Exact square root of a constant with a rational square root.
pub fn exact_sqrt(x: &FunctionElement) -> Option<FunctionElement> {
    let c = x.as_constant()?;
    if !c.is_real() || c.re.is_negative() {
        return None;
    }
    let (n, d) = (c.re.numer().clone(), c.re.denom().clone());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &rn * &rn != n || &rd * &rd != d {
        return None;
    }
    Some(FunctionElement::constant(x.ctx(), GaussRat::real(num_rational::BigRational::new(rn, rd))))
}

/// Drop the `T` / `dt` components of a cone section, insisting they vanish.
pub fn narrow(x: &GenSection, m: usize) -> Result<GenSection> {
    if x.v[m..].iter().chain(x.w[m..].iter()).any(|c| !c.is_zero()) {
        return Err(Error::validation("section has components along T or dt"));
    }
    Ok(GenSection::from_parts(x.v[..m].to_vec(), x.w[..m].to_vec()))
}

impl SekiyaQuadruple {
    pub fn new(
        model: Arc<FrameModel>,
        phi: Endo,
        e1: GenSection,
        e2: GenSection,
        lambda: FunctionElement,
        root: FunctionElement,
    ) -> Result<Self> {
        let q = SekiyaQuadruple { model, phi, e1, e2, lambda, root };
        q.validate()?;
        Ok(q)
    }

    pub fn from_triple(t: &ContactTriple) -> SekiyaQuadruple {
        SekiyaQuadruple {
            model: t.model.clone(),
            phi: t.phi.clone(),
            e1: t.e1.clone(),
            e2: t.e2.clone(),
            lambda: t.model.zero(),
            root: t.model.one(),
        }
    }

    /// `Phi + lambda K` with `K(x) = 2<x,e2> e1 - 2<x,e1> e2`; requires
    /// `root^2 = 1 + lambda^2`.
    pub fn with_lambda(t: &ContactTriple, lambda: GaussRat, root: GaussRat) -> Result<SekiyaQuadruple> {
        let m = &*t.model;
        let k = Endo::from_fn(m, |g| {
            let a = m.inner(g, &t.e2)?.scale(&two());
            let b = m.inner(g, &t.e1)?.scale(&two());
            Ok(t.e1.mul_fn(&a).sub(&t.e2.mul_fn(&b)))
        })?;
        let c = |x: GaussRat| FunctionElement::constant(&m.ctx, x);
        SekiyaQuadruple::new(t.model.clone(), t.phi.add(&k.scale(&lambda)), t.e1.clone(), t.e2.clone(), c(lambda), c(root))
    }

    pub fn to_triple(&self) -> Result<ContactTriple> {
        if !self.lambda.is_zero() {
            return Err(Error::Precondition("only quadruples with lambda = 0 are triples".into()));
        }
        ContactTriple::new(self.model.clone(), self.phi.clone(), self.e1.clone(), self.e2.clone())
    }

    pub fn validate(&self) -> Result<()> {
        let m = &*self.model;
        self.phi.check_size(m)?;
        check_frame(m, &self.e1, &self.e2)?;
        let sq = &self.lambda * &self.lambda + m.one();
        if &self.root * &self.root != sq {
            return Err(Error::validation(format!("root^2 = {} differs from 1 + lambda^2", &self.root * &self.root)));
        }
        if let Some((i, j, r)) = self.phi.skew_defect(m)? {
            return Err(Error::validation(format!("Phi is not skew: generators ({}, {}) give {}", i, j, r)));
        }
        let r1 = self.phi.apply(&self.e1).sub(&self.e1.mul_fn(&self.lambda));
        if !r1.is_zero() {
            return Err(Error::validation(format!("Phi(e1) - lambda e1 = {}", r1.display(m))));
        }
        let r2 = self.phi.apply(&self.e2).add(&self.e2.mul_fn(&self.lambda));
        if !r2.is_zero() {
            return Err(Error::validation(format!("Phi(e2) + lambda e2 = {}", r2.display(m))));
        }
        let sq_phi = self.phi.compose(&self.phi);
        for (j, g) in GenSection::generators(m).iter().enumerate() {
            let a = m.inner(g, &self.e2)?;
            let b = m.inner(g, &self.e1)?;
            let want = g.neg().add(&self.e1.mul_fn(&a).add(&self.e2.mul_fn(&b)).mul_fn(&sq).scale(&two()));
            let got = sq_phi.apply(g);
            if got != want {
                return Err(Error::validation(format!("Phi^2 fails on generator {}: {}", j, got.sub(&want).display(m))));
            }
        }
        Ok(())
    }
}

/// `J` on `TM + R T + R dt`: `J(x) = Phi(x) - 2 root (<x,e2> T + <x,e1> dt)`,
/// `J(T) = root e1 - lambda T`, `J(dt) = root e2 + lambda dt`.
pub fn sekiya_to_cone(q: &SekiyaQuadruple) -> Result<ConeStructure> {
    let m = &*q.model;
    let cone = m.cone();
    let dim = m.dim();
    let n = dim + 1;
    let t_vec = GenSection::vector(&cone, dim);
    let dt = GenSection::coform(&cone, dim);
    let mut cols = Vec::with_capacity(2 * n);
    let gens = GenSection::generators(m);
    let image = |g: &GenSection| -> Result<GenSection> {
        let a = m.inner(g, &q.e2)?.scale(&two());
        let b = m.inner(g, &q.e1)?.scale(&two());
        Ok(q.phi.apply(g).widen(n).sub(&t_vec.mul_fn(&(&q.root * &a))).sub(&dt.mul_fn(&(&q.root * &b))))
    };
    for g in &gens[..dim] {
        cols.push(image(g)?);
    }
    cols.push(q.e1.widen(n).mul_fn(&q.root).sub(&t_vec.mul_fn(&q.lambda)));
    for g in &gens[dim..] {
        cols.push(image(g)?);
    }
    cols.push(q.e2.widen(n).mul_fn(&q.root).add(&dt.mul_fn(&q.lambda)));
    Ok(ConeStructure { cone, j: Endo { cols } })
}

impl ConeStructure {
    /// `J^2 + Id` and `J^* + J` defects.
    pub fn check(&self) -> Result<()> {
        let sq = self.j.compose(&self.j).add(&Endo::identity(&self.cone));
        if !sq.is_zero() {
            return Err(Error::validation(format!("J^2 != -Id: {}", sq.display(&self.cone))));
        }
        if let Some((i, j, r)) = self.j.skew_defect(&self.cone)? {
            return Err(Error::validation(format!("J is not skew: generators ({}, {}) give {}", i, j, r)));
        }
        Ok(())
    }

    pub fn base_dim(&self) -> usize {
        self.cone.dim() - 1
    }

    pub fn t_vec(&self) -> GenSection {
        GenSection::vector(&self.cone, self.base_dim())
    }

    pub fn dt(&self) -> GenSection {
        GenSection::coform(&self.cone, self.base_dim())
    }

    /// `J(span(T, dt))` lies in `TM + T*M`.
    pub fn is_sek0(&self) -> bool {
        let m = self.base_dim();
        [self.j.apply(&self.t_vec()), self.j.apply(&self.dt())].iter().all(|x| narrow(x, m).is_ok())
    }

    /// Nijenhuis tensor on cone generators; returns the failing pairs.
    pub fn nijenhuis(&self, twist: Option<&crate::forms::Form>) -> Result<Vec<(usize, usize, GenSection)>> {
        let c = &self.cone;
        let gens = GenSection::generators(c);
        let br = |a: &GenSection, b: &GenSection| c.dorfman(a, b, twist);
        let mut out = Vec::new();
        for i in 0..gens.len() {
            for k in (i + 1)..gens.len() {
                let (x, y) = (&gens[i], &gens[k]);
                let (jx, jy) = (self.j.apply(x), self.j.apply(y));
                let inner = br(&jx, y)?.add(&br(x, &jy)?);
                let n = br(&jx, &jy)?.sub(&br(x, y)?).sub(&self.j.apply(&inner));
                if !n.is_zero() {
                    out.push((i, k, n));
                }
            }
        }
        Ok(out)
    }
}

/// Inverse of [`sekiya_to_cone`]; `model` is the base of the cone.
pub fn cone_to_sekiya(model: Arc<FrameModel>, cs: &ConeStructure) -> Result<SekiyaQuadruple> {
    cs.check()?;
    let c = &cs.cone;
    let m = model.dim();
    if c.dim() != m + 1 {
        return Err(Error::ModelMismatch("cone structure does not sit over this model".into()));
    }
    let (t, dt) = (cs.t_vec(), cs.dt());
    let jt = cs.j.apply(&t);
    let jdt = cs.j.apply(&dt);
    let lambda = c.inner(&jdt, &t)?.scale(&two());
    let sq = &lambda * &lambda + c.one();
    let root = exact_sqrt(&sq).ok_or_else(|| Error::Precondition(format!("(1 + lambda^2)^(1/2) is not exact for lambda = {}", lambda)))?;
    let inv = root.as_constant().and_then(|r| r.inv()).unwrap();
    let e1 = narrow(&jt.add(&t.mul_fn(&lambda)).scale(&inv), m)?;
    let e2 = narrow(&jdt.sub(&dt.mul_fn(&lambda)).scale(&inv), m)?;
    let n = m + 1;
    let phi = Endo::from_fn(&model, |g| {
        let jx = cs.j.apply(&g.widen(n));
        let a = c.inner(&t, &jx)?.scale(&two());
        let b = c.inner(&dt, &jx)?.scale(&two());
        narrow(&jx.sub(&dt.mul_fn(&a)).sub(&t.mul_fn(&b)), m)
    })?;
    SekiyaQuadruple::new(model, phi, e1, e2, lambda, root)
}

/// One row of the cone type comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeTypeRow {
    pub point: usize,
    pub t_l: usize,
    pub t_j: usize,
    /// `a(J(dt))` lies in `a(L)`.
    pub jdt_in_al: bool,
}

impl ConeTypeRow {
    pub fn holds(&self) -> bool {
        self.t_j <= self.t_l && self.t_l - self.t_j <= 1 && ((self.t_j == self.t_l) == self.jdt_in_al)
    }
}

/// Types of `L` and of `L_J = L + C(e1 + i T) + C(e2 + i dt)` at each sample point.
pub fn cone_type_table(pair: &ContactPair) -> Result<Vec<ConeTypeRow>> {
    let m = &*pair.model;
    let cone = m.cone();
    let n = cone.dim();
    let i = FunctionElement::i(&m.ctx);
    let mut lj: Vec<GenSection> = pair.l.iter().map(|x| anchor(&x.widen(n))).collect();
    lj.push(anchor(&pair.e1.widen(n).add(&GenSection::vector(&cone, n - 1).mul_fn(&i))));
    lj.push(anchor(&pair.e2.widen(n).add(&GenSection::coform(&cone, n - 1).mul_fn(&i))));
    let al: Vec<GenSection> = pair.l.iter().map(anchor).collect();
    let mut out = Vec::new();
    for k in 0..m.points.len() {
        let r_l = rank_at(m, &al, k)?;
        let mut with = al.clone();
        with.push(anchor(&pair.e2));
        out.push(ConeTypeRow { point: k, t_l: m.dim() - r_l, t_j: n - rank_at(&cone, &lj, k)?, jdt_in_al: rank_at(m, &with, k)? == r_l });
    }
    Ok(out)
}
