//! Poon-Wade frames, block decomposition of `Phi` and the gauge reductions
//! to Poon-Wade, cosymplectic and almost contact form.

use crate::algebra::{kernel, solve_linear, FunctionElement, GaussRat, Solution};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::frame::{FrameModel, GenSection};

use super::builders::eval2;
use super::endo::Endo;
use super::structures::{rank_at, triple_from_pair, ContactPair, ContactTriple};

type Mat = Vec<Vec<FunctionElement>>;

/// Blocks of `Phi = [[A, B], [C, -A^*]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiBlocks {
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
}

fn transpose(m: &Mat) -> Mat {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect()
}

fn is_skew(m: &Mat) -> bool {
    let n = m.len();
    (0..n).all(|i| (0..n).all(|j| m[i][j] == -&m[j][i]))
}

impl PhiBlocks {
    pub fn from_endo(phi: &Endo) -> Result<Self> {
        let [a, b, c, d] = phi.blocks();
        let neg_at: Mat = transpose(&a).iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        if d != neg_at {
            return Err(Error::validation("lower right block of Phi is not -A^*"));
        }
        if !is_skew(&b) || !is_skew(&c) {
            return Err(Error::validation("off-diagonal blocks of Phi are not skew"));
        }
        Ok(PhiBlocks { a, b, c })
    }

    pub fn b_is_zero(&self) -> bool {
        self.b.iter().flatten().all(|x| x.is_zero())
    }

    pub fn c_is_zero(&self) -> bool {
        self.c.iter().flatten().all(|x| x.is_zero())
    }
}

/// Sections of `E` that are purely tangent and purely cotangent.
#[derive(Clone, Debug)]
pub struct PoonWadeFrame {
    pub tangent: GenSection,
    pub cotangent: GenSection,
}

fn combos(p: &ContactPair, vector_part: bool) -> Vec<GenSection> {
    let m = p.model.dim();
    let rows: Mat = (0..m)
        .map(|k| if vector_part { vec![p.e1.v[k].clone(), p.e2.v[k].clone()] } else { vec![p.e1.w[k].clone(), p.e2.w[k].clone()] })
        .collect();
    kernel(&rows, 2).into_iter().map(|c| p.e1.mul_fn(&c[0]).add(&p.e2.mul_fn(&c[1]))).collect()
}

/// `E ∩ TM` and `E ∩ T*M` are both nonzero and together frame `E` at
/// every sample point.
pub fn is_poon_wade(p: &ContactPair) -> Result<Option<PoonWadeFrame>> {
    // sections killing the form part lie in TM, those killing the vector part in T*M
    let tangent = combos(p, false);
    let cotangent = combos(p, true);
    let (Some(x), Some(b)) = (tangent.first(), cotangent.first()) else { return Ok(None) };
    let m = &*p.model;
    for k in 0..m.points.len() {
        if rank_at(m, &[x.clone(), b.clone()], k)? != 2 {
            return Ok(None);
        }
    }
    Ok(Some(PoonWadeFrame { tangent: x.clone(), cotangent: b.clone() }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    General,
    Cosymplectic,
    Contact,
}

/// Gauge 2-form together with the transformed structure.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub omega: Form,
    pub pair: ContactPair,
    pub triple: ContactTriple,
}

fn gauge_pair(p: &ContactPair, omega: &Form, e1: &GenSection, e2: &GenSection) -> Result<ContactPair> {
    let m = &*p.model;
    let l = p.l.iter().map(|x| m.b_transform(omega, x)).collect::<Result<Vec<_>>>()?;
    ContactPair::new(p.model.clone(), m.b_transform(omega, e1)?, m.b_transform(omega, e2)?, l)
}

fn two_form(model: &FrameModel, entries: impl Fn(usize, usize) -> FunctionElement) -> Form {
    let dim = model.dim();
    let mut f = model.zero_form();
    for a in 0..dim {
        for b in (a + 1)..dim {
            let c = entries(a, b);
            if !c.is_zero() {
                f.add_term((1 << a) | (1 << b), c);
            }
        }
    }
    f
}

fn check_types(p: &ContactPair, t_l: Option<usize>) -> Result<()> {
    for k in 0..p.model.points.len() {
        let ty = p.geometric_type_at(k)?;
        if ty.p_e != 1 {
            return Err(Error::Precondition(format!("p_E = {} at sample point {}", ty.p_e, k)));
        }
        if let Some(t) = t_l {
            if ty.t_l != t {
                return Err(Error::Precondition(format!("t_L = {} at sample point {}, expected {}", ty.t_l, k, t)));
            }
        }
    }
    Ok(())
}

/// Gauge `E = span(X + alpha, beta)` to `span(X, beta)` with `Omega = alpha ^ beta`.
fn general(p: &ContactPair) -> Result<Reduction> {
    let m = &*p.model;
    let beta = combos(p, true).into_iter().next().ok_or_else(|| Error::Precondition("E contains no 1-form".into()))?;
    let (e, c) = [&p.e1, &p.e2]
        .iter()
        .map(|e| Ok(((*e).clone(), m.inner(e, &beta)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|(_, c)| !c.is_zero())
        .ok_or_else(|| Error::validation("E is degenerate"))?;
    let two = GaussRat::from_int(2);
    let c2 = c.scale(&two);
    let ee = m.inner(&e, &e)?;
    let shift = ee.div_exact(&c2).ok_or_else(|| Error::NotDivisible(format!("<e,e> = {} by 2<e,beta> = {}", ee, c2)))?;
    let iso = e.sub(&beta.mul_fn(&shift));
    let beta_n = GenSection::from_coords(
        &beta
            .coords()
            .iter()
            .map(|x| x.div_exact(&c2).ok_or_else(|| Error::NotDivisible(format!("beta by {}", c2))))
            .collect::<Result<Vec<_>>>()?,
    );
    let omega = iso.form_part().wedge(&beta_n.form_part());
    let out = gauge_pair(p, &omega, &iso, &beta_n)?;
    if !out.e1.is_vector() {
        return Err(Error::validation("gauge did not make e1 tangent"));
    }
    let triple = triple_from_pair(&out)?;
    Ok(Reduction { omega, pair: out, triple })
}

/// `Omega(Z, W) = <B^-1 A Z, W> - <B^-1 A W, Z>` with `B^-1` taken from
/// `Ker eta` onto `Ann(xi)`.
fn cosymplectic_omega(t: &ContactTriple) -> Result<Form> {
    let m = &*t.model;
    let dim = m.dim();
    let blocks = PhiBlocks::from_endo(&t.phi)?;
    let xi = &t.e1.v;
    let mut rows: Mat = blocks.b.clone();
    rows.push(xi.clone());
    let mut gammas = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut rhs: Vec<FunctionElement> = (0..dim).map(|r| blocks.a[r][a].clone()).collect();
        rhs.push(m.zero());
        let g = match solve_linear(&rows, &rhs)? {
            Solution::Solved(v) => v
                .iter()
                .map(|x| x.as_elem().ok_or_else(|| Error::NotDivisible(format!("B^-1 A has coefficient {}", x))))
                .collect::<Result<Vec<_>>>()?,
            Solution::NoSolution { residual, .. } => {
                return Err(Error::Precondition(format!("A X_{} is not in the image of B on Ann(xi): {}", a, residual)))
            }
        };
        gammas.push(g);
    }
    let half = GaussRat::ratio(1, 2);
    Ok(two_form(m, |a, b| (&gammas[a][b] - &gammas[b][a]).scale(&half)))
}

/// `Omega = C A / 2`.
fn contact_omega(t: &ContactTriple) -> Result<Form> {
    let m = &*t.model;
    let dim = m.dim();
    let blocks = PhiBlocks::from_endo(&t.phi)?;
    let half = GaussRat::ratio(1, 2);
    // (C A)[b][a] is the alpha^b component of C(A X_a)
    let ca = |b: usize, a: usize| -> FunctionElement {
        let mut acc = m.zero();
        for k in 0..dim {
            acc = &acc + &(&blocks.c[b][k] * &blocks.a[k][a]);
        }
        acc
    };
    Ok(two_form(m, |a, b| ca(b, a).scale(&half)))
}

pub fn poon_wade_reduce(p: &ContactPair, mode: ReduceMode) -> Result<Reduction> {
    let n = (p.model.dim() - 1) / 2;
    match mode {
        ReduceMode::General => check_types(p, None)?,
        ReduceMode::Cosymplectic => check_types(p, Some(1))?,
        ReduceMode::Contact => check_types(p, Some(n + 1))?,
    }
    let base = general(p)?;
    let second = match mode {
        ReduceMode::General => return Ok(base),
        ReduceMode::Cosymplectic => cosymplectic_omega(&base.triple)?,
        ReduceMode::Contact => contact_omega(&base.triple)?,
    };
    let out = gauge_pair(&base.pair, &second, &base.pair.e1, &base.pair.e2)?;
    let triple = triple_from_pair(&out)?;
    match mode {
        ReduceMode::Cosymplectic => {
            recognize_cosymplectic(&triple)?;
        }
        ReduceMode::Contact => {
            recognize_almost_contact(&triple)?;
        }
        ReduceMode::General => {}
    }
    Ok(Reduction { omega: base.omega.add(&second), pair: out, triple })
}

/// `(phi, xi, eta)` when the triple is `diag(phi, -phi^*)` with `e1 = xi`, `e2 = eta`.
pub fn recognize_almost_contact(t: &ContactTriple) -> Result<(Mat, GenSection, Form)> {
    if !t.e1.is_vector() || !t.e2.is_coform() {
        return Err(Error::validation("triple is not Poon-Wade"));
    }
    let blocks = PhiBlocks::from_endo(&t.phi)?;
    if !blocks.b_is_zero() || !blocks.c_is_zero() {
        return Err(Error::validation("Phi has nonzero off-diagonal blocks"));
    }
    Ok((blocks.a, t.e1.clone(), t.e2.form_part()))
}

/// `(theta, eta)` when `Phi` swaps `Ker eta` and `Ann xi` as in the
/// cosymplectic construction, with `theta^n ^ eta` nonzero at every sample point.
pub fn recognize_cosymplectic(t: &ContactTriple) -> Result<(Form, Form)> {
    if !t.e1.is_vector() || !t.e2.is_coform() {
        return Err(Error::validation("triple is not Poon-Wade"));
    }
    let m = &*t.model;
    let dim = m.dim();
    let xi = &t.e1;
    let eta = t.e2.form_part();
    // Y_a = X_a - eta(X_a) xi spans Ker eta
    let ys: Vec<GenSection> = (0..dim).map(|a| GenSection::vector(m, a).sub(&xi.mul_fn(&t.e2.w[a]))).collect();
    let images: Vec<GenSection> = ys.iter().map(|y| t.phi.apply(y)).collect();
    if images.iter().any(|x| !x.is_coform()) {
        return Err(Error::validation("Phi does not map Ker eta into T*M"));
    }
    let theta = two_form(m, |a, b| images[a].w[b].clone());
    for a in 0..dim {
        for b in 0..dim {
            let want = images[a].w[b].clone();
            if eval2(&theta, a, b) != want {
                return Err(Error::validation("Phi restricted to Ker eta is not skew"));
            }
        }
    }
    let n = (dim - 1) / 2;
    let mut top = eta.clone();
    for _ in 0..n {
        top = theta.wedge(&top);
    }
    for k in 0..m.points.len() {
        if top.eval(m.point(k)?)?.is_zero() {
            return Err(Error::validation(format!("theta^n ^ eta vanishes at sample point {}", k)));
        }
    }
    Ok((theta, eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::builders::{cosymplectic_example, flat_contact, heisenberg, s3_family, Example};

    fn gauged(ex: &Example, omega: &str) -> (ContactPair, Form) {
        let m = &*ex.pair.model;
        let w = m.form(omega).unwrap();
        let bt = |x: &GenSection| m.b_transform(&w, x).unwrap();
        let p = ContactPair::new(ex.pair.model.clone(), bt(&ex.pair.e1), bt(&ex.pair.e2), ex.pair.l.iter().map(bt).collect()).unwrap();
        (p, w)
    }

    #[test]
    fn detection() {
        for (b, c) in [(0, 0), (1, 2), (-3, 1)] {
            let ex = heisenberg(&GaussRat::from_int(b), &GaussRat::from_int(c)).unwrap();
            let f = is_poon_wade(&ex.pair).unwrap().unwrap();
            assert!(f.tangent.is_vector() && f.cotangent.is_coform());
        }
        let (p, _) = gauged(&flat_contact().unwrap(), "alpha1^alpha3");
        assert!(is_poon_wade(&p).unwrap().is_none());
        assert!(is_poon_wade(&s3_family("s3", None, None, None).unwrap().pair).unwrap().is_none());
    }

    #[test]
    fn general_reduction_makes_e1_tangent() {
        for omega in ["alpha1^alpha3", "x*alpha1^alpha2 + alpha2^alpha3"] {
            for ex in [flat_contact().unwrap(), heisenberg(&GaussRat::from_int(1), &GaussRat::from_int(2)).unwrap()] {
                let (p, _) = gauged(&ex, omega);
                let r = poon_wade_reduce(&p, ReduceMode::General).unwrap();
                let m = &*p.model;
                assert!(m.b_transform(&r.omega, &p.e1).unwrap().is_vector());
                assert!(r.pair.e1.is_vector() && r.pair.e2.is_coform());
                assert!(is_poon_wade(&r.pair).unwrap().is_some());
            }
        }
    }

    #[test]
    fn contact_mode_recovers_almost_contact() {
        let ex = flat_contact().unwrap();
        let (p, _) = gauged(&ex, "x*alpha1^alpha2 + alpha2^alpha3");
        let r = poon_wade_reduce(&p, ReduceMode::Contact).unwrap();
        let (_, xi, eta) = recognize_almost_contact(&r.triple).unwrap();
        assert_eq!(xi, ex.triple.e1);
        assert_eq!(eta, p.model.form("alpha3").unwrap());
        assert_eq!(r.triple.phi, ex.triple.phi);
    }

    #[test]
    fn cosymplectic_mode_recovers_theta() {
        let ex = heisenberg(&GaussRat::from_int(1), &GaussRat::from_int(2)).unwrap();
        let m = &*ex.pair.model;
        let (p, _) = gauged(&ex, "x*alpha1^alpha2 + alpha2^alpha3");
        let r = poon_wade_reduce(&p, ReduceMode::Cosymplectic).unwrap();
        let (theta, eta) = recognize_cosymplectic(&r.triple).unwrap();
        assert_eq!(theta, m.form("alpha1^alpha2 + 2*alpha1^alpha3 + alpha2^alpha3").unwrap());
        assert_eq!(eta, m.form("alpha1").unwrap());
        let ex = cosymplectic_example("torus3", "e1", "e2^e3").unwrap();
        let (p, _) = gauged(&ex, "y*e1^e2 + e1^e3");
        let r = poon_wade_reduce(&p, ReduceMode::Cosymplectic).unwrap();
        assert_eq!(recognize_cosymplectic(&r.triple).unwrap().0, ex.model().form("e2^e3").unwrap());
    }

    #[test]
    fn type_preconditions() {
        let ex = flat_contact().unwrap();
        assert!(matches!(poon_wade_reduce(&ex.pair, ReduceMode::Cosymplectic), Err(Error::Precondition(_))));
        let hz = heisenberg(&GaussRat::zero(), &GaussRat::zero()).unwrap();
        assert!(matches!(poon_wade_reduce(&hz.pair, ReduceMode::Contact), Err(Error::Precondition(_))));
        assert!(recognize_cosymplectic(&ex.triple).is_err());
        assert!(recognize_almost_contact(&hz.triple).is_err());
        let blocks = PhiBlocks::from_endo(&hz.triple.phi).unwrap();
        assert!(!blocks.b_is_zero() && !blocks.c_is_zero());
        assert!(blocks.a.iter().flatten().all(|x| x.is_zero()));
    }
}
