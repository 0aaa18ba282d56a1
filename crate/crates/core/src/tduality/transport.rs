//! Moving structures across a T-dual pair and accounting for type changes.

use crate::algebra::{solve_linear, FunctionElement, GaussRat, Solution};
use crate::contact::{ContactPair, ContactTriple, Endo, MixedPair};
use crate::error::{Error, Result};
use crate::forms::{same_span, Form};
use crate::frame::GenSection;

use super::pair::{trivial_circle, TDualPair};

pub fn dualize_pair(p: &ContactPair, d: &TDualPair) -> Result<ContactPair> {
    let l = p.l.iter().map(|x| d.phi(x)).collect::<Result<_>>()?;
    ContactPair::new(d.target.clone(), d.phi(&p.e1)?, d.phi(&p.e2)?, l)
}

/// `phi o Phi o phi^-1`.
pub fn dualize_triple(t: &ContactTriple, d: &TDualPair) -> Result<ContactTriple> {
    let inv = d.inverse();
    let phi = Endo::from_fn(&d.target, |g| d.phi(&t.phi.apply(&inv.phi(g)?)))?;
    ContactTriple::new(d.target.clone(), phi, d.phi(&t.e1)?, d.phi(&t.e2)?)
}

pub fn dualize_mixed(mp: &MixedPair, d: &TDualPair) -> Result<MixedPair> {
    MixedPair::new(d.target.clone(), d.tau(&mp.rho1)?, d.tau(&mp.rho2)?, d.phi(&mp.e1)?, d.phi(&mp.e2)?)
}

/// `Ann(tau rho) = phi(Ann rho)` at sample point `k`.
pub fn annihilators_correspond(d: &TDualPair, rho: &Form, k: usize) -> Result<bool> {
    let src = d.source.annihilator_basis_at(rho, k)?;
    let img: Vec<GenSection> = src.iter().map(|x| d.phi(x)).collect::<Result<_>>()?;
    let tgt = d.target.annihilator_basis_at(&d.tau(rho)?, k)?;
    Ok(same_span(&img, &tgt))
}

fn sample_count(d: &TDualPair) -> usize {
    d.source.points.len().min(d.target.points.len())
}

#[derive(Clone, Debug, Default)]
pub struct IntertwinerReport {
    pub failures: Vec<String>,
    pub pairings: usize,
    pub brackets: usize,
    /// Bracket pairs left out because an entry is not invariant under the
    /// fibre action.
    pub brackets_skipped: usize,
    pub clifford: usize,
}

impl IntertwinerReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Pairing and bracket preservation on `sections`, and
/// `tau(v . rho) = phi(v) . tau(rho)` for every section and form.
pub fn intertwiner_check(d: &TDualPair, sections: &[GenSection], forms: &[Form]) -> Result<IntertwinerReport> {
    let s = &*d.source;
    let t = &*d.target;
    let mut rep = IntertwinerReport::default();
    let images: Vec<GenSection> = sections.iter().map(|x| d.phi(x)).collect::<Result<_>>()?;
    let invariant: Vec<bool> = sections.iter().map(|x| d.is_lie_invariant(x)).collect::<Result<_>>()?;
    for i in 0..sections.len() {
        for j in 0..sections.len() {
            let (x, y) = (&sections[i], &sections[j]);
            let (px, py) = (&images[i], &images[j]);
            if j >= i {
                rep.pairings += 1;
                let lhs = super::pair::transfer(&s.inner(x, y)?, &t.ctx)?;
                if lhs != t.inner(px, py)? {
                    rep.failures.push(format!("pairing of {} and {}", x.display(s), y.display(s)));
                }
            }
            if !(invariant[i] && invariant[j]) {
                rep.brackets_skipped += 1;
                continue;
            }
            rep.brackets += 1;
            let lhs = d.phi(&s.dorfman(x, y, d.h.as_ref())?)?;
            let rhs = t.dorfman(px, py, d.h_dual.as_ref())?;
            if lhs != rhs {
                rep.failures.push(format!("bracket of {} and {}", x.display(s), y.display(s)));
            }
        }
    }
    for (x, px) in sections.iter().zip(&images) {
        for r in forms {
            rep.clifford += 1;
            let lhs = d.tau(&s.clifford_act(x, r)?)?;
            let rhs = t.clifford_act(px, &d.tau(r)?)?;
            if lhs != rhs {
                rep.failures.push(format!("Clifford action of {} on {}", x.display(s), s.form_string(r)));
            }
        }
    }
    Ok(rep)
}

/// `rho = e^B ^ Omega` at a point, `Omega` the lowest-degree part.
#[derive(Clone, Debug)]
pub struct PointPresentation {
    pub b: Form,
    pub omega: Form,
}

/// Presentation of a pure spinor already evaluated at a point.
pub fn presentation(v: &Form) -> Result<PointPresentation> {
    let m = v.dim();
    let ctx = v.ctx().clone();
    let t = v.terms().keys().map(|k| k.count_ones() as usize).min().ok_or(Error::ZeroSpinorAtPoint(0))?;
    let omega = v.degree_part(t);
    let target = v.degree_part(t + 2);
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let cols: Vec<Form> = pairs.iter().map(|&(a, b)| Form::basis(&ctx, m, a).wedge(&Form::basis(&ctx, m, b)).wedge(&omega)).collect();
    let mut masks: Vec<u32> = cols.iter().chain([&target]).flat_map(|f| f.terms().keys().copied()).collect();
    masks.sort_unstable();
    masks.dedup();
    let rows: Vec<Vec<FunctionElement>> = masks.iter().map(|&k| cols.iter().map(|c| c.coeff(k)).collect()).collect();
    let rhs: Vec<FunctionElement> = masks.iter().map(|&k| target.coeff(k)).collect();
    let mut b = Form::zero(&ctx, m);
    if !rows.is_empty() {
        match solve_linear(&rows, &rhs)? {
            Solution::Solved(x) => {
                for (q, &(i, j)) in x.iter().zip(&pairs) {
                    let c = q.as_elem().ok_or_else(|| Error::Precondition("presentation is not exact".into()))?;
                    b.add_term((1 << i) | (1 << j), c);
                }
            }
            Solution::NoSolution { .. } => {
                return Err(Error::Precondition("spinor has no e^B Omega presentation".into()));
            }
        }
    }
    let mut power = omega.clone();
    let mut back = omega.clone();
    for n in 1..=m {
        power = b.wedge(&power).scale(&GaussRat::ratio(1, n as i64));
        back = back.add(&power);
    }
    if &back != v {
        return Err(Error::Precondition("spinor has no e^B Omega presentation".into()));
    }
    Ok(PointPresentation { b, omega })
}

/// Smallest `j` with `int (F + B)^j ^ Omega != 0`.
fn integral_exponent(d: &TDualPair, pres: &PointPresentation) -> Result<usize> {
    let f = d.f_form();
    let fb = f.add(&d.pull_source(&pres.b)?);
    let mut power = d.pull_source(&pres.omega)?;
    for j in 0..=d.dim() + d.k() {
        if !d.integrate(&power).is_zero() {
            return Ok(j);
        }
        power = fb.wedge(&power);
    }
    Err(Error::Precondition("fibre integral vanishes identically".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeChangeRow {
    pub point: usize,
    pub t_l: usize,
    pub t_dual: usize,
    pub j1: usize,
    pub j2: usize,
    pub k: usize,
    pub p_e: usize,
    pub p_dual: usize,
    /// `0` when both `E` and its image have anchors with no basic
    /// component, `1` otherwise.
    pub p_predicted: usize,
}

impl TypeChangeRow {
    pub fn displacement_holds(&self) -> bool {
        self.t_dual + self.k == self.t_l + self.j1 + self.j2
    }

    pub fn p_rule_holds(&self) -> bool {
        self.p_e.abs_diff(self.p_dual) == self.p_predicted
    }
}

fn spinor_pair_type(model: &crate::frame::FrameModel, r1: &Form, r2: &Form, k: usize) -> Result<usize> {
    Ok((model.spinor_type_at(r1, k)? + model.spinor_type_at(r2, k)?).div_ceil(2))
}

fn anchor_rank(model: &crate::frame::FrameModel, e: &[&GenSection], k: usize) -> Result<usize> {
    let anchors: Vec<GenSection> = e.iter().map(|x| crate::contact::structures::anchor(x)).collect();
    crate::contact::structures::rank_at(model, &anchors, k)
}

fn basic_anchor_vanishes(d: &TDualPair, on_target: bool, e: &[&GenSection], k: usize) -> Result<bool> {
    let (model, idx): (_, Vec<usize>) = if on_target {
        (&d.target, d.basic.iter().map(|&(_, t)| t).collect())
    } else {
        (&d.source, d.basic.iter().map(|&(s, _)| s).collect())
    };
    let p = model.point(k)?;
    for x in e {
        for &a in &idx {
            if !x.v[a].eval(p)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-point `t_{phi(L)} - t_L = j1 + j2 - k` and the `p_E` rule.
pub fn type_change_report(mp: &MixedPair, d: &TDualPair) -> Result<Vec<TypeChangeRow>> {
    let dual = dualize_mixed(mp, d)?;
    let mut rows = Vec::new();
    for k in 0..sample_count(d) {
        let p = d.source.point(k)?;
        let j1 = integral_exponent(d, &presentation(&mp.rho1.eval(p)?)?)?;
        let j2 = integral_exponent(d, &presentation(&mp.rho2.eval(p)?)?)?;
        let flat_src = basic_anchor_vanishes(d, false, &[&mp.e1, &mp.e2], k)?;
        let flat_tgt = basic_anchor_vanishes(d, true, &[&dual.e1, &dual.e2], k)?;
        rows.push(TypeChangeRow {
            point: k,
            t_l: spinor_pair_type(&d.source, &mp.rho1, &mp.rho2, k)?,
            t_dual: spinor_pair_type(&d.target, &dual.rho1, &dual.rho2, k)?,
            j1,
            j2,
            k: d.k(),
            p_e: anchor_rank(&d.source, &[&mp.e1, &mp.e2], k)?,
            p_dual: anchor_rank(&d.target, &[&dual.e1, &dual.e2], k)?,
            p_predicted: if flat_src && flat_tgt { 0 } else { 1 },
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct DoubleDualityReport {
    /// `c` with `tau(rho1 + i dt rho2) = c (rho2 + i d~t rho1)`.
    pub phase: Option<GaussRat>,
    /// `i (-1)^{|rho2|}`.
    pub predicted: GaussRat,
}

impl DoubleDualityReport {
    pub fn swapped(&self) -> bool {
        self.phase.as_ref().map(|c| (c * &c.conj()) == GaussRat::one()).unwrap_or(false)
    }

    pub fn phase_matches(&self) -> bool {
        self.phase.as_ref() == Some(&self.predicted)
    }
}

fn constant_ratio(a: &Form, b: &Form) -> Option<GaussRat> {
    let (&m, bc) = b.terms().iter().next()?;
    let q = a.coeff(m).div_exact(bc)?.as_constant()?;
    (b.scale(&q) == *a).then_some(q)
}

/// The self-duality of `M x S^1` exchanges the two spinors of a mixed pair.
pub fn double_duality_check(mp: &MixedPair) -> Result<DoubleDualityReport> {
    let d = trivial_circle(&mp.model)?;
    let m = mp.model.dim();
    let n = m + 1;
    let ctx = mp.model.ctx.clone();
    let i = GaussRat::i();
    let dt = Form::basis(&ctx, n, m);
    let rho = mp.rho1.widen(n).add(&dt.wedge(&mp.rho2.widen(n)).scale(&i));
    let out = d.tau(&rho)?;
    let mut plain = Form::zero(&ctx, n);
    let mut with_dt = Form::zero(&ctx, n);
    for (mask, c) in out.terms() {
        if mask & (1 << m) == 0 {
            plain.add_term(*mask, c.clone());
        } else {
            with_dt.add_term(*mask, c.clone());
        }
    }
    let expected_dt = dt.wedge(&mp.rho1.widen(n)).scale(&i);
    let phase = constant_ratio(&plain, &mp.rho2.widen(n)).filter(|c| with_dt == expected_dt.scale(c));
    let odd = mp.rho2.parity().ok_or_else(|| Error::Precondition("rho2 has mixed parity".into()))? == 1;
    let predicted = if odd { -&i } else { i };
    Ok(DoubleDualityReport { phase, predicted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::builders::{heisenberg, s3_family};
    use crate::contact::{builtin_example, triple_from_pair};
    use crate::tduality::pair::{builtin_dual_pair, heisenberg_pair, hopf_pair, DUAL_PAIRS};

    fn hopf_example() -> crate::contact::Example {
        s3_family("s3-hopf", None, None, None).unwrap()
    }

    #[test]
    fn heisenberg_dual_frames() {
        let d = heisenberg_pair().unwrap();
        let (b, c) = (GaussRat::from_int(2), GaussRat::from_int(3));
        let ex = heisenberg(&b, &c).unwrap();
        let dual = dualize_pair(&ex.pair, &d).unwrap();
        let t = &d.target;
        assert_eq!(dual.e1, t.section("X1 - 3*X2 - 2*alpha3'").unwrap());
        assert_eq!(dual.e2, t.section("alpha1").unwrap());
        let want = vec![t.section("X2 + i*X3' + 2*i*alpha1").unwrap(), t.section("-alpha3' + i*alpha2 + 3*i*alpha1").unwrap()];
        assert!(same_span(&dual.l, &want));
        for ty in dual.geometric_type().unwrap() {
            assert_eq!((ty.p_e, ty.t_l), (1, 2));
        }
    }

    #[test]
    fn hopf_dual_types() {
        let d = hopf_pair().unwrap();
        let ex = hopf_example();
        let dual = dualize_pair(&ex.pair, &d).unwrap();
        for ty in dual.geometric_type().unwrap() {
            assert_eq!((ty.p_e, ty.t_l), (1, 2));
        }
        let dm = dualize_mixed(ex.mixed.as_ref().unwrap(), &d).unwrap();
        assert!(dm.matches_pair(&dual).unwrap());
    }

    #[test]
    fn triples_and_pairs_commute_with_duality() {
        for (name, ex) in [("heisenberg", heisenberg(&GaussRat::from_int(1), &GaussRat::zero()).unwrap()), ("hopf", hopf_example())] {
            let d = builtin_dual_pair(name).unwrap();
            let via_triple = dualize_triple(&ex.triple, &d).unwrap();
            let via_pair = triple_from_pair(&dualize_pair(&ex.pair, &d).unwrap()).unwrap();
            assert_eq!(via_triple.phi, via_pair.phi, "{}", name);
        }
    }

    #[test]
    fn annihilators_follow_phi() {
        for (name, ex) in [("heisenberg", heisenberg(&GaussRat::from_int(2), &GaussRat::from_int(-1)).unwrap()), ("hopf", hopf_example())] {
            let d = builtin_dual_pair(name).unwrap();
            let mp = ex.mixed.unwrap();
            for k in 0..sample_count(&d) {
                for r in [&mp.rho1, &mp.rho2] {
                    assert!(annihilators_correspond(&d, r, k).unwrap(), "{} point {}", name, k);
                    assert!(d.target.is_pure_at(&d.tau(r).unwrap(), k).unwrap());
                }
            }
        }
    }

    #[test]
    fn intertwining_on_generators() {
        for (name, _) in DUAL_PAIRS {
            let d = builtin_dual_pair(name).unwrap();
            let gens = GenSection::generators(&d.source);
            let forms: Vec<Form> = (0u32..1 << d.dim()).map(|m| Form::monomial(&d.source.ctx, d.dim(), m, d.source.one())).collect();
            let rep = intertwiner_check(&d, &gens, &forms).unwrap();
            assert!(rep.ok(), "{}: {:?}", name, rep.failures);
            assert!(rep.brackets > 0);
        }
        let d = heisenberg_pair().unwrap();
        let x1 = d.source.section("X1").unwrap();
        let x2 = d.source.section("X2").unwrap();
        let lhs = d.phi(&d.source.dorfman(&x1, &x2, None).unwrap()).unwrap();
        assert_eq!(lhs, d.target.section("alpha3'").unwrap());
        let x3 = d.source.section("X3").unwrap();
        let a3 = d.source.section("alpha3").unwrap();
        let half = FunctionElement::constant(&d.target.ctx, GaussRat::ratio(1, 2));
        assert_eq!(d.target.inner(&d.phi(&x3).unwrap(), &d.phi(&a3).unwrap()).unwrap(), half);
    }

    #[test]
    fn hopf_frame_rotates_along_the_fibre() {
        let d = hopf_pair().unwrap();
        let rep = intertwiner_check(&d, &GenSection::generators(&d.source), &[]).unwrap();
        assert!(rep.brackets_skipped > 0);
        assert!(!d.is_lie_invariant(&d.source.section("V2").unwrap()).unwrap());
        assert!(d.is_lie_invariant(&d.source.section("nu1").unwrap()).unwrap());
    }

    #[test]
    fn hopf_type_change() {
        let d = hopf_pair().unwrap();
        let rows = type_change_report(hopf_example().mixed.as_ref().unwrap(), &d).unwrap();
        for r in &rows {
            assert!(r.displacement_holds(), "{:?}", r);
            assert!(r.p_rule_holds(), "{:?}", r);
            assert_eq!(r.t_dual, 2);
            assert_eq!(r.p_dual, 1);
        }
        // f = g = 0 at points 0 and 3
        assert_eq!((rows[0].t_dual - rows[0].t_l, rows[0].p_e - rows[0].p_dual), (0, 0));
        assert_eq!((rows[2].t_dual - rows[2].t_l, rows[2].p_e - rows[2].p_dual), (1, 1));
    }

    #[test]
    fn heisenberg_type_change() {
        let d = heisenberg_pair().unwrap();
        let ex = heisenberg(&GaussRat::from_int(1), &GaussRat::from_int(1)).unwrap();
        let rows = type_change_report(ex.mixed.as_ref().unwrap(), &d).unwrap();
        for r in &rows {
            assert!(r.displacement_holds());
            assert_eq!((r.t_l, r.t_dual, r.p_e, r.p_dual, r.j1 + r.j2), (1, 2, 1, 1, 2));
            // the basic anchor is nonzero yet p does not move
            assert_eq!(r.p_predicted, 1);
            assert!(!r.p_rule_holds());
        }
    }

    #[test]
    fn presentations_at_points() {
        let m = crate::frame::builtin_model("torus3").unwrap();
        let v = m.form("2*e1 + 2*e1^e2^e3").unwrap();
        let p = presentation(&v).unwrap();
        assert_eq!(p.omega, m.form("2*e1").unwrap());
        assert_eq!(p.b.wedge(&p.omega), m.form("2*e1^e2^e3").unwrap());
        assert!(presentation(&m.form("1 + e1^e2^e3").unwrap()).is_err());
    }

    #[test]
    fn double_duality_swaps() {
        let s3 = builtin_example("s3-family", &[]).unwrap();
        let r = double_duality_check(s3.mixed.as_ref().unwrap()).unwrap();
        assert!(r.swapped() && r.phase_matches(), "{:?}", r);
        assert_eq!(r.predicted, GaussRat::i());
        let h = heisenberg(&GaussRat::from_int(1), &GaussRat::zero()).unwrap();
        let r2 = double_duality_check(h.mixed.as_ref().unwrap()).unwrap();
        assert!(r2.swapped() && r2.phase_matches(), "{:?}", r2);
        assert_eq!(r2.predicted, -GaussRat::i());
        let p1 = r.phase.unwrap();
        let p2 = r2.phase.unwrap();
        assert_eq!(&p1 * &p1, GaussRat::from_int(-1));
        assert_eq!(p1, -&p2);
    }
}
