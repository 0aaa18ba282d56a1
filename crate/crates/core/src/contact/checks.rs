//! Normality and integrability decision procedures.

use num_traits::{Signed, Zero};

use crate::algebra::{kernel, solve_linear, FunctionElement, GaussRat, GenKind, Solution};
use crate::error::Result;
use crate::forms::Form;
use crate::frame::{FrameModel, GenSection};

use super::structures::{ContactPair, ContactTriple};

/// Failed instances of the three normality conditions, as
/// `(description, residual section)`.
#[derive(Clone, Debug, Default)]
pub struct NormalityReport {
    pub nijenhuis: Vec<(String, GenSection)>,
    pub commutes: Vec<(String, GenSection)>,
    pub bracket_e: Option<GenSection>,
}

impl NormalityReport {
    pub fn normal(&self) -> bool {
        self.nijenhuis.is_empty() && self.commutes.is_empty() && self.bracket_e.is_none()
    }

    /// Every nonzero coordinate of every residual, normalized and deduplicated.
    pub fn residual_coefficients(&self) -> Vec<FunctionElement> {
        let secs = self.nijenhuis.iter().chain(self.commutes.iter()).map(|(_, s)| s).chain(self.bracket_e.iter());
        let mut out = Vec::new();
        for s in secs {
            for c in s.coords() {
                for part in [c.re(), c.im()] {
                    if !part.is_zero() {
                        push_unique(&mut out, normalize_certificate(&part));
                    }
                }
            }
        }
        out
    }

    pub fn summary(&self, model: &FrameModel) -> Vec<String> {
        let mut out = Vec::new();
        for (d, s) in &self.nijenhuis {
            out.push(format!("(i) {}: {}", d, s.display(model)));
        }
        for (d, s) in &self.commutes {
            out.push(format!("(ii) {}: {}", d, s.display(model)));
        }
        if let Some(s) = &self.bracket_e {
            out.push(format!("(iii) [e1,e2] = {}", s.display(model)));
        }
        out
    }
}

fn push_unique(v: &mut Vec<FunctionElement>, x: FunctionElement) {
    if !v.contains(&x) {
        v.push(x);
    }
}

/// Scale a certificate to a canonical representative: rational content
/// removed and the first coefficient in term order made positive.
pub fn normalize_certificate(p: &FunctionElement) -> FunctionElement {
    if p.is_zero() {
        return p.clone();
    }
    let mut q = p.clone();
    if let Some(c) = q.content() {
        q = q.scale(&GaussRat::real(c).inv().unwrap());
    }
    let first = q.terms().values().next().cloned().unwrap();
    let flip = if first.re.is_zero() { first.im.is_negative() } else { first.re.is_negative() };
    if flip {
        q = -q;
    }
    q
}

/// Normalized set of certificates (deduplicated, order-independent comparison).
pub fn same_certificates(a: &[FunctionElement], b: &[FunctionElement]) -> bool {
    let na: Vec<FunctionElement> = a.iter().filter(|x| !x.is_zero()).map(normalize_certificate).collect();
    let nb: Vec<FunctionElement> = b.iter().filter(|x| !x.is_zero()).map(normalize_certificate).collect();
    na.iter().all(|x| nb.contains(x)) && nb.iter().all(|x| na.contains(x))
}

/// Normality of a triple via the three bracket conditions on e1, e2 and E^perp.
pub fn normality_check(t: &ContactTriple, twist: Option<&Form>) -> Result<NormalityReport> {
    let m = &*t.model;
    let br = |a: &GenSection, b: &GenSection| m.dorfman(a, b, twist);
    let frame = t.perp_frame()?;
    let mut rep = NormalityReport::default();
    let phi_frame: Vec<GenSection> = frame.iter().map(|x| t.phi.apply(x)).collect();
    for i in 0..frame.len() {
        for j in (i + 1)..frame.len() {
            let (x, y) = (&frame[i], &frame[j]);
            let (px, py) = (&phi_frame[i], &phi_frame[j]);
            let inner = br(px, y)?.add(&br(x, py)?);
            let n = br(px, py)?.sub(&br(x, y)?).sub(&t.phi.apply(&inner));
            if !n.is_zero() {
                rep.nijenhuis.push((format!("N(x{}, x{})", i, j), n));
            }
        }
    }
    for (i, x) in frame.iter().enumerate() {
        for (k, e) in [(1, &t.e1), (2, &t.e2)] {
            let r = t.phi.apply(&br(x, e)?).sub(&br(&phi_frame[i], e)?);
            if !r.is_zero() {
                rep.commutes.push((format!("Phi[x{}, e{}] - [Phi x{}, e{}]", i, k, i, k), r));
            }
        }
    }
    let b = br(&t.e1, &t.e2)?;
    if !b.is_zero() {
        rep.bracket_e = Some(b);
    }
    Ok(rep)
}

/// Result of testing involutivity of `L + C e_i`.
#[derive(Clone, Debug)]
pub struct LineReport {
    pub line: usize,
    /// Pairs `(a, b)` of generators whose bracket failed the span membership
    /// solve, with the elimination residual.
    pub non_members: Vec<(usize, usize, FunctionElement)>,
    /// Real and imaginary parts of the nonzero values `<[a,b], c>`, normalized.
    pub certificates: Vec<FunctionElement>,
}

impl LineReport {
    pub fn involutive(&self) -> bool {
        self.non_members.is_empty() && self.certificates.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct IntegrabilityReport {
    pub lines: Vec<LineReport>,
}

impl IntegrabilityReport {
    /// Some tried line gives an involutive `L + C e_i`.
    pub fn integrable(&self) -> bool {
        self.lines.iter().any(|l| l.involutive())
    }

    /// Every tried line gives an involutive `L + C e_i`.
    pub fn strong(&self) -> bool {
        self.lines.iter().all(|l| l.involutive())
    }

    pub fn line(&self, i: usize) -> Option<&LineReport> {
        self.lines.iter().find(|l| l.line == i)
    }

    /// Union of certificates over all lines.
    pub fn certificates(&self) -> Vec<FunctionElement> {
        let mut out = Vec::new();
        for l in &self.lines {
            for c in &l.certificates {
                push_unique(&mut out, c.clone());
            }
        }
        out
    }
}

/// Involutivity of the maximal isotropic `gens`: span membership of every
/// pairwise bracket, plus the Courant tensor `<[a,b], c>` on generators.
pub fn involutivity(model: &FrameModel, gens: &[GenSection], twist: Option<&Form>, line: usize) -> Result<LineReport> {
    let n = gens.len();
    let mut rep = LineReport { line, non_members: Vec::new(), certificates: Vec::new() };
    let cols: Vec<Vec<FunctionElement>> = gens.iter().map(|g| g.coords()).collect();
    let rows: Vec<Vec<FunctionElement>> = (0..cols[0].len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    for a in 0..n {
        for b in 0..n {
            let br = model.dorfman(&gens[a], &gens[b], twist)?;
            if br.is_zero() {
                continue;
            }
            if let Solution::NoSolution { residual, .. } = solve_linear(&rows, &br.coords())? {
                rep.non_members.push((a, b, residual));
            }
            if a < b {
                for c in (b + 1)..n {
                    let v = model.inner(&br, &gens[c])?;
                    for part in [v.re(), v.im()] {
                        if !part.is_zero() {
                            push_unique(&mut rep.certificates, normalize_certificate(&part));
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Integrability of `(E, L)` over the lines `C e1`, `C e2` of the declared
/// frame plus any extra isotropic sections of `E`.
pub fn integrability_check(p: &ContactPair, twist: Option<&Form>, extra: &[GenSection]) -> Result<IntegrabilityReport> {
    let m = &*p.model;
    let mut lines = Vec::new();
    for i in [1, 2] {
        lines.push(involutivity(m, &p.extended(i), twist, i)?);
    }
    for (k, e) in extra.iter().enumerate() {
        let mut gens = p.l.clone();
        gens.push(e.clone());
        lines.push(involutivity(m, &gens, twist, 3 + k)?);
    }
    Ok(IntegrabilityReport { lines })
}

#[derive(Clone, Debug)]
pub enum FrameVerdict {
    /// `[e1,e2] = df - 2<e1,df> e2 - 2<e2,df> e1` with the given `f`.
    Holds(FunctionElement),
    NotStronglyIntegrable,
    /// No function can satisfy the identity; the certificate explains why.
    Fails(String),
    /// No candidate matched and no obstruction was certified.
    Inconclusive,
}

impl FrameVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, FrameVerdict::Holds(_))
    }

    pub fn is_conclusive(&self) -> bool {
        !matches!(self, FrameVerdict::Inconclusive)
    }
}

/// `df - 2<e1,df> e2 - 2<e2,df> e1`.
pub fn projected_exact(p: &ContactPair, f: &FunctionElement) -> Result<GenSection> {
    let m = &*p.model;
    let df = m.exact(f)?;
    let two = GaussRat::from_int(2);
    let a = m.inner(&p.e1, &df)?.scale(&two);
    let b = m.inner(&p.e2, &df)?.scale(&two);
    Ok(df.sub(&p.e2.mul_fn(&a)).sub(&p.e1.mul_fn(&b)))
}

/// Default candidates: `0`, then `+-` every coordinate or formal symbol and
/// every product of two of them.
pub fn default_candidates(model: &FrameModel) -> Vec<FunctionElement> {
    let ctx = &model.ctx;
    let gens: Vec<FunctionElement> = (0..ctx.ngens())
        .filter(|&g| matches!(ctx.gens[g].kind, GenKind::Coordinate | GenKind::Formal))
        .map(|g| FunctionElement::gen_at(ctx, g))
        .collect();
    let mut out = vec![model.zero()];
    for g in &gens {
        out.push(g.clone());
        out.push(-g);
    }
    for i in 0..gens.len() {
        for j in i..gens.len() {
            let p = &gens[i] * &gens[j];
            out.push(p.clone());
            out.push(-p);
        }
    }
    out
}

/// Normality through the frame condition of the strong-integrability criterion.
pub fn normal_frame_criterion(p: &ContactPair, twist: Option<&Form>, candidates: Option<&[FunctionElement]>) -> Result<FrameVerdict> {
    if !integrability_check(p, twist, &[])?.strong() {
        return Ok(FrameVerdict::NotStronglyIntegrable);
    }
    let m = &*p.model;
    let u = m.dorfman(&p.e1, &p.e2, twist)?;
    let defaults;
    let cands = match candidates {
        Some(c) => c,
        None => {
            defaults = default_candidates(m);
            &defaults
        }
    };
    for f in cands {
        if projected_exact(p, f)? == u {
            return Ok(FrameVerdict::Holds(f.clone()));
        }
    }
    // u + a e2 + b e1 must be an exact 1-form: solve the vector part for (a, b)
    let dim = m.dim();
    let rows: Vec<Vec<FunctionElement>> = (0..dim).map(|k| vec![p.e2.v[k].clone(), p.e1.v[k].clone()]).collect();
    let rhs: Vec<FunctionElement> = u.v.iter().map(|c| -c).collect();
    match solve_linear(&rows, &rhs)? {
        Solution::NoSolution { residual, .. } => {
            Ok(FrameVerdict::Fails(format!("vector part of [e1,e2] leaves a(E): residual {}", residual)))
        }
        Solution::Solved(sol) => {
            if !kernel(&rows, 2).is_empty() {
                return Ok(FrameVerdict::Inconclusive);
            }
            let (a, b) = match (sol[0].as_elem(), sol[1].as_elem()) {
                (Some(a), Some(b)) => (a, b),
                _ => return Ok(FrameVerdict::Inconclusive),
            };
            let w = u.add(&p.e2.mul_fn(&a)).add(&p.e1.mul_fn(&b));
            let omega = w.form_part();
            let d = m.d(&omega)?;
            if !d.is_zero() {
                return Ok(FrameVerdict::Fails(format!("[e1,e2] + a e2 + b e1 has non-closed form part: d = {}", m.form_string(&d))));
            }
            Ok(FrameVerdict::Inconclusive)
        }
    }
}
