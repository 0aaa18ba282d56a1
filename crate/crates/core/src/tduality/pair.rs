//! T-dual pairs with torus fibres, the section isomorphism `phi_F` and the
//! spinor transform `tau_F`.

use std::sync::Arc;

use crate::algebra::{solve_linear, FunctionElement, GaussRat, ScalarContext, Solution};
use crate::error::{Error, Result};
use crate::forms::form::wedge_sign;
use crate::forms::{Form, Mask};
use crate::frame::{builtin_model, FrameModel, GenSection};

/// Where the fibre coframe sits when its coefficient is read off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberExtraction {
    /// `rho = beta ^ nu^1 ^ .. ^ nu^k`, result `beta`.
    Rightmost,
    /// `rho = nu^1 ^ .. ^ nu^k ^ beta`, result `beta`.
    Leftmost,
}

/// Two frame models over a common base. The correspondence frame is the
/// source frame followed by the target fibre directions.
#[derive(Clone, Debug)]
pub struct TDualPair {
    pub name: String,
    pub source: Arc<FrameModel>,
    pub target: Arc<FrameModel>,
    /// `(source index, target index)` of the shared basic frame fields.
    pub basic: Vec<(usize, usize)>,
    /// `(source index, target index)` of `V_i` and `~V_i`.
    pub fiber: Vec<(usize, usize)>,
    /// `F = sum f[i][j] nu^i ^ ~nu^j`.
    pub f: Vec<Vec<GaussRat>>,
    pub h: Option<Form>,
    pub h_dual: Option<Form>,
    pub extraction: FiberExtraction,
}

/// Move `x` into `ctx`, matching generators by name.
pub fn transfer(x: &FunctionElement, ctx: &Arc<ScalarContext>) -> Result<FunctionElement> {
    if Arc::ptr_eq(x.ctx(), ctx) {
        return Ok(x.clone());
    }
    let src = x.ctx();
    let mut terms = crate::algebra::context::Terms::new();
    for (m, c) in x.terms() {
        let mut out = vec![0u16; ctx.ngens()];
        for (g, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = &src.gens[g].name;
            let t =
                ctx.gen_index(name).ok_or_else(|| Error::NonInvariant(format!("symbol `{}` does not exist on `{}`", name, ctx.name)))?;
            out[t] += e;
        }
        let entry = terms.entry(out).or_insert_with(GaussRat::zero);
        *entry = &*entry + c;
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(FunctionElement::from_terms(ctx, terms))
}

fn transfer_form(f: &Form, ctx: &Arc<ScalarContext>, dim: usize) -> Result<Form> {
    let mut out = Form::zero(ctx, dim);
    for (m, c) in f.terms() {
        out.add_term(*m, transfer(c, ctx)?);
    }
    Ok(out)
}

fn exp_constant(w: &Form) -> Form {
    let mut out = Form::one(w.ctx(), w.dim());
    let mut power = out.clone();
    let mut k = 1i64;
    loop {
        power = power.wedge(w).scale(&GaussRat::ratio(1, k));
        if power.is_zero() {
            return out;
        }
        out = out.add(&power);
        k += 1;
    }
}

impl TDualPair {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        source: Arc<FrameModel>,
        target: Arc<FrameModel>,
        basic: Vec<(usize, usize)>,
        fiber: Vec<(usize, usize)>,
        f: Vec<Vec<GaussRat>>,
        h: Option<Form>,
        h_dual: Option<Form>,
    ) -> Result<Self> {
        let p = TDualPair { name: name.into(), source, target, basic, fiber, f, h, h_dual, extraction: FiberExtraction::Rightmost };
        p.validate()?;
        Ok(p)
    }

    pub fn k(&self) -> usize {
        self.fiber.len()
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    fn corr_dim(&self) -> usize {
        self.dim() + self.k()
    }

    fn fiber_mask(&self) -> Mask {
        self.fiber.iter().fold(0, |m, &(s, _)| m | (1 << s))
    }

    /// Target index of each correspondence index outside the source fibre.
    fn corr_to_target(&self) -> Vec<usize> {
        let m = self.dim();
        let mut map = vec![usize::MAX; self.corr_dim()];
        for &(s, t) in &self.basic {
            map[s] = t;
        }
        for (j, &(_, t)) in self.fiber.iter().enumerate() {
            map[m + j] = t;
        }
        map
    }

    fn target_to_corr(&self) -> Vec<usize> {
        let mut map = vec![0; self.dim()];
        for &(s, t) in &self.basic {
            map[t] = s;
        }
        for (j, &(_, t)) in self.fiber.iter().enumerate() {
            map[t] = self.dim() + j;
        }
        map
    }

    /// The pairing `F` on the correspondence frame.
    pub fn f_form(&self) -> Form {
        let ctx = &self.target.ctx;
        let mut out = Form::zero(ctx, self.corr_dim());
        for (i, &(s, _)) in self.fiber.iter().enumerate() {
            for j in 0..self.k() {
                let c = &self.f[i][j];
                if !c.is_zero() {
                    let e = Form::basis(ctx, self.corr_dim(), s).wedge(&Form::basis(ctx, self.corr_dim(), self.dim() + j));
                    out = out.add(&e.scale(c));
                }
            }
        }
        out
    }

    /// `p^*` of a form on the source.
    pub fn pull_source(&self, r: &Form) -> Result<Form> {
        transfer_form(r, &self.target.ctx, self.corr_dim())
    }

    /// `~p^*` of a form on the target.
    pub fn pull_target(&self, r: &Form) -> Result<Form> {
        Ok(transfer_form(r, &self.target.ctx, self.dim())?.reindex(&self.target_to_corr(), self.corr_dim()))
    }

    /// `dF` on the correspondence frame.
    pub fn df(&self) -> Result<Form> {
        let n = self.corr_dim();
        let ctx = &self.target.ctx;
        let mut out = Form::zero(ctx, n);
        for (i, &(s, _)) in self.fiber.iter().enumerate() {
            for (j, &(_, t)) in self.fiber.iter().enumerate() {
                let c = &self.f[i][j];
                if c.is_zero() {
                    continue;
                }
                let nu = Form::basis(ctx, n, s);
                let nut = Form::basis(ctx, n, self.dim() + j);
                let dnu = self.pull_source(&self.source.dco[s])?;
                let dnut = self.pull_target(&self.target.dco[t])?;
                out = out.add(&dnu.wedge(&nut).sub(&nu.wedge(&dnut)).scale(c));
            }
        }
        Ok(out)
    }

    /// `~p^* ~H - p^* H`, the value `dF` must take.
    pub fn twist_difference(&self) -> Result<Form> {
        let n = self.corr_dim();
        let mut out = Form::zero(&self.target.ctx, n);
        if let Some(h) = &self.h_dual {
            out = out.add(&self.pull_target(h)?);
        }
        if let Some(h) = &self.h {
            out = out.sub(&self.pull_source(h)?);
        }
        Ok(out)
    }

    fn f_matrix(&self) -> Vec<Vec<FunctionElement>> {
        let ctx = &self.target.ctx;
        self.f.iter().map(|r| r.iter().map(|c| FunctionElement::constant(ctx, c.clone())).collect()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.dim();
        let k = self.k();
        if self.target.dim() != m || self.basic.len() + k != m {
            return Err(Error::validation("source and target must share the basic frame and fibre rank"));
        }
        let mut seen_s = vec![false; m];
        let mut seen_t = vec![false; m];
        for &(s, t) in self.basic.iter().chain(&self.fiber) {
            if s >= m || t >= m || seen_s[s] || seen_t[t] {
                return Err(Error::validation("frame correspondence is not a bijection"));
            }
            seen_s[s] = true;
            seen_t[t] = true;
        }
        if self.f.len() != k || self.f.iter().any(|r| r.len() != k) {
            return Err(Error::validation("F must be a k x k matrix"));
        }
        let mat = self.f_matrix();
        if crate::algebra::rank(&mat) != k {
            return Err(Error::validation("vertical pairing F is degenerate"));
        }
        if let Some(h) = &self.h {
            self.source.check_twist(h)?;
        }
        if let Some(h) = &self.h_dual {
            self.target.check_twist(h)?;
        }
        let df = self.df()?;
        let want = self.twist_difference()?;
        if df != want {
            let names = self.corr_names();
            return Err(Error::Validation(format!("dF = {} but ~p*~H - p*H = {}", df.display_with(&names), want.display_with(&names))));
        }
        Ok(())
    }

    /// Coframe names on the correspondence frame.
    pub fn corr_names(&self) -> Vec<String> {
        let mut names = self.source.coframe.clone();
        for &(_, t) in &self.fiber {
            names.push(format!("~{}", self.target.coframe[t]));
        }
        names
    }

    /// Pair with the roles of source and target exchanged; `phi` of the
    /// inverse pair inverts `phi` of this one.
    pub fn inverse(&self) -> TDualPair {
        let k = self.k();
        TDualPair {
            name: format!("{}-inverse", self.name),
            source: self.target.clone(),
            target: self.source.clone(),
            basic: self.basic.iter().map(|&(s, t)| (t, s)).collect(),
            fiber: self.fiber.iter().map(|&(s, t)| (t, s)).collect(),
            f: (0..k).map(|i| (0..k).map(|j| self.f[j][i].clone()).collect()).collect(),
            h: self.h_dual.clone(),
            h_dual: self.h.clone(),
            extraction: self.extraction,
        }
    }

    fn check_coeff(&self, c: &FunctionElement, what: &str) -> Result<()> {
        for &(s, _) in &self.fiber {
            if !self.source.apply(s, c)?.is_zero() {
                return Err(Error::NonInvariant(format!("{} coefficient {} depends on the {} direction", what, c, self.source.frame[s])));
            }
        }
        Ok(())
    }

    pub fn check_section(&self, x: &GenSection) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::ModelMismatch(format!("section does not live on `{}`", self.source.name)));
        }
        x.coords().iter().try_for_each(|c| self.check_coeff(c, "section"))
    }

    pub fn check_form(&self, r: &Form) -> Result<()> {
        if r.dim() != self.dim() {
            return Err(Error::ModelMismatch(format!("form does not live on `{}`", self.source.name)));
        }
        r.terms().values().try_for_each(|c| self.check_coeff(c, "form"))
    }

    /// Lie derivatives along the fibre vanish (stronger than the
    /// coefficient test when the frame itself rotates along the fibre).
    pub fn is_lie_invariant(&self, x: &GenSection) -> Result<bool> {
        for &(s, _) in &self.fiber {
            let v = GenSection::vector(&self.source, s);
            if !self.source.dorfman(&v, x, None)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `phi_F(X + xi) = ~p_*(X^) + xi - F(X^)` where the lift `X^` makes
    /// `p^* xi - F(X^)` basic.
    pub fn phi(&self, x: &GenSection) -> Result<GenSection> {
        self.check_section(x)?;
        let ctx = &self.target.ctx;
        let k = self.k();
        let a: Vec<FunctionElement> = self.fiber.iter().map(|&(s, _)| transfer(&x.v[s], ctx)).collect::<Result<_>>()?;
        let b: Vec<FunctionElement> = self.fiber.iter().map(|&(s, _)| transfer(&x.w[s], ctx)).collect::<Result<_>>()?;
        let rhs: Vec<FunctionElement> = b.iter().map(|c| -c).collect();
        let y = match solve_linear(&self.f_matrix(), &rhs)? {
            Solution::Solved(y) => y
                .iter()
                .map(|q| q.as_elem().ok_or_else(|| Error::Other("vertical lift is not polynomial".into())))
                .collect::<Result<Vec<_>>>()?,
            Solution::NoSolution { .. } => return Err(Error::Other("vertical lift has no solution".into())),
        };
        let mut out = GenSection::zero(&self.target);
        for &(s, t) in &self.basic {
            out.v[t] = transfer(&x.v[s], ctx)?;
            out.w[t] = transfer(&x.w[s], ctx)?;
        }
        for (j, &(_, t)) in self.fiber.iter().enumerate() {
            out.v[t] = y[j].clone();
            let mut w = FunctionElement::zero(ctx);
            for i in 0..k {
                w = &w - &a[i].scale(&self.f[i][j]);
            }
            out.w[t] = w;
        }
        Ok(out)
    }

    pub fn phi_inverse(&self, x: &GenSection) -> Result<GenSection> {
        self.inverse().phi(x)
    }

    /// `tau_F(rho) = int e^F ^ p^* rho` with unit fibre volume.
    pub fn tau(&self, r: &Form) -> Result<Form> {
        self.check_form(r)?;
        let lifted = self.pull_source(r)?;
        let prod = exp_constant(&self.f_form()).wedge(&lifted);
        Ok(self.integrate(&prod))
    }

    /// Fibre integral of a form on the correspondence frame.
    pub fn integrate(&self, r: &Form) -> Form {
        let fm = self.fiber_mask();
        let mut rest = Form::zero(r.ctx(), self.corr_dim());
        for (m, c) in r.terms() {
            if m & fm != fm {
                continue;
            }
            let others = m & !fm;
            let neg = match self.extraction {
                FiberExtraction::Rightmost => wedge_sign(others, fm),
                FiberExtraction::Leftmost => wedge_sign(fm, others),
            }
            .unwrap_or(false);
            rest.add_term(others, if neg { -c } else { c.clone() });
        }
        rest.reindex(&self.corr_to_target(), self.dim())
    }
}

fn gr(n: i64) -> GaussRat {
    GaussRat::from_int(n)
}

/// Heisenberg nilmanifold dual to `S^1 x R^2` with flux, `F = alpha3 ^ ~alpha3`.
pub fn heisenberg_pair() -> Result<TDualPair> {
    let s = Arc::new(builtin_model("heisenberg")?);
    let t = Arc::new(builtin_model("heisenberg-dual")?);
    let h = t.named_form("H").cloned();
    TDualPair::new("heisenberg", s, t, vec![(0, 0), (1, 1)], vec![(2, 2)], vec![vec![gr(1)]], None, h)
}

/// Hopf fibration dual to `S^1 x S^2`, `F = -nu1 ^ ~nu1`.
pub fn hopf_pair() -> Result<TDualPair> {
    let s = Arc::new(builtin_model("s3-hopf")?);
    let t = Arc::new(builtin_model("hopf-dual")?);
    let h = t.named_form("H").cloned();
    TDualPair::new("hopf", s, t, vec![(1, 1), (2, 2)], vec![(0, 0)], vec![vec![gr(-1)]], None, h)
}

/// `M x S^1` dual to itself, `F = -dt ^ d~t`.
pub fn trivial_circle(model: &FrameModel) -> Result<TDualPair> {
    let m = model.dim();
    let s = Arc::new(model.extend_flat(&[("T", "dt")], &format!("{}-x-circle", model.name)));
    let t = Arc::new(model.extend_flat(&[("T~", "dt~")], &format!("{}-x-dual-circle", model.name)));
    let basic = (0..m).map(|i| (i, i)).collect();
    TDualPair::new("trivial-circle", s, t, basic, vec![(m, m)], vec![vec![gr(-1)]], None, None)
}

pub const DUAL_PAIRS: &[(&str, &str)] = &[
    ("heisenberg", "Heisenberg nilmanifold and S^1 x R^2 with flux alpha1^alpha2^alpha3'"),
    ("hopf", "S^3 over S^2 and S^1 x S^2 with flux 2 nu1'^nu2^nu3"),
    ("trivial-circle", "S^3 x S^1 with its self-duality"),
];

pub fn builtin_dual_pair(name: &str) -> Result<TDualPair> {
    match name {
        "heisenberg" => heisenberg_pair(),
        "hopf" => hopf_pair(),
        "trivial-circle" => trivial_circle(&builtin_model("s3")?),
        _ => Err(Error::UnknownSymbol(format!("dual pair {}", name))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tgt_section(p: &TDualPair, s: &str) -> GenSection {
        p.target.section(s).unwrap()
    }

    #[test]
    fn builtin_pairs_validate() {
        for (n, _) in DUAL_PAIRS {
            let p = builtin_dual_pair(n).unwrap();
            assert_eq!(p.df().unwrap(), p.twist_difference().unwrap(), "{}", n);
            assert!(p.inverse().validate().is_ok(), "{}", n);
        }
    }

    #[test]
    fn wrong_flux_is_rejected() {
        let p = heisenberg_pair().unwrap();
        let bad =
            TDualPair::new("bad", p.source.clone(), p.target.clone(), p.basic.clone(), p.fiber.clone(), vec![vec![gr(1)]], None, None);
        assert!(matches!(bad, Err(Error::Validation(_))));
        let degenerate = TDualPair::new(
            "bad",
            p.source.clone(),
            p.target.clone(),
            p.basic.clone(),
            p.fiber.clone(),
            vec![vec![gr(0)]],
            None,
            p.h_dual.clone(),
        );
        assert!(degenerate.is_err());
    }

    #[test]
    fn heisenberg_images() {
        let p = heisenberg_pair().unwrap();
        let s = &p.source;
        assert_eq!(p.phi(&s.section("alpha3").unwrap()).unwrap(), tgt_section(&p, "-X3'"));
        assert_eq!(p.phi(&s.section("X3").unwrap()).unwrap(), tgt_section(&p, "-alpha3'"));
        assert_eq!(p.phi(&s.section("X1").unwrap()).unwrap(), tgt_section(&p, "X1"));
        assert_eq!(p.phi(&s.section("x*alpha2").unwrap()).unwrap(), tgt_section(&p, "x*alpha2"));
    }

    #[test]
    fn hopf_images() {
        let p = hopf_pair().unwrap();
        let s = &p.source;
        assert_eq!(p.phi(&s.section("-V1").unwrap()).unwrap(), tgt_section(&p, "-nu1'"));
        assert_eq!(p.phi(&s.section("-nu1 - f*V2 - g*V3").unwrap()).unwrap(), tgt_section(&p, "-V1' - f*V2 - g*V3"));
        assert_eq!(p.phi(&s.section("nu1").unwrap()).unwrap(), tgt_section(&p, "V1'"));
    }

    #[test]
    fn non_invariant_input_is_rejected() {
        let p = heisenberg_pair().unwrap();
        let x = p.source.section("z*X1").unwrap();
        assert!(matches!(p.phi(&x), Err(Error::NonInvariant(_))));
        let r = p.source.form("z*alpha1").unwrap();
        assert!(matches!(p.tau(&r), Err(Error::NonInvariant(_))));
    }

    #[test]
    fn phi_inverse_roundtrip() {
        for (n, _) in DUAL_PAIRS {
            let p = builtin_dual_pair(n).unwrap();
            let inv = p.inverse();
            for g in GenSection::generators(&p.source) {
                assert_eq!(inv.phi(&p.phi(&g).unwrap()).unwrap(), g, "{}", n);
            }
        }
    }

    #[test]
    fn hopf_spinor_images() {
        let p = hopf_pair().unwrap();
        let s = &p.source;
        let rho1 = s.form("i*nu2 + nu3").unwrap();
        assert_eq!(p.tau(&rho1).unwrap(), p.target.form("-nu1'^(i*nu2 + nu3)").unwrap());
        let rho2 = s.form("-(g + i*f) - nu1^(i*nu2 + nu3)").unwrap();
        assert_eq!(p.tau(&rho2).unwrap(), p.target.form("-(g + i*f)*nu1' + i*nu2 + nu3").unwrap());
    }

    #[test]
    fn basic_forms_pick_up_the_flux_leg() {
        let p = hopf_pair().unwrap();
        let one = p.source.form("1").unwrap();
        assert_eq!(p.tau(&one).unwrap(), p.target.form("nu1'").unwrap());
        let top = p.source.form("nu2^nu3").unwrap();
        assert_eq!(p.tau(&top).unwrap(), p.target.form("nu1'^nu2^nu3").unwrap());
        let vert = p.source.form("nu1").unwrap();
        assert_eq!(p.tau(&vert).unwrap(), p.target.form("1").unwrap());
    }

    #[test]
    fn extraction_conventions_differ_by_parity() {
        let mut p = hopf_pair().unwrap();
        let s = p.source.clone();
        let odd_rest = s.form("nu1^nu2").unwrap();
        let even_rest = s.form("nu1").unwrap();
        let r_odd = p.tau(&odd_rest).unwrap();
        let r_even = p.tau(&even_rest).unwrap();
        p.extraction = FiberExtraction::Leftmost;
        assert_eq!(p.tau(&odd_rest).unwrap(), r_odd.neg());
        assert_eq!(p.tau(&even_rest).unwrap(), r_even);
    }
}
