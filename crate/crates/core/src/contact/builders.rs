//! Builders for the standard families of generalized almost contact structures.

use std::sync::Arc;

use crate::algebra::{eval_scalar, parse_expr, solve_linear, Expr, FunctionElement, GaussRat, Solution};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::frame::{builtin_model, builtin_model_with_constants, FrameModel, GenSection};

use super::endo::Endo;
use super::mixed::MixedPair;
use super::structures::{pair_from_triple, triple_from_pair, ContactPair, ContactTriple};

/// A fully built example: pair, triple and (where known) a mixed pair.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: String,
    pub pair: ContactPair,
    pub triple: ContactTriple,
    pub mixed: Option<MixedPair>,
}

impl Example {
    pub fn model(&self) -> &Arc<FrameModel> {
        &self.pair.model
    }
}

/// `theta(X_a, X_b)`.
pub fn eval2(theta: &Form, a: usize, b: usize) -> FunctionElement {
    theta.interior_basis(a).interior_basis(b).coeff(0)
}

fn solve_poly(a: &[Vec<FunctionElement>], b: &[FunctionElement], what: &str) -> Result<Vec<FunctionElement>> {
    match solve_linear(a, b)? {
        Solution::Solved(v) => v
            .iter()
            .map(|x| x.as_elem().ok_or_else(|| Error::NotDivisible(format!("{} has non-polynomial coefficient {}", what, x))))
            .collect(),
        Solution::NoSolution { residual, .. } => Err(Error::validation(format!("{}: inconsistent system ({})", what, residual))),
    }
}

fn one_form_coeffs(model: &FrameModel, f: &Form) -> Result<Vec<FunctionElement>> {
    if f.degrees().iter().any(|&d| d != 1) {
        return Err(Error::Precondition(format!("{} is not a 1-form", model.form_string(f))));
    }
    Ok((0..model.dim()).map(|a| f.coeff(1 << a)).collect())
}

fn vector_section(v: Vec<FunctionElement>, model: &FrameModel) -> GenSection {
    GenSection::from_parts(v, vec![model.zero(); model.dim()])
}

fn coform_section(w: Vec<FunctionElement>, model: &FrameModel) -> GenSection {
    GenSection::from_parts(vec![model.zero(); model.dim()], w)
}

/// Almost contact structure `(phi, xi, eta)` as the triple
/// `Phi = diag(phi, -phi^*)`, `e1 = xi`, `e2 = eta`. `phi_images[j]` is the
/// vector field `phi(X_j)`.
pub fn almost_contact(model: Arc<FrameModel>, phi_images: &[GenSection], xi: &GenSection, eta: &Form) -> Result<ContactTriple> {
    let m = model.dim();
    if phi_images.len() != m || phi_images.iter().any(|x| !x.is_vector()) || !xi.is_vector() {
        return Err(Error::Precondition("phi must map each frame field to a vector field".into()));
    }
    let eta_w = one_form_coeffs(&model, eta)?;
    let eta_s = coform_section(eta_w, &model);
    let mut cols = Vec::with_capacity(2 * m);
    cols.extend(phi_images.iter().cloned());
    for a in 0..m {
        let w: Vec<FunctionElement> = (0..m).map(|j| -&phi_images[j].v[a]).collect();
        cols.push(coform_section(w, &model));
    }
    ContactTriple::new(model, Endo { cols }, xi.clone(), eta_s)
}

/// Almost cosymplectic structure `(theta, eta)` with `theta^n ^ eta != 0`.
pub fn cosymplectic(model: Arc<FrameModel>, eta: &Form, theta: &Form) -> Result<ContactTriple> {
    let m = model.dim();
    let n = (m - 1) / 2;
    let mut top = eta.clone();
    for _ in 0..n {
        top = theta.wedge(&top);
    }
    for k in 0..model.points.len() {
        if top.eval(model.point(k)?)?.is_zero() {
            return Err(Error::validation(format!("theta^n ^ eta vanishes at sample point {}", k)));
        }
    }
    let eta_w = one_form_coeffs(&model, eta)?;
    let th: Vec<Vec<FunctionElement>> = (0..m).map(|a| (0..m).map(|b| eval2(theta, a, b)).collect()).collect();
    // xi: eta(xi) = 1, i_xi theta = 0
    let mut rows = vec![eta_w.clone()];
    let mut rhs = vec![model.one()];
    for b in 0..m {
        rows.push((0..m).map(|a| th[a][b].clone()).collect());
        rhs.push(model.zero());
    }
    let xi = solve_poly(&rows, &rhs, "Reeb field")?;
    let mut cols = Vec::with_capacity(2 * m);
    for a in 0..m {
        cols.push(coform_section(th[a].clone(), &model));
    }
    for a in 0..m {
        // alpha' = alpha^a - alpha^a(xi) eta; Phi(alpha^a) = -Y, Y in Ker eta, i_Y theta = alpha'
        let target: Vec<FunctionElement> = (0..m).map(|b| if a == b { model.one() } else { model.zero() } - &xi[a] * &eta_w[b]).collect();
        let mut rhs = vec![model.zero()];
        rhs.extend(target);
        let y = solve_poly(&rows, &rhs, "inverse of theta on Ker eta")?;
        cols.push(vector_section(y.iter().map(|c| -c).collect(), &model));
    }
    ContactTriple::new(model.clone(), Endo { cols }, vector_section(xi, &model), coform_section(eta_w, &model))
}

/// Evaluate `e` with some symbols bound to given scalars.
pub fn eval_with(e: &Expr, model: &FrameModel, env: &[(&str, FunctionElement)]) -> Result<FunctionElement> {
    let rec = |x: &Expr| eval_with(x, model, env);
    Ok(match e {
        Expr::Sym(n, _) => match env.iter().find(|(k, _)| k == n) {
            Some((_, v)) => v.clone(),
            None => eval_scalar(e, &model.ctx)?,
        },
        Expr::Num(_) | Expr::I | Expr::Call(..) => eval_scalar(e, &model.ctx)?,
        Expr::Neg(a) => -rec(a)?,
        Expr::Add(a, b) => rec(a)? + rec(b)?,
        Expr::Sub(a, b) => rec(a)? - rec(b)?,
        Expr::Mul(a, b) | Expr::Wedge(a, b) => rec(a)? * rec(b)?,
        Expr::Pow(a, k) => rec(a)?.pow(*k),
        Expr::Div(a, b, _) => {
            let d = rec(b)?;
            let inv = d.as_constant().and_then(|c| c.inv()).ok_or_else(|| Error::NotDivisible(format!("division by `{}`", d)))?;
            rec(a)?.scale(&inv)
        }
    })
}

/// Real and imaginary parts of a polynomial `h(z, w)` with
/// `z = x1 + i x2`, `w = x3 + i x4`.
pub fn holomorphic_parts(model: &FrameModel, h: &str) -> Result<(FunctionElement, FunctionElement)> {
    let i = FunctionElement::i(&model.ctx);
    let x = |n: &str| FunctionElement::gen(&model.ctx, n);
    let z = x("x1")? + &i * &x("x2")?;
    let w = x("x3")? + &i * &x("x4")?;
    let hv = eval_with(&parse_expr(h)?, model, &[("z", z), ("w", w)])?;
    Ok((hv.re(), hv.im()))
}

/// The structure on the 3-sphere with `e1 = -V1`, `e2 = -nu1 - f V2 - g V3`.
pub fn s3_pair(model: Arc<FrameModel>, f: &FunctionElement, g: &FunctionElement) -> Result<ContactPair> {
    let m = &*model;
    let e1 = m.section("-V1")?;
    let e2 = m.section("-nu1")?.sub(&m.section("V2")?.mul_fn(f)).sub(&m.section("V3")?.mul_fn(g));
    let i = FunctionElement::i(&m.ctx);
    let z = m.section("V2 - i*V3")?;
    let v1 = m.section("V1")?;
    let w = m.section("nu3")?.sub(&v1.mul_fn(g)).sub(&m.section("-nu2")?.add(&v1.mul_fn(f)).mul_fn(&i));
    ContactPair::new(model.clone(), e1, e2, vec![z, w])
}

pub fn s3_mixed(pair: &ContactPair) -> Result<MixedPair> {
    let m = &*pair.model;
    let rho1 = m.form("i*nu2 + nu3")?;
    let rho2 = m.clifford_act(&pair.e2, &rho1)?;
    MixedPair::new(pair.model.clone(), rho1, rho2, pair.e1.clone(), pair.e2.clone())
}

fn s3_example(name: &str, model: Arc<FrameModel>, f: &FunctionElement, g: &FunctionElement) -> Result<Example> {
    let pair = s3_pair(model, f, g)?;
    let triple = triple_from_pair(&pair)?;
    let mixed = Some(s3_mixed(&pair)?);
    Ok(Example { name: name.into(), pair, triple, mixed })
}

/// S^3 family with formal `f`, `g` (no arguments), explicit `f`, `g`
/// polynomials, or a homogeneous `h(z, w)`.
pub fn s3_family(model_name: &str, f: Option<&str>, g: Option<&str>, h: Option<&str>) -> Result<Example> {
    s3_family_on(Arc::new(builtin_model(model_name)?), f, g, h)
}

pub fn s3_family_on(model: Arc<FrameModel>, f: Option<&str>, g: Option<&str>, h: Option<&str>) -> Result<Example> {
    let (fv, gv) = match (f, g, h) {
        (_, _, Some(h)) => holomorphic_parts(&model, h)?,
        (f, g, None) => (model.scalar(f.unwrap_or("f"))?, model.scalar(g.unwrap_or("g"))?),
    };
    s3_example("s3-family", model, &fv, &gv)
}

/// Heisenberg pair `E_{b,c} = span(X1 - c X2 + b X3, alpha1)`,
/// `L_{b,c} = span(X2 - i alpha3 + i b alpha1, X3 + i alpha2 + i c alpha1)`.
pub fn heisenberg_pair(b: &GaussRat, c: &GaussRat) -> Result<ContactPair> {
    let model = Arc::new(builtin_model("heisenberg")?);
    let m = &*model;
    let k = |x: &GaussRat| FunctionElement::constant(&m.ctx, x.clone());
    let i = FunctionElement::i(&m.ctx);
    let e1 = m.section("X1")?.sub(&m.section("X2")?.mul_fn(&k(c))).add(&m.section("X3")?.mul_fn(&k(b)));
    let e2 = m.section("alpha1")?;
    let a1 = m.section("alpha1")?;
    let l1 = m.section("X2 - i*alpha3")?.add(&a1.mul_fn(&(&i * &k(b))));
    let l2 = m.section("X3 + i*alpha2")?.add(&a1.mul_fn(&(&i * &k(c))));
    ContactPair::new(model.clone(), e1, e2, vec![l1, l2])
}

/// The cosymplectic form `b alpha1^alpha2 + c alpha1^alpha3 + alpha2^alpha3`
/// with `eta = alpha1` represents `(E_{b,c}, L_{b,c})`.
pub fn heisenberg_theta(model: &FrameModel, b: &GaussRat, c: &GaussRat) -> Result<Form> {
    let k = |x: &GaussRat| FunctionElement::constant(&model.ctx, x.clone());
    Ok(model.form("alpha1^alpha2")?.mul_fn(&k(b)).add(&model.form("alpha1^alpha3")?.mul_fn(&k(c))).add(&model.form("alpha2^alpha3")?))
}

pub fn heisenberg(b: &GaussRat, c: &GaussRat) -> Result<Example> {
    let pair = heisenberg_pair(b, c)?;
    let triple = triple_from_pair(&pair)?;
    let m = &*pair.model;
    let theta = heisenberg_theta(m, b, c)?;
    let mixed = Some(cosymplectic_mixed(&pair.model, &theta, &m.form("alpha1")?, &pair)?);
    Ok(Example { name: "heisenberg".into(), pair, triple, mixed })
}

/// `rho1 = e^{i theta}`, `rho2 = rho1 ^ eta`.
pub fn cosymplectic_mixed(model: &Arc<FrameModel>, theta: &Form, eta: &Form, pair: &ContactPair) -> Result<MixedPair> {
    let i = GaussRat::i();
    let rho1 = model.exp_form(&theta.scale(&i))?;
    let rho2 = rho1.wedge(eta);
    MixedPair::new(model.clone(), rho1, rho2, pair.e1.clone(), pair.e2.clone())
}

/// Cosymplectic example on a builtin model from form literals.
pub fn cosymplectic_example(model_name: &str, eta: &str, theta: &str) -> Result<Example> {
    let model = Arc::new(builtin_model(model_name)?);
    let eta_f = model.form(eta)?;
    let theta_f = model.form(theta)?;
    let triple = cosymplectic(model.clone(), &eta_f, &theta_f)?;
    let pair = pair_from_triple(&triple)?;
    let mixed = Some(cosymplectic_mixed(&model, &theta_f, &eta_f, &pair)?);
    Ok(Example { name: "cosymplectic".into(), pair, triple, mixed })
}

/// Almost contact example from section literals for `phi(X_j)`.
pub fn almost_contact_example(model_name: &str, phi: &[&str], xi: &str, eta: &str) -> Result<Example> {
    let model = Arc::new(builtin_model(model_name)?);
    let images = phi.iter().map(|s| model.section(s)).collect::<Result<Vec<_>>>()?;
    let triple = almost_contact(model.clone(), &images, &model.section(xi)?, &model.form(eta)?)?;
    let pair = pair_from_triple(&triple)?;
    Ok(Example { name: "almost-contact".into(), pair, triple, mixed: None })
}

/// Contact structure on the Heisenberg model: `xi = X3`, `eta = alpha3`,
/// `phi(X1) = X2`, `phi(X2) = -X1`.
pub fn flat_contact() -> Result<Example> {
    almost_contact_example("heisenberg", &["X2", "-X1", "0"], "X3", "alpha3")
}

/// Graph deformation `L_eps = span(l_j + sum_k eps[k][j] conj(l_k))`.
pub fn deformation(base: &ContactPair, eps: &[Vec<FunctionElement>]) -> Result<Example> {
    let r = base.l.len();
    if eps.len() != r || eps.iter().any(|row| row.len() != r) {
        return Err(Error::Precondition(format!("deformation matrix must be {}x{}", r, r)));
    }
    let mut l = Vec::with_capacity(r);
    for j in 0..r {
        let mut x = base.l[j].clone();
        for k in 0..r {
            x = x.add(&base.l[k].conj().mul_fn(&eps[k][j]));
        }
        l.push(x);
    }
    let pair = ContactPair::new(base.model.clone(), base.e1.clone(), base.e2.clone(), l)?;
    let triple = triple_from_pair(&pair)?;
    Ok(Example { name: "deformation".into(), pair, triple, mixed: None })
}

/// Flat two-dimensional factor of a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneStructure {
    Complex,
    Symplectic,
}

/// Product of a pair with a constant generalized complex structure on a
/// flat plane with frame `P, Q` and coframe `p, q`.
pub fn product_with_plane(base: &ContactPair, kind: PlaneStructure) -> Result<Example> {
    let model = Arc::new(base.model.extend_flat(&[("P", "p"), ("Q", "q")], &format!("{}-x-plane", base.model.name)));
    let m = &*model;
    let n = m.dim();
    let mut l: Vec<GenSection> = base.l.iter().map(|x| x.widen(n)).collect();
    match kind {
        PlaneStructure::Complex => {
            l.push(m.section("P - i*Q")?);
            l.push(m.section("p - i*q")?);
        }
        PlaneStructure::Symplectic => {
            l.push(m.section("P - i*q")?);
            l.push(m.section("Q + i*p")?);
        }
    }
    let pair = ContactPair::new(model.clone(), base.e1.widen(n), base.e2.widen(n), l)?;
    let triple = triple_from_pair(&pair)?;
    Ok(Example { name: "product".into(), pair, triple, mixed: None })
}

/// Triple almost contact data on the 7-dimensional model: `phi_a` as the
/// images of the frame fields.
pub fn triple_phis(model: &FrameModel) -> Result<[Vec<GenSection>; 3]> {
    let sec = |s: &str| model.section(s);
    let table: [[&str; 7]; 3] = [
        ["0", "xi3", "-xi2", "Y5", "-Y4", "Y7", "-Y6"],
        ["-xi3", "0", "xi1", "Y6", "-Y7", "-Y4", "Y5"],
        ["xi2", "-xi1", "0", "Y7", "Y6", "-Y5", "-Y4"],
    ];
    let mut out: [Vec<GenSection>; 3] = Default::default();
    for (a, row) in table.iter().enumerate() {
        out[a] = row.iter().map(|s| sec(s)).collect::<Result<_>>()?;
    }
    Ok(out)
}

/// `-phi^*(alpha^a)` for a vector-valued map given by images.
fn minus_dual(model: &FrameModel, images: &[GenSection], a: usize) -> GenSection {
    let w: Vec<FunctionElement> = (0..model.dim()).map(|j| -&images[j].v[a]).collect();
    coform_section(w, model)
}

/// `Phi_0` on the triple contact model together with `e1`, `e2`.
pub fn phi0(model: Arc<FrameModel>) -> Result<ContactTriple> {
    let m = &*model;
    let s = FunctionElement::gen(&m.ctx, "s")?;
    let phis = triple_phis(m)?;
    let phi3 = &phis[2];
    let sec = |x: &str| m.section(x);
    let (xi1, xi2, xi3) = (sec("xi1")?, sec("xi2")?, sec("xi3")?);
    let (eta1, eta2, eta3) = (sec("eta1")?, sec("eta2")?, sec("eta3")?);
    let dim = m.dim();
    let mut cols = Vec::with_capacity(2 * dim);
    for j in 0..dim {
        // eta_k(X_j) = delta_{kj} for k = 0, 1, 2
        let e = |k: usize| if k == j { m.one() } else { m.zero() };
        let mut x = phi3[j].clone();
        x = x.sub(&xi2.mul_fn(&e(0))).add(&xi1.mul_fn(&e(1)));
        let corr = xi3.mul_fn(&e(0)).sub(&xi1.mul_fn(&e(2))).sub(&eta3.mul_fn(&e(1))).add(&eta2.mul_fn(&e(2)));
        cols.push(x.add(&corr.mul_fn(&s)));
    }
    for a in 0..dim {
        // alpha^a(xi_k) = delta_{ak}
        let e = |k: usize| if k == a { m.one() } else { m.zero() };
        let mut x = minus_dual(m, phi3, a);
        x = x.sub(&eta2.mul_fn(&e(0))).add(&eta1.mul_fn(&e(1)));
        let corr = eta3.mul_fn(&e(0)).sub(&eta1.mul_fn(&e(2))).sub(&xi3.mul_fn(&e(1))).add(&xi2.mul_fn(&e(2)));
        cols.push(x.add(&corr.mul_fn(&s)));
    }
    let e1 = xi1.add(&eta2).mul_fn(&s);
    let e2 = xi2.add(&eta1).mul_fn(&s);
    ContactTriple::new(model.clone(), Endo { cols }, e1, e2)
}

/// The involutions `sigma` (`-1` on `S = span(xi_a, eta_a)`) and `tau`
/// (`xi1 <-> xi2`, `eta1 <-> eta2`, `xi3 <-> -eta3`), identity on `S^perp`.
pub fn sigma_tau(model: &FrameModel) -> Result<(Endo, Endo)> {
    let sigma = Endo::from_fn(model, |g| {
        let mut out = g.clone();
        for k in 0..3 {
            out.v[k] = -&out.v[k];
            out.w[k] = -&out.w[k];
        }
        Ok(out)
    })?;
    let mut tau = Endo::identity(model);
    let m = model.dim();
    let sec = |x: &str| model.section(x);
    tau.cols[0] = sec("xi2")?;
    tau.cols[1] = sec("xi1")?;
    tau.cols[2] = sec("-eta3")?;
    tau.cols[m] = sec("eta2")?;
    tau.cols[m + 1] = sec("eta1")?;
    tau.cols[m + 2] = sec("-xi3")?;
    Ok((sigma, tau))
}

/// Residuals of conditions (i)-(iv) characterising the four-element family
/// around `Phi_0`; an empty list means membership.
pub fn family_membership(model: &Arc<FrameModel>, phi: &Endo) -> Result<Vec<String>> {
    let m = &**model;
    let mut out = Vec::new();
    let t = phi0(model.clone())?;
    if let Err(e) = ContactTriple::new(model.clone(), phi.clone(), t.e1.clone(), t.e2.clone()) {
        out.push(format!("(i) {}", e));
    }
    let dim = m.dim();
    let in_s = |x: &GenSection| (3..dim).all(|k| x.v[k].is_zero() && x.w[k].is_zero());
    for k in 0..3 {
        for idx in [k, dim + k] {
            if !in_s(&phi.cols[idx]) {
                out.push(format!("(ii) image of generator {} leaves S", idx));
            }
        }
    }
    let phis = triple_phis(m)?;
    for j in 3..dim {
        if phi.cols[j] != phis[2][j] {
            out.push(format!("(iii) Phi({}) differs from phi_3", m.frame[j]));
        }
        if phi.cols[dim + j] != minus_dual(m, &phis[2], j) {
            out.push(format!("(iii) Phi({}) differs from -phi_3^*", m.coframe[j]));
        }
    }
    for a in 0..3 {
        for b in 0..3 {
            let eta_b = GenSection::coform(m, b);
            let eta_a = GenSection::coform(m, a);
            let r = &m.inner(&phi.cols[a], &eta_b)? + &m.inner(&phi.cols[b], &eta_a)?;
            if !r.is_zero() {
                out.push(format!("(iv) <Phi xi{}, eta{}> + <Phi xi{}, eta{}> = {}", a + 1, b + 1, b + 1, a + 1, r));
            }
        }
    }
    Ok(out)
}

/// The triple contact example with `Phi_0`.
pub fn triple_contact() -> Result<Example> {
    let model = Arc::new(builtin_model("triple-contact-7d")?);
    let triple = phi0(model)?;
    let pair = pair_from_triple(&triple)?;
    Ok(Example { name: "triple-contact".into(), pair, triple, mixed: None })
}

/// Named builtin examples with `key=value` parameters.
pub fn builtin_example(name: &str, params: &[(String, String)]) -> Result<Example> {
    let get = |k: &str| params.iter().find(|(n, _)| n == k).map(|(_, v)| v.as_str());
    let rat = |k: &str, d: i64| -> Result<GaussRat> {
        match get(k) {
            None => Ok(GaussRat::from_int(d)),
            Some(v) => crate::algebra::expr::eval_const(&parse_expr(v)?),
        }
    };
    match name {
        "s3-family" => {
            let consts: Vec<&str> = get("constants").map(|c| c.split_whitespace().collect()).unwrap_or_default();
            let model = builtin_model_with_constants(get("model").unwrap_or("s3"), &consts)?;
            s3_family_on(Arc::new(model), get("f"), get("g"), get("h"))
        }
        "heisenberg" => heisenberg(&rat("b", 0)?, &rat("c", 0)?),
        "cosymplectic" => cosymplectic_example(
            get("model").unwrap_or("heisenberg"),
            get("eta").unwrap_or("alpha1"),
            get("theta").unwrap_or("alpha2^alpha3"),
        ),
        "almost-contact" => match get("model") {
            None | Some("torus3") => almost_contact_example("torus3", &["E2", "-E1", "0"], "E3", "e3"),
            Some("heisenberg") => flat_contact(),
            Some(other) => Err(Error::Precondition(format!("no almost contact preset on `{}`", other))),
        },
        "contact" => flat_contact(),
        "triple-contact" => triple_contact(),
        "product" => {
            let base = flat_contact()?;
            let kind = match get("plane").unwrap_or("complex") {
                "complex" => PlaneStructure::Complex,
                "symplectic" => PlaneStructure::Symplectic,
                other => return Err(Error::Precondition(format!("unknown plane structure `{}`", other))),
            };
            product_with_plane(&base.pair, kind)
        }
        "deformation" => {
            let base = flat_contact()?;
            let m = &*base.pair.model;
            let r = base.pair.l.len();
            let mut eps = vec![vec![m.zero(); r]; r];
            if let Some(v) = get("eps") {
                let vals: Vec<&str> = v.split(';').collect();
                if vals.len() != r * r {
                    return Err(Error::Precondition(format!("eps needs {} entries separated by `;`", r * r)));
                }
                for (k, s) in vals.iter().enumerate() {
                    eps[k / r][k % r] = m.scalar(s.trim())?;
                }
            }
            deformation(&base.pair, &eps)
        }
        other => Err(Error::UnknownSymbol(format!("example {}", other))),
    }
}

pub const EXAMPLES: &[(&str, &str)] = &[
    ("s3-family", "S^3 with e1 = -V1, e2 = -nu1 - f V2 - g V3 (params: model, f, g or h, constants)"),
    ("heisenberg", "Heisenberg pair (E_{b,c}, L_{b,c}) (params: b, c)"),
    ("cosymplectic", "almost cosymplectic (theta, eta) (params: model, eta, theta)"),
    ("almost-contact", "almost contact (phi, xi, eta) (params: model = torus3 | heisenberg)"),
    ("contact", "contact structure alpha3 on the Heisenberg model"),
    ("triple-contact", "Phi_0 from a triple almost contact structure in dimension 7"),
    ("product", "contact structure times a flat plane (params: plane = complex | symplectic)"),
    ("deformation", "graph deformation of the Heisenberg contact pair (params: eps = a;b;c;d)"),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_example_builds() {
        for (name, _) in EXAMPLES {
            let ex = builtin_example(name, &[]).unwrap();
            ex.pair.validate().unwrap();
            ex.triple.validate().unwrap();
            if let Some(mx) = &ex.mixed {
                mx.validate().unwrap();
            }
        }
        assert!(builtin_example("nope", &[]).is_err());
        let p = |k: &str, v: &str| (k.to_string(), v.to_string());
        builtin_example("s3-family", &[p("h", "z^2 + w")]).unwrap();
        builtin_example("heisenberg", &[p("b", "1/2"), p("c", "-3")]).unwrap();
        builtin_example("product", &[p("plane", "symplectic")]).unwrap();
        assert!(builtin_example("product", &[p("plane", "round")]).is_err());
    }

    #[test]
    fn phi0_and_its_family() {
        let ex = triple_contact().unwrap();
        let m = ex.model();
        assert!(family_membership(m, &ex.triple.phi).unwrap().is_empty());
        let (sigma, tau) = sigma_tau(m).unwrap();
        let members = [
            ex.triple.phi.clone(),
            sigma.compose(&ex.triple.phi),
            tau.compose(&ex.triple.phi),
            sigma.compose(&tau).compose(&ex.triple.phi),
        ];
        for (k, phi) in members.iter().enumerate() {
            assert!(family_membership(m, phi).unwrap().is_empty(), "member {}", k);
            for other in &members[..k] {
                assert_ne!(phi, other);
            }
        }
        assert_eq!(sigma.compose(&sigma), Endo::identity(m));
        assert_eq!(tau.compose(&tau), Endo::identity(m));
        // a perturbation outside S breaks (iii)
        let mut bad = ex.triple.phi.clone();
        bad.cols[3] = bad.cols[3].neg();
        assert!(!family_membership(m, &bad).unwrap().is_empty());
    }

    #[test]
    fn phi0_sign_of_the_cotangent_formula() {
        // flipping the alpha(xi2) eta1 term leaves the set of triples
        let ex = triple_contact().unwrap();
        let m = &**ex.model();
        let mut phi = ex.triple.phi.clone();
        let eta1 = m.section("eta1").unwrap();
        let dim = m.dim();
        phi.cols[dim + 1] = phi.cols[dim + 1].sub(&eta1.scale(&GaussRat::from_int(2)));
        assert!(ContactTriple::new(ex.model().clone(), phi, ex.triple.e1.clone(), ex.triple.e2.clone()).is_err());
    }

    #[test]
    fn triple_phis_are_quaternionic() {
        let m = builtin_model("triple-contact-7d").unwrap();
        let phis = triple_phis(&m).unwrap();
        let apply = |a: usize, x: &GenSection| {
            let mut out = GenSection::zero(&m);
            for (j, c) in x.v.iter().enumerate() {
                out = out.add(&phis[a][j].mul_fn(c));
            }
            out
        };
        // phi1 phi2 = phi3 on H
        for j in 3..7 {
            let x = GenSection::vector(&m, j);
            assert_eq!(apply(0, &apply(1, &x)), apply(2, &x));
            assert_eq!(apply(0, &apply(0, &x)), x.neg());
        }
    }

    #[test]
    fn deformation_and_product_types() {
        let base = flat_contact().unwrap();
        let m = &*base.pair.model;
        let zero = vec![vec![m.zero(); 2]; 2];
        let d0 = deformation(&base.pair, &zero).unwrap();
        assert_eq!(d0.pair.l, base.pair.l);
        assert_eq!(d0.triple.phi, base.triple.phi);
        assert!(base.pair.geometric_type().unwrap().iter().all(|t| (t.p_e, t.t_l) == (1, 2)));
        let c = product_with_plane(&base.pair, PlaneStructure::Complex).unwrap();
        assert!(c.pair.geometric_type().unwrap().iter().all(|t| (t.p_e, t.t_l) == (1, 3)));
        let s = product_with_plane(&base.pair, PlaneStructure::Symplectic).unwrap();
        assert!(s.pair.geometric_type().unwrap().iter().all(|t| (t.p_e, t.t_l) == (1, 2)));
    }

    #[test]
    fn holomorphic_parts_of_monomials() {
        let m = builtin_model("s3").unwrap();
        let (f, g) = holomorphic_parts(&m, "z^2").unwrap();
        assert_eq!(f, m.scalar("x1^2 - x2^2").unwrap());
        assert_eq!(g, m.scalar("2*x1*x2").unwrap());
        let (f, g) = holomorphic_parts(&m, "i*w").unwrap();
        assert_eq!((f, g), (m.scalar("-x4").unwrap(), m.scalar("x3").unwrap()));
    }

    #[test]
    fn cosymplectic_reeb_field() {
        let ex = heisenberg(&GaussRat::from_int(2), &GaussRat::from_int(5)).unwrap();
        let m = &*ex.pair.model;
        let theta = heisenberg_theta(m, &GaussRat::from_int(2), &GaussRat::from_int(5)).unwrap();
        let t = cosymplectic(ex.pair.model.clone(), &m.form("alpha1").unwrap(), &theta).unwrap();
        assert_eq!(t.e1, m.section("X1 - 5*X2 + 2*X3").unwrap());
        assert_eq!(t.phi, ex.triple.phi);
        assert!(cosymplectic(ex.pair.model.clone(), &m.form("alpha1").unwrap(), &m.form("alpha1^alpha2").unwrap()).is_err());
    }
}
