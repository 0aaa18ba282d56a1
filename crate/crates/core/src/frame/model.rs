//! Frame-presented manifolds.

use std::sync::Arc;

use crate::algebra::{FunctionElement, Point, ScalarContext};
use crate::error::{Error, Result};
use crate::forms::form::{Form, Mask};

#[derive(Clone, Debug)]
pub struct FrameModel {
    pub name: String,
    pub ctx: Arc<ScalarContext>,
    pub frame: Vec<String>,
    pub coframe: Vec<String>,
    /// Derivation index of each frame field; `None` acts as zero.
    pub deriv: Vec<Option<usize>>,
    /// `c[a][b][e]`: `[X_a, X_b] = sum_e c[a][b][e] X_e`.
    pub c: Vec<Vec<Vec<FunctionElement>>>,
    /// `dco[e]` is the 2-form `d alpha^e`.
    pub dco: Vec<Form>,
    /// Index of the extra `T` / `dt` direction on a cone model.
    pub cone_index: Option<usize>,
    pub points: Vec<Point>,
    /// Named closed forms shipped with the model (twists, gauge 2-forms).
    pub named_forms: Vec<(String, Form)>,
}

impl FrameModel {
    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn is_cone(&self) -> bool {
        self.cone_index.is_some()
    }

    pub fn frame_index(&self, name: &str) -> Option<usize> {
        self.frame.iter().position(|n| n == name)
    }

    pub fn coframe_index(&self, name: &str) -> Option<usize> {
        self.coframe.iter().position(|n| n == name)
    }

    pub fn named_form(&self, name: &str) -> Option<&Form> {
        self.named_forms.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn zero(&self) -> FunctionElement {
        FunctionElement::zero(&self.ctx)
    }

    pub fn one(&self) -> FunctionElement {
        FunctionElement::one(&self.ctx)
    }

    pub fn zero_form(&self) -> Form {
        Form::zero(&self.ctx, self.dim())
    }

    pub fn one_form_basis(&self, a: usize) -> Form {
        Form::basis(&self.ctx, self.dim(), a)
    }

    /// `X_a(f)`.
    pub fn apply(&self, a: usize, f: &FunctionElement) -> Result<FunctionElement> {
        match self.deriv[a] {
            Some(d) => f.derive_idx(d),
            None => Ok(self.zero()),
        }
    }

    /// `V(f)` for `V = sum v^a X_a`.
    pub fn apply_vec(&self, v: &[FunctionElement], f: &FunctionElement) -> Result<FunctionElement> {
        let mut acc = self.zero();
        for (a, va) in v.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            let xf = self.apply(a, f)?;
            if !xf.is_zero() {
                acc = &acc + &(va * &xf);
            }
        }
        Ok(acc)
    }

    /// Lie bracket of vector fields in frame coordinates.
    pub fn vec_bracket(&self, u: &[FunctionElement], v: &[FunctionElement]) -> Result<Vec<FunctionElement>> {
        let m = self.dim();
        let mut out = vec![self.zero(); m];
        for e in 0..m {
            let a = self.apply_vec(u, &v[e])?;
            let b = self.apply_vec(v, &u[e])?;
            out[e] = &a - &b;
        }
        for a in 0..m {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..m {
                if v[b].is_zero() {
                    continue;
                }
                let uv = &u[a] * &v[b];
                for e in 0..m {
                    if !self.c[a][b][e].is_zero() {
                        out[e] = &out[e] + &(&uv * &self.c[a][b][e]);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn basis_vec(&self, a: usize) -> Vec<FunctionElement> {
        let mut v = vec![self.zero(); self.dim()];
        v[a] = self.one();
        v
    }

    /// `d` of a coframe monomial.
    fn d_monomial(&self, mask: Mask) -> Form {
        if mask == 0 {
            return self.zero_form();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let rest_form = Form::monomial(&self.ctx, self.dim(), rest, self.one());
        let first = self.dco[i].wedge(&rest_form);
        let second = self.one_form_basis(i).wedge(&self.d_monomial(rest));
        first.sub(&second)
    }

    /// Exterior derivative.
    pub fn d(&self, f: &Form) -> Result<Form> {
        let mut out = self.zero_form();
        for (m, c) in f.terms() {
            let mono = Form::monomial(&self.ctx, self.dim(), *m, self.one());
            for a in 0..self.dim() {
                if m & (1 << a) != 0 {
                    continue;
                }
                let xc = self.apply(a, c)?;
                if !xc.is_zero() {
                    out = out.add(&self.one_form_basis(a).wedge(&mono).mul_fn(&xc));
                }
            }
            let dm = self.d_monomial(*m);
            if !dm.is_zero() {
                out = out.add(&dm.mul_fn(c));
            }
        }
        Ok(out)
    }

    /// Twisted differential `d + H ^`.
    pub fn d_twisted(&self, f: &Form, h: Option<&Form>) -> Result<Form> {
        let d = self.d(f)?;
        Ok(match h {
            Some(h) => d.add(&h.wedge(f)),
            None => d,
        })
    }

    /// Differential of a function as coefficient list.
    pub fn d_fn(&self, f: &FunctionElement) -> Result<Vec<FunctionElement>> {
        (0..self.dim()).map(|a| self.apply(a, f)).collect()
    }

    /// Nonzero `d_H^2` on basis monomials, bare and multiplied by each
    /// coordinate; returns `(form, residual)` display pairs.
    pub fn d_squared_defects(&self, twist: Option<&Form>) -> Result<Vec<(String, String)>> {
        let mut coeffs = vec![self.one()];
        for g in 0..self.ctx.ngens() {
            if self.ctx.gens[g].kind == crate::algebra::GenKind::Coordinate {
                coeffs.push(FunctionElement::gen_at(&self.ctx, g));
            }
        }
        let mut out = Vec::new();
        for mask in 0u32..(1 << self.dim()) {
            for c in &coeffs {
                let f = Form::monomial(&self.ctx, self.dim(), mask, c.clone());
                let dd = self.d_twisted(&self.d_twisted(&f, twist)?, twist)?;
                if !dd.is_zero() {
                    out.push((self.form_string(&f), self.form_string(&dd)));
                }
            }
        }
        Ok(out)
    }

    /// Check all load-time invariants.
    pub fn validate(&self) -> Result<()> {
        let m = self.dim();
        let bad = |reason: String| Error::invalid_model(&self.name, reason);
        if self.coframe.len() != m || self.deriv.len() != m || self.c.len() != m || self.dco.len() != m {
            return Err(bad("frame and coframe tables have different sizes".into()));
        }
        if m > 16 {
            return Err(bad("dimension too large".into()));
        }
        for a in 0..m {
            for b in 0..m {
                for e in 0..m {
                    if self.c[a][b][e] != -&self.c[b][a][e] {
                        return Err(bad(format!(
                            "structure constants not antisymmetric at ({}, {}; {})",
                            self.frame[a], self.frame[b], self.frame[e]
                        )));
                    }
                }
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let (xa, xb, xc) = (self.basis_vec(a), self.basis_vec(b), self.basis_vec(c));
                    let t1 = self.vec_bracket(&self.vec_bracket(&xa, &xb)?, &xc)?;
                    let t2 = self.vec_bracket(&self.vec_bracket(&xb, &xc)?, &xa)?;
                    let t3 = self.vec_bracket(&self.vec_bracket(&xc, &xa)?, &xb)?;
                    if (0..m).any(|e| !(&(&t1[e] + &t2[e]) + &t3[e]).is_zero()) {
                        return Err(bad(format!("Jacobi identity fails for ({}, {}, {})", self.frame[a], self.frame[b], self.frame[c])));
                    }
                }
            }
        }
        // Cartan: d alpha^e (X_a, X_b) = -alpha^e([X_a, X_b]) for constant pairings
        for e in 0..m {
            for a in 0..m {
                for b in a + 1..m {
                    let coeff = self.dco[e].coeff((1 << a) | (1 << b));
                    if coeff != -&self.c[a][b][e] {
                        return Err(bad(format!(
                            "coframe differential d{} disagrees with [{}, {}]",
                            self.coframe[e], self.frame[a], self.frame[b]
                        )));
                    }
                }
            }
            if self.dco[e].degrees().iter().any(|&k| k != 2) {
                return Err(bad(format!("d{} is not a 2-form", self.coframe[e])));
            }
        }
        // frame derivations must realize the bracket on coordinates
        for g in 0..self.ctx.ngens() {
            if self.ctx.gens[g].kind != crate::algebra::GenKind::Coordinate {
                continue;
            }
            let x = FunctionElement::gen_at(&self.ctx, g);
            for a in 0..m {
                for b in a + 1..m {
                    let lhs = &self.apply(a, &self.apply(b, &x)?)? - &self.apply(b, &self.apply(a, &x)?)?;
                    let mut rhs = self.zero();
                    for e in 0..m {
                        rhs = &rhs + &(&self.c[a][b][e] * &self.apply(e, &x)?);
                    }
                    if lhs != rhs {
                        return Err(bad(format!(
                            "derivations of {} and {} do not commute to their bracket on `{}`",
                            self.frame[a], self.frame[b], self.ctx.gens[g].name
                        )));
                    }
                }
            }
        }
        if self.points.len() < 3 {
            return Err(bad("at least three sample points are required".into()));
        }
        for p in &self.points {
            self.ctx.check_point(p).map_err(|e| bad(e.to_string()))?;
        }
        for (n, f) in &self.named_forms {
            if !self.d(f)?.is_zero() {
                return Err(bad(format!("declared form `{}` is not closed", n)));
            }
        }
        Ok(())
    }

    /// `M x R` with the extra direction `T` (frame) / `dt` (coframe); the
    /// Dorfman bracket of this model restricted to t-independent sections is
    /// the cone bracket.
    pub fn cone(&self) -> FrameModel {
        let mut out = self.extend_flat(&[("T", "dt")], &format!("{}-cone", self.name));
        out.cone_index = Some(self.dim());
        out
    }

    /// Product with flat directions on which every scalar is constant.
    pub fn extend_flat(&self, dirs: &[(&str, &str)], name: &str) -> FrameModel {
        let m = self.dim();
        let n = m + dirs.len();
        let mut frame = self.frame.clone();
        let mut coframe = self.coframe.clone();
        let mut deriv = self.deriv.clone();
        for (v, f) in dirs {
            frame.push(v.to_string());
            coframe.push(f.to_string());
            deriv.push(None);
        }
        let mut c = vec![vec![vec![self.zero(); n]; n]; n];
        for a in 0..m {
            for b in 0..m {
                for e in 0..m {
                    c[a][b][e] = self.c[a][b][e].clone();
                }
            }
        }
        let mut dco: Vec<Form> = self.dco.iter().map(|f| f.widen(n)).collect();
        dco.resize(n, Form::zero(&self.ctx, n));
        FrameModel {
            name: name.to_string(),
            ctx: self.ctx.clone(),
            frame,
            coframe,
            deriv,
            c,
            dco,
            cone_index: self.cone_index,
            points: self.points.clone(),
            named_forms: self.named_forms.iter().map(|(k, f)| (k.clone(), f.widen(n))).collect(),
        }
    }

    pub fn form_string(&self, f: &Form) -> String {
        f.display_with(&self.coframe)
    }
}
