//! Bundle endomorphisms of the generalized tangent bundle, stored by the
//! images of the frame generators `X_1..X_m, alpha^1..alpha^m`.

use crate::algebra::{FunctionElement, GaussRat};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::frame::{FrameModel, GenSection};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endo {
    pub cols: Vec<GenSection>,
}

impl Endo {
    pub fn from_fn(model: &FrameModel, mut f: impl FnMut(&GenSection) -> Result<GenSection>) -> Result<Self> {
        Ok(Endo { cols: GenSection::generators(model).iter().map(&mut f).collect::<Result<_>>()? })
    }

    pub fn identity(model: &FrameModel) -> Self {
        Endo { cols: GenSection::generators(model) }
    }

    pub fn zero(model: &FrameModel) -> Self {
        Endo { cols: vec![GenSection::zero(model); 2 * model.dim()] }
    }

    pub fn size(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, x: &GenSection) -> GenSection {
        let c = x.coords();
        let mut out = self.cols[0].map(|z| FunctionElement::zero(z.ctx()));
        for (j, cj) in c.iter().enumerate() {
            if !cj.is_zero() {
                out = out.add(&self.cols[j].mul_fn(cj));
            }
        }
        out
    }

    /// `self o other`.
    pub fn compose(&self, other: &Endo) -> Endo {
        Endo { cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, o: &Endo) -> Endo {
        Endo { cols: self.cols.iter().zip(&o.cols).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Endo) -> Endo {
        Endo { cols: self.cols.iter().zip(&o.cols).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &GaussRat) -> Endo {
        Endo { cols: self.cols.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn neg(&self) -> Endo {
        Endo { cols: self.cols.iter().map(|a| a.neg()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    /// Matrix entries `M[i][j]` = coordinate `i` of the image of generator `j`.
    pub fn matrix(&self) -> Vec<Vec<FunctionElement>> {
        let n = self.cols.len();
        let cols: Vec<Vec<FunctionElement>> = self.cols.iter().map(|c| c.coords()).collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// First failing generator pair of `<Ax, y> + <x, Ay> = 0`, if any.
    pub fn skew_defect(&self, model: &FrameModel) -> Result<Option<(usize, usize, FunctionElement)>> {
        let gens = GenSection::generators(model);
        for i in 0..gens.len() {
            for j in i..gens.len() {
                let r = &model.inner(&self.cols[i], &gens[j])? + &model.inner(&gens[i], &self.cols[j])?;
                if !r.is_zero() {
                    return Ok(Some((i, j, r)));
                }
            }
        }
        Ok(None)
    }

    /// Gauge transformation `e^omega` as an endomorphism.
    pub fn gauge(model: &FrameModel, omega: &Form) -> Result<Endo> {
        Endo::from_fn(model, |g| model.b_transform(omega, g))
    }

    /// `e^omega o self o e^-omega`.
    pub fn gauge_conjugate(&self, model: &FrameModel, omega: &Form) -> Result<Endo> {
        let plus = Endo::gauge(model, omega)?;
        let minus = Endo::gauge(model, &omega.neg())?;
        Ok(plus.compose(self).compose(&minus))
    }

    pub fn conj(&self) -> Endo {
        Endo { cols: self.cols.iter().map(|c| c.conj()).collect() }
    }

    /// Blocks `(A, B, C, D)` with respect to `TM + T*M`; each block is
    /// `m x m`, `A` maps vectors to vectors, `B` forms to vectors, `C`
    /// vectors to forms, `D` forms to forms.
    pub fn blocks(&self) -> [Vec<Vec<FunctionElement>>; 4] {
        let m = self.cols.len() / 2;
        let mat = self.matrix();
        let block = |r0: usize, c0: usize| -> Vec<Vec<FunctionElement>> {
            (0..m).map(|i| (0..m).map(|j| mat[r0 + i][c0 + j].clone()).collect()).collect()
        };
        [block(0, 0), block(0, m), block(m, 0), block(m, m)]
    }

    pub fn display(&self, model: &FrameModel) -> String {
        let names: Vec<&String> = model.frame.iter().chain(model.coframe.iter()).collect();
        let mut out = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            if !c.is_zero() {
                out.push(format!("{} -> {}", names[j], c.display(model)));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out.join("; ")
        }
    }

    pub fn check_size(&self, model: &FrameModel) -> Result<()> {
        if self.cols.len() != 2 * model.dim() || self.cols.iter().any(|c| c.dim() != model.dim()) {
            return Err(Error::ModelMismatch(format!("endomorphism does not match model `{}`", model.name)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::builtin_model;

    #[test]
    fn gauge_is_a_group_action() {
        let m = builtin_model("heisenberg").unwrap();
        let w = m.form("x*alpha1^alpha2 + alpha2^alpha3").unwrap();
        let g = Endo::gauge(&m, &w).unwrap();
        let h = Endo::gauge(&m, &w.neg()).unwrap();
        assert_eq!(g.compose(&h), Endo::identity(&m));
        let x = m.section("X1 + y*X3 + alpha2").unwrap();
        assert_eq!(g.apply(&x), m.b_transform(&w, &x).unwrap());
        assert!(g.sub(&Endo::identity(&m)).skew_defect(&m).unwrap().is_none());
    }

    #[test]
    fn algebra_of_endomorphisms() {
        let m = builtin_model("torus3").unwrap();
        let id = Endo::identity(&m);
        assert_eq!(id.size(), 6);
        assert!(id.sub(&id).is_zero());
        assert_eq!(id.add(&id), id.scale(&GaussRat::from_int(2)));
        assert_eq!(id.neg().compose(&id.neg()), id);
        let [a, b, c, d] = id.blocks();
        assert!(b.iter().chain(c.iter()).flatten().all(|x| x.is_zero()));
        assert_eq!(a, d);
        assert!(id.skew_defect(&m).unwrap().is_some());
        assert!(Endo::zero(&m).skew_defect(&m).unwrap().is_none());
    }
}
