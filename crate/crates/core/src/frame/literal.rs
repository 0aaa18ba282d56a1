//! Form and section literals such as `i*nu2 + nu3` or `-nu1 - f*V2`.

use crate::algebra::{eval_scalar, parse_expr, Expr, FunctionElement};
use crate::error::{Error, Result};
use crate::forms::form::Form;

use super::model::FrameModel;
use super::section::GenSection;

enum Val {
    Scalar(FunctionElement),
    Form(Form),
    Section(GenSection),
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Form,
    Section,
}

fn as_form(v: Val, model: &FrameModel) -> Result<Form> {
    match v {
        Val::Scalar(s) => Ok(Form::scalar(s, model.dim())),
        Val::Form(f) => Ok(f),
        Val::Section(_) => Err(Error::Other("section used where a form is expected".into())),
    }
}

fn as_section(v: Val, model: &FrameModel) -> Result<GenSection> {
    match v {
        Val::Scalar(s) if s.is_zero() => Ok(GenSection::zero(model)),
        Val::Scalar(s) => Err(Error::Other(format!("scalar `{}` is not a section", s))),
        Val::Section(x) => Ok(x),
        Val::Form(_) => Err(Error::Other("form used where a section is expected".into())),
    }
}

fn combine(a: Val, b: Val, neg: bool, model: &FrameModel, kind: Kind) -> Result<Val> {
    Ok(match (a, b, kind) {
        (Val::Scalar(x), Val::Scalar(y), _) => Val::Scalar(if neg { x - y } else { x + y }),
        (a, b, Kind::Form) => {
            let (x, y) = (as_form(a, model)?, as_form(b, model)?);
            Val::Form(if neg { x.sub(&y) } else { x.add(&y) })
        }
        (a, b, Kind::Section) => {
            let (x, y) = (as_section(a, model)?, as_section(b, model)?);
            Val::Section(if neg { x.sub(&y) } else { x.add(&y) })
        }
    })
}

fn product(a: Val, b: Val) -> Result<Val> {
    Ok(match (a, b) {
        (Val::Scalar(x), Val::Scalar(y)) => Val::Scalar(x * y),
        (Val::Scalar(s), Val::Form(f)) | (Val::Form(f), Val::Scalar(s)) => Val::Form(f.mul_fn(&s)),
        (Val::Scalar(s), Val::Section(x)) | (Val::Section(x), Val::Scalar(s)) => Val::Section(x.mul_fn(&s)),
        (Val::Form(f), Val::Form(g)) => Val::Form(f.wedge(&g)),
        _ => return Err(Error::Other("product of two sections is undefined".into())),
    })
}

fn eval(e: &Expr, model: &FrameModel, kind: Kind) -> Result<Val> {
    match e {
        Expr::Sym(name, _) => {
            if let Some(a) = model.coframe_index(name) {
                return Ok(match kind {
                    Kind::Form => Val::Form(model.one_form_basis(a)),
                    Kind::Section => Val::Section(GenSection::coform(model, a)),
                });
            }
            if let Some(a) = model.frame_index(name) {
                if kind == Kind::Section {
                    return Ok(Val::Section(GenSection::vector(model, a)));
                }
                return Err(Error::Other(format!("frame field `{}` used inside a form", name)));
            }
            Ok(Val::Scalar(eval_scalar(e, &model.ctx)?))
        }
        Expr::Num(_) | Expr::I | Expr::Call(..) | Expr::Pow(..) => Ok(Val::Scalar(eval_scalar(e, &model.ctx)?)),
        Expr::Neg(a) => Ok(match eval(a, model, kind)? {
            Val::Scalar(s) => Val::Scalar(-s),
            Val::Form(f) => Val::Form(f.neg()),
            Val::Section(x) => Val::Section(x.neg()),
        }),
        Expr::Add(a, b) => combine(eval(a, model, kind)?, eval(b, model, kind)?, false, model, kind),
        Expr::Sub(a, b) => combine(eval(a, model, kind)?, eval(b, model, kind)?, true, model, kind),
        Expr::Mul(a, b) | Expr::Wedge(a, b) => product(eval(a, model, kind)?, eval(b, model, kind)?),
        Expr::Div(a, b, _) => {
            let d = eval_scalar(b, &model.ctx)?;
            let inv = d
                .as_constant()
                .and_then(|c| c.inv())
                .ok_or_else(|| Error::NotDivisible(format!("division by non-constant or zero `{}`", d)))?;
            product(eval(a, model, kind)?, Val::Scalar(FunctionElement::constant(&model.ctx, inv)))
        }
    }
}

impl FrameModel {
    pub fn form_from_expr(&self, e: &Expr) -> Result<Form> {
        as_form(eval(e, self, Kind::Form)?, self)
    }

    pub fn section_from_expr(&self, e: &Expr) -> Result<GenSection> {
        as_section(eval(e, self, Kind::Section)?, self)
    }

    pub fn scalar(&self, s: &str) -> Result<FunctionElement> {
        eval_scalar(&parse_expr(s)?, &self.ctx)
    }

    pub fn form(&self, s: &str) -> Result<Form> {
        self.form_from_expr(&parse_expr(s)?)
    }

    pub fn section(&self, s: &str) -> Result<GenSection> {
        self.section_from_expr(&parse_expr(s)?)
    }
}
