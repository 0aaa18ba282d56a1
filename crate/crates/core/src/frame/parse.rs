//! Line-oriented model description format.
//!
//! ```text
//! name s3
//! coords x1 x2 x3 x4
//! formal f g
//! priority x4 x3 x2 x1
//! relation x4^2 = 1 - x1^2 - x2^2 - x3^2
//! frame V1 V2 V3
//! coframe nu1 nu2 nu3
//! derive V1 x1 = x2
//! bracket V1 V2 = 2*V3
//! d nu1 = -2*nu2^nu3
//! point x1=1, x2=0, x3=0, x4=0
//! form H = nu1^nu2^nu3
//! ```
//!
//! Blank lines and `#` comments are ignored. Frame fields double as the
//! derivation names of the scalar context; a field without `derive` lines
//! kills every coordinate.

use crate::algebra::expr::parse_expr_at;
use crate::algebra::{ContextBuilder, Expr};
use crate::error::{Error, Result};
use crate::forms::form::Form;

use super::model::FrameModel;

/// A logical line: 1-based line number, column of `text`, and the text.
#[derive(Clone, Debug)]
pub struct Line {
    pub line: usize,
    pub col: usize,
    pub text: String,
}

impl Line {
    pub fn err(&self, col_offset: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col + col_offset, msg: msg.into() }
    }

    /// Split off the leading keyword.
    pub fn keyword(&self) -> (&str, Line) {
        let t = self.text.as_str();
        let end = t.find(char::is_whitespace).unwrap_or(t.len());
        let rest = &t[end..];
        let skip = rest.len() - rest.trim_start().len();
        (&t[..end], Line { line: self.line, col: self.col + t[..end + skip].chars().count(), text: rest.trim().to_string() })
    }

    pub fn words(&self) -> Vec<String> {
        self.text.split_whitespace().map(str::to_string).collect()
    }

    /// Split at the first `=` into trimmed halves.
    pub fn split_eq(&self) -> Result<(Line, Line)> {
        let k = self.text.find('=').ok_or_else(|| self.err(0, "expected `=`"))?;
        let (l, r) = (&self.text[..k], &self.text[k + 1..]);
        let skip = r.len() - r.trim_start().len();
        Ok((
            Line { line: self.line, col: self.col, text: l.trim().to_string() },
            Line { line: self.line, col: self.col + self.text[..k + 1 + skip].chars().count(), text: r.trim().to_string() },
        ))
    }

    pub fn expr(&self) -> Result<Expr> {
        if self.text.is_empty() {
            return Err(self.err(0, "missing expression"));
        }
        parse_expr_at(&self.text, self.line, self.col)
    }
}

/// Strip comments and blank lines, keeping positions.
pub fn logical_lines(src: &str, first_line: usize) -> Vec<Line> {
    let mut out = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = body.len() - body.trim_start().len();
        out.push(Line { line: first_line + k, col: 1 + body[..lead].chars().count(), text: trimmed.to_string() });
    }
    out
}

pub fn parse_model(src: &str) -> Result<FrameModel> {
    parse_model_lines(&logical_lines(src, 1))
}

pub fn parse_model_lines(lines: &[Line]) -> Result<FrameModel> {
    let mut name = None;
    let mut cb = ContextBuilder::new("");
    let mut frame: Vec<String> = Vec::new();
    let mut coframe: Vec<String> = Vec::new();
    let mut derive = Vec::new();
    let mut brackets = Vec::new();
    let mut dlines = Vec::new();
    let mut points = Vec::new();
    let mut forms = Vec::new();
    for l in lines {
        let (kw, rest) = l.keyword();
        match kw {
            "name" | "model" => name = Some(rest.text.clone()),
            "coords" => cb.coords.extend(rest.words()),
            "formal" => cb.formals.extend(rest.words()),
            "constants" => cb.constants.extend(rest.words()),
            "priority" => cb.priority = Some(rest.words()),
            "relation" => {
                let (lhs, rhs) = rest.split_eq()?;
                let (g, deg) = match lhs.expr()? {
                    Expr::Sym(g, _) => (g, 1),
                    Expr::Pow(b, n) => match *b {
                        Expr::Sym(g, _) => (g, n as u16),
                        _ => return Err(lhs.err(0, "relation must start with `symbol^power`")),
                    },
                    _ => return Err(lhs.err(0, "relation must start with `symbol^power`")),
                };
                cb.relations.push((g, deg, rhs.expr()?));
            }
            "frame" => frame = rest.words(),
            "coframe" => coframe = rest.words(),
            "derive" => {
                let (lhs, rhs) = rest.split_eq()?;
                let w = lhs.words();
                if w.len() != 2 {
                    return Err(lhs.err(0, "expected `derive <field> <symbol> = <image>`"));
                }
                derive.push((w[0].clone(), w[1].clone(), rhs.expr()?, lhs.clone()));
            }
            "bracket" => {
                let (lhs, rhs) = rest.split_eq()?;
                let w = lhs.words();
                if w.len() != 2 {
                    return Err(lhs.err(0, "expected `bracket <X> <Y> = <section>`"));
                }
                brackets.push((w[0].clone(), w[1].clone(), rhs.expr()?, lhs.clone()));
            }
            "d" => {
                let (lhs, rhs) = rest.split_eq()?;
                dlines.push((lhs.text.clone(), rhs.expr()?, lhs.clone()));
            }
            "point" => {
                let mut items = Vec::new();
                let mut col = 0;
                for part in rest.text.split(',') {
                    let piece = Line { line: rest.line, col: rest.col + col, text: part.trim().to_string() };
                    col += part.chars().count() + 1;
                    if piece.text.is_empty() {
                        continue;
                    }
                    let (k, v) = piece.split_eq()?;
                    items.push((k.text.clone(), v.expr()?));
                }
                points.push((items, rest.clone()));
            }
            "form" => {
                let (lhs, rhs) = rest.split_eq()?;
                forms.push((lhs.text.clone(), rhs.expr()?));
            }
            "end" => break,
            other => return Err(l.err(0, format!("unknown model keyword `{}`", other))),
        }
    }
    let name = name.ok_or_else(|| Error::Parse { line: lines.first().map_or(1, |l| l.line), col: 1, msg: "model has no name".into() })?;
    if frame.len() != coframe.len() {
        return Err(Error::invalid_model(&name, "frame and coframe have different lengths"));
    }
    cb.name = name.clone();
    cb.derivations = frame.clone();
    for (d, g, e, at) in &derive {
        if !frame.contains(d) {
            return Err(at.err(0, format!("`{}` is not a frame field", d)));
        }
        cb.entries.push((d.clone(), g.clone(), e.clone()));
    }
    let ctx = cb.build().map_err(|e| Error::invalid_model(&name, e.to_string()))?;
    let m = frame.len();
    let mut model = FrameModel {
        name: name.clone(),
        ctx: ctx.clone(),
        frame: frame.clone(),
        coframe: coframe.clone(),
        deriv: (0..m).map(Some).collect(),
        c: vec![vec![vec![crate::algebra::FunctionElement::zero(&ctx); m]; m]; m],
        dco: vec![Form::zero(&ctx, m); m],
        cone_index: None,
        points: Vec::new(),
        named_forms: Vec::new(),
    };
    let mut c = model.c.clone();
    for (x, y, e, at) in &brackets {
        let a = model.frame_index(x).ok_or_else(|| at.err(0, format!("unknown frame field `{}`", x)))?;
        let b = model.frame_index(y).ok_or_else(|| at.err(0, format!("unknown frame field `{}`", y)))?;
        let s = model.section_from_expr(e).map_err(|err| at.err(0, err.to_string()))?;
        if !s.is_vector() {
            return Err(at.err(0, "bracket of frame fields must be a vector field"));
        }
        for k in 0..m {
            c[a][b][k] = s.v[k].clone();
            c[b][a][k] = -&s.v[k];
        }
    }
    let mut dco = model.dco.clone();
    for (n, e, at) in &dlines {
        let k = model.coframe_index(n).ok_or_else(|| at.err(0, format!("unknown coframe form `{}`", n)))?;
        dco[k] = model.form_from_expr(e).map_err(|err| at.err(0, err.to_string()))?;
    }
    model.c = c;
    model.dco = dco;
    for (items, at) in &points {
        let p = ctx.point_from_assignments(items).map_err(|err| at.err(0, err.to_string()))?;
        model.points.push(p);
    }
    for (n, e) in &forms {
        let f = model.form_from_expr(e).map_err(|err| Error::invalid_model(&name, err.to_string()))?;
        model.named_forms.push((n.clone(), f));
    }
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::builtin::{builtin_model, MODELS};

    #[test]
    fn builtins_load() {
        for (n, _, _) in MODELS {
            let m = builtin_model(n).unwrap();
            assert_eq!(&m.name, n);
            assert!(m.points.len() >= 3);
            let c = builtin_model(&format!("{}-cone", n)).unwrap();
            assert_eq!(c.dim(), m.dim() + 1);
            c.validate().unwrap();
        }
    }

    #[test]
    fn jacobi_violation_rejected() {
        let src = "name bad\nframe A B C\ncoframe a b c\nbracket A B = A\nbracket A C = B\npoint\npoint\npoint\n";
        let err = parse_model(src).unwrap_err();
        assert!(err.to_string().contains("Jacobi"), "{}", err);
    }

    #[test]
    fn cartan_mismatch_rejected() {
        let src = "name bad\nframe A B\ncoframe a b\nbracket A B = B\npoint\npoint\npoint\n";
        let err = parse_model(src).unwrap_err();
        assert!(err.to_string().contains("disagrees"), "{}", err);
    }

    #[test]
    fn bad_point_rejected() {
        let src = "name c\ncoords x y\nrelation y^2 = 1 - x^2\nframe A\ncoframe a\npoint x=1, y=0\npoint x=0, y=1\npoint x=1, y=1\n";
        assert!(parse_model(src).is_err());
    }

    #[test]
    fn parse_error_location() {
        let src = "name m\nframe A\ncoframe a\nbracket A A = 2*+\n";
        match parse_model(src).unwrap_err() {
            Error::Parse { line, col, .. } => {
                assert_eq!(line, 4);
                assert!(col >= 15, "col {}", col);
            }
            e => panic!("{}", e),
        }
        match parse_model("name m\nframes A\n").unwrap_err() {
            Error::Parse { line, col, .. } => assert_eq!((line, col), (2, 1)),
            e => panic!("{}", e),
        }
    }

    #[test]
    fn unclosed_named_form_rejected() {
        let src = "name h\nframe X1 X2 X3\ncoframe a1 a2 a3\nbracket X1 X2 = -X3\nd a3 = a1^a2\npoint\npoint\npoint\nform bad = a3\n";
        assert!(parse_model(src).unwrap_err().to_string().contains("not closed"));
    }
}
