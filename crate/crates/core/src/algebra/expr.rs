//! Expression syntax shared by scalar, section and form literals.
//!
//! `i` is the imaginary unit, `*` multiplies, `^` wedges (or raises to a
//! power when followed by an integer literal), `/` divides by a constant,
//! and `name(arg)` applies a derivation or names a formal derivative symbol.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::context::ScalarContext;
use super::poly::FunctionElement;
use super::scalar::GaussRat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    I,
    Sym(String, usize),
    Call(String, Box<Expr>, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Wedge(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    Pow,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl Lexer {
    fn new(s: &str, line: usize, col0: usize) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let mut toks = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            if c.is_whitespace() {
                k += 1;
            } else if c.is_ascii_digit() {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[start..k].iter().collect();
                toks.push((Tok::Num(digits.parse().unwrap()), start));
            } else if c.is_alphabetic() || c == '_' {
                let start = k;
                while k < chars.len() && is_ident_char(chars[k]) {
                    k += 1;
                }
                toks.push((Tok::Ident(chars[start..k].iter().collect()), start));
            } else if c == '*' && chars.get(k + 1) == Some(&'*') {
                toks.push((Tok::Pow, k));
                k += 2;
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Op(c), k));
                k += 1;
            } else {
                return Err(Error::Parse { line, col: col0 + k, msg: format!("unexpected character `{}`", c) });
            }
        }
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    col0: usize,
    len: usize,
}

impl Parser {
    fn err(&self, at: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col0 + at, msg: msg.into() }
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.len)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    let r = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(r));
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    let r = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(r));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let r = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(r));
                }
                Some(Tok::Op('^')) => {
                    self.pos += 1;
                    let r = self.unary()?;
                    lhs = Expr::Wedge(Box::new(lhs), Box::new(r));
                }
                Some(Tok::Op('/')) => {
                    let at = self.here();
                    self.pos += 1;
                    let r = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(r), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let is_pow =
            matches!((self.peek(), self.toks.get(self.pos + 1)), (Some(Tok::Pow), _) | (Some(Tok::Op('^')), Some((Tok::Num(_), _))));
        if !is_pow {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let e: u32 = n.try_into().map_err(|_| self.err(at, "exponent too large"))?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(self.err(at, "expected integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Op('(')) {
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_close()?;
                    return Ok(Expr::Call(name, Box::new(arg), at));
                }
                if name == "i" {
                    Ok(Expr::I)
                } else {
                    Ok(Expr::Sym(name, at))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_close()?;
                Ok(e)
            }
            Some(t) => Err(self.err(at, format!("unexpected token {:?}", t))),
            None => Err(self.err(at, "unexpected end of expression")),
        }
    }

    fn expect_close(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::Op(')')) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(self.here(), "expected `)`"))
        }
    }
}

/// Parse an expression; `line`/`col` locate its first character for errors.
pub fn parse_expr_at(s: &str, line: usize, col: usize) -> Result<Expr> {
    let lex = Lexer::new(s, line, col)?;
    let mut p = Parser { toks: lex.toks, pos: 0, line, col0: col, len: s.chars().count() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err(p.here(), "trailing input"));
    }
    Ok(e)
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    parse_expr_at(s, 1, 1)
}

/// Formal derivative symbol name, e.g. `V2(f)`.
pub fn call_name(f: &str, arg: &Expr) -> Option<String> {
    match arg {
        Expr::Sym(a, _) => Some(format!("{}({})", f, a)),
        _ => None,
    }
}

/// Evaluate as a scalar in `ctx`. `Call` resolves to a generator when one
/// with that name exists, otherwise applies the named derivation.
pub fn eval_scalar(e: &Expr, ctx: &Arc<ScalarContext>) -> Result<FunctionElement> {
    Ok(match e {
        Expr::Num(r) => FunctionElement::constant(ctx, GaussRat::real(r.clone())),
        Expr::I => FunctionElement::i(ctx),
        Expr::Sym(s, _) => FunctionElement::gen(ctx, s)?,
        Expr::Call(f, arg, _) => {
            if let Some(g) = call_name(f, arg).and_then(|n| ctx.gen_index(&n)) {
                FunctionElement::gen_at(ctx, g)
            } else {
                eval_scalar(arg, ctx)?.derive(f)?
            }
        }
        Expr::Neg(a) => -eval_scalar(a, ctx)?,
        Expr::Add(a, b) => eval_scalar(a, ctx)? + eval_scalar(b, ctx)?,
        Expr::Sub(a, b) => eval_scalar(a, ctx)? - eval_scalar(b, ctx)?,
        Expr::Mul(a, b) | Expr::Wedge(a, b) => eval_scalar(a, ctx)? * eval_scalar(b, ctx)?,
        Expr::Div(a, b, _) => {
            let d = eval_scalar(b, ctx)?;
            let c = d
                .as_constant()
                .and_then(|c| c.inv())
                .ok_or_else(|| Error::NotDivisible(format!("division by non-constant or zero `{}`", d)))?;
            eval_scalar(a, ctx)?.scale(&c)
        }
        Expr::Pow(a, n) => eval_scalar(a, ctx)?.pow(*n),
    })
}

/// Evaluate a constant expression (numbers, `i`, arithmetic) to a scalar.
pub fn eval_const(e: &Expr) -> Result<GaussRat> {
    Ok(match e {
        Expr::Num(r) => GaussRat::real(r.clone()),
        Expr::I => GaussRat::i(),
        Expr::Sym(s, _) => return Err(Error::UnknownSymbol(s.clone())),
        Expr::Call(f, _, _) => return Err(Error::UnknownSymbol(f.clone())),
        Expr::Neg(a) => -eval_const(a)?,
        Expr::Add(a, b) => eval_const(a)? + eval_const(b)?,
        Expr::Sub(a, b) => eval_const(a)? - eval_const(b)?,
        Expr::Mul(a, b) | Expr::Wedge(a, b) => eval_const(a)? * eval_const(b)?,
        Expr::Div(a, b, _) => {
            let d = eval_const(b)?;
            let inv = d.inv().ok_or_else(|| Error::NotDivisible("division by zero".into()))?;
            eval_const(a)? * inv
        }
        Expr::Pow(a, n) => eval_const(a)?.pow(*n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_powers() {
        let e = parse_expr("1 - x1^2 - 2*x2**3").unwrap();
        match e {
            Expr::Sub(_, r) => assert_eq!(
                *r,
                Expr::Mul(
                    Box::new(Expr::Num(BigRational::from_integer(2.into()))),
                    Box::new(Expr::Pow(Box::new(Expr::Sym("x2".into(), 13)), 3))
                )
            ),
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_expr("nu1^nu2").unwrap(), Expr::Wedge(..)));
    }

    #[test]
    fn errors_carry_columns() {
        match parse_expr_at("x + $", 7, 10) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (7, 14)),
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_expr("(x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("x y"), Err(Error::Parse { .. })));
    }

    #[test]
    fn constants() {
        let v = eval_const(&parse_expr("(1 + 2*i)/2 - 1/2").unwrap()).unwrap();
        assert_eq!(v, GaussRat::i());
    }
}
