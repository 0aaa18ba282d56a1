//! Fraction-free elimination over the fraction field of a scalar context.

use std::fmt;

use super::poly::FunctionElement;
use super::scalar::GaussRat;
use crate::error::{Error, Result};

/// Element of the fraction field, `num / den` with `den != 0`.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: FunctionElement,
    pub den: FunctionElement,
}

impl Frac {
    pub fn new(num: FunctionElement, den: FunctionElement) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = Frac { num, den };
        f.simplify();
        f
    }

    pub fn from_elem(x: FunctionElement) -> Self {
        let den = FunctionElement::one(x.ctx());
        Frac { num: x, den }
    }

    fn simplify(&mut self) {
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = FunctionElement::one(self.den.ctx());
            return;
        }
        if let Some(c) = self.den.content() {
            let inv = GaussRat::real(c).inv().unwrap();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator divides out.
    pub fn as_elem(&self) -> Option<FunctionElement> {
        self.num.div_exact(&self.den)
    }
}

impl PartialEq for Frac {
    fn eq(&self, o: &Self) -> bool {
        (&self.num * &o.den) == (&o.num * &self.den)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug)]
pub enum Solution {
    Solved(Vec<Frac>),
    /// Row `row` of the reduced system reads `0 = residual` with nonzero residual.
    NoSolution {
        row: usize,
        residual: FunctionElement,
    },
}

impl Solution {
    pub fn is_solved(&self) -> bool {
        matches!(self, Solution::Solved(_))
    }
}

type Row = Vec<FunctionElement>;

fn normalize_row(row: &mut Row) {
    let mut content: Option<num_rational::BigRational> = None;
    for x in row.iter() {
        if let Some(c) = x.content() {
            content = Some(match content {
                None => c,
                Some(prev) => rat_gcd(&prev, &c),
            });
        }
    }
    if let Some(c) = content {
        let inv = GaussRat::real(c).inv().unwrap();
        for x in row.iter_mut() {
            *x = x.scale(&inv);
        }
    }
}

fn rat_gcd(a: &num_rational::BigRational, b: &num_rational::BigRational) -> num_rational::BigRational {
    use num_integer::Integer;
    num_rational::BigRational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

fn pivot_cost(x: &FunctionElement) -> usize {
    if x.as_constant().is_some() {
        0
    } else {
        x.terms().len() * 4 + x.terms().keys().map(|m| m.iter().map(|&e| e as usize).sum::<usize>()).max().unwrap_or(0)
    }
}

/// Gauss-Jordan without division. Returns the pivot columns (one per
/// pivot row, rows reordered so pivot rows come first).
fn eliminate(m: &mut [Row], ncols: usize) -> Vec<usize> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut cur = 0;
    for col in 0..ncols {
        if cur == nrows {
            break;
        }
        let best = (cur..nrows).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| pivot_cost(&m[r][col]));
        let Some(r) = best else { continue };
        m.swap(cur, r);
        let p = m[cur][col].clone();
        for i in 0..nrows {
            if i == cur || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            let pivot_row = m[cur].clone();
            let row = &mut m[i];
            for (j, x) in row.iter_mut().enumerate() {
                *x = &(&p * x) - &(&f * &pivot_row[j]);
            }
            if let Some(g) = common_poly_factor(row) {
                for x in row.iter_mut() {
                    *x = x.div_exact(&g).unwrap();
                }
            }
            normalize_row(row);
        }
        pivots.push(col);
        cur += 1;
    }
    pivots
}

/// Try dividing a row by one of its own nonconstant entries (cheap gcd
/// substitute that catches the common case of a repeated pivot factor).
fn common_poly_factor(row: &Row) -> Option<FunctionElement> {
    let nz: Vec<&FunctionElement> = row.iter().filter(|x| !x.is_zero()).collect();
    if nz.is_empty() {
        return None;
    }
    let cand = nz.iter().min_by_key(|x| pivot_cost(x))?;
    if cand.as_constant().is_some() {
        return None;
    }
    for x in &nz {
        x.div_exact(cand)?;
    }
    Some((*cand).clone())
}

fn check_ctx(a: &[Row], b: Option<&[FunctionElement]>) -> Result<()> {
    let first = a.iter().flatten().next().or_else(|| b.and_then(|b| b.first()));
    let Some(first) = first else { return Ok(()) };
    let all = a.iter().flatten().chain(b.into_iter().flatten());
    for x in all {
        if !super::context::ScalarContext::compatible(x.ctx(), first.ctx()) {
            return Err(Error::ContextMismatch);
        }
    }
    Ok(())
}

/// Solve `A x = b` over the fraction field. One particular solution is
/// returned (free variables set to zero).
pub fn solve_linear(a: &[Row], b: &[FunctionElement]) -> Result<Solution> {
    if a.len() != b.len() {
        return Err(Error::Precondition("row count of A and b differ".into()));
    }
    check_ctx(a, Some(b))?;
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    if a.iter().any(|r| r.len() != ncols) {
        return Err(Error::Precondition("ragged matrix".into()));
    }
    let mut m: Vec<Row> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
    let pivots = eliminate(&mut m, ncols);
    for (k, row) in m.iter().enumerate().skip(pivots.len()) {
        if !row[ncols].is_zero() {
            return Ok(Solution::NoSolution { row: k, residual: row[ncols].clone() });
        }
    }
    let ctx = match a.iter().flatten().next().or(b.first()) {
        Some(x) => x.ctx().clone(),
        None => return Ok(Solution::Solved(vec![])),
    };
    let mut x: Vec<Frac> = (0..ncols).map(|_| Frac::from_elem(FunctionElement::zero(&ctx))).collect();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = Frac::new(m[r][ncols].clone(), m[r][c].clone());
    }
    Ok(Solution::Solved(x))
}

pub fn rank(a: &[Row]) -> usize {
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m = a.to_vec();
    eliminate(&mut m, ncols).len()
}

/// Basis of the right kernel `{x : A x = 0}` with polynomial entries.
pub fn kernel(a: &[Row], ncols: usize) -> Vec<Vec<FunctionElement>> {
    let Some(ctx) = a.iter().flatten().next().map(|x| x.ctx().clone()) else {
        return Vec::new();
    };
    let mut m = a.to_vec();
    let pivots = eliminate(&mut m, ncols);
    let mut basis = Vec::new();
    for j in 0..ncols {
        if pivots.contains(&j) {
            continue;
        }
        // x_j = prod of pivots; x_{p_r} = -m[r][j] * prod_{s != r} pivot_s
        let piv: Vec<FunctionElement> = pivots.iter().enumerate().map(|(r, &c)| m[r][c].clone()).collect();
        let prod_except = |skip: Option<usize>| {
            let mut acc = FunctionElement::one(&ctx);
            for (s, p) in piv.iter().enumerate() {
                if Some(s) != skip {
                    acc = &acc * p;
                }
            }
            acc
        };
        let mut v = vec![FunctionElement::zero(&ctx); ncols];
        v[j] = prod_except(None);
        for (r, &c) in pivots.iter().enumerate() {
            if !m[r][j].is_zero() {
                v[c] = -(&m[r][j] * &prod_except(Some(r)));
            }
        }
        normalize_row(&mut v);
        basis.push(v);
    }
    basis
}

/// Apply a matrix to a column vector.
pub fn mat_vec(a: &[Row], x: &[FunctionElement]) -> Vec<FunctionElement> {
    a.iter()
        .map(|row| {
            let mut acc = FunctionElement::zero(x[0].ctx());
            for (aij, xj) in row.iter().zip(x) {
                acc = &acc + &(aij * xj);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builder::ContextBuilder;
    use crate::algebra::expr::{eval_scalar, parse_expr};
    use std::sync::Arc;

    fn ctx() -> Arc<crate::algebra::context::ScalarContext> {
        ContextBuilder::new("t").coords(&["x1", "x2"]).formals(&["f", "g"]).derivations(&["D"]).build().unwrap()
    }

    fn ev(c: &Arc<crate::algebra::context::ScalarContext>, s: &str) -> FunctionElement {
        eval_scalar(&parse_expr(s).unwrap(), c).unwrap()
    }

    #[test]
    fn identity_system() {
        let c = ctx();
        let a = vec![vec![ev(&c, "1"), ev(&c, "0")], vec![ev(&c, "0"), ev(&c, "1")]];
        let b = vec![ev(&c, "f"), ev(&c, "g")];
        match solve_linear(&a, &b).unwrap() {
            Solution::Solved(x) => {
                assert_eq!(x[0].as_elem().unwrap(), ev(&c, "f"));
                assert_eq!(x[1].as_elem().unwrap(), ev(&c, "g"));
            }
            s => panic!("{:?}", s),
        }
    }

    #[test]
    fn diagonal_scaling() {
        let c = ctx();
        let a = vec![vec![ev(&c, "x1"), ev(&c, "0")], vec![ev(&c, "0"), ev(&c, "x1")]];
        let b = vec![ev(&c, "x1^2"), ev(&c, "x1*f")];
        let Solution::Solved(x) = solve_linear(&a, &b).unwrap() else { panic!() };
        assert_eq!(x[0].as_elem().unwrap(), ev(&c, "x1"));
        assert_eq!(x[1].as_elem().unwrap(), ev(&c, "f"));
    }

    #[test]
    fn inconsistent_system_has_witness() {
        let c = ctx();
        let a = vec![vec![ev(&c, "x1"), ev(&c, "x2")], vec![ev(&c, "2*x1"), ev(&c, "2*x2")]];
        let b = vec![ev(&c, "1"), ev(&c, "f")];
        match solve_linear(&a, &b).unwrap() {
            Solution::NoSolution { residual, .. } => assert!(!residual.is_zero()),
            s => panic!("{:?}", s),
        }
    }

    #[test]
    fn kernel_and_rank() {
        let c = ctx();
        let a = vec![vec![ev(&c, "x1"), ev(&c, "x2"), ev(&c, "f")]];
        assert_eq!(rank(&a), 1);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v)[0].is_zero());
        }
    }
}
