//! Exact scalar arithmetic.

pub mod builder;
pub mod context;
pub mod expr;
pub mod linalg;
pub mod poly;
pub mod scalar;

pub use builder::ContextBuilder;
pub use context::{GenKind, ScalarContext};
pub use expr::{eval_scalar, parse_expr, Expr};
pub use linalg::{kernel, rank, solve_linear, Frac, Solution};
pub use poly::{FunctionElement, Point};
pub use scalar::GaussRat;
