//! Exact symbolic engine for generalized almost contact structures on
//! frame-presented odd-dimensional manifolds.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod contact;
pub mod error;
pub mod forms;
pub mod frame;
pub mod scenario;
pub mod tduality;

pub use error::{Error, Result};
