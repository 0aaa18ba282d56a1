//! Model files shipped with the crate.

use crate::error::{Error, Result};

use super::model::FrameModel;
use super::parse::parse_model;

pub const MODELS: &[(&str, &str, &str)] = &[
    ("s3", "3-sphere with the Sp(1) frame, formal structure functions f, g", include_str!("../../models/s3.model")),
    ("s3-hopf", "3-sphere with f, g invariant along the Hopf fibre", include_str!("../../models/s3-hopf.model")),
    ("hopf-dual", "local frame of S^1 x S^2 dual to the Hopf fibration", include_str!("../../models/hopf-dual.model")),
    ("heisenberg", "Heisenberg nilmanifold, [X1,X2] = -X3", include_str!("../../models/heisenberg.model")),
    ("heisenberg-dual", "S^1 x R^2 with flux alpha1^alpha2^alpha3'", include_str!("../../models/heisenberg-dual.model")),
    ("torus3", "flat 3-torus", include_str!("../../models/torus3.model")),
    ("triple-contact-7d", "R^3 + H with a triple almost contact structure", include_str!("../../models/triple-contact-7d.model")),
];

pub fn model_source(name: &str) -> Option<&'static str> {
    MODELS.iter().find(|(n, _, _)| *n == name).map(|(_, _, s)| *s)
}

/// Load a builtin model; a `-cone` suffix returns the cone over it.
pub fn builtin_model(name: &str) -> Result<FrameModel> {
    if let Some(base) = name.strip_suffix("-cone") {
        return Ok(builtin_model(base)?.cone());
    }
    let src = model_source(name).ok_or_else(|| Error::UnknownSymbol(format!("model {}", name)))?;
    parse_model(src)
}

/// Builtin model with extra symbolic constants (e.g. a twist parameter `c`)
/// adjoined to its scalar ring.
pub fn builtin_model_with_constants(name: &str, constants: &[&str]) -> Result<FrameModel> {
    if constants.is_empty() {
        return builtin_model(name);
    }
    if let Some(base) = name.strip_suffix("-cone") {
        return Ok(builtin_model_with_constants(base, constants)?.cone());
    }
    let src = model_source(name).ok_or_else(|| Error::UnknownSymbol(format!("model {}", name)))?;
    parse_model(&format!("{}\nconstants {}\n", src, constants.join(" ")))
}
