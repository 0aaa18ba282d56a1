pub mod builtin;
pub mod literal;
pub mod model;
pub mod parse;
pub mod section;

pub use builtin::{builtin_model, builtin_model_with_constants};
pub use model::FrameModel;
pub use parse::parse_model;
pub use section::{CourantReport, GenSection, Variant};
