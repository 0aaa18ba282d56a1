pub mod form;
pub mod spinor;

pub use form::{Form, Mask};
pub use spinor::{same_span, span_rank};
