//! T-duality for frame models with torus fibres.

pub mod pair;
pub mod transport;

pub use pair::{builtin_dual_pair, heisenberg_pair, hopf_pair, transfer, trivial_circle, FiberExtraction, TDualPair, DUAL_PAIRS};
pub use transport::{
    annihilators_correspond, double_duality_check, dualize_mixed, dualize_pair, dualize_triple, intertwiner_check, presentation,
    type_change_report, DoubleDualityReport, IntertwinerReport, PointPresentation, TypeChangeRow,
};
