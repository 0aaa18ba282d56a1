//! Generalized almost contact pairs and triples, mixed pairs, the cone
//! correspondence and the normality / integrability checks.

pub mod builders;
pub mod checks;
pub mod cone;
pub mod endo;
pub mod mixed;
pub mod reduce;
pub mod structures;

pub use builders::{builtin_example, Example, EXAMPLES};
pub use checks::{integrability_check, normal_frame_criterion, normality_check, FrameVerdict, IntegrabilityReport, NormalityReport};
pub use cone::{cone_to_sekiya, sekiya_to_cone, ConeStructure, SekiyaQuadruple};
pub use endo::Endo;
pub use mixed::{MixedPair, SpinorVerdict};
pub use reduce::{is_poon_wade, poon_wade_reduce, ReduceMode, Reduction};
pub use structures::{pair_from_triple, triple_from_pair, ContactPair, ContactTriple, GeometricType, O11};
