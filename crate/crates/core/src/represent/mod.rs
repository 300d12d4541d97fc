//! Representation theorems at desk scale: the Chang subdirect embedding,
//! the D/G equivalence for perfect algebras, quasi-constant algebras,
//! separating terms, and the representations of local and perfect
//! algebras and of local unital ℓ-groups over a lexicographic surrogate of
//! the ultrapower.

mod chang;
mod embedding;
mod perfect;
mod quasi;
mod separate;

pub use chang::chang_embedding;
pub use embedding::{Check, Embedding, Side};
pub use perfect::{d_functor, g_functor, perfect_representation, roundtrip_check, DClass, DGroup, RoundtripInput, RoundtripReport};
pub use quasi::{
    group_qc_representation, is_quasi_constant, local_representation, quasi_constant_algebra, verify_prop_spec, PrimeMismatch,
    PropSpecCounterexample, PropSpecReport, QuasiConstantWitness, SiteEvidence,
};
pub use separate::{separating_term, stage_bound, Separation};
