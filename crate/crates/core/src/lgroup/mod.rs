//! Ordered abelian groups, ℓ-ideals, strong units and the Γ / Ξ functors.

pub mod group;
pub mod lideal;
pub mod unit;

pub use group::{Group, GroupElem, Scalar};
pub use lideal::{l_ideals, LIdeal};
pub use unit::{
    gamma, ideal_correspondence, ideal_phi, ideal_psi, is_strong_unit, lgroup_is_local, xi, xi_map, xi_unmap, Correspondence,
    StrongUnitReport,
};
