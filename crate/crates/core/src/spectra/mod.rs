//! Ideals, spectra, radicals, quotients, orders and classification.

pub mod catalog;
pub mod classify;
pub mod ideal;
pub mod quotient;
pub mod radical;

pub use catalog::{enumerate_ideals, enumerate_ideals_fast, enumerate_ideals_generic, ideals, symbolic_ideals};
pub use classify::{
    classify, ideal_predicates, in_radical, is_infinitesimal, max_ideals, ord, radical, spec, Classification, IdealPredicates, Mode,
    OrdReport,
};
pub use ideal::{check_ideal, ideal_subset, resolve_ideal, Ideal};
pub use quotient::{chain_witness, quotient, QuotientMap};
pub use radical::{ord_by_iteration, radical_by_iteration, Order};

pub(crate) use radical::in_radical_raw;
