//! MV-algebra arithmetic, terms and the axiom checker.

pub mod algebra;
pub mod axioms;
pub mod term;

pub use algebra::{make_algebra, Algebra, MvElem, Quotient};
pub use axioms::{check_axioms, AxiomReport, AxiomResult, CayleyTable, MvStructure, Strategy, Witness};
pub use term::{eval_at, eval_term, Env, Term};
