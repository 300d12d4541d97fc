//! Exact computation in MV-algebras and unital lattice-ordered abelian
//! groups: arithmetic, ideals and spectra, classification, and verified
//! constructions of the classical representation theorems.

pub mod cli;
pub mod config;
pub mod error;
pub mod lgroup;
pub mod mvcore;
pub mod rat;
pub mod represent;
pub mod spectra;

pub use config::Config;
pub use error::{MvError, Result};
pub use lgroup::{Group, GroupElem, LIdeal};
pub use mvcore::{Algebra, MvElem, Term};
pub use rat::Rat;
pub use spectra::Ideal;
