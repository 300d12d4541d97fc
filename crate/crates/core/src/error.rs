use thiserror::Error;

pub type Result<T, E = MvError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MvError {
    #[error("invalid unit `{0}`: the unit must be strictly positive")]
    InvalidUnit(String),
    #[error("a product needs at least one factor")]
    EmptyProduct,
    #[error("malformed descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("unsupported quotient: {0}")]
    UnsupportedQuotient(String),
    #[error("element `{elem}` is not in {algebra}")]
    ElementNotInAlgebra { elem: String, algebra: String },
    #[error("element `{elem}` does not have the shape of group {group}")]
    ShapeMismatch { elem: String, group: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("exhaustive checking needs a finite carrier, {0} is infinite")]
    InfiniteCarrierExhaustive(String),
    #[error("carrier of {algebra} exceeds the cap of {cap} elements")]
    CarrierTooLarge { algebra: String, cap: usize },
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("{0} is not of the form Gamma(G, u)")]
    NotGammaAlgebra(String),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("{0} is not perfect")]
    NotPerfect(String),
    #[error("{0} is not local")]
    NotLocal(String),
    #[error("base algebra not supported: {0}")]
    BaseNotSupported(String),
    #[error("expected x < y, got x = {x}, y = {y}")]
    NotStrictlyOrdered { x: String, y: String },
    #[error("{0} is outside [0, 1]")]
    OutOfUnitInterval(String),
    #[error("the surrogate of depth {depth} cannot hold a group with {needed} lexicographic levels")]
    SurrogateTooShallow { depth: usize, needed: usize },
    #[error("verification failed: {what} (witness: {witness})")]
    VerificationFailed { what: String, witness: String },
}

impl MvError {
    pub fn not_in(elem: impl ToString, algebra: impl ToString) -> MvError {
        MvError::ElementNotInAlgebra { elem: elem.to_string(), algebra: algebra.to_string() }
    }

    pub fn failed(what: impl Into<String>, witness: impl ToString) -> MvError {
        MvError::VerificationFailed { what: what.into(), witness: witness.to_string() }
    }

    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            MvError::InvalidUnit(_) => "InvalidUnit",
            MvError::EmptyProduct => "EmptyProduct",
            MvError::InvalidDescriptor(_) => "InvalidDescriptor",
            MvError::UnsupportedQuotient(_) => "UnsupportedQuotient",
            MvError::ElementNotInAlgebra { .. } => "ElementNotInAlgebra",
            MvError::ShapeMismatch { .. } => "ShapeMismatch",
            MvError::UnboundVariable(_) => "UnboundVariable",
            MvError::InfiniteCarrierExhaustive(_) => "InfiniteCarrierExhaustive",
            MvError::CarrierTooLarge { .. } => "CarrierTooLarge",
            MvError::UnsupportedShape(_) => "UnsupportedShape",
            MvError::NotGammaAlgebra(_) => "NotGammaAlgebra",
            MvError::InvalidIdeal(_) => "InvalidIdeal",
            MvError::NotPerfect(_) => "NotPerfect",
            MvError::NotLocal(_) => "NotLocal",
            MvError::BaseNotSupported(_) => "BaseNotSupported",
            MvError::NotStrictlyOrdered { .. } => "NotStrictlyOrdered",
            MvError::OutOfUnitInterval(_) => "OutOfUnitInterval",
            MvError::SurrogateTooShallow { .. } => "SurrogateTooShallow",
            MvError::VerificationFailed { .. } => "VerificationFailed",
        }
    }
}
