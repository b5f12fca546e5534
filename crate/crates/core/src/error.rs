use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension limit: {entries} entries exceeds cap {cap}")]
    DimensionLimit { entries: usize, cap: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("not hermitian: max deviation {0:e}")]
    NotHermitian(f64),
    #[error("not unitary: max deviation {0:e}")]
    NotUnitary(f64),
    #[error("not energy preserving: commutator {norm:e} exceeds {tol:e}")]
    NotEnergyPreserving { norm: f64, tol: f64 },
    #[error("basis required: {0}")]
    BasisRequired(String),
    #[error("block shape: {0}")]
    BlockShape(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("resonance required: {0}")]
    ResonanceRequired(String),
    #[error("support exceeds battery: n0 + L = {needed} > d_B = {d_b}")]
    SupportExceedsBattery { needed: usize, d_b: usize },
    #[error("support explosion: projected {projected} atoms exceeds {cap}")]
    SupportExplosion { projected: f64, cap: usize },
    #[error("invalid prepartition: {0}")]
    InvalidPrepartition(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("arithmetic overflow in exact computation")]
    Overflow,
    #[error("schema: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
