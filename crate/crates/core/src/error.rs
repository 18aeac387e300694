use thiserror::Error;

/// Failures reported by the simulation core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter lies outside the domain of the model.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structurally invalid argument (parity, size mismatch, empty input).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A numerical tolerance could not be met on the requested discretization.
    #[error("precision error: {what} ({value:.3e} exceeds {tolerance:.1e})")]
    Precision {
        what: String,
        value: f64,
        tolerance: f64,
    },

    /// The operation does not apply to this input (e.g. sampling a delta filter).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The heralding probability vanishes, so no conditional state exists.
    #[error("nothing to herald: heralding probability is zero")]
    NothingToHerald,

    /// A design target could not be met inside the searched range.
    #[error("target {target} unreachable; best achieved {best:.6}")]
    Unreachable { target: f64, best: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
