use thiserror::Error;

/// Errors produced by the estimation toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The protocol matrix is only defined for an odd number of spins.
    #[error("unsupported parity: N = {0} is even; only odd N is supported")]
    UnsupportedParity(u32),

    /// The request exceeds what the implementation supports accurately.
    #[error("capability error: {what} (required {required}, supported {supported})")]
    Capability {
        what: &'static str,
        required: usize,
        supported: usize,
    },

    /// Two independent computations of the same quantity disagree.
    #[error("internal consistency error: {what} differs by {gap:e}")]
    Consistency { what: &'static str, gap: f64 },

    /// States or coefficient vectors live on different spin ladders.
    #[error("ladder mismatch: N = {left} vs N = {right}")]
    LadderMismatch { left: u32, right: u32 },

    /// The rejection sampler cannot make progress on this protocol.
    #[error("pathological protocol: {0}")]
    Pathological(String),
}

pub type Result<T> = std::result::Result<T, Error>;
