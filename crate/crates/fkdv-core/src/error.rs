use thiserror::Error;

/// Errors raised by the spectral laboratory.
#[derive(Debug, Error)]
pub enum FkdvError {
    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),

    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(&'static str),

    #[error("mode {0} outside the retained band")]
    ModeOutOfBand(i64),

    #[error(
        "zero mode is {0:.3e} but the strict antiderivative convention requires a mean-zero field"
    )]
    ZeroMode(f64),

    #[error("aliasing cross-check failed: Galerkin and padded-product routes differ by {rel:.3e} (tolerance {tol:.1e})")]
    AliasingCheck { rel: f64, tol: f64 },

    #[error("kernel table violates its defining identity: residual {residual:.3e} at output mode {mode}")]
    KernelIdentity { residual: f64, mode: i64 },

    #[error("invalid symbol parameters: {0}")]
    InvalidSymbolParams(String),

    #[error("symbol argument outside its domain: {0}")]
    SymbolDomain(&'static str),

    #[error("derivative order 0 is not a modified energy; the total energy adds a plain L2 term instead")]
    EnergyOrderZero,

    #[error("grid size {0} exceeds the O(N^3) cost guard ({1}) for the triple-sum integrator")]
    TripleSumCostGuard(usize, usize),

    #[error("time integration produced a non-finite field at t = {0:.6}")]
    Instability(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "log-log fit needs at least {need} uncensored points with distinct abscissae, got {got}"
    )]
    InsufficientFitPoints { need: usize, got: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FkdvError>;
