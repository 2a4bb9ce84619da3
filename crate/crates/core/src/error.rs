use thiserror::Error;

/// Errors raised by symbol evaluation, spectral analysis and the quantum bench.
#[derive(Debug, Error)]
pub enum AdptError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("jet order {requested} exceeds supported order {max}")]
    JetOrder { requested: usize, max: usize },

    #[error("non-finite value while evaluating {0}")]
    NonFinite(String),

    #[error("spectral gap {gap:.3e} below floor {floor:.3e} at {at}")]
    GapViolation { gap: f64, floor: f64, at: String },

    #[error("band identification failed: {0}")]
    Band(String),

    #[error("projector distance {0:.3e} is too large for Nagy transport")]
    Transport(f64),

    #[error("{what} defect {value:.3e} exceeds tolerance {tol:.3e} at order {order}")]
    Defect {
        what: &'static str,
        order: usize,
        value: f64,
        tol: f64,
    },

    #[error("quantized projector has eigenvalue {0:.4} inside [1/4, 3/4]")]
    Cluster(f64),

    #[error("symbol varies in q by {jump:.3e} at the band edge (tolerance {tol:.3e})")]
    Aliasing { jump: f64, tol: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, AdptError>;
