use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("invalid subsystem index {index} for layout with {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("eigendecomposition failed to converge")]
    EigenFailure,

    #[error("degenerate Liouvillian kernel: {count} eigenvalues with magnitude below {threshold:e}")]
    DegenerateKernel { count: usize, threshold: f64 },

    #[error("steady state residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("state is not positive: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace {trace:e} deviates from one")]
    TraceNotOne { trace: f64 },

    #[error("invalid time grid: {0}")]
    InvalidTimes(&'static str),

    #[error("integrator failed at t = {time}: {reason}")]
    IntegratorFailure { time: f64, reason: &'static str },

    #[error("emitter {emitter} dark: no excitation to emit")]
    EmitterDark { emitter: usize },

    #[error("both emitters dark: no emission statistics")]
    AllEmittersDark,

    #[error("no oscillation: spectral peak/median ratio {ratio:.3} below {threshold}")]
    NoOscillation { ratio: f64, threshold: f64 },

    #[error("invalid sample grid: {0}")]
    InvalidSamples(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    /// Short stable tag for tables (sweep cells, CSV `error` columns).
    pub fn tag(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NotSquare { .. } => "not-square",
            Error::InvalidLayout(_) => "invalid-layout",
            Error::InvalidSubsystem { .. } => "invalid-subsystem",
            Error::NotHermitian { .. } => "not-hermitian",
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::EigenFailure => "eigen-failure",
            Error::DegenerateKernel { .. } => "degenerate-kernel",
            Error::ResidualTooLarge { .. } => "residual",
            Error::NotPositive { .. } => "not-positive",
            Error::TraceNotOne { .. } => "trace",
            Error::InvalidTimes(_) => "invalid-times",
            Error::IntegratorFailure { .. } => "integrator",
            Error::EmitterDark { .. } => "emitter-dark",
            Error::AllEmittersDark => "all-emitters-dark",
            Error::NoOscillation { .. } => "no-oscillation",
            Error::InvalidSamples(_) => "invalid-samples",
            Error::InsufficientData(_) => "insufficient-data",
        }
    }
}
