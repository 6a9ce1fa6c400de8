use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("post-selection impossible (success probability {0:e})")]
    PostSelectionImpossible(f64),

    #[error("signal singular (denominator {0:e})")]
    SignalSingular(f64),

    #[error("insensitive working point (|d<signal>/dB| = {0:e})")]
    InsensitiveWorkingPoint(f64),

    #[error("degenerate statistics (probability {0})")]
    DegenerateStatistics(f64),

    #[error("outcome distribution not normalized (sum = {0})")]
    NotNormalizedDistribution(f64),

    #[error("integration unstable, reduce dt (min eigenvalue {0:e})")]
    IntegrationUnstable(f64),

    #[error("noise path covers {covered} us but {required} us are required")]
    PathTooShort { covered: f64, required: f64 },

    #[error("unsupported rotating frame: {0}")]
    UnsupportedFrame(String),

    #[error("no admissible interrogation time in [{0}, {1}] us")]
    NoAdmissibleTau(f64, f64),
}

impl Error {
    /// True for failures that come from the numerics (singular points,
    /// unstable integration) rather than from malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PostSelectionImpossible(_)
                | Error::SignalSingular(_)
                | Error::InsensitiveWorkingPoint(_)
                | Error::DegenerateStatistics(_)
                | Error::IntegrationUnstable(_)
                | Error::NoAdmissibleTau(..)
                | Error::NotHermitian(_)
                | Error::NotNormalized(_)
                | Error::InvalidDensityMatrix(_)
                | Error::NotNormalizedDistribution(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
