use thiserror::Error;

/// Errors raised by the engine and its configuration layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QewError {
    /// A physical or dimensionless input is outside its admissible range.
    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    /// A quantity is undefined at the requested point.
    #[error("domain error: {0}")]
    Domain(String),

    /// The momentum grid is too narrow for the requested wavepacket.
    #[error("momentum grid covers {have:.6} p_rec per side, {required:.6} required")]
    Coverage { have: f64, required: f64 },

    /// The Fock ladder is too short to hold the state within its tail budget.
    #[error("Fock truncation: {0}")]
    Truncation(String),

    /// Coupling too strong for first-order perturbation theory.
    #[error("perturbative regime violated: coupling measure {measure:.4} exceeds {limit}")]
    Perturbative { measure: f64, limit: f64 },

    /// Inconsistent run configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

impl QewError {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        QewError::Validation {
            field,
            reason: reason.into(),
        }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            QewError::Validation { .. } | QewError::Config(_) | QewError::Domain(_) => 2,
            QewError::Coverage { .. }
            | QewError::Truncation(_)
            | QewError::Perturbative { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, QewError>;
