use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the solver.
///
/// Errors split into two families: domain errors, where the inputs lie outside
/// what the method can handle, and numerical errors, where an iterative
/// procedure failed to reach its contract.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("supercritical a4: (D+2l-2)^2 + 8*M*a4 = {discriminant} < 0 (fall to the center)")]
    SupercriticalA4 { discriminant: f64 },

    #[error(
        "indicial exponent k+ = {k} is negative; the regular branch does not vanish at the origin"
    )]
    NegativeIndicialExponent { k: f64 },

    #[error("quantization cubic has non-positive leading coefficient D+k+n-1 = {lead}")]
    NonPositiveLeading { lead: f64 },

    #[error("resonant recurrence: gamma({p}) = 0")]
    ResonantRecurrence { p: usize },

    #[error("no terminating a3 found in [{lo}, {hi}]")]
    NoTerminatingA3 { lo: f64, hi: f64 },

    #[error("no bound state: {0}")]
    NoBinding(String),

    #[error("bracketing error: {0}")]
    Bracketing(String),

    #[error("accuracy error: {what} (achieved {achieved:e})")]
    Accuracy { what: String, achieved: f64 },
}

impl Error {
    /// True for failures of an iterative numerical procedure, false for bad inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Bracketing(_) | Error::Accuracy { .. })
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::Domain(_) => "domain",
            Error::SupercriticalA4 { .. } => "supercritical_a4",
            Error::NegativeIndicialExponent { .. } => "negative_indicial_exponent",
            Error::NonPositiveLeading { .. } => "non_positive_leading",
            Error::ResonantRecurrence { .. } => "resonant_recurrence",
            Error::NoTerminatingA3 { .. } => "no_terminating_a3",
            Error::NoBinding(_) => "no_binding",
            Error::Bracketing(_) => "bracketing",
            Error::Accuracy { .. } => "accuracy",
        }
    }
}
