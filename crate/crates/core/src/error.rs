use thiserror::Error;

use crate::theory::Diagnostic;

#[derive(Debug, Error)]
pub enum Error {
    #[error("theory has {} problem(s); first: {}", .0.len(), .0.first().map(|d| d.to_string()).unwrap_or_default())]
    Invalid(Vec<Diagnostic>),
    #[error("grounding exceeds {limit} rule instances")]
    GroundingTooLarge { limit: usize },
    #[error("argument construction exceeds {limit} arguments")]
    ArgumentCapExceeded { limit: usize },
    #[error("framework has {size} arguments; exhaustive enumeration is capped at {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("dispute tree exceeds {limit} nodes")]
    TreeTooLarge { limit: usize },
    #[error("unknown argument `{0}`")]
    UnknownArgument(String),
    #[error("no argument concludes or is named `{0}`")]
    UnknownTarget(String),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("scheme `{scheme}` is missing bindings for {}", .missing.join(", "))]
    IncompleteBindings { scheme: String, missing: Vec<String> },
    #[error("binding `{0}` is not a valid constant")]
    InvalidBinding(String),
    #[error("scheme `{scheme}` has no critical question `{cq}`")]
    UnknownCriticalQuestion { scheme: String, cq: String },
    #[error("scheme instance `{0}` is not present in the theory")]
    UnknownInstance(String),
    #[error("INSUFFICIENT: full-tree sufficiency {sigma_full:.4} is below threshold {tau:.4} or no faithful subtree exists")]
    Insufficient { sigma_full: f64, tau: f64 },
    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),
    #[error("invalid utility weights: {0}")]
    InvalidWeights(String),
    #[error("invalid user profile: {0}")]
    InvalidProfile(String),
    #[error("conflicting ids while merging theories: {}", .0.join(", "))]
    MergeConflict(Vec<String>),
    #[error("invalid study record: {0}")]
    Study(String),
    #[error("malformed framework file: {0}")]
    Iccma(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
