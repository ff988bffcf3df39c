use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeoError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("vector norm {norm} deviates from 1 by more than {tolerance:e}")]
    NotNormalized { norm: f64, tolerance: f64 },
    #[error("value {value} outside domain: {what}")]
    Domain { what: &'static str, value: f64 },
    #[error("mixture weights invalid: {0}")]
    BadWeights(String),
    #[error("bad qubit index: {0}")]
    BadIndex(String),
    #[error("unknown gate token `{0}`")]
    UnknownGate(String),
    #[error("trajectory endpoint is maximally entangled")]
    KnotEndpoint,
    #[error("maximally entangled state has no single statepoint")]
    KnotInput,
    #[error("invalid toroid config: {0}")]
    BadConfig(String),
    #[error("trajectory needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
}
