use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits/bits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid tag layout: {0}")]
    InvalidLayout(String),

    #[error("parameter guard: {0}")]
    ParameterGuard(String),

    #[error("puncture rejected: {0}")]
    PunctureRejected(String),

    #[error("rank {rank} exceeds the exhaustive-enumeration limit {limit}")]
    RankGuard { rank: usize, limit: usize },

    #[error("code is not self-dual: {0}")]
    NotSelfDual(String),

    #[error("CSS containment failure: {0}")]
    Containment(String),

    #[error("key of kind {key} does not match family of kind {family}")]
    KindMismatch { family: String, key: String },

    #[error("logical action requested for an attack the code rejects")]
    RejectedAttack,

    #[error("not weight-determined: attack weight {weight} reaches code distance {distance}")]
    NotWeightDetermined { weight: usize, distance: usize },

    #[error("conditioning event never occurred in {trials} sampled keys")]
    NoEvent { trials: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Refusals raised by an analysis guard rather than by malformed input.
    pub fn is_guard_refusal(&self) -> bool {
        matches!(
            self,
            Error::ParameterGuard(_)
                | Error::PunctureRejected(_)
                | Error::RankGuard { .. }
                | Error::NotSelfDual(_)
                | Error::Containment(_)
                | Error::RejectedAttack
                | Error::NotWeightDetermined { .. }
                | Error::NoEvent { .. }
        )
    }
}
