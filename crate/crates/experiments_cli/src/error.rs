use restriction_space::RestrictionError;
use switching_engine::SwitchingError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("trial with seed {seed} failed: {source}")]
    Trial { seed: u64, source: Box<ExperimentError> },
    #[error("pipeline exhausted at round {round}: n = {n}, {reason}")]
    PipelineExhausted { round: usize, n: i32, reason: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Restriction(#[from] RestrictionError),
    #[error(transparent)]
    Switching(#[from] SwitchingError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    pub fn is_sampling_cap(&self) -> bool {
        match self {
            ExperimentError::Trial { source, .. } => source.is_sampling_cap(),
            ExperimentError::Restriction(RestrictionError::RestartCap { .. }) => true,
            ExperimentError::Switching(SwitchingError::Restriction(RestrictionError::RestartCap { .. })) => true,
            _ => false,
        }
    }

    pub fn is_verification(&self) -> bool {
        match self {
            ExperimentError::Trial { source, .. } => source.is_verification(),
            e => matches!(e, ExperimentError::Verification(_)),
        }
    }

    /// 3 for sampling caps, 2 for failed verifications, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_sampling_cap() {
            3
        } else if self.is_verification() {
            2
        } else {
            1
        }
    }
}
