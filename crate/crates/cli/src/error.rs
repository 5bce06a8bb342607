use std::path::PathBuf;

use ergopt_core::asymptotics::AsymptoticsError;
use ergopt_core::discounted::DiscountedError;
use ergopt_core::ergopt::ErgoptError;
use ergopt_core::subaction::SubactionError;
use ergopt_core::systems::SystemError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Ergopt(#[from] ErgoptError),
    #[error(transparent)]
    Subaction(#[from] SubactionError),
    #[error(transparent)]
    Discounted(#[from] DiscountedError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input or arguments, 1 for a failed or refused check.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) | CliError::System(_) => 2,
            CliError::Ergopt(ErgoptError::System(_) | ErgoptError::TooLarge { .. }) => 2,
            CliError::Subaction(SubactionError::System(_)) => 2,
            CliError::Discounted(DiscountedError::System(_) | DiscountedError::Epsilon(_) | DiscountedError::Tolerance(_)) => 2,
            CliError::Discounted(DiscountedError::EpsilonOrder | DiscountedError::EmptySample) => 2,
            CliError::Asymptotics(
                AsymptoticsError::System(_)
                | AsymptoticsError::Scale(_)
                | AsymptoticsError::FirstBoundary(_)
                | AsymptoticsError::Length { .. }
                | AsymptoticsError::TooLong(_),
            ) => 2,
            _ => 1,
        }
    }
}
