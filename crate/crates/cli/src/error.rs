use std::path::PathBuf;

use cohom_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
}

impl CliError {
    /// 2 for bad input, 3 for a budget cap, 4 for a failed internal check.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io { .. } | CliError::Json { .. } => 2,
            CliError::Core(e) => match e {
                Error::BudgetExceeded { .. } => 3,
                Error::LiftFailed { .. }
                | Error::IncompatibleOperands(_)
                | Error::NotRankOneKernel
                | Error::CoflasquenessCheckFailed { .. }
                | Error::Overflow
                | Error::Invariant(_) => 4,
                Error::NotAGroup(_)
                | Error::IdentityNotZero
                | Error::NotA2Group { .. }
                | Error::DegreeOutOfRange { .. }
                | Error::ModulusTooSmall { .. }
                | Error::InvalidLattice(_) => 2,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
