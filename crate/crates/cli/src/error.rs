use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("unknown figure `{0}` (expected fig1, fig2, fig3a, fig3b, fig4a or fig4b)")]
    UnknownFigure(String),
    #[error(transparent)]
    Core(#[from] capcon_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use capcon_core::Error as E;
        match self {
            Self::Validation(_) | Self::UnknownFigure(_) => 2,
            Self::Core(E::InfeasibleProblem { .. }) => 3,
            Self::Core(E::Evaluation(_)) => 1,
            Self::Core(_) => 2,
            Self::Io(_) | Self::Json(_) | Self::Pool(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}
