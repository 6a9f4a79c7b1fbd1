use std::fmt::Display;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("bad input: {0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] gaplab_core::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn input(msg: impl Display) -> Self {
        Error::Input(msg.to_string())
    }

    pub fn io(path: impl Display, source: std::io::Error) -> Self {
        Error::Io { path: path.to_string(), source }
    }

    /// Process exit code: 3 for solver failures, 2 for everything the user can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(e) if e.is_solver_failure() => 3,
            _ => 2,
        }
    }
}
