use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input values, failed checks, library errors.
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io { .. } => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),* $(,)?) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Invalid(e.to_string())
            }
        })*
    };
}

invalid_from!(
    kleinforge::space::SpaceError,
    kleinforge::fields::FieldError,
    kleinforge::harmonics::HarmonicsError,
    kleinforge::flow::FlowError,
    kleinforge::sds::SdsError,
    kleinforge::tda::TdaError,
);

pub type Result<T> = std::result::Result<T, CliError>;
