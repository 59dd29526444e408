use std::path::PathBuf;

use qwalk_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Exit codes. 2 is left to argument parsing.
pub mod exit {
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const DIMENSION_MISMATCH: i32 = 10;
    pub const ZERO_ARGUMENT: i32 = 11;
    pub const NOT_UNITARY: i32 = 12;
    pub const CUTOFF_TOO_SMALL: i32 = 13;
    pub const DIMENSION_TOO_LARGE: i32 = 14;
    pub const GRID_RESOLUTION_EXCEEDED: i32 = 15;
    pub const WINDING_NOT_INTEGRAL: i32 = 16;
    pub const CLUSTER_AMBIGUOUS: i32 = 17;
    pub const LAMBDA_NOT_UNIMODULAR: i32 = 18;
    pub const NONZERO_WINDING: i32 = 19;
    pub const UNDER_RESOLVED: i32 = 20;
    pub const NOT_RAPIDLY_DECREASING: i32 = 21;
    pub const SCHEMA: i32 = 22;
    pub const INVALID_ARGUMENT: i32 = 23;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Core { source, .. } => match source {
                Error::DimensionMismatch { .. } => exit::DIMENSION_MISMATCH,
                Error::ZeroArgument => exit::ZERO_ARGUMENT,
                Error::NotUnitary { .. } => exit::NOT_UNITARY,
                Error::CutoffTooSmall { .. } => exit::CUTOFF_TOO_SMALL,
                Error::DimensionTooLarge { .. } => exit::DIMENSION_TOO_LARGE,
                Error::GridResolutionExceeded { .. } => exit::GRID_RESOLUTION_EXCEEDED,
                Error::WindingNotIntegral { .. } => exit::WINDING_NOT_INTEGRAL,
                Error::ClusterAmbiguous { .. } => exit::CLUSTER_AMBIGUOUS,
                Error::LambdaNotUnimodular { .. } => exit::LAMBDA_NOT_UNIMODULAR,
                Error::NonzeroWinding { .. } => exit::NONZERO_WINDING,
                Error::UnderResolved { .. } => exit::UNDER_RESOLVED,
                Error::NotRapidlyDecreasing => exit::NOT_RAPIDLY_DECREASING,
                Error::Schema { .. } => exit::SCHEMA,
                Error::InvalidArgument(_) => exit::INVALID_ARGUMENT,
            },
        }
    }
}

/// Attaches a context string to core errors.
pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T>;
}

impl<T> Context<T> for qwalk_core::Result<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T> {
        self.map_err(|source| CliError::Core {
            context: what.into(),
            source,
        })
    }
}
