use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the solver library.
///
/// Every variant maps to a stable machine-readable code through [`Error::code`],
/// which the CLI and the C API both expose.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid distribution for player {player}: {reason}")]
    InvalidDistribution { player: usize, reason: String },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("epsilon must be nonnegative")]
    NegativeEpsilon,
    #[error("player {player} has an empty support")]
    EmptySupport { player: usize },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("resolution must be at least 1")]
    ResolutionZero,
    #[error("vertex-profile budget exceeded: {required} > {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("no pre-equilibrium found after {stage} stage(s); resolutions tried: {resolutions:?}")]
    NoPreEquilibriumFound {
        stage: usize,
        resolutions: Vec<Vec<u32>>,
    },
    #[error("operation requires a single-player game, got {0} players")]
    NotSinglePlayer(usize),
    #[error("operation requires a two-player game, got {0} players")]
    NotTwoPlayer(usize),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid value: {0}")]
    Value(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used in machine-readable output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::InvalidDistribution { .. } => "INVALID_DISTRIBUTION",
            Error::IndexOutOfRange(_) => "INDEX_OUT_OF_RANGE",
            Error::NegativeEpsilon => "NEGATIVE_EPSILON",
            Error::EmptySupport { .. } => "EMPTY_SUPPORT",
            Error::ParameterOutOfRange(_) => "PARAMETER_OUT_OF_RANGE",
            Error::ResolutionZero => "RESOLUTION_ZERO",
            Error::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            Error::NoPreEquilibriumFound { .. } => "NO_PRE_EQUILIBRIUM_FOUND",
            Error::NotSinglePlayer(_) => "NOT_SINGLE_PLAYER",
            Error::NotTwoPlayer(_) => "NOT_TWO_PLAYER",
            Error::InvalidGame(_) => "INVALID_GAME",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::Shape(_) => "SHAPE_ERROR",
            Error::Value(_) => "VALUE_ERROR",
            Error::Io(_) => "IO_ERROR",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
