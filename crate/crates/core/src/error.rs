use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("Alexander grading is not an integer")]
    NonIntegerAlexander,
    #[error("domains are not composable: {0}")]
    IncomposableStates(String),
    #[error("factor has undefined m (x4 = y4 class)")]
    IncomposableFactor,
    #[error("illegal commutation: {0}")]
    IllegalCommutation(String),
    #[error("region cannot be straightened: {0}")]
    NotStraightenable(String),
    #[error("invalid column: {0}")]
    InvalidColumn(String),
    #[error("state does not contain the stabilization point")]
    NotAnIState,
    #[error("state contains the stabilization point")]
    NotAnNState,
    #[error("wrong summand for this homotopy")]
    WrongSummand,
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("homology tables use different windows")]
    WindowMismatch,
    #[error("complex has no v variable")]
    VNotPresent,
    #[error("invalid move: {0}")]
    InvalidMove(String),
}

impl Error {
    /// Stable identifier used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "MalformedInput",
            Error::InvalidDiagram(_) => "InvalidDiagram",
            Error::NonIntegerAlexander => "NonIntegerAlexander",
            Error::IncomposableStates(_) => "IncomposableStates",
            Error::IncomposableFactor => "IncomposableFactor",
            Error::IllegalCommutation(_) => "IllegalCommutation",
            Error::NotStraightenable(_) => "NotStraightenable",
            Error::InvalidColumn(_) => "InvalidColumn",
            Error::NotAnIState => "NotAnIState",
            Error::NotAnNState => "NotAnNState",
            Error::WrongSummand => "WrongSummand",
            Error::GradingMismatch(_) => "GradingMismatch",
            Error::WindowMismatch => "WindowMismatch",
            Error::VNotPresent => "VNotPresent",
            Error::InvalidMove(_) => "InvalidMove",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
