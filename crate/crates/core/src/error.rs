use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("extension data does not define a Lie bracket (residual {residual:e})")]
    NotLie { residual: f64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("K0 is singular at the requested tolerance")]
    SingularK0,
    #[error("trace constraint violated: sum a_ij^2 = {lhs}, 2 sum c_ik^2 = {rhs}")]
    ConstraintViolation { lhs: f64, rhs: f64 },
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("gram matrix is degenerate")]
    DegenerateGram,
    #[error("{0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
