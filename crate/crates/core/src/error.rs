use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("D = {0} is not a squarefree positive integer")]
    BadDiscriminant(i64),
    #[error("D = {0} is not supported")]
    UnsupportedD(i64),
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("presentation relator {index} evaluates to {value}, not the identity")]
    BadRelator { index: usize, value: String },
    #[error("inconsistent coset table: {0}")]
    InconsistentTable(String),
    #[error("subgroup is not torsion-free: {0}")]
    NotTorsionFree(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("action is not a homomorphism on relator {0}")]
    NonMultiplicative(usize),
    #[error("word does not lie in the parabolic subgroup: {0}")]
    NotParabolic(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("check {name} failed: {detail}")]
    CheckFailed { name: &'static str, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(what: &'static str, input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        what,
        input: input.to_string(),
        reason: reason.into(),
    }
}
