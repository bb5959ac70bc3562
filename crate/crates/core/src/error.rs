use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{0}` (not an agenda issue)")]
    UnknownVariable(String),

    #[error("invalid agenda: {0}")]
    InvalidAgenda(String),

    #[error("the constraint is a contradiction: no rational judgment exists")]
    Contradiction,

    #[error("capacity exceeded: {what} is {actual}, limit is {limit}")]
    Capacity {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("agenda mismatch: judgment over {left} issues vs {right} issues")]
    AgendaMismatch { left: usize, right: usize },

    #[error("judgment {0} is not a vertex of the graph")]
    NotAVertex(String),

    #[error("judgment {0} is not a member of the queried set")]
    NotInSet(String),

    #[error("empty judgment set")]
    EmptySet,

    #[error("issue-wise majority is tied on issue {issue}")]
    MajorityTie { issue: usize },

    #[error("judgment {0} is not rational for the constraint")]
    Irrational(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("cycle search budget of {0} expansions exhausted")]
    SearchBudget(usize),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
