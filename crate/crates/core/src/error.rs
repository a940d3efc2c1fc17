use thiserror::Error;

use crate::event::Event;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown atom `{name}` at offset {pos}")]
    UnknownAtom { name: String, pos: usize },
}

impl ParseError {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("invalid alphabet partition: {0}")]
    Partition(String),
    #[error("formula is not in temporal disjunctive normal form: {0}")]
    NotTdnf(String),
    #[error("specification is equivalent to false")]
    UnsatisfiableSpecification,
    #[error("no enforcer observes the remaining atoms {0}")]
    UnreachableAlphabet(Event),
    #[error("correction log has an empty domain")]
    EmptyDomain,
    #[error("enforcer {enforcer}: {msg}")]
    Protocol { enforcer: usize, msg: String },
    #[error("round reached quiescence without a decision")]
    Deadlock,
    #[error("next formula is equivalent to false")]
    NextFormulaFalse,
    #[error("timestamp {timestamp}: {source}")]
    AtTimestamp {
        timestamp: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
