use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {value} does not belong to the {semiring} semiring")]
    InstanceMismatch {
        semiring: &'static str,
        value: String,
    },

    #[error("cannot combine a {left}-relation with a {right}-relation")]
    SemiringMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("the {0} semiring has no monus")]
    MonusUnsupported(&'static str),

    #[error("the natural order of the {0} semiring is not decidable here")]
    OrderUndecidable(&'static str),

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("column index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("duplicate column index {0} in projection")]
    DuplicateIndex(usize),

    #[error("division needs the left arity ({left}) to be at least the right arity ({right})")]
    DivArity { left: usize, right: usize },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable `{0}` is not bound by the assignment")]
    UnboundVariable(String),

    #[error("quantified variable `{0}` is not free in the quantifier body")]
    NotFree(String),

    #[error("a structure must have a non-empty universe")]
    EmptyUniverse,

    #[error("tuple {tuple} lies outside the universe")]
    OutsideUniverse { tuple: String },

    #[error("invalid value `{text}` for the {semiring} semiring")]
    InvalidValue {
        semiring: &'static str,
        text: String,
    },

    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),

    #[error("database: {0}")]
    Database(String),

    #[error("the {semiring} semiring is not {required}")]
    Capability {
        semiring: &'static str,
        required: &'static str,
    },

    #[error("variable list {have:?} is not contained in {want:?}")]
    NotSubset {
        have: Vec<String>,
        want: Vec<String>,
    },
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}
