use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by the whole toolkit.
///
/// `OrderCapExceeded` and `BudgetExhausted` are deliberately separate from the
/// validation errors: callers (and the CLI exit codes) treat "your input is
/// wrong" differently from "this computation is too big".
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid element index {index} for group of order {order}")]
    InvalidIndex { index: usize, order: usize },

    #[error("group axiom violated: {axiom} ({witness})")]
    NotAGroup { axiom: String, witness: String },

    #[error("{0} is not a subgroup: {1}")]
    NotSubgroup(String, String),

    #[error("subgroup is not normal: conjugation by element {by} moves {moved} outside")]
    NotNormal { by: usize, moved: usize },

    #[error("order cap exceeded: construction needs order {required}, cap is {cap}")]
    OrderCapExceeded { required: u128, cap: usize },

    #[error("search budget exhausted after {nodes} nodes ({context})")]
    BudgetExhausted { nodes: u64, context: String },

    #[error("action element {element} is not an automorphism: {reason}")]
    NotAutomorphism { element: usize, reason: String },

    #[error("action assignment is not a homomorphism at pair ({left}, {right})")]
    ActionNotHomomorphic { left: usize, right: usize },

    #[error("word syntax error at position {position}: {message}")]
    WordSyntax { position: usize, message: String },

    #[error("variety '{0}' has no declared exponent")]
    UndeclaredExponent(String),

    #[error("variety '{0}' is not usable here: {1}")]
    InvalidVariety(String, String),

    #[error("catalog member '{member}' fails membership in variety '{variety}'")]
    MembershipFailed { member: String, variety: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("no separating pair found; unseparated elements: {0:?}")]
    SeparatingPairNotFound(Vec<usize>),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed file {path}: {message}")]
    Malformed { path: String, message: String },
}

impl Error {
    /// Exit-code class used by the CLI: 2 for cap/budget exhaustion, 1 otherwise.
    pub fn is_resource_exhaustion(&self) -> bool {
        matches!(
            self,
            Error::OrderCapExceeded { .. } | Error::BudgetExhausted { .. }
        )
    }
}
