use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("symbol '{0}' is not in the alphabet")]
    UnknownSymbol(char),

    #[error("unknown rule id '{0}'")]
    UnknownRule(String),

    #[error("exponent expression outside supported form: {0}")]
    UnsupportedExponent(String),

    #[error("exponent evaluates out of range: {0}")]
    ExponentOutOfRange(String),

    #[error("not a redex: {0}")]
    NotARedex(String),

    #[error("step budget exhausted after {steps} steps")]
    StepBudgetExhausted { steps: usize },

    #[error("dense length {len} exceeds cap {cap}")]
    DenseCapExceeded { len: String, cap: u64 },

    #[error("enumeration overflow: {0}")]
    EnumerationOverflow(String),

    #[error("step is not a forward BA-style application: {0}")]
    NotBaApplication(String),

    #[error("run {0} is not an a-run")]
    NotAnARun(usize),

    #[error("invalid DFA: {0}")]
    InvalidDfa(String),

    #[error("{0}")]
    InvalidInput(String),
}
