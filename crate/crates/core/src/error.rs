use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse {0:?} as a rational")]
    Parse(String),

    #[error("{name} = {value} is outside {expected}")]
    Domain {
        name: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("sensor index {i} is outside 1..={n}")]
    SensorIndex { i: u64, n: u64 },

    #[error("exact path limited to n <= {limit} (got n = {n})")]
    SizeGuard { n: u64, limit: u64 },

    #[error("moment order a = {a} must be odd here")]
    EvenOrder { a: u32 },

    #[error("cannot add {lhs} and {rhs}: different radical parts")]
    IncompatibleRadicals { lhs: String, rhs: String },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(name: &'static str, value: impl ToString, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value: value.to_string(),
            expected,
        }
    }
}
