use thiserror::Error;

use crate::series::HalfExp;
use crate::tetrahedron::IndexCharge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("monomial q^({h}) lies outside the known window (precision {prec})")]
    MonomialOutsideWindow { h: HalfExp, prec: HalfExp },

    #[error("series is not invertible over the integers: {0}")]
    NotInvertible(&'static str),

    #[error("insufficient precision: need {needed}, have {available}")]
    InsufficientPrecision { needed: HalfExp, available: HalfExp },

    #[error("summation index n={n} is below the floor {floor} for charge {charge}")]
    BelowSummationFloor {
        n: i64,
        floor: i64,
        charge: IndexCharge,
    },

    #[error("no nonzero coefficient of I({charge}) below q^({ceiling})")]
    DegreeCeiling {
        charge: IndexCharge,
        ceiling: HalfExp,
    },

    #[error("window not stabilized for {what}: extent exceeded cap {cap}")]
    WindowNotStabilized { what: String, cap: u32 },

    #[error("box not stabilized: extent exceeded cap {cap}")]
    BoxNotStabilized { cap: u32 },

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("duplicate variable `{name}`")]
    DuplicateVariable { name: String },

    #[error("charge form `{form}` is not integer-valued")]
    NonIntegerCharge { form: String },

    #[error("invalid series data: {0}")]
    InvalidSeries(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::WindowNotStabilized { .. }
            | Error::BoxNotStabilized { .. }
            | Error::DegreeCeiling { .. } => 3,
            Error::Syntax { .. }
            | Error::UnknownVariable { .. }
            | Error::DuplicateVariable { .. }
            | Error::NonIntegerCharge { .. }
            | Error::InvalidSeries(_) => 2,
            _ => 3,
        }
    }
}
