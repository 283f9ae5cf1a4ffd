use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotAPrimePower(i64),

    #[error("zero input where a nonzero integer is required")]
    ZeroInput,

    #[error("(q={q}, a={a}, b={b}) is not the Weil polynomial of an abelian surface")]
    NotAdmissible { q: i64, a: i64, b: i64 },

    #[error("(q={q}, a={a}, b={b}) is not simple")]
    NotSimple { q: i64, a: i64, b: i64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("field of order {p}^{degree} exceeds the size guard")]
    SizeGuard { p: u32, degree: u32 },

    #[error("operation requires odd characteristic")]
    EvenCharacteristic,

    #[error("operation requires characteristic 2")]
    OddCharacteristic,

    #[error("census is not supported for q={0}")]
    UnsupportedQ(i64),

    #[error("point counts N1={n1}, N2={n2} over q={q} give a non-integral b")]
    ParityViolation { q: i64, n1: i64, n2: i64 },

    #[error("point counts N1={n1}, N2={n2} over q={q} give inadmissible (a={a}, b={b})")]
    InadmissibleCount {
        q: i64,
        n1: i64,
        n2: i64,
        a: i64,
        b: i64,
    },

    #[error("census verification failed for q={q}: {}", failures.join("; "))]
    VerificationFailure { q: i64, failures: Vec<String> },

    #[error("cache file {path:?}: {reason}")]
    CacheFormat { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
