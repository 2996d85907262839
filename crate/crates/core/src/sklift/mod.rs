//! Saito-Kurokawa lifts: an independent theta-constant construction of the
//! weight-10 Igusa cusp form and checkers for the Maass relations.

pub mod igusa;
pub mod maass;
pub mod table;
pub mod theta;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::arith::ArithError;
use crate::qform::{QForm, QFormError};

pub use igusa::igusa_chi10;
pub use maass::{
    extract_jacobi, lift_from_jacobi, maass_check_classical, maass_check_level_n, verify_table, VerifyMode,
    VerifyReport,
};
pub use table::FourierTable;
pub use theta::{theta_constant, Characteristic, ThetaSeries, Truncation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SkliftError {
    #[error("characteristic {a:?},{b:?} has entries outside {{0,1}}")]
    InvalidCharacteristic { a: [u8; 2], b: [u8; 2] },
    #[error("characteristic {a:?},{b:?} is odd")]
    OddCharacteristic { a: [u8; 2], b: [u8; 2] },
    #[error("series have different truncations")]
    TruncationMismatch,
    #[error("bound must be at least {min}, got {got}")]
    BoundTooSmall { min: u64, got: u64 },
    #[error("nonzero coefficient at non-half-integral exponent ({a8}, {b8}, {c8})/8")]
    NonHalfIntegral { a8: i64, b8: i64, c8: i64 },
    #[error("nonzero coefficient at singular exponent {0}")]
    NotCuspidal(String),
    #[error("coefficient at (1, 1, 1) vanishes, cannot normalize")]
    ZeroNormalization,
    #[error("coefficient at {0} lies outside the table bound")]
    OutOfBound(QForm),
    #[error("table has level ({n1}, {n2}), expected ({e1}, {e2})")]
    LevelMismatch { n1: u64, n2: u64, e1: u64, e2: u64 },
    #[error("invalid level ({n1}, {n2}): need 1 <= N1 | N2")]
    InvalidLevel { n1: u64, n2: u64 },
    #[error("relation does not apply to {t}: {reason}")]
    NotApplicable { t: QForm, reason: String },
    #[error("malformed input {t} with L = {l}: {reason}")]
    Malformed { t: QForm, l: u64, reason: String },
    #[error("C({d}) differs: {first} at {t1} vs {second} at {t2}")]
    JacobiInconsistent { d: BigInt, t1: QForm, first: BigRational, t2: QForm, second: BigRational },
    #[error("Jacobi coefficient C({0}) is missing")]
    MissingJacobi(BigInt),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    QForm(#[from] QFormError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T> = std::result::Result<T, SkliftError>;
