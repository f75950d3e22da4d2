use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("D = {0} is not admissible; expected one of 1, 2, 3, 7, 11, 19, 43, 67, 163")]
    InadmissibleD(i64),
    #[error("operands belong to different rings (D = {0} and D = {1})")]
    MismatchedRing(u32, u32),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial has degree {found}, expected {expected}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("shell of norm {r} is empty for D = {d}")]
    EmptyShell { d: u32, r: u64 },
    #[error("j = {j} is not a multiple of the unit count {units} for D = {d}")]
    NotEigenDegree { d: u32, j: u32, units: u32 },
    #[error("({0}, {1}) is not a coprime pair")]
    NotCoprime(u64, u64),
    #[error("node count {0} must be a power of two and at least 16")]
    BadNodeCount(usize),
    #[error("point ({0}, {1}) is not on the unit circle")]
    OffCircle(f64, f64),
    #[error("j_max = {0} exceeds the scan limit of 40")]
    ScanTooLarge(u32),
    #[error("orbits are undefined on the zero shell")]
    ZeroShell,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid shell record: {0}")]
    BadRecord(String),
}
