use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors surfaced by fallible constructors and input-validating operations.
///
/// Contract violations on already-validated values (mismatched machine
/// counts, permutations of the wrong length, walks that skip a vertex)
/// panic instead; they indicate a bug in the caller, not bad input data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Jobs of one instance must share a machine count.
    MachineMismatch { left: usize, right: usize },
    /// The given order is not a bijection on `0..n`.
    BadPermutation,
    /// A matrix row has the wrong width.
    NotSquare { row: usize, len: usize, n: usize },
    /// The input matrix fails the semimetric checks.
    NotSemimetric(MetricViolation),
    /// A tour-value certificate is smaller than some arc weight, which no
    /// Hamiltonian tour of a semimetric allows.
    BadCertificate { max_arc: u64, r: u64 },
    /// Exact solvers reject instances past their configured limit.
    SizeLimit { what: &'static str, size: usize, limit: usize },
    /// The operation needs a larger instance.
    TooSmall { what: &'static str, size: usize, need: usize },
    /// Epsilon must be a positive rational, at most one where so stated.
    BadEpsilon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MetricViolation {
    /// `d(v, v) != 0`.
    Diagonal { vertex: usize },
    /// `d(u, v) > d(u, w) + d(w, v)` for the lexicographically first such
    /// triple `(u, w, v)`.
    Triangle { u: usize, w: usize, v: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MachineMismatch { left, right } => {
                write!(f, "machine counts differ: {left} vs {right}")
            }
            Error::BadPermutation => write!(f, "order is not a permutation of 0..n"),
            Error::NotSquare { row, len, n } => {
                write!(f, "row {row} has {len} entries, expected {n}")
            }
            Error::NotSemimetric(v) => write!(f, "not a semimetric: {v}"),
            Error::BadCertificate { max_arc, r } => {
                write!(f, "tour-value certificate {r} is below the maximum arc weight {max_arc}")
            }
            Error::SizeLimit { what, size, limit } => {
                write!(f, "{what}: size {size} exceeds the limit {limit}")
            }
            Error::TooSmall { what, size, need } => {
                write!(f, "{what}: size {size}, need at least {need}")
            }
            Error::BadEpsilon => write!(f, "epsilon out of range"),
        }
    }
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::Diagonal { vertex } => {
                write!(f, "d({vertex}, {vertex}) is nonzero")
            }
            MetricViolation::Triangle { u, w, v } => {
                write!(f, "d({u}, {v}) > d({u}, {w}) + d({w}, {v})")
            }
        }
    }
}
