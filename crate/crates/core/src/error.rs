use core::fmt;

/// Everything that can go wrong in the engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    ShapeTooSmall {
        n: usize,
    },
    ShapeMismatch,
    SizeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    /// `map` is 1-based; `row > col` is the offending entry.
    TriangularityViolation {
        map: usize,
        row: usize,
        col: usize,
    },
    NotInvertible,
    NonMonotone {
        position: usize,
    },
    NonContiguousSupport,
    EmptySupport,
    HeightOutOfRange {
        position: usize,
        value: usize,
    },
    /// Column `column` sees height `height` `count` times instead of once.
    InvalidDecomposition {
        column: usize,
        height: usize,
        count: usize,
    },
    SolveFailure,
    InvalidTable {
        row: usize,
        col: usize,
        value: i64,
    },
    InvalidArray {
        j1: usize,
        j2: usize,
        p: usize,
        q: usize,
        expected: usize,
        got: usize,
    },
    InvalidPermutation,
    NotAPrimePower {
        q: u64,
    },
    UnsupportedField {
        q: u64,
    },
    /// A rational entry whose denominator vanishes in characteristic `p`.
    NotReducible {
        p: u64,
    },
    InfeasibleSize {
        budget: u64,
    },
    TooFewSamples {
        needed: usize,
        found: usize,
    },
    FitFailure,
    NoPointFound,
    InconsistentDimensions,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Error::*;
        match self {
            ShapeTooSmall { n } => write!(f, "grid shape needs n >= 2, got {n}"),
            ShapeMismatch => write!(f, "inputs live on different grid shapes"),
            SizeMismatch { what, expected, found } => {
                write!(f, "{what}: expected size {expected}, found {found}")
            }
            IndexOutOfRange { what, index, bound } => {
                write!(f, "{what}: index {index} outside 1..={bound}")
            }
            TriangularityViolation { map, row, col } => {
                write!(f, "map {map} has a nonzero entry below the diagonal at ({row},{col})")
            }
            NotInvertible => write!(f, "matrix is not invertible"),
            NonMonotone { position } => {
                write!(f, "heights decrease at position {position} inside the support")
            }
            NonContiguousSupport => write!(f, "support of the height vector is not an interval"),
            EmptySupport => write!(f, "height vector is identically zero"),
            HeightOutOfRange { position, value } => {
                write!(f, "height {value} at position {position} exceeds the grid")
            }
            InvalidDecomposition { column, height, count } => {
                write!(f, "column {column} carries height {height} {count} times (expected exactly once)")
            }
            SolveFailure => write!(f, "rank vector has no nonnegative integral decomposition"),
            InvalidTable { row, col, value } => {
                write!(f, "double difference {value} at ({row},{col}) is not 0 or 1")
            }
            InvalidArray { j1, j2, p, q, expected, got } => write!(
                f,
                "array not realizable: window [{j1},{j2}] entry ({p},{q}) expected {expected}, realized {got}"
            ),
            InvalidPermutation => write!(f, "not a permutation in one-line notation"),
            NotAPrimePower { q } => write!(f, "{q} is not a prime power"),
            UnsupportedField { q } => write!(f, "field of order {q} is not supported"),
            NotReducible { p } => write!(f, "rational entry has a denominator divisible by {p}"),
            InfeasibleSize { budget } => write!(f, "enumeration exceeded the budget of {budget} checks"),
            TooFewSamples { needed, found } => {
                write!(f, "need at least {needed} sample fields, got {found}")
            }
            FitFailure => write!(f, "point counts do not fit an integer polynomial"),
            NoPointFound => write!(f, "no point of the quiver Grassmannian was found"),
            InconsistentDimensions => write!(f, "dimension bookkeeping produced a negative codimension"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
