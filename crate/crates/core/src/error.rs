use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    SingularMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("exponent matrix must be square with at least 3 rows, got {rows} row(s) of lengths {lengths:?}")]
    Shape { rows: usize, lengths: Vec<usize> },
    #[error("negative exponent {value} at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize, value: i64 },
    #[error("rows have different sums: {sums:?}")]
    NotStochastic { sums: Vec<u64> },
    #[error("column {column} has no zero entry (common monomial factor); pass normalize to strip it")]
    CommonFactor { column: usize },
    #[error("monomial degree is zero after removing the common factor")]
    DegreeZero,
    #[error("map is not birational: |det| = {det_abs}, degree = {degree}")]
    NotBirational { det_abs: String, degree: u64 },
    #[error("normalized inverse is not integral: {0}")]
    IntegralityFailure(String),
    #[error("operation requires dimension {expected}, got n = {found}")]
    UnsupportedDimension { expected: usize, found: usize },
    #[error("operation requires degree at least 2")]
    DegreeTooSmall,
    #[error("base locus contains no coordinate line: {0}")]
    EmptyBaseLocus(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("exponent does not fit in 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials have different numbers of variables: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("fast and oracle k-vectors disagree for {rows:?}: fast {fast:?}, oracle {oracle:?}")]
    InternalDisagreement {
        rows: Vec<Vec<u64>>,
        fast: [u64; 4],
        oracle: [u64; 4],
    },
    #[error("inferred Milnor sum is negative ({mu}) for {rows:?}")]
    NegativeMilnorSum { rows: Vec<Vec<u64>>, mu: i64 },
    #[error("degree bound violated for {rows:?}: {detail}")]
    BoundViolation { rows: Vec<Vec<u64>>, detail: String },
}

impl InvariantError {
    /// True for errors that would contradict the underlying theory rather
    /// than reject bad input.
    pub fn is_theory_violation(&self) -> bool {
        matches!(
            self,
            InvariantError::InternalDisagreement { .. }
                | InvariantError::NegativeMilnorSum { .. }
                | InvariantError::BoundViolation { .. }
                | InvariantError::Map(MapError::IntegralityFailure(_))
                | InvariantError::Map(MapError::EmptyBaseLocus(_))
        )
    }
}
