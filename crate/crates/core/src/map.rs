//! Monomial rational maps of projective space, modelled by their exponent matrices.
//!
//! Row `i` of an [`ExponentMatrix`] is the exponent vector of the `i`-th
//! component monomial, so column `j` collects the exponents of `x_j`.
//! Composition of monomial maps is the matrix product followed by removal of
//! the common monomial factor (the column minima).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::MapError;
use crate::linalg::IntMatrix;

/// Exponent matrix of a monomial map of `P^n`: `(n+1)×(n+1)`, non-negative,
/// every row summing to `d`, and every column containing a zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentMatrix {
    size: usize,
    degree: u64,
    entries: Vec<u64>,
}

/// Projective degrees `(d_0, …, d_n)` of a map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultidegreeVector(pub Vec<u64>);

impl MultidegreeVector {
    pub fn reversed(&self) -> MultidegreeVector {
        MultidegreeVector(self.0.iter().rev().copied().collect())
    }
}

/// Which branch of the three-dimensional bound argument a map falls into,
/// with the data that selected it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "label")]
pub enum CaseLabel {
    /// Some column has exactly one zero entry.
    CaseI { column: usize },
    /// Two base lines share a coordinate plane.
    CaseII { lines: Vec<(usize, usize)> },
    /// Two disjoint base lines.
    CaseIII { lines: Vec<(usize, usize)> },
    /// Exactly one base line.
    CaseIV { lines: Vec<(usize, usize)> },
}

impl CaseLabel {
    pub fn name(&self) -> &'static str {
        match self {
            CaseLabel::CaseI { .. } => "CaseI",
            CaseLabel::CaseII { .. } => "CaseII",
            CaseLabel::CaseIII { .. } => "CaseIII",
            CaseLabel::CaseIV { .. } => "CaseIV",
        }
    }

    pub fn is_case_iv(&self) -> bool {
        matches!(self, CaseLabel::CaseIV { .. })
    }
}

/// Options for [`ExponentMatrix::validate`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Divide out the common monomial factor instead of rejecting it.
    pub normalize: bool,
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

impl ExponentMatrix {
    /// Checks shape, sign, row sums and column zeros of a raw matrix.
    pub fn validate(raw: &[Vec<i64>], options: ValidateOptions) -> Result<Self, MapError> {
        let size = raw.len();
        if size < 3 || raw.iter().any(|r| r.len() != size) {
            return Err(MapError::Shape {
                rows: size,
                lengths: raw.iter().map(Vec::len).collect(),
            });
        }
        let mut entries = Vec::with_capacity(size * size);
        for (i, row) in raw.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < 0 {
                    return Err(MapError::NegativeEntry { row: i, col: j, value: v });
                }
                entries.push(v as u64);
            }
        }
        Self::from_entries(size, entries, options.normalize)
    }

    /// Strict constructor from unsigned rows (no normalization).
    pub fn new(rows: &[Vec<u64>]) -> Result<Self, MapError> {
        let size = rows.len();
        if size < 3 || rows.iter().any(|r| r.len() != size) {
            return Err(MapError::Shape {
                rows: size,
                lengths: rows.iter().map(Vec::len).collect(),
            });
        }
        Self::from_entries(size, rows.concat(), false)
    }

    fn from_entries(size: usize, mut entries: Vec<u64>, normalize: bool) -> Result<Self, MapError> {
        let sums: Vec<u64> = entries.chunks(size).map(|r| r.iter().sum()).collect();
        if sums.iter().any(|&s| s != sums[0]) {
            return Err(MapError::NotStochastic { sums });
        }
        let mut degree = sums[0];
        for j in 0..size {
            let min = (0..size).map(|i| entries[i * size + j]).min().unwrap();
            if min > 0 {
                if !normalize {
                    return Err(MapError::CommonFactor { column: j });
                }
                for i in 0..size {
                    entries[i * size + j] -= min;
                }
                degree -= min;
            }
        }
        if degree == 0 {
            return Err(MapError::DegreeZero);
        }
        Ok(ExponentMatrix { size, degree, entries })
    }

    /// Builds a matrix already known to satisfy every invariant.
    pub(crate) fn from_valid_parts(size: usize, degree: u64, entries: Vec<u64>) -> Self {
        debug_assert_eq!(entries.len(), size * size);
        ExponentMatrix { size, degree, entries }
    }

    pub fn identity(n: usize) -> Self {
        phi_nd(n, 1)
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.size - 1
    }

    /// Common monomial degree.
    pub fn d(&self) -> u64 {
        self.degree
    }

    /// Number of rows, `n + 1`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.entries.chunks(self.size)
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.rows().map(<[u64]>::to_vec).collect()
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        let rows = self.to_rows();
        IntMatrix::from_rows(&rows)
    }

    pub fn determinant(&self) -> BigInt {
        self.to_int_matrix().determinant()
    }

    /// A monomial map is birational iff `|det A| = d`.
    pub fn is_birational(&self) -> bool {
        self.determinant().abs() == BigInt::from(self.degree)
    }

    fn require_birational(&self) -> Result<(), MapError> {
        let det = self.determinant().abs();
        if det != BigInt::from(self.degree) {
            return Err(MapError::NotBirational {
                det_abs: det.to_string(),
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// Exponent matrix of the inverse map.
    ///
    /// Takes `A⁻¹` and adds to each column the negative of its minimum, which
    /// makes every entry non-negative and puts a zero in every column. The
    /// result is integral for every birational input; anything else is a bug
    /// and surfaces as [`MapError::IntegralityFailure`].
    pub fn invert(&self) -> Result<ExponentMatrix, MapError> {
        self.require_birational()?;
        let n = self.size;
        let mut inv = self
            .to_int_matrix()
            .rational_inverse()
            .expect("birational matrices are nonsingular");
        for j in 0..n {
            let shift: BigRational = -inv.column_min(j);
            for i in 0..n {
                inv[(i, j)] += &shift;
            }
        }
        let Some(int) = inv.to_integer() else {
            return Err(MapError::IntegralityFailure(format!(
                "{:?} gives non-integral {:?}",
                self, inv
            )));
        };
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(int[(i, j)].to_u64().ok_or(MapError::Overflow)?);
            }
        }
        let degree: u64 = entries[..n].iter().sum();
        if degree == 0 || entries.chunks(n).any(|r| r.iter().sum::<u64>() != degree) {
            return Err(MapError::IntegralityFailure(format!(
                "inverse of {:?} has unequal row sums",
                self
            )));
        }
        Ok(ExponentMatrix { size: n, degree, entries })
    }

    /// Degree `d'` of the inverse map.
    pub fn inverse_degree(&self) -> Result<u64, MapError> {
        Ok(self.invert()?.d())
    }

    /// Projective degrees `(1, d, d', 1)` of a Cremona map of `P^3`.
    pub fn multidegrees(&self) -> Result<MultidegreeVector, MapError> {
        if self.n() != 3 {
            return Err(MapError::UnsupportedDimension { expected: 3, found: self.n() });
        }
        let dprime = self.inverse_degree()?;
        Ok(MultidegreeVector(vec![1, self.degree, dprime, 1]))
    }

    /// Matrix with rows reordered by `row_perm` and columns by `col_perm`:
    /// entry `(i, j)` of the result is entry `(row_perm[i], col_perm[j])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> ExponentMatrix {
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for &r in row_perm {
            for &c in col_perm {
                entries.push(self.entry(r, c));
            }
        }
        ExponentMatrix { size: n, degree: self.degree, entries }
    }

    /// Lexicographically least matrix (rows concatenated) in the orbit under
    /// independent row and column permutations.
    ///
    /// For a fixed column permutation the least row arrangement is the sorted
    /// one, so only the `(n+1)!` column permutations need to be scanned.
    pub fn canonical_form(&self) -> ExponentMatrix {
        let n = self.size;
        let mut best: Option<Vec<u64>> = None;
        let mut scratch: Vec<Vec<u64>> = vec![vec![0; n]; n];
        for perm in permutations(n) {
            for (i, row) in scratch.iter_mut().enumerate() {
                for (j, &c) in perm.iter().enumerate() {
                    row[j] = self.entry(i, c);
                }
            }
            scratch.sort_unstable();
            let is_better = match &best {
                None => true,
                Some(b) => scratch.iter().flatten().lt(b.iter()),
            };
            if is_better {
                best = Some(scratch.concat());
            }
        }
        ExponentMatrix { size: n, degree: self.degree, entries: best.unwrap() }
    }

    /// Whether this map equals `phi_{n,d}` up to coordinate and variable permutations.
    pub fn is_extremal_class(&self) -> bool {
        self.canonical_form() == phi_nd(self.n(), self.degree).canonical_form()
    }

    /// Exponent matrix of `self ∘ inner`, i.e. the normalized product `self · inner`.
    pub fn compose(&self, inner: &ExponentMatrix) -> Result<ExponentMatrix, MapError> {
        if self.size != inner.size {
            return Err(MapError::SizeMismatch(self.size, inner.size));
        }
        let n = self.size;
        let mut product = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let term = a.checked_mul(inner.entry(k, j)).ok_or(MapError::Overflow)?;
                    product[i * n + j] =
                        product[i * n + j].checked_add(term).ok_or(MapError::Overflow)?;
                }
            }
        }
        Self::from_entries(n, product, true)
    }

    /// Number of zero entries in each column.
    pub fn column_zero_counts(&self) -> Vec<usize> {
        (0..self.size)
            .map(|j| (0..self.size).filter(|&i| self.entry(i, j) == 0).count())
            .collect()
    }

    /// Whether the coordinate subspace `x_i = x_j = 0` lies in the base locus,
    /// i.e. every component monomial involves `x_i` or `x_j`.
    pub fn contains_line(&self, i: usize, j: usize) -> bool {
        self.rows().all(|r| r[i] > 0 || r[j] > 0)
    }

    /// Pairs `(i, j)`, `i < j`, of coordinate lines in the base locus.
    pub fn base_lines(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in i + 1..self.size {
                if self.contains_line(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Case of the three-dimensional degree-bound argument, checked in order:
    /// a column with exactly one zero, then two concurrent base lines, then
    /// two skew base lines, then a single base line.
    pub fn classify_case(&self) -> Result<CaseLabel, MapError> {
        if self.n() != 3 {
            return Err(MapError::UnsupportedDimension { expected: 3, found: self.n() });
        }
        if self.degree < 2 {
            return Err(MapError::DegreeTooSmall);
        }
        self.require_birational()?;
        if let Some(column) = self.column_zero_counts().iter().position(|&c| c == 1) {
            return Ok(CaseLabel::CaseI { column });
        }
        let lines = self.base_lines();
        let concurrent = lines.iter().enumerate().any(|(a, &(i, j))| {
            lines[a + 1..]
                .iter()
                .any(|&(k, l)| i == k || i == l || j == k || j == l)
        });
        match lines.len() {
            0 => Err(MapError::EmptyBaseLocus(format!("{:?}", self))),
            _ if concurrent => Ok(CaseLabel::CaseII { lines }),
            1 => Ok(CaseLabel::CaseIV { lines }),
            _ => Ok(CaseLabel::CaseIII { lines }),
        }
    }
}

/// The map `(x_0^d : x_0^{d-1} x_1 : … : x_{n-1}^{d-1} x_n)`.
pub fn phi_nd(n: usize, d: u64) -> ExponentMatrix {
    assert!(n >= 2 && d >= 1, "phi_nd needs n >= 2 and d >= 1");
    let size = n + 1;
    let mut entries = vec![0u64; size * size];
    entries[0] = d;
    for i in 1..size {
        entries[i * size + i - 1] = d - 1;
        entries[i * size + i] = 1;
    }
    ExponentMatrix { size, degree: d, entries }
}

impl fmt::Debug for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl fmt::Display for ExponentMatrix {
    /// Plain-text matrix document: a header line `n d`, then one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n(), self.degree)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for ExponentMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExponentMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<u64>>::deserialize(deserializer)?;
        ExponentMatrix::new(&rows).map_err(serde::de::Error::custom)
    }
}
