//! Exact integer and rational linear algebra for small square matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::LinalgError;

/// Square matrix with arbitrary-precision integer entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    size: usize,
    entries: Vec<BigInt>,
}

/// Square matrix with exact rational entries. `BigRational` keeps every
/// entry reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    size: usize,
    entries: Vec<BigRational>,
}

impl IntMatrix {
    pub fn zero(size: usize) -> Self {
        assert!(size >= 1, "matrix size must be positive");
        IntMatrix {
            size,
            entries: vec![BigInt::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged or empty.
    pub fn from_rows<T, R>(rows: &[R]) -> Self
    where
        T: Into<BigInt> + Clone,
        R: AsRef<[T]>,
    {
        let size = rows.len();
        assert!(size >= 1, "matrix size must be positive");
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), size, "matrix must be square");
            entries.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.size)
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut t = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.size, other.size, "size mismatch in matrix product");
        let n = self.size;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: &BigInt) -> IntMatrix {
        IntMatrix {
            size: self.size,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// Matrix with row `skip_row` and column `skip_col` removed.
    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let n = self.size;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != skip_row) {
            for j in (0..n).filter(|&j| j != skip_col) {
                entries.push(self[(i, j)].clone());
            }
        }
        IntMatrix {
            size: n - 1,
            entries,
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.size;
        let mut a = self.entries.clone();
        let mut sign_flip = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign_flip = !sign_flip;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                    // Sylvester's identity makes this division exact.
                    a[i * n + j] = v / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = pivot;
        }
        let det = a[n * n - 1].clone();
        if sign_flip {
            -det
        } else {
            det
        }
    }

    /// Classical adjugate (transposed cofactor matrix). The 1×1 adjugate is `[[1]]`.
    pub fn adjugate(&self) -> IntMatrix {
        let n = self.size;
        if n == 1 {
            return Self::identity(1);
        }
        let mut adj = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let cofactor = self.minor(i, j).determinant();
                adj[(j, i)] = if (i + j) % 2 == 0 { cofactor } else { -cofactor };
            }
        }
        adj
    }

    /// Exact inverse `adj(M)/det(M)`.
    pub fn rational_inverse(&self) -> Result<RatMatrix, LinalgError> {
        let det = self.determinant();
        if det.is_zero() {
            return Err(LinalgError::SingularMatrix);
        }
        let adj = self.adjugate();
        Ok(RatMatrix {
            size: self.size,
            entries: adj
                .entries
                .into_iter()
                .map(|e| BigRational::new(e, det.clone()))
                .collect(),
        })
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.size + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.size + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rows().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()))
            .finish()
    }
}

impl RatMatrix {
    pub fn identity(size: usize) -> Self {
        RatMatrix::from(&IntMatrix::identity(size))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn mul_int(&self, other: &IntMatrix) -> RatMatrix {
        assert_eq!(self.size, other.size(), "size mismatch in matrix product");
        let n = self.size;
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    entries[i * n + j] += &self[(i, k)] * BigRational::from(other[(k, j)].clone());
                }
            }
        }
        RatMatrix { size: n, entries }
    }

    /// Converts to an integer matrix when every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.entries.iter().any(|e| !e.is_integer()) {
            return None;
        }
        Some(IntMatrix {
            size: self.size,
            entries: self.entries.iter().map(|e| e.to_integer()).collect(),
        })
    }

    /// Smallest entry of column `j`.
    pub fn column_min(&self, j: usize) -> BigRational {
        (0..self.size)
            .map(|i| self[(i, j)].clone())
            .min()
            .expect("non-empty matrix")
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }
}

impl From<&IntMatrix> for RatMatrix {
    fn from(m: &IntMatrix) -> Self {
        RatMatrix {
            size: m.size,
            entries: m.entries.iter().cloned().map(BigRational::from).collect(),
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.entries[i * self.size + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.entries[i * self.size + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.entries
                    .chunks(self.size)
                    .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()),
            )
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Laplace expansion along the first row; independent of Bareiss.
    fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        if n == 1 {
            return BigInt::from(m[0][0]);
        }
        let mut acc = BigInt::zero();
        for (j, &a) in m[0].iter().enumerate() {
            if a == 0 {
                continue;
            }
            let sub: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let term = BigInt::from(a) * cofactor_det(&sub);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn a_d(d: i64) -> IntMatrix {
        IntMatrix::from_rows(&[[d, 0, 0, 0], [d - 1, 1, 0, 0], [0, d - 1, 1, 0], [0, 0, d - 1, 1]])
    }

    #[test]
    fn determinant_examples() {
        for d in 1..20 {
            assert_eq!(a_d(d).determinant(), BigInt::from(d));
        }
        let c = IntMatrix::from_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        assert_eq!(c.determinant(), BigInt::from(2));
        let m = IntMatrix::from_rows(&[[0, 1, 1, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]]);
        assert_eq!(m.determinant(), BigInt::from(-2));
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(IntMatrix::identity(4).adjugate(), IntMatrix::identity(4));
        let adj = a_d(2).adjugate();
        let expected =
            IntMatrix::from_rows(&[[1, 0, 0, 0], [-1, 2, 0, 0], [1, -2, 2, 0], [-1, 2, -2, 2]]);
        assert_eq!(adj, expected);
        assert_eq!(IntMatrix::from_rows(&[[7]]).adjugate(), IntMatrix::identity(1));
        assert_eq!(IntMatrix::from_rows(&[[0]]).adjugate(), IntMatrix::identity(1));
    }

    #[test]
    fn rational_inverse_examples() {
        assert_eq!(IntMatrix::identity(4).rational_inverse().unwrap(), RatMatrix::identity(4));
        let inv = a_d(2).rational_inverse().unwrap();
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let expected = [
            [r(1, 2), r(0, 1), r(0, 1), r(0, 1)],
            [r(-1, 2), r(1, 1), r(0, 1), r(0, 1)],
            [r(1, 2), r(-1, 1), r(1, 1), r(0, 1)],
            [r(-1, 2), r(1, 1), r(-1, 1), r(1, 1)],
        ];
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(inv.row(i), row);
        }
        let singular = IntMatrix::from_rows(&[[1, 1], [1, 1]]);
        assert_eq!(singular.rational_inverse(), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn large_entries_do_not_overflow() {
        let big = IntMatrix::from_rows(&[[i64::MAX, 1], [1, i64::MAX]]);
        let expected = BigInt::from(i64::MAX) * BigInt::from(i64::MAX) - 1;
        assert_eq!(big.determinant(), expected);
    }

    fn square(max_size: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1..=max_size).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-6i64..=6, n), n))
    }

    fn stochastic() -> impl Strategy<Value = (i64, Vec<Vec<i64>>)> {
        (2usize..=5, 1i64..=6).prop_flat_map(|(n, d)| {
            let row = prop::collection::vec(0i64..=d, n - 1).prop_filter_map("row sum", move |v| {
                let s: i64 = v.iter().sum();
                (s <= d).then(|| {
                    let mut v = v;
                    v.push(d - s);
                    v
                })
            });
            (Just(d), prop::collection::vec(row, n))
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_oracle(m in square(6)) {
            prop_assert_eq!(IntMatrix::from_rows(&m).determinant(), cofactor_det(&m));
        }

        #[test]
        fn adjugate_identity(m in square(6)) {
            let m = IntMatrix::from_rows(&m);
            let det = m.determinant();
            let expected = IntMatrix::identity(m.size()).scale(&det);
            prop_assert_eq!(m.mul(&m.adjugate()), expected.clone());
            prop_assert_eq!(m.adjugate().mul(&m), expected);
        }

        #[test]
        fn transpose_and_row_swap(m in square(6), a in 0usize..6, b in 0usize..6) {
            let n = m.len();
            let (a, b) = (a % n, b % n);
            let im = IntMatrix::from_rows(&m);
            prop_assert_eq!(im.transpose().determinant(), im.determinant());
            if a != b {
                let mut swapped = m.clone();
                swapped.swap(a, b);
                prop_assert_eq!(IntMatrix::from_rows(&swapped).determinant(), -im.determinant());
            }
        }

        #[test]
        fn inverse_times_matrix_is_identity(m in square(5)) {
            let im = IntMatrix::from_rows(&m);
            match im.rational_inverse() {
                Ok(inv) => prop_assert_eq!(inv.mul_int(&im), RatMatrix::identity(im.size())),
                Err(_) => prop_assert!(im.determinant().is_zero()),
            }
        }

        #[test]
        fn stochastic_determinant_divisible_by_row_sum((d, m) in stochastic()) {
            let det = IntMatrix::from_rows(&m).determinant();
            prop_assert!((det % BigInt::from(d)).is_zero());
        }
    }
}
