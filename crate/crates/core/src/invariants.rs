//! Geometric invariants of the surface `D = V(f)` attached to a Cremona map
//! of `P^3`, where `f` is the sum of the map's component monomials.
//!
//! The inverse degree satisfies
//!
//! ```text
//! d' = d² − 4d − μ(D_h) + Σ k_i − Σ ℓ_{i,j}
//! ```
//!
//! with `k_i` the degree of the reduced curve `D ∩ {x_i = 0}`, `ℓ_{i,j}` the
//! indicator of the coordinate line `{x_i = x_j = 0}` lying on `D`, and
//! `μ(D_h)` the total Milnor number of a general plane section. `d'` is
//! computed independently by inversion, so `μ(D_h)` is recovered from the
//! identity rather than from the singularities of `D`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{InvariantError, MapError, PolyError};
use crate::linalg::IntMatrix;
use crate::map::{CaseLabel, ExponentMatrix};
use crate::poly::SparsePoly;

/// Coordinate-line index pairs in the order used by [`l_matrix`].
pub const LINE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// How [`k_vector`] computes the reduced restriction degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KMode {
    /// Read off the exponent matrix.
    #[default]
    Fast,
    /// Squarefree parts of the restricted polynomials.
    Oracle,
    /// Both, failing loudly if they disagree.
    Checked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub d: u64,
    pub dprime: u64,
    pub k: [u64; 4],
    /// `ℓ_{i,j}` in [`LINE_PAIRS`] order.
    pub l: [u64; 6],
    pub mu_inferred: i64,
    /// `Σ k_i − Σ ℓ_{i,j}`.
    pub lhs: i64,
    /// `3d + 1`.
    pub rhs: i64,
    /// `d² − d + 1`.
    pub bound: u64,
    /// Absent for `d = 1`, where the case analysis does not apply.
    pub case: Option<CaseLabel>,
    pub extremal: bool,
}

impl InvariantReport {
    pub fn line_pairs(&self) -> Vec<(usize, usize)> {
        LINE_PAIRS
            .iter()
            .zip(self.l)
            .filter(|(_, l)| *l == 1)
            .map(|(p, _)| *p)
            .collect()
    }
}

fn require_p3(e: &ExponentMatrix) -> Result<(), MapError> {
    if e.n() != 3 {
        return Err(MapError::UnsupportedDimension { expected: 3, found: e.n() });
    }
    Ok(())
}

fn monomial_exponent(row: &[u64]) -> Vec<u32> {
    row.iter().map(|&a| u32::try_from(a).expect("exponent fits in u32")).collect()
}

/// `f = Σ_i x^{a_i}`, homogeneous of degree `d`.
pub fn build_f(e: &ExponentMatrix) -> SparsePoly {
    SparsePoly::from_terms(
        e.size(),
        e.rows().map(|r| (monomial_exponent(r), BigInt::from(1))),
    )
}

/// Components `x_i ∂f/∂x_i` of the toric polar map.
pub fn toric_polar(f: &SparsePoly) -> Result<Vec<SparsePoly>, PolyError> {
    if f.nvars() != 4 {
        return Err(PolyError::ArityMismatch(f.nvars(), 4));
    }
    (0..4)
        .map(|i| Ok(&SparsePoly::var(4, i) * &f.derivative(i)?))
        .collect()
}

/// Coefficient of `x^{a_j}` in the `i`-th toric polar component. Since
/// `x_i ∂(x^{a_j})/∂x_i = a_{ji} x^{a_j}`, this is the transpose of `A`: the
/// map and its toric polar map span the same linear system.
pub fn linear_system_matrix(e: &ExponentMatrix) -> Result<IntMatrix, InvariantError> {
    require_p3(e)?;
    let polar = toric_polar(&build_f(e))?;
    let monomials: Vec<Vec<u32>> = e.rows().map(monomial_exponent).collect();
    let mut c = IntMatrix::zero(4);
    for (i, comp) in polar.iter().enumerate() {
        for (j, mono) in monomials.iter().enumerate() {
            let coeff = comp.coefficient(mono);
            assert!(coeff.is_integer());
            c[(i, j)] = coeff.to_integer();
        }
    }
    Ok(c)
}

/// Reduced restriction degrees `k_i`.
///
/// The fast path relies on two facts. The monomials of `f` surviving
/// `x_i = 0` are pairwise distinct (equal rows would make `A` singular), so
/// the restriction has unit coefficients. After dividing out the monomial
/// content `x^m`, a sum of distinct monomials with positive coefficients is
/// taken to have no repeated factor, giving
/// `k_i = #{j : m_j > 0} + (d − Σ m)`. The oracle path computes the
/// squarefree part directly and exists to check this.
pub fn k_vector(e: &ExponentMatrix, mode: KMode) -> Result<[u64; 4], InvariantError> {
    require_p3(e)?;
    match mode {
        KMode::Fast => Ok(k_fast(e)),
        KMode::Oracle => k_oracle(e),
        KMode::Checked => {
            let fast = k_fast(e);
            let oracle = k_oracle(e)?;
            if fast != oracle {
                return Err(InvariantError::InternalDisagreement {
                    rows: e.to_rows(),
                    fast,
                    oracle,
                });
            }
            Ok(fast)
        }
    }
}

fn k_fast(e: &ExponentMatrix) -> [u64; 4] {
    let mut k = [0u64; 4];
    for (i, ki) in k.iter_mut().enumerate() {
        let mut min = [u64::MAX; 4];
        for row in e.rows().filter(|r| r[i] == 0) {
            for (m, &a) in min.iter_mut().zip(row) {
                *m = (*m).min(a);
            }
        }
        let linear = min.iter().filter(|&&m| m > 0).count() as u64;
        *ki = linear + (e.d() - min.iter().sum::<u64>());
    }
    k
}

fn k_oracle(e: &ExponentMatrix) -> Result<[u64; 4], InvariantError> {
    let f = build_f(e);
    let mut k = [0u64; 4];
    for (i, ki) in k.iter_mut().enumerate() {
        let restricted = f.restrict_zero(i)?;
        let content = restricted.monomial_content()?;
        let mono = SparsePoly::monomial(4, content.clone(), BigInt::from(1));
        let residual = restricted.div_exact(&mono).expect("content divides");
        let linear = content.iter().filter(|&&c| c > 0).count() as u64;
        *ki = linear + residual.squarefree_part()?.total_degree()?;
    }
    Ok(k)
}

/// `ℓ_{i,j}` in [`LINE_PAIRS`] order: 1 iff every monomial of `f` involves
/// `x_i` or `x_j`.
pub fn l_matrix(e: &ExponentMatrix) -> Result<[u64; 6], MapError> {
    require_p3(e)?;
    Ok(LINE_PAIRS.map(|(i, j)| u64::from(e.contains_line(i, j))))
}

/// `d² − 4d − μ + Σ k − Σ ℓ`, evaluated literally.
pub fn d_prime_from_geometry(d: u64, mu: i64, k: &[u64; 4], l: &[u64; 6]) -> i64 {
    let d = d as i64;
    let sum_k: i64 = k.iter().map(|&x| x as i64).sum();
    let sum_l: i64 = l.iter().map(|&x| x as i64).sum();
    d * d - 4 * d - mu + sum_k - sum_l
}

fn mu_from_parts(d: u64, dprime: u64, k: &[u64; 4], l: &[u64; 6]) -> i64 {
    // d_prime_from_geometry is affine in mu with slope -1
    d_prime_from_geometry(d, 0, k, l) - dprime as i64
}

/// Total Milnor number of a general plane section, recovered from `d'`.
pub fn mu_inferred(e: &ExponentMatrix) -> Result<i64, InvariantError> {
    require_p3(e)?;
    if e.d() < 2 {
        return Err(MapError::DegreeTooSmall.into());
    }
    let dprime = e.inverse_degree()?;
    let k = k_vector(e, KMode::Fast)?;
    let l = l_matrix(e)?;
    let mu = mu_from_parts(e.d(), dprime, &k, &l);
    if mu < 0 {
        return Err(InvariantError::NegativeMilnorSum { rows: e.to_rows(), mu });
    }
    Ok(mu)
}

/// Full invariant report, checking `Σk − Σℓ ≤ 3d + 1`, `d' ≤ d² − d + 1`,
/// and that the equality cases coincide with the extremal class.
pub fn johnson_check(e: &ExponentMatrix, mode: KMode) -> Result<InvariantReport, InvariantError> {
    require_p3(e)?;
    let d = e.d();
    let dprime = e.inverse_degree()?;
    let k = k_vector(e, mode)?;
    let l = l_matrix(e)?;
    let mu = mu_from_parts(d, dprime, &k, &l);
    if mu < 0 {
        return Err(InvariantError::NegativeMilnorSum { rows: e.to_rows(), mu });
    }
    let case = if d >= 2 { Some(e.classify_case()?) } else { None };
    let extremal = e.is_extremal_class();
    let lhs = k.iter().sum::<u64>() as i64 - l.iter().sum::<u64>() as i64;
    let rhs = 3 * d as i64 + 1;
    let bound = d * d - d + 1;

    let violation = |detail: String| InvariantError::BoundViolation { rows: e.to_rows(), detail };
    if lhs > rhs {
        return Err(violation(format!("sum k - sum l = {lhs} > {rhs}")));
    }
    if dprime > bound {
        return Err(violation(format!("d' = {dprime} > {bound}")));
    }
    let equalities = [
        dprime == bound,
        lhs == rhs,
        case.as_ref().map_or(extremal, CaseLabel::is_case_iv),
        extremal,
    ];
    if equalities.iter().any(|&b| b != equalities[0]) {
        return Err(violation(format!(
            "equality cases disagree: d'=bound {}, lhs=rhs {}, case IV {}, extremal {}",
            equalities[0], equalities[1], equalities[2], equalities[3]
        )));
    }
    Ok(InvariantReport {
        d,
        dprime,
        k,
        l,
        mu_inferred: mu,
        lhs,
        rhs,
        bound,
        case,
        extremal,
    })
}
