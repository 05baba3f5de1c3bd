//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a map from exponent vector to nonzero coefficient. The
//! fixed term order is graded lexicographic: higher total degree first, ties
//! broken lexicographically with `x_0 > x_1 > …`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigRational>) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// The polynomial `x_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(nvars, e, BigRational::one())
    }

    pub fn monomial(nvars: usize, exponent: Exponent, c: impl Into<BigRational>) -> Self {
        assert_eq!(exponent.len(), nvars, "exponent length must equal nvars");
        let mut p = Self::zero(nvars);
        p.add_term(exponent, c.into());
        p
    }

    /// Sum of `c * x^e` over the given terms; zero coefficients are dropped
    /// and repeated exponents combined.
    pub fn from_terms<I, C>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, C)>,
        C: Into<BigRational>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must equal nvars");
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exponent: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: &[u32]) -> BigRational {
        self.terms.get(exponent).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in descending graded-lexicographic order.
    pub fn terms(&self) -> Vec<(&Exponent, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }

    fn leading_term(&self) -> Option<(&Exponent, &BigRational)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    fn check_arity(&self, other: &SparsePoly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    fn check_index(&self, index: usize) -> Result<(), PolyError> {
        if index >= self.nvars {
            return Err(PolyError::IndexOutOfRange { index, nvars: self.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn multiply(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_arity(other)?;
        let mut out = SparsePoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        (0..k).fold(SparsePoly::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn derivative(&self, index: usize) -> Result<SparsePoly, PolyError> {
        self.check_index(index)?;
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[index] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[index] -= 1;
            out.add_term(e2, c * BigRational::from(BigInt::from(e[index])));
        }
        Ok(out)
    }

    /// Sets `x_index = 0`, keeping the number of variables.
    pub fn restrict_zero(&self, index: usize) -> Result<SparsePoly, PolyError> {
        self.check_index(index)?;
        Ok(SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[index] == 0)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Componentwise minimum exponent: the largest monomial dividing `self`.
    pub fn monomial_content(&self) -> Result<Exponent, PolyError> {
        let mut keys = self.terms.keys();
        let first = keys.next().ok_or(PolyError::ZeroPolynomial)?.clone();
        Ok(keys.fold(first, |acc, e| acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()))
    }

    pub fn total_degree(&self) -> Result<u64, PolyError> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn is_homogeneous(&self) -> Result<bool, PolyError> {
        let deg = self.total_degree()?;
        Ok(self.terms.keys().all(|e| e.iter().map(|&x| x as u64).sum::<u64>() == deg))
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &SparsePoly) -> Option<SparsePoly> {
        assert_eq!(self.nvars, divisor.nvars);
        let (lead_e, lead_c) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(self.nvars);
        while let Some((e, c)) = rem.leading_term() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponent = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            let step = SparsePoly::monomial(self.nvars, qe.clone(), qc.clone());
            rem = &rem - &(&step * divisor);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Scales to integer coefficients with gcd 1 and a positive leading
    /// coefficient. Zero stays zero.
    pub fn normalized(&self) -> SparsePoly {
        let Some((_, lead)) = self.leading_term() else {
            return self.clone();
        };
        let denom_lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numer_gcd = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * &denom_lcm / c.denom())));
        let mut factor = BigRational::new(denom_lcm, numer_gcd);
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn highest_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.terms.keys().any(|e| e[v] > 0))
    }

    /// Coefficients of `self` viewed as a polynomial in `x_var`, lowest power first.
    fn coeffs_in(&self, var: usize) -> Vec<SparsePoly> {
        let mut out = vec![SparsePoly::zero(self.nvars); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[var], 0) as usize;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    fn leading_coeff_in(&self, var: usize) -> SparsePoly {
        self.coeffs_in(var).pop().unwrap_or_else(|| SparsePoly::zero(self.nvars))
    }

    fn shift(&self, var: usize, k: u32) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[var] += k;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Pseudo-remainder of `self` by `divisor` in `x_var`.
    fn pseudo_rem(&self, divisor: &SparsePoly, var: usize) -> SparsePoly {
        let m = self.degree_in(var);
        let n = divisor.degree_in(var);
        let lc = divisor.leading_coeff_in(var);
        let mut r = self.clone();
        let mut e = m + 1 - n;
        while !r.is_zero() && r.degree_in(var) >= n {
            let shift = r.degree_in(var) - n;
            let lr = r.leading_coeff_in(var);
            r = &(&lc * &r) - &(&lr * &divisor.shift(var, shift));
            e -= 1;
        }
        &lc.pow(e) * &r
    }

    /// Gcd of the coefficients with respect to `x_var`.
    fn content_in(&self, var: usize) -> SparsePoly {
        self.coeffs_in(var)
            .into_iter()
            .filter(|c| !c.is_zero())
            .fold(SparsePoly::zero(self.nvars), |acc, c| gcd_inner(&acc, &c))
            .normalized()
    }

    /// Greatest common divisor, normalized as in [`SparsePoly::normalized`].
    /// `gcd(0, 0)` is zero.
    pub fn gcd(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_arity(other)?;
        Ok(gcd_inner(self, other).normalized())
    }

    /// `self / gcd(self, ∂self/∂x_0, …)`: same zero set, no repeated factors.
    pub fn squarefree_part(&self) -> Result<SparsePoly, PolyError> {
        if !self.is_homogeneous()? {
            return Err(PolyError::NotHomogeneous);
        }
        let mut g = self.clone();
        for i in 0..self.nvars {
            g = gcd_inner(&g, &self.derivative(i)?);
        }
        let g = g.normalized();
        Ok(self
            .div_exact(&g)
            .expect("gcd divides its argument")
            .normalized())
    }
}

/// Recursive gcd on the highest variable present, with a subresultant
/// remainder sequence for the univariate step. Result is defined up to a
/// nonzero rational factor.
fn gcd_inner(p: &SparsePoly, q: &SparsePoly) -> SparsePoly {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        return SparsePoly::one(p.nvars);
    }
    let var = p.highest_var().max(q.highest_var()).expect("non-constant");
    let (dp, dq) = (p.degree_in(var), q.degree_in(var));
    if dp == 0 {
        return gcd_inner(p, &q.content_in(var));
    }
    if dq == 0 {
        return gcd_inner(&p.content_in(var), q);
    }
    let cp = p.content_in(var);
    let cq = q.content_in(var);
    let pp = p.div_exact(&cp).expect("content divides");
    let qp = q.div_exact(&cq).expect("content divides");
    let content = gcd_inner(&cp, &cq);
    let prim = subresultant_gcd(&pp, &qp, var);
    let prim = prim.div_exact(&prim.content_in(var)).expect("content divides");
    (&content * &prim).normalized()
}

fn subresultant_gcd(a: &SparsePoly, b: &SparsePoly, var: usize) -> SparsePoly {
    let nvars = a.nvars;
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = SparsePoly::one(nvars);
    let mut h = SparsePoly::one(nvars);
    loop {
        let delta = a.degree_in(var) - b.degree_in(var);
        let r = a.pseudo_rem(&b, var);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(var) == 0 {
            return SparsePoly::one(nvars);
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        g = a.leading_coeff_in(var);
        if delta > 0 {
            h = g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact");
        }
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        SparsePoly::add(self, rhs).expect("arity mismatch")
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        SparsePoly::add(self, &-rhs).expect("arity mismatch")
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.multiply(rhs).expect("arity mismatch")
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().into_iter().enumerate() {
            let mut factors = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    _ => factors.push(format!("x{i}^{x}")),
                }
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = factors.join("*");
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}
