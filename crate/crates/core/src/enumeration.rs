//! Exhaustive enumeration of monomial Cremona maps of `P^n` of degree `d`,
//! up to permutation of coordinates and variables.
//!
//! Rows are drawn from the compositions of `d` into `n + 1` parts. Because
//! row order does not matter and a birational matrix has distinct rows, only
//! strictly increasing row index sequences are searched. Column symmetry and
//! whatever row symmetry survives are removed by canonical-form dedup at the
//! leaves. The first row choice splits the search into independent tasks
//! whose results are merged deterministically.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::invariants::{johnson_check, KMode};
use crate::map::ExponentMatrix;

/// All vectors of `parts` non-negative integers summing to `d`, in
/// lexicographic order.
pub fn compositions(d: u64, parts: usize) -> Vec<Vec<u64>> {
    fn rec(remaining: u64, parts: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=remaining {
            prefix.push(first);
            rec(remaining - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    assert!(parts >= 1);
    let mut out = Vec::new();
    rec(d, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Largest `d'` the degree bound allows: `Σ_{k<n} (d−1)^k`.
pub fn conjectural_bound(n: usize, d: u64) -> u64 {
    (0..n as u32).map(|k| (d - 1).pow(k)).sum()
}

/// Canonical classes found by one search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSet {
    /// Leaves that passed the column and determinant checks, before dedup.
    pub raw_count: u64,
    pub classes: BTreeSet<ExponentMatrix>,
}

impl ClassSet {
    fn empty() -> Self {
        ClassSet { raw_count: 0, classes: BTreeSet::new() }
    }

    fn merge(mut self, other: ClassSet) -> ClassSet {
        self.raw_count += other.raw_count;
        self.classes.extend(other.classes);
        self
    }
}

fn accept_leaf(size: usize, d: u64, entries: &[u64]) -> Option<ExponentMatrix> {
    let columns_ok = (0..size).all(|j| (0..size).any(|i| entries[i * size + j] == 0));
    if !columns_ok {
        return None;
    }
    let m = ExponentMatrix::from_valid_parts(size, d, entries.to_vec());
    if m.determinant().abs() != BigInt::from(d) {
        return None;
    }
    Some(m)
}

struct Search<'a> {
    size: usize,
    d: u64,
    rows: &'a [Vec<u64>],
    entries: Vec<u64>,
    // per column: does the partial matrix already contain a zero there
    zero_count: Vec<usize>,
    found: ClassSet,
}

impl Search<'_> {
    fn push_row(&mut self, idx: usize) {
        for (j, &a) in self.rows[idx].iter().enumerate() {
            self.entries.push(a);
            if a == 0 {
                self.zero_count[j] += 1;
            }
        }
    }

    fn pop_row(&mut self) {
        for j in (0..self.size).rev() {
            let a = self.entries.pop().unwrap();
            if a == 0 {
                self.zero_count[j] -= 1;
            }
        }
    }

    fn run(&mut self, next: usize, depth: usize) {
        if depth == self.size {
            if let Some(m) = accept_leaf(self.size, self.d, &self.entries) {
                self.found.raw_count += 1;
                self.found.classes.insert(m.canonical_form());
            }
            return;
        }
        // every row has a nonzero entry, so it can fill at most n empty columns
        let missing = self.zero_count.iter().filter(|&&c| c == 0).count();
        let remaining = self.size - depth;
        if missing > remaining * (self.size - 1) {
            return;
        }
        for idx in next..self.rows.len() {
            if self.rows.len() - idx < remaining {
                break;
            }
            self.push_row(idx);
            self.run(idx + 1, depth + 1);
            self.pop_row();
        }
    }
}

fn search_from(n: usize, d: u64, rows: &[Vec<u64>], first: usize) -> ClassSet {
    let size = n + 1;
    let mut s = Search {
        size,
        d,
        rows,
        entries: Vec::with_capacity(size * size),
        zero_count: vec![0; size],
        found: ClassSet::empty(),
    };
    s.push_row(first);
    s.run(first + 1, 1);
    s.found
}

/// Maps `f` over `items`, in order, on `jobs` threads. A single job stays on
/// the calling thread, which is the only option on targets without threads.
fn fan_out<I: Sync, T: Send>(jobs: usize, items: &[I], f: impl Fn(&I) -> T + Sync) -> Vec<T> {
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
        .install(|| items.par_iter().map(&f).collect())
}

/// Pruned, symmetry-reduced search for all birational classes.
pub fn enumerate_classes(n: usize, d: u64, jobs: usize) -> ClassSet {
    assert!(n >= 2 && d >= 1, "enumeration needs n >= 2 and d >= 1");
    let rows = compositions(d, n + 1);
    let firsts: Vec<usize> = (0..rows.len()).collect();
    fan_out(jobs, &firsts, |&first| search_from(n, d, &rows, first))
        .into_iter()
        .fold(ClassSet::empty(), ClassSet::merge)
}

/// Delivers every birational class of `(n, d)` exactly once, as its
/// canonical form, in ascending order. Returns the number of classes.
pub fn enumerate_maps<F>(n: usize, d: u64, jobs: usize, mut callback: F) -> usize
where
    F: FnMut(&ExponentMatrix),
{
    let found = enumerate_classes(n, d, jobs);
    for m in &found.classes {
        callback(m);
    }
    found.classes.len()
}

/// Unpruned reference: every ordered tuple of compositions.
pub fn brute_force_classes(n: usize, d: u64) -> BTreeSet<ExponentMatrix> {
    let size = n + 1;
    let rows = compositions(d, size);
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; size];
    let mut entries = Vec::with_capacity(size * size);
    loop {
        entries.clear();
        for &i in &idx {
            entries.extend_from_slice(&rows[i]);
        }
        if let Some(m) = accept_leaf(size, d, &entries) {
            out.insert(m.canonical_form());
        }
        // odometer increment
        let mut pos = size;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < rows.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// A class that failed the bound check, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rows: Vec<Vec<u64>>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub n: usize,
    pub d: u64,
    /// The `d'` bound checked against (exact value for `n = 2`).
    pub bound: u64,
    pub raw_count: u64,
    pub class_count: usize,
    pub extremal_classes: Vec<ExponentMatrix>,
    pub violations: Vec<Violation>,
    /// Counts per case label; only populated for `n = 3`, `d ≥ 2`.
    pub case_histogram: BTreeMap<String, usize>,
    pub max_dprime: u64,
    pub min_dprime: u64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub jobs: usize,
    /// Cross-check the fast `k_i` computation against the polynomial oracle.
    pub oracle: bool,
}

struct Outcome {
    dprime: Option<u64>,
    case: Option<&'static str>,
    violation: Option<String>,
}

fn check_class(m: &ExponentMatrix, options: VerifyOptions) -> Outcome {
    let (n, d) = (m.n(), m.d());
    let bound = conjectural_bound(n, d);
    if n == 3 {
        let mode = if options.oracle { KMode::Checked } else { KMode::Fast };
        return match johnson_check(m, mode) {
            Ok(report) => Outcome {
                dprime: Some(report.dprime),
                case: report.case.as_ref().map(|c| c.name()),
                violation: None,
            },
            Err(err) => Outcome {
                dprime: m.inverse_degree().ok(),
                case: None,
                violation: Some(err.to_string()),
            },
        };
    }
    match m.inverse_degree() {
        Ok(dprime) => {
            let violation = if n == 2 && dprime != d {
                Some(format!("d' = {dprime} differs from d = {d}"))
            } else if dprime > bound {
                Some(format!("d' = {dprime} > {bound}"))
            } else if m.invert().ok().and_then(|b| b.invert().ok()).as_ref() != Some(m) {
                Some("inverse is not an involution".to_string())
            } else {
                None
            };
            Outcome { dprime: Some(dprime), case: None, violation }
        }
        Err(err) => Outcome { dprime: None, case: None, violation: Some(err.to_string()) },
    }
}

/// Enumerates `(n, d)` and checks every class against the degree bound.
/// Violations are collected, never raised.
pub fn verify_bounds(n: usize, d: u64, options: VerifyOptions) -> EnumerationSummary {
    verify_class_set(n, d, &enumerate_classes(n, d, options.jobs), options)
}

/// Bound checks over an already enumerated class set.
pub fn verify_class_set(
    n: usize,
    d: u64,
    found: &ClassSet,
    options: VerifyOptions,
) -> EnumerationSummary {
    let classes: Vec<&ExponentMatrix> = found.classes.iter().collect();
    let outcomes = fan_out(options.jobs, &classes, |m| check_class(m, options));
    summarize(n, d, found.raw_count, &classes, &outcomes)
}

fn summarize(
    n: usize,
    d: u64,
    raw_count: u64,
    classes: &[&ExponentMatrix],
    outcomes: &[Outcome],
) -> EnumerationSummary {
    let bound = conjectural_bound(n, d);
    let mut case_histogram = BTreeMap::new();
    if n == 3 && d >= 2 {
        for name in ["CaseI", "CaseII", "CaseIII", "CaseIV"] {
            case_histogram.insert(name.to_string(), 0);
        }
    }
    let mut summary = EnumerationSummary {
        n,
        d,
        bound,
        raw_count,
        class_count: classes.len(),
        extremal_classes: Vec::new(),
        violations: Vec::new(),
        case_histogram,
        max_dprime: 0,
        min_dprime: 0,
    };
    let mut min = u64::MAX;
    for (m, outcome) in classes.iter().zip(outcomes) {
        if let Some(dp) = outcome.dprime {
            summary.max_dprime = summary.max_dprime.max(dp);
            min = min.min(dp);
            if dp == bound {
                summary.extremal_classes.push((*m).clone());
            }
        }
        if let Some(case) = outcome.case {
            *summary.case_histogram.entry(case.to_string()).or_insert(0) += 1;
        }
        if let Some(reason) = &outcome.violation {
            summary.violations.push(Violation { rows: m.to_rows(), reason: reason.clone() });
        }
    }
    summary.min_dprime = if min == u64::MAX { 0 } else { min };
    summary
}

/// Writes one JSON array of rows per line.
pub fn write_dump<'a, W, I>(mut out: W, classes: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a ExponentMatrix>,
{
    for m in classes {
        let line = serde_json::to_string(&m.to_rows()).map_err(io::Error::other)?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::phi_nd;

    #[test]
    fn composition_examples() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(2, 4).len(), 10);
        assert_eq!(compositions(3, 4).len(), 20);
        let c = compositions(4, 3);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        assert!(c.iter().all(|r| r.iter().sum::<u64>() == 4));
    }

    #[test]
    fn bounds() {
        for d in 1..10 {
            assert_eq!(conjectural_bound(2, d), d);
            assert_eq!(conjectural_bound(3, d), d * d - d + 1);
        }
        assert_eq!(conjectural_bound(4, 2), 4);
    }

    #[test]
    fn identity_is_the_only_degree_one_class() {
        for n in 2..5 {
            let found = enumerate_classes(n, 1, 2);
            assert_eq!(found.classes.len(), 1);
            let only = found.classes.iter().next().unwrap();
            assert_eq!(only, &ExponentMatrix::identity(n).canonical_form());
        }
    }

    #[test]
    fn pruned_matches_brute_force_small() {
        for (n, d) in [(2, 2), (2, 3), (3, 2)] {
            assert_eq!(enumerate_classes(n, d, 1).classes, brute_force_classes(n, d), "({n}, {d})");
        }
    }

    #[test]
    fn callback_sees_sorted_classes() {
        let mut seen = Vec::new();
        let count = enumerate_maps(3, 2, 2, |m| seen.push(m.clone()));
        assert_eq!(count, seen.len());
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        assert!(seen.iter().all(|m| m.canonical_form() == *m && m.is_birational()));
    }

    #[test]
    fn verify_small_cases() {
        let s = verify_bounds(3, 2, VerifyOptions { jobs: 2, oracle: true });
        assert!(s.violations.is_empty());
        assert_eq!(s.extremal_classes, vec![phi_nd(3, 2).canonical_form()]);
        assert_eq!(s.max_dprime, 3);
        let s = verify_bounds(2, 3, VerifyOptions { jobs: 1, oracle: false });
        assert!(s.violations.is_empty());
        assert_eq!((s.min_dprime, s.max_dprime), (3, 3));
        assert!(s.case_histogram.is_empty());
    }

    #[test]
    fn dump_format() {
        let mut buf = Vec::new();
        write_dump(&mut buf, [&phi_nd(2, 2)]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "[[2,0,0],[1,1,0],[0,1,1]]\n");
    }
}
