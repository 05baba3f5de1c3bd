//! Acceptance criteria for the library and the `cremona` binary.
//!
//! Every check is exact. Run with `--nocapture` to see one PASS/FAIL line
//! per criterion.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use cremona::enumeration::{brute_force_classes, enumerate_classes, verify_bounds, VerifyOptions};
use cremona::invariants::{johnson_check, k_vector, l_matrix, linear_system_matrix, mu_inferred, KMode};
use cremona::map::{phi_nd, CaseLabel, ExponentMatrix};
use cremona::poly::SparsePoly;
use cremona::sample::{random_birational, round_trip_failure};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const SEED: u64 = 20_240_611;

fn classes(n: usize, d: u64) -> Vec<ExponentMatrix> {
    enumerate_classes(n, d, 4).classes.into_iter().collect()
}

fn within(start: Instant, limit: Duration, what: &str) -> Check {
    let elapsed = start.elapsed();
    ensure!(elapsed < limit, "{what} took {elapsed:?}, limit {limit:?}");
    Ok(())
}

fn ac1_extremal_degrees() -> Check {
    let start = Instant::now();
    for d in 2..=12u64 {
        let dprime = phi_nd(3, d).inverse_degree().map_err(|e| e.to_string())?;
        ensure!(dprime == d * d - d + 1, "d = {d}: d' = {dprime}");
    }
    within(start, Duration::from_secs(1), "extremal degrees")
}

fn ac2_example_reproduction() -> Check {
    let start = Instant::now();
    for d in 2..=8u64 {
        let r = johnson_check(&phi_nd(3, d), KMode::Checked).map_err(|e| e.to_string())?;
        ensure!(r.k == [d, d, 2, d], "d = {d}: k = {:?}", r.k);
        ensure!(r.l == [0, 1, 0, 0, 0, 0], "d = {d}: l = {:?}", r.l);
        ensure!(r.mu_inferred == 0, "d = {d}: mu = {}", r.mu_inferred);
        let target = 3 * d as i64 + 1;
        ensure!(r.lhs == target && r.rhs == target, "d = {d}: lhs {} rhs {}", r.lhs, r.rhs);
        ensure!(r.case == Some(CaseLabel::CaseIV { lines: vec![(0, 2)] }), "d = {d}: {:?}", r.case);
        ensure!(r.extremal, "d = {d}: not extremal");
    }
    within(start, Duration::from_secs(1), "worked example")
}

fn ac3_exhaustive_theorem() -> Check {
    for d in 2..=5u64 {
        let s = verify_bounds(3, d, VerifyOptions { jobs: 4, oracle: false });
        ensure!(s.violations.is_empty(), "d = {d}: violations {:?}", s.violations);
        ensure!(
            s.extremal_classes == vec![phi_nd(3, d).canonical_form()],
            "d = {d}: extremal classes {:?}",
            s.extremal_classes
        );
        ensure!(s.max_dprime == d * d - d + 1, "d = {d}: max d' {}", s.max_dprime);
    }
    Ok(())
}

fn ac4_equivalence_chain() -> Check {
    for d in 2..=5u64 {
        let target = 3 * d as i64 + 1;
        let extremal_form = phi_nd(3, d).canonical_form();
        for m in classes(3, d) {
            let dprime = m.inverse_degree().map_err(|e| e.to_string())?;
            let k = k_vector(&m, KMode::Fast).map_err(|e| e.to_string())?;
            let l = l_matrix(&m).map_err(|e| e.to_string())?;
            let lhs = k.iter().sum::<u64>() as i64 - l.iter().sum::<u64>() as i64;
            let case = m.classify_case().map_err(|e| e.to_string())?;
            let chain = [
                dprime == d * d - d + 1,
                lhs == target,
                case.is_case_iv(),
                m.is_extremal_class(),
                m.canonical_form() == extremal_form,
            ];
            ensure!(chain.iter().all(|&b| b == chain[0]), "d = {d}: {m:?} gives {chain:?}");
        }
    }
    Ok(())
}

fn ac5_composition_involution() -> Check {
    for d in 1..=3 {
        for m in classes(3, d) {
            if let Some(reason) = round_trip_failure(&m) {
                return Err(format!("{m:?}: {reason}"));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let d = rng.gen_range(1..=6);
        let m = random_birational(3, d, &mut rng, 10_000_000).ok_or("sampling failed")?;
        if let Some(reason) = round_trip_failure(&m) {
            return Err(format!("{m:?}: {reason}"));
        }
    }
    Ok(())
}

fn ac6_plane_case() -> Check {
    let start = Instant::now();
    for d in 2..=6u64 {
        let s = verify_bounds(2, d, VerifyOptions { jobs: 4, oracle: false });
        ensure!(s.violations.is_empty(), "d = {d}: {:?}", s.violations);
        ensure!(s.min_dprime == d && s.max_dprime == d, "d = {d}: d' in {}..{}", s.min_dprime, s.max_dprime);
        for m in classes(2, d) {
            ensure!(m.inverse_degree() == Ok(d), "{m:?}");
        }
    }
    within(start, Duration::from_secs(60), "plane case")
}

fn ac7_four_dimensional_quadrics() -> Check {
    let start = Instant::now();
    let s = verify_bounds(4, 2, VerifyOptions { jobs: 4, oracle: false });
    ensure!(s.bound == 4, "bound {}", s.bound);
    ensure!(s.violations.is_empty(), "{:?}", s.violations);
    ensure!(s.extremal_classes == vec![phi_nd(4, 2).canonical_form()], "{:?}", s.extremal_classes);
    within(start, Duration::from_secs(60), "n = 4, d = 2")
}

fn ac8_oracle_agreement() -> Check {
    for d in 2..=4 {
        for m in classes(3, d) {
            let fast = k_vector(&m, KMode::Fast).map_err(|e| e.to_string())?;
            let oracle = k_vector(&m, KMode::Oracle).map_err(|e| e.to_string())?;
            ensure!(fast == oracle, "{m:?}: fast {fast:?} oracle {oracle:?}");
        }
    }
    let worked: [&[[u64; 4]; 4]; 3] = [
        &[[0, 1, 1, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]],
        &[[3, 0, 0, 0], [2, 1, 0, 0], [0, 1, 1, 1], [0, 0, 2, 1]],
        &[[1, 0, 4, 0], [2, 3, 0, 0], [0, 0, 3, 2], [0, 2, 0, 3]],
    ];
    for rows in worked {
        let m = ExponentMatrix::new(&rows.map(|r| r.to_vec())).map_err(|e| e.to_string())?;
        k_vector(&m, KMode::Checked).map_err(|e| e.to_string())?;
    }
    for d in 2..=8u32 {
        let x0 = SparsePoly::var(4, 0);
        let x1 = SparsePoly::var(4, 1);
        let p = &x0.pow(d - 1) * &(&x0 + &x1);
        let sf = p.squarefree_part().map_err(|e| e.to_string())?;
        ensure!(sf.total_degree() == Ok(2), "d = {d}: {sf}");
    }
    Ok(())
}

fn ac9_linear_system() -> Check {
    for d in 1..=3 {
        for m in classes(3, d) {
            let c = linear_system_matrix(&m).map_err(|e| e.to_string())?;
            ensure!(c == m.to_int_matrix().transpose(), "{m:?}");
            ensure!(c.determinant() != BigInt::from(0), "{m:?}: singular linear system");
        }
    }
    Ok(())
}

fn ac10_nonnegativity_and_base_lines() -> Check {
    for d in 2..=4 {
        for m in classes(3, d) {
            let mu = mu_inferred(&m).map_err(|e| e.to_string())?;
            ensure!(mu >= 0, "{m:?}: mu = {mu}");
            let lines: u64 = l_matrix(&m).map_err(|e| e.to_string())?.iter().sum();
            ensure!(lines >= 1, "{m:?}: no base line");
        }
    }
    for d in ["2", "3", "4"] {
        let out = Command::new(env!("CARGO_BIN_EXE_cremona"))
            .args(["enumerate", "--n", "3", "--d", d, "--jobs", "4", "--oracle"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.code() == Some(0), "enumerate d = {d} exited {:?}", out.status.code());
    }
    Ok(())
}

fn ac11_pruning_and_determinism() -> Check {
    for (n, d) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let pruned: BTreeSet<ExponentMatrix> = enumerate_classes(n, d, 1).classes;
        let brute = brute_force_classes(n, d);
        ensure!(pruned == brute, "({n}, {d}): {} pruned vs {} brute force", pruned.len(), brute.len());
    }
    for (n, d) in [("3", "4"), ("4", "2"), ("2", "6")] {
        let outputs: Vec<Vec<u8>> = ["1", "2", "8"]
            .iter()
            .map(|jobs| {
                Command::new(env!("CARGO_BIN_EXE_cremona"))
                    .args(["enumerate", "--n", n, "--d", d, "--jobs", jobs])
                    .output()
                    .expect("run cremona")
                    .stdout
            })
            .collect();
        ensure!(!outputs[0].is_empty(), "({n}, {d}): empty output");
        ensure!(outputs.iter().all(|o| *o == outputs[0]), "({n}, {d}): summaries differ across --jobs");
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("AC1 extremal degrees d = 2..12", ac1_extremal_degrees),
        ("AC2 phi_{3,d} invariants d = 2..8", ac2_example_reproduction),
        ("AC3 exhaustive bound n = 3, d = 2..5", ac3_exhaustive_theorem),
        ("AC4 equality-case equivalence chain", ac4_equivalence_chain),
        ("AC5 composition and involution", ac5_composition_involution),
        ("AC6 plane case d' = d, d = 2..6", ac6_plane_case),
        ("AC7 n = 4, d = 2 bound and uniqueness", ac7_four_dimensional_quadrics),
        ("AC8 k-vector oracle agreement", ac8_oracle_agreement),
        ("AC9 linear system is the transpose", ac9_linear_system),
        ("AC10 mu >= 0 and a base line exists", ac10_nonnegativity_and_base_lines),
        ("AC11 pruning soundness and determinism", ac11_pruning_and_determinism),
    ];
    println!();
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("PASS  {name}  ({:.2?})", start.elapsed()),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

/// Class counts, frozen after agreement with the unpruned search.
#[test]
fn class_count_baselines() {
    let expected = [
        ((2, 2), 2),
        ((2, 3), 2),
        ((2, 5), 4),
        ((2, 6), 2),
        ((3, 1), 1),
        ((3, 2), 4),
        ((3, 3), 37),
        ((3, 4), 149),
        ((3, 5), 486),
        ((4, 2), 12),
    ];
    for ((n, d), count) in expected {
        assert_eq!(enumerate_classes(n, d, 4).classes.len(), count, "({n}, {d})");
    }
}
