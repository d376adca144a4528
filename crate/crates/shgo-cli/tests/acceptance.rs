//! The release gate: one test per acceptance criterion, each printing a
//! single `ACCEPTANCE <n> <name>: PASS|FAIL` line (visible under
//! `--nocapture`; cargo's own per-test lines mirror them otherwise).
//!
//! A shared lock serializes the criteria so the wall-clock budgets and the
//! timing-based benchmark criteria are measured on an otherwise idle
//! process. Tolerances are the ones wired into `shgo_cli::tolerances`; the
//! checks themselves are the production verify/bench code paths, so the
//! gate exercises exactly what `shgo verify` and `shgo bench` ship.

use shgo_cli::bench::{fit_exponents, run_rows};
use shgo_cli::compute::in_pool;
use shgo_cli::tolerances::{BENCH_AGREEMENT_ABS, SCALING_FIT_MIN_L, SCALING_GAP_MIN};
use shgo_cli::verify::{
    check_eri, check_eri_symmetry, check_invariance, check_one_electron, check_positivity,
    check_quadrature_closure, check_radial_kernel, check_same_center, check_translation, EriConfig,
    OneElectronConfig, QuadratureConfig, SameCenterConfig, TranslationConfig,
};
use shgo_cli::BenchKind;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

static GATE: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    // a poisoned lock only means an earlier criterion failed; the rest of
    // the gate should still run and report
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

/// Fixed seed so the gate is deterministic run to run; the underlying
/// checks hold for any seed (the verify suites take `--seed`).
const SEED: u64 = 1;

fn conclude(n: usize, name: &str, pass: bool, detail: String) {
    println!(
        "ACCEPTANCE {n} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {n} ({name}) failed: {detail}");
}

#[test]
fn c1_one_electron_dual_route_within_tolerance_and_budget() {
    let _g = serial();
    let budget = Duration::from_secs(10);
    let started = Instant::now();
    let outcome = check_one_electron(&OneElectronConfig {
        cases: 200,
        lmax: 4,
        exp_range: (0.05, 50.0),
        sep_max: 5.0,
        seed: SEED,
        corrupt: false,
    });
    let elapsed = started.elapsed();
    conclude(
        1,
        "one-electron dual route",
        outcome.pass && elapsed < budget,
        format!(
            "pairs={} {} elapsed={:.2?} (budget {budget:?})",
            outcome.cases, outcome.stat, elapsed
        ),
    );
}

#[test]
fn c2_repulsion_dual_route_within_tolerance_and_budget() {
    let _g = serial();
    let budget = Duration::from_secs(60);
    let started = Instant::now();
    let outcome = check_eri(&EriConfig {
        cases: 100,
        lmax: 3,
        seed: SEED,
    });
    let elapsed = started.elapsed();
    conclude(
        2,
        "repulsion dual route",
        outcome.pass && elapsed < budget,
        format!(
            "quartets={} {} elapsed={:.2?} (budget {budget:?})",
            outcome.cases, outcome.stat, elapsed
        ),
    );
}

#[test]
fn c3_one_electron_matches_direct_quadrature() {
    let _g = serial();
    let outcome = check_quadrature_closure(&QuadratureConfig {
        cases: 50,
        lmax: 3,
        seed: SEED,
    });
    conclude(
        3,
        "quadrature closure",
        outcome.pass,
        format!("cases={} {}", outcome.cases, outcome.stat),
    );
}

#[test]
fn c4_radial_kernel_matches_defining_integral() {
    let _g = serial();
    let outcome = check_radial_kernel();
    conclude(
        4,
        "radial kernel grid",
        outcome.pass,
        format!("cases={} {}", outcome.cases, outcome.stat),
    );
}

#[test]
fn c5_recentering_identity_holds_pointwise() {
    let _g = serial();
    let outcome = check_translation(&TranslationConfig {
        lmax: 6,
        triples: 20,
        seed: SEED,
    });
    conclude(
        5,
        "re-centering identity",
        outcome.pass,
        format!("cases={} {}", outcome.cases, outcome.stat),
    );
}

#[test]
fn c6_same_center_collapse_structure() {
    let _g = serial();
    let outcome = check_same_center(&SameCenterConfig { lmax: 6 });
    conclude(
        6,
        "same-center collapse",
        outcome.pass,
        format!("entries={} {}", outcome.cases, outcome.stat),
    );
}

#[test]
fn c7_geometric_invariants_hold() {
    let _g = serial();
    let invariance = check_invariance(SEED);
    let positivity = check_positivity();
    let symmetry = check_eri_symmetry();
    conclude(
        7,
        "invariance, positivity, repulsion symmetry",
        invariance.pass && positivity.pass && symmetry.pass,
        format!(
            "invariance {} | positivity {} | symmetry {}",
            invariance.stat, positivity.stat, symmetry.stat
        ),
    );
}

#[test]
fn c8_nuclear_speedup_curve_and_row_agreement() {
    let _g = serial();
    let budget = Duration::from_secs(300);
    let dir = tempfile::tempdir().expect("tempdir");
    let csv_path = dir.path().join("bench.csv");
    let started = Instant::now();
    // through the binary: the criterion is about what `shgo bench` reports
    // (single-threaded is its default)
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_shgo"))
        .args([
            "bench", "--kind", "nuclear", "--lmax", "8", "--nprim", "10", "--reps", "5",
        ])
        .arg("--out")
        .arg(&csv_path)
        .output()
        .expect("bench subprocess runs");
    let elapsed = started.elapsed();
    assert!(
        output.status.success(),
        "bench exited with {:?}\n{}",
        output.status,
        String::from_utf8_lossy(&output.stderr)
    );
    let report = String::from_utf8(output.stdout).expect("report is UTF-8");
    // the report must show the measured curve and the operation-count
    // growth models side by side
    assert!(
        report.contains("model_l2_ns") && report.contains("model_l6_ns"),
        "report lacks the growth-model columns:\n{report}"
    );

    let csv = std::fs::read_to_string(&csv_path).expect("CSV written");
    let mut ratios_from_2 = Vec::new();
    let mut worst_diff = 0.0f64;
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let l: usize = f[0].parse().expect("l column");
        let ratio: f64 = f[5].parse().expect("ratio column");
        let diff: f64 = f[6].parse().expect("diff column");
        worst_diff = worst_diff.max(diff);
        if l >= 2 {
            ratios_from_2.push(ratio);
        }
        rows += 1;
    }
    assert_eq!(rows, 9, "expected one row per l = 0..=8");
    let all_ge_one = ratios_from_2.iter().all(|&r| r >= 1.0);
    let non_decreasing = ratios_from_2.windows(2).all(|w| w[1] >= w[0]);
    conclude(
        8,
        "nuclear speed-up curve",
        all_ge_one && non_decreasing && worst_diff <= BENCH_AGREEMENT_ABS && elapsed < budget,
        format!(
            "ratios(l=2..8)={ratios_from_2:.2?} worst_diff={worst_diff:.3e} elapsed={:.2?} (budget {budget:?})",
            elapsed
        ),
    );
}

#[test]
fn c9_scaling_exponent_gap() {
    let _g = serial();
    // one pool with one thread, exactly like the binary's default
    let rows = in_pool(Some(1), || run_rows(BenchKind::Nuclear, 10, 10, 5));
    let worst_diff = rows.iter().fold(0.0f64, |a, r| a.max(r.max_abs_diff));
    let (p_shgo, p_cgto) =
        fit_exponents(&rows, SCALING_FIT_MIN_L).expect("enough rows above the fit window floor");
    let gap = p_cgto - p_shgo;
    conclude(
        9,
        "scaling exponent gap",
        worst_diff <= BENCH_AGREEMENT_ABS && gap >= SCALING_GAP_MIN,
        format!(
            "t_shgo~l^{p_shgo:.2} t_cgto~l^{p_cgto:.2} gap={gap:.2} (need >= {SCALING_GAP_MIN}) worst_diff={worst_diff:.3e}"
        ),
    );
}
