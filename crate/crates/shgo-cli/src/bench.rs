//! `shgo bench`: times both engines on identical synthetic tasks and emits
//! CSV plus a human-readable report.
//!
//! Methodology: fixed two-center (four-center for repulsion) geometry at
//! 1.5 bohr separation, log-spaced exponents in [0.1, 10], screening off in
//! both engines so the comparison is algorithm-vs-algorithm. Each row times
//! the hot kernel only — an untimed warm-up call first populates every lazy
//! table and decides how many inner iterations are needed to lift fast
//! kernels above timer resolution. The median of `reps` repetitions is
//! reported alongside min/max; a row whose engines disagree beyond
//! [`BENCH_AGREEMENT_ABS`] voids the benchmark (exit 1).

use crate::compute::in_pool;
use crate::synth::{bench_pair_centers, bench_quartet_centers, bench_shell};
use crate::tolerances::{BENCH_AGREEMENT_ABS, SCALING_FIT_MIN_L};
use crate::{BenchArgs, BenchKind};
use shgo_core::cgto;
use shgo_core::engine::{self, Center, EngineOptions};
use shgo_core::error::Result;
use std::io::Write;
use std::time::Instant;

/// One benchmark row: timings in nanoseconds per evaluation.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub l: usize,
    pub p: usize,
    pub kind: BenchKind,
    pub t_shgo_ns: u64,
    pub t_shgo_min: u64,
    pub t_shgo_max: u64,
    pub t_cgto_ns: u64,
    pub t_cgto_min: u64,
    pub t_cgto_max: u64,
    /// Speed-up of the solid-harmonic engine: t_cgto / t_shgo.
    pub ratio: f64,
    pub max_abs_diff: f64,
}

/// (median, min, max) per-evaluation nanoseconds over `reps` measurements.
/// The warm-up call is excluded from the statistics; fast tasks are looped
/// `inner` times per measurement so each sample spans ≥ ~2 ms.
fn time_task<T>(reps: u32, mut task: impl FnMut() -> T) -> (u64, u64, u64) {
    let warm_start = Instant::now();
    std::hint::black_box(task());
    let warm_ns = warm_start.elapsed().as_nanos().max(1);
    let inner = (2_000_000f64 / warm_ns as f64).ceil().clamp(1.0, 1e6) as u32;
    let mut samples: Vec<u64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..inner {
                std::hint::black_box(task());
            }
            (start.elapsed().as_nanos() as u64 / inner as u64).max(1)
        })
        .collect();
    samples.sort_unstable();
    (
        samples[samples.len() / 2],
        samples[0],
        samples[samples.len() - 1],
    )
}

fn max_abs_diff2(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

fn max_abs_diff4(a: &[Vec<Vec<Vec<f64>>>], b: &[Vec<Vec<Vec<f64>>>]) -> f64 {
    let mut worst = 0.0f64;
    for (ba, bb) in a.iter().zip(b) {
        for (ca, cb) in ba.iter().zip(bb) {
            for (da, db) in ca.iter().zip(cb) {
                for (&x, &y) in da.iter().zip(db) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    worst
}

/// Times both engines at one angular momentum.
fn bench_l(kind: BenchKind, l: usize, nprim: usize, reps: u32) -> BenchRow {
    let opts = EngineOptions {
        screening_threshold: None,
    };
    let (t_shgo, t_cgto, diff) = match kind {
        BenchKind::Nuclear => {
            let [c0, c1] = bench_pair_centers();
            let sa = bench_shell(l, nprim, c0);
            let sb = bench_shell(l, nprim, c1);
            let nuclei = [
                Center {
                    position: c0,
                    charge: 1.0,
                },
                Center {
                    position: c1,
                    charge: 1.0,
                },
            ];
            let fast = engine::nuclear_block(&sa, &sb, &nuclei, &opts);
            let slow = cgto::nuclear_block(&sa, &sb, &nuclei);
            let diff = max_abs_diff2(&fast, &slow);
            (
                time_task(reps, || engine::nuclear_block(&sa, &sb, &nuclei, &opts)),
                time_task(reps, || cgto::nuclear_block(&sa, &sb, &nuclei)),
                diff,
            )
        }
        BenchKind::Eri => {
            let centers = bench_quartet_centers();
            let shells: Vec<_> = centers.iter().map(|&c| bench_shell(l, nprim, c)).collect();
            let (sa, sb, sc, sd) = (&shells[0], &shells[1], &shells[2], &shells[3]);
            let fast = engine::eri::eri_block(sa, sb, sc, sd, &opts);
            let slow = cgto::eri_block(sa, sb, sc, sd);
            let diff = max_abs_diff4(&fast, &slow);
            (
                time_task(reps, || engine::eri::eri_block(sa, sb, sc, sd, &opts)),
                time_task(reps, || cgto::eri_block(sa, sb, sc, sd)),
                diff,
            )
        }
    };
    BenchRow {
        l,
        p: nprim,
        kind,
        t_shgo_ns: t_shgo.0,
        t_shgo_min: t_shgo.1,
        t_shgo_max: t_shgo.2,
        t_cgto_ns: t_cgto.0,
        t_cgto_min: t_cgto.1,
        t_cgto_max: t_cgto.2,
        ratio: t_cgto.0 as f64 / t_shgo.0 as f64,
        max_abs_diff: diff,
    }
}

/// All rows l = 0..=lmax for one kind.
pub fn run_rows(kind: BenchKind, lmax: usize, nprim: usize, reps: u32) -> Vec<BenchRow> {
    (0..=lmax)
        .map(|l| {
            let row = bench_l(kind, l, nprim, reps);
            log::debug!(
                "l={l}: t_shgo={} ns, t_cgto={} ns, ratio={:.2}",
                row.t_shgo_ns,
                row.t_cgto_ns,
                row.ratio
            );
            row
        })
        .collect()
}

/// Least-squares exponents p of t ∝ l^p for both engines over rows with
/// l ≥ `min_l` (needs at least two such rows).
pub fn fit_exponents(rows: &[BenchRow], min_l: usize) -> Option<(f64, f64)> {
    let pts: Vec<&BenchRow> = rows.iter().filter(|r| r.l >= min_l.max(1)).collect();
    if pts.len() < 2 {
        return None;
    }
    let slope = |ts: Vec<f64>| {
        let xs: Vec<f64> = pts.iter().map(|r| (r.l as f64).ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ts.iter().sum::<f64>() / n;
        let cov: f64 = xs.iter().zip(&ts).map(|(x, y)| (x - mx) * (y - my)).sum();
        let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        cov / var
    };
    let p_shgo = slope(pts.iter().map(|r| (r.t_shgo_ns as f64).ln()).collect());
    let p_cgto = slope(pts.iter().map(|r| (r.t_cgto_ns as f64).ln()).collect());
    Some((p_shgo, p_cgto))
}

/// CSV with the fixed schema `l,p,kind,t_shgo_ns,t_cgto_ns,ratio,max_abs_diff`.
pub fn write_csv<W: Write>(mut w: W, rows: &[BenchRow]) -> std::io::Result<()> {
    writeln!(w, "l,p,kind,t_shgo_ns,t_cgto_ns,ratio,max_abs_diff")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{:.6},{:.3e}",
            r.l,
            r.p,
            r.kind.as_str(),
            r.t_shgo_ns,
            r.t_cgto_ns,
            r.ratio,
            r.max_abs_diff,
        )?;
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    let rows = in_pool(Some(args.threads), || {
        run_rows(args.kind, args.lmax, args.nprim, args.reps)
    });

    let mut csv = Vec::new();
    write_csv(&mut csv, &rows).expect("writing to memory cannot fail");
    std::fs::write(&args.out, &csv)?;

    // human-readable report: measured medians with spread, the speed-up
    // ratio, and — anchored at l = 2 where both engines do comparable work —
    // the pure operation-count models (quadratic- vs sextic-class growth in
    // l) next to the measurements they idealize
    println!(
        "bench kind={} nprim={} reps={} threads={}",
        args.kind.as_str(),
        args.nprim,
        args.reps,
        args.threads,
    );
    let anchor = rows.iter().find(|r| r.l == 2);
    println!(
        "{:>2} {:>14} {:>24} {:>14} {:>24} {:>9} {:>12} {:>12} {:>12}",
        "l",
        "t_shgo_ns",
        "[min..max]",
        "t_cgto_ns",
        "[min..max]",
        "ratio",
        "max_diff",
        "model_l2_ns",
        "model_l6_ns",
    );
    for r in &rows {
        let (m2, m6) = match (anchor, r.l >= 2) {
            (Some(a), true) => {
                let x = r.l as f64 / 2.0;
                (
                    format!("{:.0}", a.t_shgo_ns as f64 * x.powi(2)),
                    format!("{:.0}", a.t_cgto_ns as f64 * x.powi(6)),
                )
            }
            _ => ("-".to_string(), "-".to_string()),
        };
        println!(
            "{:>2} {:>14} {:>24} {:>14} {:>24} {:>9.2} {:>12.3e} {:>12} {:>12}",
            r.l,
            r.t_shgo_ns,
            format!("[{}..{}]", r.t_shgo_min, r.t_shgo_max),
            r.t_cgto_ns,
            format!("[{}..{}]", r.t_cgto_min, r.t_cgto_max),
            r.ratio,
            r.max_abs_diff,
            m2,
            m6,
        );
    }
    if let Some((p_shgo, p_cgto)) = fit_exponents(&rows, SCALING_FIT_MIN_L) {
        println!(
            "scaling fit (l >= {SCALING_FIT_MIN_L}): t_shgo ~ l^{p_shgo:.2}, t_cgto ~ l^{p_cgto:.2}, exponent gap {:.2}",
            p_cgto - p_shgo,
        );
    }
    println!("wrote {}", args.out.display());

    // thread-scaling probe: assembly-level parallelism measured separately
    // so the single-threaded kernel ratios above stay clean
    if args.threads > 1 {
        let probe = |n: usize| {
            in_pool(Some(n), || {
                let [c0, c1] = bench_pair_centers();
                let shells: Vec<_> = (0..=args.lmax)
                    .flat_map(|l| {
                        [
                            bench_shell(l, args.nprim, c0),
                            bench_shell(l, args.nprim, c1),
                        ]
                    })
                    .collect();
                let nuclei = [
                    Center {
                        position: c0,
                        charge: 1.0,
                    },
                    Center {
                        position: c1,
                        charge: 1.0,
                    },
                ];
                let opts = EngineOptions::default();
                let (t, _, _) = time_task(args.reps, || {
                    engine::nuclear_matrix(&shells, &nuclei, &opts)
                });
                t
            })
        };
        let t1 = probe(1);
        let tn = probe(args.threads);
        println!(
            "thread_scaling threads={} t1_ns={} tN_ns={} speedup={:.2}",
            args.threads,
            t1,
            tn,
            t1 as f64 / tn as f64,
        );
    }

    let worst = rows
        .iter()
        .cloned()
        .fold(0.0f64, |a, r| a.max(r.max_abs_diff));
    if worst > BENCH_AGREEMENT_ABS {
        eprintln!(
            "engines disagree: max_abs_diff {worst:.3e} exceeds {BENCH_AGREEMENT_ABS:.1e}; benchmark void"
        );
        return Ok(1);
    }
    Ok(0)
}
