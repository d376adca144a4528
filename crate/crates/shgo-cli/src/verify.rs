//! `shgo verify`: deterministic cross-validation suites.
//!
//! Every check draws its cases from a seed-keyed stream, reduces each
//! deviation to a multiple of the check's tolerance, and reports PASS/FAIL.
//! Reports carry no wall-clock fields, so a given (suite, seed, lmax)
//! renders byte-identically — regressions show up as plain text diffs. On
//! failure the worst case's full inputs are serialized to standard error as
//! a single-line JSON replay bundle and the exit code is 1.

use crate::synth::{self, random_point, random_unit};
use crate::tolerances::*;
use crate::{Suite, VerifyArgs};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use shgo_core::cgto;
use shgo_core::engine::{self, EngineOptions, Shell};
use shgo_core::harmonics::{solid_harmonic, solid_harmonic_table, translation_coefficients};

/// Screening disabled: the suites compare exact evaluations.
fn exact() -> EngineOptions {
    EngineOptions {
        screening_threshold: None,
    }
}

/// Outcome of one named check.
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// Pre-formatted headline statistic (e.g. `worst_over_tol=3.210e-3`).
    pub stat: String,
    pub pass: bool,
    /// JSON replay bundle for the worst case, present when the check failed.
    pub replay: Option<String>,
}

#[derive(Serialize)]
struct ReplayShell {
    l: usize,
    center: [f64; 3],
    exponents: Vec<f64>,
    coefficients: Vec<f64>,
}

impl From<&Shell> for ReplayShell {
    fn from(s: &Shell) -> Self {
        ReplayShell {
            l: s.l,
            center: s.center,
            exponents: s.exponents.clone(),
            coefficients: s.coefficients.clone(),
        }
    }
}

/// Everything needed to reproduce a failing comparison by hand: the check,
/// the seed it was drawn from, the fully evaluated shells (coefficients
/// include normalization), and both values.
#[derive(Serialize)]
struct ReplayBundle {
    check: String,
    seed: u64,
    case_index: usize,
    kind: String,
    shells: Vec<ReplayShell>,
    point: Option<[f64; 3]>,
    got: f64,
    reference: f64,
    deviation_over_tolerance: f64,
}

/// Accumulates the worst deviation (as a multiple of tolerance) and its
/// replay bundle.
struct Worst {
    dev: f64,
    bundle: Option<ReplayBundle>,
}

impl Worst {
    fn new() -> Self {
        Worst {
            dev: 0.0,
            bundle: None,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn update(
        &mut self,
        dev: f64,
        check: &str,
        seed: u64,
        case_index: usize,
        kind: &str,
        shells: &[&Shell],
        point: Option<[f64; 3]>,
        got: f64,
        reference: f64,
    ) {
        if dev > self.dev {
            self.dev = dev;
            let bundle = ReplayBundle {
                check: check.to_string(),
                seed,
                case_index,
                kind: kind.to_string(),
                shells: shells.iter().map(|&s| s.into()).collect(),
                point,
                got,
                reference,
                deviation_over_tolerance: dev,
            };
            if dev > 0.25 {
                // near-tolerance cases are worth a look even when they pass
                log::debug!(
                    "near-tolerance case: {}",
                    serde_json::to_string(&bundle).expect("replay bundle serializes")
                );
            }
            self.bundle = Some(bundle);
        }
    }

    fn outcome(self, name: &'static str, cases: usize) -> CheckOutcome {
        let pass = self.dev <= 1.0;
        CheckOutcome {
            name,
            cases,
            stat: format!("worst_over_tol={:.3e}", self.dev),
            pass,
            replay: if pass {
                None
            } else {
                self.bundle
                    .map(|b| serde_json::to_string(&b).expect("replay bundle serializes"))
            },
        }
    }
}

/// Deviation of a one-electron value from its reference, as a multiple of
/// the applicable tolerance (relative above `ONE_ELECTRON_SMALL`, absolute
/// floor below it).
fn one_electron_dev(got: f64, reference: f64) -> f64 {
    let diff = (got - reference).abs();
    if reference.abs() < ONE_ELECTRON_SMALL {
        diff / ONE_ELECTRON_ABS
    } else {
        diff / (reference.abs() * ONE_ELECTRON_REL)
    }
}

// ---------------------------------------------------------------------------
// Check 1: one-electron dual route (fast engine vs Cartesian reference)
// ---------------------------------------------------------------------------

pub struct OneElectronConfig {
    pub cases: usize,
    pub lmax: usize,
    pub exp_range: (f64, f64),
    pub sep_max: f64,
    pub seed: u64,
    /// Debug hook: perturb the first computed overlap entry so the failure
    /// path (FAIL line + replay bundle + exit 1) can be exercised on demand.
    pub corrupt: bool,
}

pub fn check_one_electron(cfg: &OneElectronConfig) -> CheckOutcome {
    const NAME: &str = "one_electron_dual_route";
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x0e01));
    let opts = exact();
    let mut worst = Worst::new();
    for case in 0..cfg.cases {
        let ca = random_point(&mut rng, 1.5);
        let dir = random_unit(&mut rng);
        // every 10th pair is exactly concentric: the collapsed branch
        let sep = if case % 10 == 0 {
            0.0
        } else {
            rng.gen_range(0.0..=cfg.sep_max)
        };
        let cb = [
            ca[0] + sep * dir[0],
            ca[1] + sep * dir[1],
            ca[2] + sep * dir[2],
        ];
        let sa = synth::random_primitive_shell(&mut rng, cfg.lmax, cfg.exp_range, ca);
        let sb = synth::random_primitive_shell(&mut rng, cfg.lmax, cfg.exp_range, cb);
        // charge location: sometimes exactly on a center (singular
        // alignment), sometimes on the bond axis, otherwise anywhere nearby
        let c = match case % 5 {
            0 => ca,
            1 => [
                ca[0] + 1.7 * sep * dir[0],
                ca[1] + 1.7 * sep * dir[1],
                ca[2] + 1.7 * sep * dir[2],
            ],
            _ => random_point(&mut rng, 2.5),
        };

        let mut fast_s = engine::overlap_block(&sa, &sb, &opts);
        if cfg.corrupt && case == 0 {
            fast_s[0][0] += 1e-6;
        }
        let ref_s = cgto::overlap_block(&sa, &sb);
        let fast_v = engine::nuclear_block_single(&sa, &sb, c, &opts);
        let ref_v = cgto::nuclear_block_single(&sa, &sb, c);
        for ma in 0..fast_s.len() {
            for mb in 0..fast_s[ma].len() {
                worst.update(
                    one_electron_dev(fast_s[ma][mb], ref_s[ma][mb]),
                    NAME,
                    cfg.seed,
                    case,
                    "overlap",
                    &[&sa, &sb],
                    None,
                    fast_s[ma][mb],
                    ref_s[ma][mb],
                );
                worst.update(
                    one_electron_dev(fast_v[ma][mb], ref_v[ma][mb]),
                    NAME,
                    cfg.seed,
                    case,
                    "nuclear",
                    &[&sa, &sb],
                    Some(c),
                    fast_v[ma][mb],
                    ref_v[ma][mb],
                );
            }
        }
    }
    worst.outcome(NAME, cfg.cases)
}

// ---------------------------------------------------------------------------
// Check 2: repulsion dual route
// ---------------------------------------------------------------------------

pub struct EriConfig {
    pub cases: usize,
    pub lmax: usize,
    pub seed: u64,
}

pub fn check_eri(cfg: &EriConfig) -> CheckOutcome {
    const NAME: &str = "eri_dual_route";
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x0e02));
    let opts = exact();
    let exp_range = (0.08, 12.0);
    let mut worst = Worst::new();
    for case in 0..cfg.cases {
        let mut centers = [
            random_point(&mut rng, 2.0),
            random_point(&mut rng, 2.0),
            random_point(&mut rng, 2.0),
            random_point(&mut rng, 2.0),
        ];
        if case % 10 == 0 {
            // all four on one center: the fully collapsed branch
            centers = [centers[0]; 4];
        } else if case % 7 == 3 {
            // ket pair on top of the bra pair: zero-separation composite
            centers[2] = centers[0];
            centers[3] = centers[1];
        }
        let sa = synth::random_contracted_shell(&mut rng, cfg.lmax, exp_range, centers[0]);
        let sb = synth::random_contracted_shell(&mut rng, cfg.lmax, exp_range, centers[1]);
        let sc = synth::random_contracted_shell(&mut rng, cfg.lmax, exp_range, centers[2]);
        let sd = synth::random_contracted_shell(&mut rng, cfg.lmax, exp_range, centers[3]);
        let fast = engine::eri::eri_block(&sa, &sb, &sc, &sd, &opts);
        let slow = cgto::eri_block(&sa, &sb, &sc, &sd);
        for (ia, ba) in fast.iter().enumerate() {
            for (ib, bb) in ba.iter().enumerate() {
                for (ic, bc) in bb.iter().enumerate() {
                    for (id, &got) in bc.iter().enumerate() {
                        let reference = slow[ia][ib][ic][id];
                        let tol = ERI_ABS.max(reference.abs() * ERI_REL);
                        worst.update(
                            (got - reference).abs() / tol,
                            NAME,
                            cfg.seed,
                            case,
                            "eri",
                            &[&sa, &sb, &sc, &sd],
                            None,
                            got,
                            reference,
                        );
                    }
                }
            }
        }
    }
    worst.outcome(NAME, cfg.cases)
}

// ---------------------------------------------------------------------------
// Check 3: analytic one-electron paths against direct 3-D quadrature
// ---------------------------------------------------------------------------

pub struct QuadratureConfig {
    pub cases: usize,
    pub lmax: usize,
    pub seed: u64,
}

pub fn check_quadrature_closure(cfg: &QuadratureConfig) -> CheckOutcome {
    const NAME: &str = "quadrature_closure";
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x0e03));
    let opts = exact();
    // moderate exponents keep the quadrature reach radius (and cost) sane
    let exp_range = (0.2, 5.0);
    let mut worst = Worst::new();
    for case in 0..cfg.cases {
        let ca = random_point(&mut rng, 1.5);
        let cb = random_point(&mut rng, 1.5);
        let sa = synth::random_contracted_shell(&mut rng, cfg.lmax, exp_range, ca);
        let sb = synth::random_contracted_shell(&mut rng, cfg.lmax, exp_range, cb);
        let ma = rng.gen_range(-(sa.l as i32)..=sa.l as i32);
        let mb = rng.gen_range(-(sb.l as i32)..=sb.l as i32);
        let (kind, got, reference) = if case % 2 == 0 {
            let blk = engine::overlap_block(&sa, &sb, &opts);
            let q = cgto::quadrature_overlap_entry(&sa, &sb, ma, mb)
                .expect("overlap quadrature converges");
            (
                "overlap",
                blk[(ma + sa.l as i32) as usize][(mb + sb.l as i32) as usize],
                q,
            )
        } else {
            let c = random_point(&mut rng, 1.0);
            let blk = engine::nuclear_block_single(&sa, &sb, c, &opts);
            let q = cgto::quadrature_nuclear_entry(&sa, &sb, c, ma, mb)
                .expect("attraction quadrature converges");
            (
                "nuclear",
                blk[(ma + sa.l as i32) as usize][(mb + sb.l as i32) as usize],
                q,
            )
        };
        worst.update(
            (got - reference).abs() / QUADRATURE_ABS,
            NAME,
            cfg.seed,
            case,
            kind,
            &[&sa, &sb],
            None,
            got,
            reference,
        );
    }
    worst.outcome(NAME, cfg.cases)
}

// ---------------------------------------------------------------------------
// Check 4: radial kernel (Boys values) against the defining integral
// ---------------------------------------------------------------------------

pub fn check_radial_kernel() -> CheckOutcome {
    const NAME: &str = "radial_kernel_grid";
    const T_GRID: [f64; 9] = [0.0, 1e-3, 0.1, 1.0, 5.0, 20.0, 35.0, 100.0, 1000.0];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 0..=20usize {
        for &t in &T_GRID {
            let got = shgo_core::boys::boys(n, t);
            let reference =
                shgo_core::boys::boys_reference(n, t).expect("defining integral converges");
            worst = worst.max((got - reference).abs() / BOYS_ABS);
            cases += 1;
        }
    }
    let pass = worst <= 1.0;
    CheckOutcome {
        name: NAME,
        cases,
        stat: format!("worst_over_tol={worst:.3e}"),
        pass,
        replay: None,
    }
}

// ---------------------------------------------------------------------------
// Check 5: pointwise re-centering identity
// ---------------------------------------------------------------------------

pub struct TranslationConfig {
    pub lmax: usize,
    pub triples: usize,
    pub seed: u64,
}

pub fn check_translation(cfg: &TranslationConfig) -> CheckOutcome {
    const NAME: &str = "translation_identity";
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x0e05));
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for l in 0..=cfg.lmax as u32 {
        let li = l as i32;
        for _ in 0..cfg.triples {
            // Redraw near-cancelling geometry (r ≈ −t at high l): the check
            // runs at a fixed relative tolerance, so the term sum's roundoff
            // amplification κ = Σ|terms|/scale must stay bounded. A wrong
            // coefficient fails by O(1) on every draw, so the rejection
            // cannot hide one.
            let (sum, coeffs, inner, scale) = loop {
                let t = random_point(&mut rng, 2.0);
                let r = random_point(&mut rng, 2.0);
                let sum = [r[0] + t[0], r[1] + t[1], r[2] + t[2]];
                let coeffs = translation_coefficients(l, t);
                let inner = solid_harmonic_table(l, r);
                // normalize by the largest direct value of the row: the
                // identity is scale-covariant and single components cross zero
                let scale = (-li..=li)
                    .map(|m| solid_harmonic(l, m, sum).norm())
                    .fold(1e-6f64, f64::max);
                let kappa = coeffs
                    .iter()
                    .map(|per_m| {
                        per_m
                            .iter()
                            .enumerate()
                            .flat_map(|(l1, row)| {
                                row.iter().zip(&inner[l1]).map(|(w, y)| (w * y).norm())
                            })
                            .sum::<f64>()
                    })
                    .fold(0.0, f64::max)
                    / scale;
                if kappa <= TRANSLATION_KAPPA_CAP {
                    break (sum, coeffs, inner, scale);
                }
                log::debug!("translation_identity: redraw at l={l}, kappa={kappa:.3e}");
            };
            for m in -li..=li {
                let direct = solid_harmonic(l, m, sum);
                let mut recentered = num_complex::Complex64::new(0.0, 0.0);
                for (l1, row) in coeffs[(m + li) as usize].iter().enumerate() {
                    for (im1, &w) in row.iter().enumerate() {
                        if w.norm_sqr() != 0.0 {
                            recentered += w * inner[l1][im1];
                        }
                    }
                }
                worst = worst.max((direct - recentered).norm() / (scale * TRANSLATION_REL));
            }
            cases += 1;
        }
    }
    let pass = worst <= 1.0;
    CheckOutcome {
        name: NAME,
        cases,
        stat: format!("worst_over_tol={worst:.3e}"),
        pass,
        replay: None,
    }
}

// ---------------------------------------------------------------------------
// Check 6: same-center collapse (off-diagonal zeros, diagonal vs quadrature)
// ---------------------------------------------------------------------------

pub struct SameCenterConfig {
    pub lmax: usize,
}

pub fn check_same_center(cfg: &SameCenterConfig) -> CheckOutcome {
    const NAME: &str = "same_center_collapse";
    let center = [0.3, -0.2, 0.5];
    let (alpha_a, alpha_b) = (0.8, 1.3);
    let raw = |l: usize| Shell {
        l,
        center,
        exponents: vec![if l % 2 == 0 { alpha_a } else { alpha_b }],
        coefficients: vec![1.0],
    };
    let opts = exact();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for l1 in 0..=cfg.lmax {
        for l2 in 0..=cfg.lmax {
            let sa = raw(l1);
            let sb = raw(l2);
            let blk = engine::overlap_block(&sa, &sb, &opts);
            for (ia, row) in blk.iter().enumerate() {
                let ma = ia as i32 - l1 as i32;
                for (ib, &v) in row.iter().enumerate() {
                    let mb = ib as i32 - l2 as i32;
                    cases += 1;
                    if l1 == l2 && ma == mb {
                        // diagonal: certified against the defining integral
                        // for the extreme and the axial component
                        if ma.unsigned_abs() as usize == l1 || ma == 0 {
                            let q = cgto::quadrature_overlap_entry(&sa, &sb, ma, mb)
                                .expect("same-center quadrature converges");
                            worst = worst.max((v - q).abs() / (q.abs() * SAME_CENTER_DIAG_REL));
                        }
                    } else {
                        worst = worst.max(v.abs() / SAME_CENTER_OFFDIAG_ABS);
                    }
                }
            }
        }
    }
    let pass = worst <= 1.0;
    CheckOutcome {
        name: NAME,
        cases,
        stat: format!("worst_over_tol={worst:.3e}"),
        pass,
        replay: None,
    }
}

// ---------------------------------------------------------------------------
// Check 7: rigid-translation invariance on the toy system
// ---------------------------------------------------------------------------

pub fn check_invariance(seed: u64) -> CheckOutcome {
    const NAME: &str = "translational_invariance";
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x0e07));
    let shift = random_point(&mut rng, 3.0);
    let (shells, nuclei) = synth::toy_system();
    let moved_shells: Vec<Shell> = shells
        .iter()
        .map(|s| Shell {
            l: s.l,
            center: [
                s.center[0] + shift[0],
                s.center[1] + shift[1],
                s.center[2] + shift[2],
            ],
            exponents: s.exponents.clone(),
            coefficients: s.coefficients.clone(),
        })
        .collect();
    let moved_nuclei: Vec<engine::Center> = nuclei
        .iter()
        .map(|n| engine::Center {
            position: [
                n.position[0] + shift[0],
                n.position[1] + shift[1],
                n.position[2] + shift[2],
            ],
            charge: n.charge,
        })
        .collect();
    let opts = exact();

    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mats = [
        (
            engine::overlap_matrix(&shells, &opts),
            engine::overlap_matrix(&moved_shells, &opts),
        ),
        (
            engine::nuclear_matrix(&shells, &nuclei, &opts),
            engine::nuclear_matrix(&moved_shells, &moved_nuclei, &opts),
        ),
    ];
    for (base, moved) in &mats {
        let scale = base.iter().flatten().fold(0.0f64, |a, &v| a.max(v.abs()));
        for (rb, rm) in base.iter().zip(moved) {
            for (&vb, &vm) in rb.iter().zip(rm) {
                worst = worst.max((vb - vm).abs() / (scale * INVARIANCE_REL));
                cases += 1;
            }
        }
    }
    let base_eri = engine::eri::eri_tensor(&shells, &opts, true);
    let moved_eri = engine::eri::eri_tensor(&moved_shells, &opts, true);
    let scale = base_eri.data.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    for (&vb, &vm) in base_eri.data.iter().zip(&moved_eri.data) {
        worst = worst.max((vb - vm).abs() / (scale * INVARIANCE_REL));
        cases += 1;
    }
    let pass = worst <= 1.0;
    CheckOutcome {
        name: NAME,
        cases,
        stat: format!("worst_over_tol={worst:.3e}"),
        pass,
        replay: None,
    }
}

// ---------------------------------------------------------------------------
// Check 8: overlap matrices are positive definite
// ---------------------------------------------------------------------------

pub fn check_positivity() -> CheckOutcome {
    const NAME: &str = "overlap_positivity";
    let (shells, _) = synth::toy_system();
    let s = engine::overlap_matrix(&shells, &exact());
    let n = s.len();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| s[i][j]);
    let min_eig = m
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &v| a.min(v));
    CheckOutcome {
        name: NAME,
        cases: 1,
        stat: format!("min_eigenvalue={min_eig:.3e}"),
        pass: min_eig > 0.0,
        replay: None,
    }
}

// ---------------------------------------------------------------------------
// Check 9: 8-fold index symmetry with mirroring disabled
// ---------------------------------------------------------------------------

pub fn check_eri_symmetry() -> CheckOutcome {
    const NAME: &str = "eri_symmetry_8fold";
    let (shells, _) = synth::toy_system();
    // every quartet evaluated independently: agreement of the 7 mirror
    // images is a genuine cross-check, not bookkeeping
    let t = engine::eri::eri_tensor(&shells, &exact(), false);
    let n = t.dim;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = t.get(i, j, k, l);
                    for img in [
                        t.get(j, i, k, l),
                        t.get(i, j, l, k),
                        t.get(j, i, l, k),
                        t.get(k, l, i, j),
                        t.get(l, k, i, j),
                        t.get(k, l, j, i),
                        t.get(l, k, j, i),
                    ] {
                        worst = worst.max((v - img).abs() / ERI_SYMMETRY_ABS);
                    }
                }
            }
        }
    }
    let pass = worst <= 1.0;
    CheckOutcome {
        name: NAME,
        cases: n * n * n * n,
        stat: format!("worst_over_tol={worst:.3e}"),
        pass,
        replay: None,
    }
}

// ---------------------------------------------------------------------------
// Suite assembly and rendering
// ---------------------------------------------------------------------------

pub struct VerifyReport {
    pub text: String,
    pub replay: Option<String>,
    pub pass: bool,
}

pub fn run_suites(suite: Suite, seed: u64, lmax: Option<usize>, corrupt: bool) -> VerifyReport {
    // (cases, l-cap) defaults per suite; --lmax overrides every cap
    let (oe_cases, oe_l, eri_cases, eri_l, q_cases, q_l, tr_l, tr_triples, sc_l) = match suite {
        Suite::Quick => (40, 3, 10, 2, 6, 2, 4, 6, 3),
        Suite::Full => (200, 4, 100, 3, 50, 3, 6, 20, 6),
    };
    let cap = |d: usize| lmax.unwrap_or(d).min(shgo_core::io::L_MAX);

    let checks: Vec<Box<dyn FnOnce() -> CheckOutcome>> = vec![
        Box::new(move || {
            check_one_electron(&OneElectronConfig {
                cases: oe_cases,
                lmax: cap(oe_l),
                exp_range: (0.05, 50.0),
                sep_max: 5.0,
                seed,
                corrupt,
            })
        }),
        Box::new(move || {
            check_eri(&EriConfig {
                cases: eri_cases,
                lmax: cap(eri_l),
                seed,
            })
        }),
        Box::new(move || {
            check_quadrature_closure(&QuadratureConfig {
                cases: q_cases,
                lmax: cap(q_l),
                seed,
            })
        }),
        Box::new(check_radial_kernel),
        Box::new(move || {
            check_translation(&TranslationConfig {
                lmax: cap(tr_l),
                triples: tr_triples,
                seed,
            })
        }),
        Box::new(move || check_same_center(&SameCenterConfig { lmax: cap(sc_l) })),
        Box::new(move || check_invariance(seed)),
        Box::new(check_positivity),
        Box::new(check_eri_symmetry),
    ];
    let outcomes: Vec<CheckOutcome> = checks
        .into_iter()
        .map(|c| {
            let started = std::time::Instant::now();
            let o = c();
            // wall-clock stays out of the report; surface it on demand only
            log::debug!(
                "check {} finished in {:.1} ms",
                o.name,
                started.elapsed().as_secs_f64() * 1e3
            );
            o
        })
        .collect();

    let mut text = format!(
        "verify suite={} seed={} lmax={}\n",
        suite.as_str(),
        seed,
        lmax.map_or("default".to_string(), |l| l.to_string()),
    );
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let mut replay = None;
    for o in &outcomes {
        text.push_str(&format!(
            "check {:<26} cases={:>5} {:<28} {}\n",
            o.name,
            o.cases,
            o.stat,
            if o.pass { "PASS" } else { "FAIL" },
        ));
        if replay.is_none() {
            replay = o.replay.clone();
        }
    }
    let pass = passed == outcomes.len();
    text.push_str(&format!(
        "result: {} ({passed}/{} checks)\n",
        if pass { "PASS" } else { "FAIL" },
        outcomes.len(),
    ));
    VerifyReport { text, replay, pass }
}

pub fn cmd_verify(args: &VerifyArgs) -> i32 {
    let report = run_suites(args.suite, args.seed, args.lmax, args.corrupt);
    print!("{}", report.text);
    if report.pass {
        0
    } else {
        if let Some(bundle) = &report.replay {
            eprintln!("replay-bundle: {bundle}");
        }
        1
    }
}
