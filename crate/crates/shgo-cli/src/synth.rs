//! Deterministic synthetic inputs shared by the verification suites, the
//! benchmark, and the acceptance tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use shgo_core::engine::Shell;

/// Fixed center separation for benchmark geometries, in bohr: close enough
/// that nothing screens away, far enough that no integral degenerates.
pub const BENCH_SEPARATION: f64 = 1.5;

/// Benchmark exponent range; log-spaced samples of `[0.1, 10]` cover
/// diffuse-to-tight without producing negligible pair weights at 1.5 bohr.
pub const BENCH_EXP_RANGE: (f64, f64) = (0.1, 10.0);

/// Log-uniform draw from `[lo, hi]`.
pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..=hi.ln()).exp()
}

/// Uniform direction on the unit sphere.
pub fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        ];
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Uniform point in the cube `[-half, half]³`.
pub fn random_point(rng: &mut ChaCha8Rng, half: f64) -> [f64; 3] {
    [
        rng.gen_range(-half..=half),
        rng.gen_range(-half..=half),
        rng.gen_range(-half..=half),
    ]
}

/// A normalized single-primitive shell with a log-uniform exponent.
pub fn random_primitive_shell(
    rng: &mut ChaCha8Rng,
    lmax: usize,
    exp_range: (f64, f64),
    center: [f64; 3],
) -> Shell {
    let l = rng.gen_range(0..=lmax);
    let alpha = log_uniform(rng, exp_range.0, exp_range.1);
    Shell::contracted(l, center, &[(alpha, 1.0)])
}

/// A normalized contracted shell with 1–3 primitives, log-uniform exponents
/// and coefficients of mixed sign in [−1, 1] \ {≈0}.
pub fn random_contracted_shell(
    rng: &mut ChaCha8Rng,
    lmax: usize,
    exp_range: (f64, f64),
    center: [f64; 3],
) -> Shell {
    let l = rng.gen_range(0..=lmax);
    let nprim = rng.gen_range(1..=3);
    let prims: Vec<(f64, f64)> = (0..nprim)
        .map(|_| {
            let a = log_uniform(rng, exp_range.0, exp_range.1);
            let mut c: f64 = rng.gen_range(-1.0..=1.0);
            if c.abs() < 0.1 {
                c = 0.1f64.copysign(c); // keep coefficients away from zero
            }
            (a, c)
        })
        .collect();
    Shell::contracted(l, center, &prims)
}

/// Benchmark shell: `nprim` primitives log-spaced over [`BENCH_EXP_RANGE`]
/// with equal raw weights (normalization handles the rest).
pub fn bench_shell(l: usize, nprim: usize, center: [f64; 3]) -> Shell {
    let (lo, hi) = BENCH_EXP_RANGE;
    let prims: Vec<(f64, f64)> = (0..nprim)
        .map(|i| {
            let f = if nprim == 1 {
                0.5
            } else {
                i as f64 / (nprim - 1) as f64
            };
            ((lo.ln() + f * (hi.ln() - lo.ln())).exp(), 1.0)
        })
        .collect();
    Shell::contracted(l, center, &prims)
}

/// The two benchmark centers, [`BENCH_SEPARATION`] apart along z.
pub fn bench_pair_centers() -> [[f64; 3]; 2] {
    [[0.0, 0.0, 0.0], [0.0, 0.0, BENCH_SEPARATION]]
}

/// Four benchmark centers: a regular tetrahedron with edge
/// [`BENCH_SEPARATION`], so all six pair distances are equal.
pub fn bench_quartet_centers() -> [[f64; 3]; 4] {
    let a = BENCH_SEPARATION;
    [
        [0.0, 0.0, 0.0],
        [a, 0.0, 0.0],
        [0.5 * a, 0.75f64.sqrt() * a, 0.0],
        [0.5 * a, a / 12f64.sqrt(), (2f64 / 3.0).sqrt() * a],
    ]
}

/// Three-atom toy system (bent, all pair distances distinct) with s, p and d
/// shells of mixed contraction: small enough for quadratic-cost checks,
/// asymmetric enough that no accidental symmetry hides an error.
pub fn toy_system() -> (Vec<Shell>, Vec<shgo_core::engine::Center>) {
    let c0 = [0.0, 0.0, 0.0];
    let c1 = [0.0, 1.1, 1.3];
    let c2 = [1.7, -0.4, 0.2];
    let shells = vec![
        Shell::contracted(0, c0, &[(5.0, 0.6), (0.9, 0.5)]),
        Shell::contracted(1, c0, &[(1.4, 1.0)]),
        Shell::contracted(0, c1, &[(1.1, 1.0)]),
        Shell::contracted(2, c1, &[(0.8, 0.7), (2.3, 0.4)]),
        Shell::contracted(1, c2, &[(0.6, 1.0)]),
    ];
    let nuclei = vec![
        shgo_core::engine::Center {
            position: c0,
            charge: 2.0,
        },
        shgo_core::engine::Center {
            position: c1,
            charge: 1.0,
        },
        shgo_core::engine::Center {
            position: c2,
            charge: 3.0,
        },
    ];
    (shells, nuclei)
}
