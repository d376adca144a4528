//! Brute-force quadrature used as a first-principles oracle.
//!
//! Nothing here is performance-tuned: these routines exist so the analytic
//! integral paths can be checked against the literal defining integrals.
//!
//! * [`adaptive_gk`] — adaptive 7/15-point Gauss–Kronrod on an interval.
//! * [`sphere_quadrature`] — Gauss–Legendre × trapezoid product rule over
//!   the unit sphere (exact for spherical polynomials of bounded degree,
//!   spectrally convergent for smooth integrands).
//! * [`integrate_radial_angular`] — ∫ w(s)·[∮ f(c + s·r̂) dΩ] ds with an
//!   adaptive radial integral and an order-doubling angular rule. Centering
//!   the shells on a Coulomb singularity and choosing w(s) = s turns the
//!   singular 3-D integrand into a bounded one, so no substitution tricks
//!   are needed.

use crate::error::{Error, Result};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

/// 15-point Kronrod abscissae on [-1, 1] (symmetric; only x >= 0 listed).
const XK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
/// Kronrod weights matching `XK`.
const WK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
/// 7-point Gauss weights for the embedded rule (nodes are XK[1], XK[3], ...).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss–Kronrod 7/15 panel: returns (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut resk = 0.0;
    let mut resg = 0.0;
    for i in 0..8 {
        let fsum = if i == 7 {
            f(c)
        } else {
            f(c - h * XK[i]) + f(c + h * XK[i])
        };
        resk += WK[i] * fsum;
        if i % 2 == 1 {
            resg += WG[i / 2] * fsum;
        }
    }
    resk *= h;
    resg *= h;
    // Scaled error heuristic from QUADPACK: the raw difference is usually a
    // large overestimate once the panel is resolved.
    let err = ((resk - resg).abs() * 200.0)
        .powf(1.5)
        .min((resk - resg).abs());
    (resk, err.max(f64::EPSILON * resk.abs()))
}

/// Adaptive Gauss–Kronrod integration of `f` over [a, b] to an absolute
/// tolerance. Returns the value and the accumulated error estimate.
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<(f64, f64)> {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        depth: usize,
        whole: (f64, f64),
    ) -> Result<(f64, f64)> {
        if whole.1 <= tol || whole.1 <= f64::EPSILON * whole.0.abs() {
            return Ok(whole);
        }
        if depth == 0 {
            return Err(Error::QuadratureNoConvergence {
                requested: tol,
                achieved: whole.1,
            });
        }
        let m = 0.5 * (a + b);
        let left = gk15(f, a, m);
        let right = gk15(f, m, b);
        let l = recurse(f, a, m, 0.5 * tol, depth - 1, left)?;
        let r = recurse(f, m, b, 0.5 * tol, depth - 1, right)?;
        Ok((l.0 + r.0, l.1 + r.1))
    }
    recurse(f, a, b, abs_tol, 48, gk15(f, a, b))
}

/// Gauss–Legendre nodes and weights on [-1, 1], cached per order.
pub fn gauss_legendre(n: usize) -> std::sync::Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: Lazy<Mutex<HashMap<usize, std::sync::Arc<(Vec<f64>, Vec<f64>)>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    let mut cache = CACHE.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut xs = vec![0.0; n];
            let mut ws = vec![0.0; n];
            for i in 0..n.div_ceil(2) {
                // Chebyshev initial guess, then Newton on P_n.
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                for _ in 0..100 {
                    let (p, dp) = legendre_pair(n, x);
                    let dx = p / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                let (_, dp) = legendre_pair(n, x);
                let w = 2.0 / ((1.0 - x * x) * dp * dp);
                xs[i] = -x;
                ws[i] = w;
                xs[n - 1 - i] = x;
                ws[n - 1 - i] = w;
            }
            std::sync::Arc::new((xs, ws))
        })
        .clone()
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integral of `f` over the unit sphere with an (n_theta × n_phi) product
/// rule: Gauss–Legendre in cos θ, trapezoid in φ. Exact when f restricted to
/// the sphere is a spherical polynomial of degree ≤ 2·n_theta − 1 (and the
/// φ-dependence has harmonics below n_phi).
pub fn sphere_quadrature<F: Fn([f64; 3]) -> f64>(f: &F, n_theta: usize, n_phi: usize) -> f64 {
    let gl = gauss_legendre(n_theta);
    let (cts, wts) = (&gl.0, &gl.1);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut total = 0.0;
    for (ct, wt) in cts.iter().zip(wts.iter()) {
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        let mut ring = 0.0;
        for k in 0..n_phi {
            let phi = dphi * k as f64;
            ring += f([st * phi.cos(), st * phi.sin(), *ct]);
        }
        total += wt * ring * dphi;
    }
    total
}

/// ∫₀^{r_max} w(s) · [∮ f(center + s·r̂) dΩ] ds.
///
/// The angular integral uses order doubling until two successive rules agree
/// to `ang_tol` (relative to the running radial scale), the radial integral
/// is adaptive Gauss–Kronrod to `rad_tol` absolute.
pub fn integrate_radial_angular<W, F>(
    w: W,
    f: F,
    center: [f64; 3],
    r_max: f64,
    ang_tol: f64,
    rad_tol: f64,
) -> Result<f64>
where
    W: Fn(f64) -> f64,
    F: Fn([f64; 3]) -> f64,
{
    let shell = |s: f64| -> f64 {
        let g = |rhat: [f64; 3]| {
            f([
                center[0] + s * rhat[0],
                center[1] + s * rhat[1],
                center[2] + s * rhat[2],
            ])
        };
        let mut nt = 8;
        let mut prev = sphere_quadrature(&g, nt, 2 * nt);
        loop {
            nt *= 2;
            let cur = sphere_quadrature(&g, nt, 2 * nt);
            if (cur - prev).abs() <= ang_tol * prev.abs().max(1.0) || nt >= 256 {
                return w(s) * cur;
            }
            prev = cur;
        }
    };
    Ok(adaptive_gk(&shell, 0.0, r_max, rad_tol)?.0)
}
