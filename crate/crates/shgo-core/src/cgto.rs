//! Reference integrals over Cartesian Gaussians, by Hermite-Gaussian
//! expansion (the classic E/R two-table recurrence scheme), plus direct
//! quadrature entry points at the contracted-shell level.
//!
//! This module is the *other route*: it shares no formulas with the fast
//! engine beyond the Boys function. It is deliberately textbook-naive in
//! algorithm — numeric tables rebuilt per primitive call, no screening, no
//! symmetry exploitation — because its job is to be obviously correct and
//! to serve as the cost baseline the fast path is measured against. Do not
//! make it algorithmically cleverer. Two storage choices exist only so that
//! allocator churn does not pollute that cost baseline, and leave the
//! recurrences untouched: the per-call tables are stored flat (single
//! allocation, closed-form strides), and the geometry-free list of Cartesian
//! component triples is built once per process.
//!
//! Cartesian component order within a shell is lexicographic with descending
//! powers: for l = 2 → (2,0,0), (1,1,0), (1,0,1), (0,2,0), (0,1,1), (0,0,2).

use crate::angular::L_MAX;
use crate::boys::boys_batch;
use crate::engine::Shell;
use crate::error::Result;
use crate::harmonics::{real_cartesian_expansion, real_solid_harmonic};
use crate::quadrature::integrate_radial_angular;
use once_cell::sync::Lazy;

static CART_COMPONENTS: Lazy<Vec<Vec<[u32; 3]>>> = Lazy::new(|| {
    (0..=L_MAX)
        .map(|l| {
            let mut out = Vec::with_capacity((l + 1) * (l + 2) / 2);
            for i in (0..=l).rev() {
                for j in (0..=l - i).rev() {
                    out.push([i as u32, j as u32, (l - i - j) as u32]);
                }
            }
            out
        })
        .collect()
});

/// Cartesian powers (i, j, k) with i+j+k = l, descending lexicographic.
pub fn cart_components(l: usize) -> &'static [[u32; 3]] {
    assert!(l <= L_MAX, "angular momentum {l} exceeds L_MAX = {L_MAX}");
    &CART_COMPONENTS[l]
}

/// Hermite expansion coefficients E_t^{ij} for one axis: the Gaussian
/// product x_A^i x_B^j e^{−a x_A²} e^{−b x_B²} = Σ_t E_t^{ij} Λ_t(x_P; p),
/// with E_0^{00} = e^{−μ d²} (μ = ab/p, d the center separation on this
/// axis). Read with [`AxisE::get`]`(i, j, t)`, zero for t > i + j.
struct AxisE {
    jdim: usize,
    tdim: usize,
    vals: Vec<f64>,
}

impl AxisE {
    #[inline]
    fn get(&self, i: usize, j: usize, t: usize) -> f64 {
        self.vals[(i * self.jdim + j) * self.tdim + t]
    }
}

fn hermite_e(imax: usize, jmax: usize, a: f64, b: f64, d: f64) -> AxisE {
    let p = a + b;
    let mu = a * b / p;
    let xpa = -(b / p) * d;
    let xpb = (a / p) * d;
    let jdim = jmax + 1;
    // one zero slot of padding past t = imax + jmax keeps the t + 1 reads of
    // the recurrence in bounds
    let tdim = imax + jmax + 2;
    let idx = |i: usize, j: usize, t: usize| (i * jdim + j) * tdim + t;
    let mut e = vec![0.0; (imax + 1) * jdim * tdim];
    e[idx(0, 0, 0)] = (-mu * d * d).exp();
    for j in 1..=jmax {
        for t in 0..=j {
            let mut v = xpb * e[idx(0, j - 1, t)] + (t + 1) as f64 * e[idx(0, j - 1, t + 1)];
            if t > 0 {
                v += e[idx(0, j - 1, t - 1)] / (2.0 * p);
            }
            e[idx(0, j, t)] = v;
        }
    }
    for i in 1..=imax {
        for j in 0..=jmax {
            for t in 0..=i + j {
                let mut v = xpa * e[idx(i - 1, j, t)] + (t + 1) as f64 * e[idx(i - 1, j, t + 1)];
                if t > 0 {
                    v += e[idx(i - 1, j, t - 1)] / (2.0 * p);
                }
                e[idx(i, j, t)] = v;
            }
        }
    }
    AxisE {
        jdim,
        tdim,
        vals: e,
    }
}

/// Hermite Coulomb integrals R^n_{tuv}(p, PC) for n + t + u + v ≤ n_total,
/// with R^n_{000} = (−2p)^n F_n(p·|PC|²). Stored flat in a full
/// (n_total+1)⁴ box; only the triangular part is filled (the rest stays
/// zero and unused). Read the n = 0 slice with [`RBox::get`]`(t, u, v)`.
struct RBox {
    nb: usize,
    vals: Vec<f64>,
}

impl RBox {
    #[inline]
    fn get(&self, t: usize, u: usize, v: usize) -> f64 {
        self.vals[(t * self.nb + u) * self.nb + v]
    }
}

fn hermite_r(n_total: usize, p: f64, pc: [f64; 3]) -> RBox {
    let nb = n_total + 1;
    let idx = |n: usize, t: usize, u: usize, v: usize| ((n * nb + t) * nb + u) * nb + v;
    let mut r = vec![0.0; nb * nb * nb * nb];
    let t_arg = p * (pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2]);
    let boys = boys_batch(n_total, t_arg);
    let mut pow = 1.0;
    for (n, &f) in boys.iter().enumerate() {
        r[idx(n, 0, 0, 0)] = pow * f;
        pow *= -2.0 * p;
    }
    for n in (0..n_total).rev() {
        for t in 0..=n_total - n {
            for u in 0..=n_total - n - t {
                for v in 0..=n_total - n - t - u {
                    if t + u + v == 0 {
                        continue;
                    }
                    let val = if t > 0 {
                        let mut acc = pc[0] * r[idx(n + 1, t - 1, u, v)];
                        if t > 1 {
                            acc += (t - 1) as f64 * r[idx(n + 1, t - 2, u, v)];
                        }
                        acc
                    } else if u > 0 {
                        let mut acc = pc[1] * r[idx(n + 1, t, u - 1, v)];
                        if u > 1 {
                            acc += (u - 1) as f64 * r[idx(n + 1, t, u - 2, v)];
                        }
                        acc
                    } else {
                        let mut acc = pc[2] * r[idx(n + 1, t, u, v - 1)];
                        if v > 1 {
                            acc += (v - 1) as f64 * r[idx(n + 1, t, u, v - 2)];
                        }
                        acc
                    };
                    r[idx(n, t, u, v)] = val;
                }
            }
        }
    }
    RBox { nb, vals: r }
}

/// Primitive Cartesian overlap block: rows over cart_components(la), columns
/// over cart_components(lb), for unnormalized x^i y^j z^k e^{−α|r−A|²}.
fn cart_overlap_prim(
    la: usize,
    lb: usize,
    a: f64,
    b: f64,
    ra: [f64; 3],
    rb: [f64; 3],
) -> Vec<Vec<f64>> {
    let p = a + b;
    let pref = (std::f64::consts::PI / p).powf(1.5);
    let e: Vec<_> = (0..3)
        .map(|ax| hermite_e(la, lb, a, b, ra[ax] - rb[ax]))
        .collect();
    let ca = cart_components(la);
    let cb = cart_components(lb);
    ca.iter()
        .map(|&[i1, j1, k1]| {
            cb.iter()
                .map(|&[i2, j2, k2]| {
                    pref * e[0].get(i1 as usize, i2 as usize, 0)
                        * e[1].get(j1 as usize, j2 as usize, 0)
                        * e[2].get(k1 as usize, k2 as usize, 0)
                })
                .collect()
        })
        .collect()
}

/// Primitive Cartesian attraction block for a unit charge at `c`.
fn cart_nuclear_prim(
    la: usize,
    lb: usize,
    a: f64,
    b: f64,
    ra: [f64; 3],
    rb: [f64; 3],
    c: [f64; 3],
) -> Vec<Vec<f64>> {
    let p = a + b;
    let pp = [
        (a * ra[0] + b * rb[0]) / p,
        (a * ra[1] + b * rb[1]) / p,
        (a * ra[2] + b * rb[2]) / p,
    ];
    let e: Vec<_> = (0..3)
        .map(|ax| hermite_e(la, lb, a, b, ra[ax] - rb[ax]))
        .collect();
    let r = hermite_r(la + lb, p, [pp[0] - c[0], pp[1] - c[1], pp[2] - c[2]]);
    let pref = 2.0 * std::f64::consts::PI / p;
    let ca = cart_components(la);
    let cb = cart_components(lb);
    ca.iter()
        .map(|&[i1, j1, k1]| {
            cb.iter()
                .map(|&[i2, j2, k2]| {
                    let (i1, j1, k1) = (i1 as usize, j1 as usize, k1 as usize);
                    let (i2, j2, k2) = (i2 as usize, j2 as usize, k2 as usize);
                    let mut acc = 0.0;
                    for t in 0..=i1 + i2 {
                        for u in 0..=j1 + j2 {
                            for v in 0..=k1 + k2 {
                                acc += e[0].get(i1, i2, t)
                                    * e[1].get(j1, j2, u)
                                    * e[2].get(k1, k2, v)
                                    * r.get(t, u, v);
                            }
                        }
                    }
                    pref * acc
                })
                .collect()
        })
        .collect()
}

/// Transformation from the Cartesian components of shell `l` to its real
/// solid components: rows M (2l+1), columns over cart_components(l).
fn solid_coefficients(l: usize) -> Vec<Vec<f64>> {
    let comps = cart_components(l);
    let index: std::collections::HashMap<[u32; 3], usize> =
        comps.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    (-(l as i32)..=l as i32)
        .map(|m| {
            let mut row = vec![0.0; comps.len()];
            for (coeff, powers) in real_cartesian_expansion(l as u32, m) {
                row[index[&powers]] = coeff;
            }
            row
        })
        .collect()
}

/// C_a · block · C_bᵀ.
fn to_solid_block(block: &[Vec<f64>], la: usize, lb: usize) -> Vec<Vec<f64>> {
    let ca = solid_coefficients(la);
    let cb = solid_coefficients(lb);
    let na = 2 * la + 1;
    let nb = 2 * lb + 1;
    let mut out = vec![vec![0.0; nb]; na];
    for (i, crow) in ca.iter().enumerate() {
        for (j, dcol) in cb.iter().enumerate() {
            let mut acc = 0.0;
            for (k, &cv) in crow.iter().enumerate() {
                if cv == 0.0 {
                    continue;
                }
                for (m, &dv) in dcol.iter().enumerate() {
                    if dv != 0.0 {
                        acc += cv * dv * block[k][m];
                    }
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Contracted overlap block in the real solid basis (same layout and
/// normalization convention as the fast engine).
pub fn overlap_block(sa: &Shell, sb: &Shell) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; sb.dim()]; sa.dim()];
    for (ia, &a) in sa.exponents.iter().enumerate() {
        for (ib, &b) in sb.exponents.iter().enumerate() {
            let w = sa.coefficients[ia] * sb.coefficients[ib];
            let cart = cart_overlap_prim(sa.l, sb.l, a, b, sa.center, sb.center);
            let solid = to_solid_block(&cart, sa.l, sb.l);
            for (orow, srow) in out.iter_mut().zip(solid) {
                for (o, s) in orow.iter_mut().zip(srow) {
                    *o += w * s;
                }
            }
        }
    }
    out
}

/// Contracted attraction block ⟨a|1/|r−c||b⟩ for a unit charge.
pub fn nuclear_block_single(sa: &Shell, sb: &Shell, c: [f64; 3]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; sb.dim()]; sa.dim()];
    for (ia, &a) in sa.exponents.iter().enumerate() {
        for (ib, &b) in sb.exponents.iter().enumerate() {
            let w = sa.coefficients[ia] * sb.coefficients[ib];
            let cart = cart_nuclear_prim(sa.l, sb.l, a, b, sa.center, sb.center, c);
            let solid = to_solid_block(&cart, sa.l, sb.l);
            for (orow, srow) in out.iter_mut().zip(solid) {
                for (o, s) in orow.iter_mut().zip(srow) {
                    *o += w * s;
                }
            }
        }
    }
    out
}

/// Contracted attraction block summed over charged centers.
pub fn nuclear_block(sa: &Shell, sb: &Shell, nuclei: &[crate::engine::Center]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; sb.dim()]; sa.dim()];
    for nuc in nuclei {
        let single = nuclear_block_single(sa, sb, nuc.position);
        for (orow, srow) in out.iter_mut().zip(single) {
            for (o, s) in orow.iter_mut().zip(srow) {
                *o += nuc.charge * s;
            }
        }
    }
    out
}

/// Contracted electron-repulsion block (ab|cd) in the real solid basis,
/// indexed [Ma][Mb][Mc][Md].
pub fn eri_block(sa: &Shell, sb: &Shell, sc: &Shell, sd: &Shell) -> Vec<Vec<Vec<Vec<f64>>>> {
    let (la, lb, lc, ld) = (sa.l, sb.l, sc.l, sd.l);
    let ca = cart_components(la);
    let cb = cart_components(lb);
    let cc = cart_components(lc);
    let cd = cart_components(ld);
    let mut cart = vec![vec![vec![vec![0.0; cd.len()]; cc.len()]; cb.len()]; ca.len()];
    for (ia, &a) in sa.exponents.iter().enumerate() {
        for (ib, &b) in sb.exponents.iter().enumerate() {
            let p = a + b;
            let pp = [
                (a * sa.center[0] + b * sb.center[0]) / p,
                (a * sa.center[1] + b * sb.center[1]) / p,
                (a * sa.center[2] + b * sb.center[2]) / p,
            ];
            let ebra: Vec<_> = (0..3)
                .map(|ax| hermite_e(la, lb, a, b, sa.center[ax] - sb.center[ax]))
                .collect();
            for (ic, &c) in sc.exponents.iter().enumerate() {
                for (id, &d) in sd.exponents.iter().enumerate() {
                    let q = c + d;
                    let qq = [
                        (c * sc.center[0] + d * sd.center[0]) / q,
                        (c * sc.center[1] + d * sd.center[1]) / q,
                        (c * sc.center[2] + d * sd.center[2]) / q,
                    ];
                    let eket: Vec<_> = (0..3)
                        .map(|ax| hermite_e(lc, ld, c, d, sc.center[ax] - sd.center[ax]))
                        .collect();
                    let rho = p * q / (p + q);
                    let pq = [pp[0] - qq[0], pp[1] - qq[1], pp[2] - qq[2]];
                    let r = hermite_r(la + lb + lc + ld, rho, pq);
                    let w = sa.coefficients[ia]
                        * sb.coefficients[ib]
                        * sc.coefficients[ic]
                        * sd.coefficients[id];
                    let pref = w * 2.0 * std::f64::consts::PI.powf(2.5) / (p * q * (p + q).sqrt());
                    for (xa, &[i1, j1, k1]) in ca.iter().enumerate() {
                        for (xb, &[i2, j2, k2]) in cb.iter().enumerate() {
                            let (i1, j1, k1) = (i1 as usize, j1 as usize, k1 as usize);
                            let (i2, j2, k2) = (i2 as usize, j2 as usize, k2 as usize);
                            for (xc, &[i3, j3, k3]) in cc.iter().enumerate() {
                                for (xd, &[i4, j4, k4]) in cd.iter().enumerate() {
                                    let (i3, j3, k3) = (i3 as usize, j3 as usize, k3 as usize);
                                    let (i4, j4, k4) = (i4 as usize, j4 as usize, k4 as usize);
                                    let mut acc = 0.0;
                                    for t in 0..=i1 + i2 {
                                        for u in 0..=j1 + j2 {
                                            for v in 0..=k1 + k2 {
                                                let eb = ebra[0].get(i1, i2, t)
                                                    * ebra[1].get(j1, j2, u)
                                                    * ebra[2].get(k1, k2, v);
                                                if eb == 0.0 {
                                                    continue;
                                                }
                                                for tau in 0..=i3 + i4 {
                                                    for nu in 0..=j3 + j4 {
                                                        for phi in 0..=k3 + k4 {
                                                            let ek = eket[0].get(i3, i4, tau)
                                                                * eket[1].get(j3, j4, nu)
                                                                * eket[2].get(k3, k4, phi);
                                                            if ek == 0.0 {
                                                                continue;
                                                            }
                                                            let sign = if (tau + nu + phi) % 2 == 0
                                                            {
                                                                1.0
                                                            } else {
                                                                -1.0
                                                            };
                                                            acc += eb
                                                                * ek
                                                                * sign
                                                                * r.get(t + tau, u + nu, v + phi);
                                                        }
                                                    }
                                                }
                                            }
                                        }
                                    }
                                    cart[xa][xb][xc][xd] += pref * acc;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // cart → solid on all four indices
    let mats = [
        solid_coefficients(la),
        solid_coefficients(lb),
        solid_coefficients(lc),
        solid_coefficients(ld),
    ];
    let dims = [2 * la + 1, 2 * lb + 1, 2 * lc + 1, 2 * ld + 1];
    let mut out = vec![vec![vec![vec![0.0; dims[3]]; dims[2]]; dims[1]]; dims[0]];
    for (ma, rowa) in mats[0].iter().enumerate() {
        for (mb, rowb) in mats[1].iter().enumerate() {
            for (mc, rowc) in mats[2].iter().enumerate() {
                for (md, rowd) in mats[3].iter().enumerate() {
                    let mut acc = 0.0;
                    for (xa, &va) in rowa.iter().enumerate() {
                        if va == 0.0 {
                            continue;
                        }
                        for (xb, &vb) in rowb.iter().enumerate() {
                            if vb == 0.0 {
                                continue;
                            }
                            for (xc, &vc) in rowc.iter().enumerate() {
                                if vc == 0.0 {
                                    continue;
                                }
                                for (xd, &vd) in rowd.iter().enumerate() {
                                    if vd != 0.0 {
                                        acc += va * vb * vc * vd * cart[xa][xb][xc][xd];
                                    }
                                }
                            }
                        }
                    }
                    out[ma][mb][mc][md] = acc;
                }
            }
        }
    }
    out
}

/// One overlap entry by direct 3-D quadrature over the contracted shells.
pub fn quadrature_overlap_entry(sa: &Shell, sb: &Shell, ma: i32, mb: i32) -> Result<f64> {
    let center = mid_weighted(sa, sb);
    let reach = reach_radius(sa, sb, center);
    integrate_radial_angular(
        |s| s * s,
        |r| shell_value(sa, ma, r) * shell_value(sb, mb, r),
        center,
        reach,
        1e-13,
        1e-12,
    )
}

/// One attraction entry ⟨a, ma | 1/|r−c| | b, mb⟩ by direct quadrature,
/// with the radial shells centered on the singularity (which cancels it).
pub fn quadrature_nuclear_entry(
    sa: &Shell,
    sb: &Shell,
    c: [f64; 3],
    ma: i32,
    mb: i32,
) -> Result<f64> {
    let reach = reach_radius(sa, sb, c);
    integrate_radial_angular(
        |s| s,
        |r| shell_value(sa, ma, r) * shell_value(sb, mb, r),
        c,
        reach,
        1e-13,
        1e-12,
    )
}

fn shell_value(s: &Shell, m: i32, r: [f64; 3]) -> f64 {
    let d = [r[0] - s.center[0], r[1] - s.center[1], r[2] - s.center[2]];
    let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let radial: f64 = s
        .exponents
        .iter()
        .zip(&s.coefficients)
        .map(|(&a, &c)| c * (-a * r2).exp())
        .sum();
    real_solid_harmonic(s.l as u32, m, d) * radial
}

fn mid_weighted(sa: &Shell, sb: &Shell) -> [f64; 3] {
    // product center of the most diffuse primitives: a good hub for the
    // spherical grid
    let a = sa.exponents.iter().cloned().fold(f64::INFINITY, f64::min);
    let b = sb.exponents.iter().cloned().fold(f64::INFINITY, f64::min);
    let z = a + b;
    [
        (a * sa.center[0] + b * sb.center[0]) / z,
        (a * sa.center[1] + b * sb.center[1]) / z,
        (a * sa.center[2] + b * sb.center[2]) / z,
    ]
}

fn reach_radius(sa: &Shell, sb: &Shell, hub: [f64; 3]) -> f64 {
    let dist = |c: [f64; 3]| {
        ((c[0] - hub[0]).powi(2) + (c[1] - hub[1]).powi(2) + (c[2] - hub[2]).powi(2)).sqrt()
    };
    let amin = sa.exponents.iter().cloned().fold(f64::INFINITY, f64::min);
    let bmin = sb.exponents.iter().cloned().fold(f64::INFINITY, f64::min);
    // 40 e-foldings of the most diffuse pair Gaussian plus geometry slack
    let tail = (40.0f64 / (amin + bmin)).sqrt();
    dist(sa.center).max(dist(sb.center)) + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{self, primitive_norm, EngineOptions};
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cart_component_order_is_descending_lexicographic() {
        assert_eq!(cart_components(0), vec![[0, 0, 0]]);
        assert_eq!(cart_components(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(
            cart_components(2),
            vec![
                [2, 0, 0],
                [1, 1, 0],
                [1, 0, 1],
                [0, 2, 0],
                [0, 1, 1],
                [0, 0, 2]
            ]
        );
    }

    #[test]
    fn s_overlap_closed_form() {
        let (a, b) = (0.9, 0.4);
        let ra = [0.0, 0.0, 0.0];
        let rb = [0.0, 0.0, 1.2];
        let block = cart_overlap_prim(0, 0, a, b, ra, rb);
        let p = a + b;
        let expect = (std::f64::consts::PI / p).powf(1.5) * (-a * b / p * 1.2f64 * 1.2).exp();
        assert_relative_eq!(block[0][0], expect, max_relative = 1e-14);
    }

    #[test]
    fn ssss_eri_closed_form() {
        // (ss|ss) for normalized s primitives: 2π^{5/2}/(pq√(p+q)) F₀(ρR²)
        // times the Gaussian prefactors (here both 1: same-center pairs).
        let (a, b) = (0.8, 0.5);
        let ra = [0.0, 0.0, 0.0];
        let rc = [0.0, 0.0, 2.0];
        let sa = Shell::contracted(0, ra, &[(a, 1.0)]);
        let sc = Shell::contracted(0, rc, &[(b, 1.0)]);
        let g = eri_block(&sa, &sa, &sc, &sc);
        let (p, q) = (2.0 * a, 2.0 * b);
        let rho = p * q / (p + q);
        let f0 = crate::boys::boys(0, rho * 4.0);
        let norm = primitive_norm(0, a).powi(2) * primitive_norm(0, b).powi(2);
        let expect = norm * 2.0 * std::f64::consts::PI.powf(2.5) / (p * q * (p + q).sqrt()) * f0;
        assert_relative_eq!(g[0][0][0][0], expect, max_relative = 1e-13);
    }

    /// Dual route: the Hermite path and the solid-harmonic engine must agree
    /// on overlap and attraction blocks for random geometries up to l = 3.
    #[test]
    fn agrees_with_fast_engine() {
        let opts = EngineOptions {
            screening_threshold: None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..6 {
            let la = rng.gen_range(0..=3);
            let lb = rng.gen_range(0..=3);
            let sa = Shell::contracted(
                la,
                [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ],
                &[
                    (rng.gen_range(0.2..3.0), 0.7),
                    (rng.gen_range(0.2..3.0), 0.3),
                ],
            );
            let sb = Shell::contracted(
                lb,
                [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ],
                &[(rng.gen_range(0.2..3.0), 1.0)],
            );
            let c = [
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
            ];
            let s_ref = overlap_block(&sa, &sb);
            let s_fast = engine::overlap_block(&sa, &sb, &opts);
            let v_ref = nuclear_block_single(&sa, &sb, c);
            let v_fast = engine::nuclear_block_single(&sa, &sb, c, &opts);
            for i in 0..sa.dim() {
                for j in 0..sb.dim() {
                    assert!(
                        (s_ref[i][j] - s_fast[i][j]).abs() < 1e-12 * s_ref[i][j].abs().max(1.0),
                        "overlap la={la} lb={lb} ({i},{j}): {} vs {}",
                        s_ref[i][j],
                        s_fast[i][j]
                    );
                    assert!(
                        (v_ref[i][j] - v_fast[i][j]).abs() < 1e-11 * v_ref[i][j].abs().max(1.0),
                        "nuclear la={la} lb={lb} ({i},{j}): {} vs {}",
                        v_ref[i][j],
                        v_fast[i][j]
                    );
                }
            }
        }
    }

    /// The Hermite path against direct quadrature (independent of both
    /// analytic routes).
    #[test]
    fn agrees_with_quadrature() {
        let sa = Shell::contracted(2, [0.0, 0.0, 0.0], &[(1.0, 1.0)]);
        let sb = Shell::contracted(1, [0.7, -0.2, 0.4], &[(0.5, 1.0)]);
        let c = [0.2, 0.4, -0.3];
        let s = overlap_block(&sa, &sb);
        let v = nuclear_block_single(&sa, &sb, c);
        for (ma, mb) in [(0i32, 0i32), (-2, 1), (2, -1)] {
            let sq = quadrature_overlap_entry(&sa, &sb, ma, mb).unwrap();
            let vq = quadrature_nuclear_entry(&sa, &sb, c, ma, mb).unwrap();
            assert!(
                (s[(ma + 2) as usize][(mb + 1) as usize] - sq).abs() < 1e-10,
                "overlap ({ma},{mb})"
            );
            assert!(
                (v[(ma + 2) as usize][(mb + 1) as usize] - vq).abs() < 1e-10,
                "nuclear ({ma},{mb})"
            );
        }
    }

    /// Bra/ket exchange symmetry of the naive ERI path (a mathematical
    /// identity, not enforced by the implementation).
    #[test]
    fn eri_exchange_symmetry() {
        let sa = Shell::contracted(1, [0.0, 0.0, 0.0], &[(0.9, 1.0)]);
        let sb = Shell::contracted(0, [0.0, 0.0, 1.1], &[(0.6, 1.0)]);
        let sc = Shell::contracted(1, [0.5, 0.5, 0.0], &[(0.8, 1.0)]);
        let sd = Shell::contracted(0, [-0.3, 0.2, 0.7], &[(0.4, 1.0)]);
        let g1 = eri_block(&sa, &sb, &sc, &sd);
        let g2 = eri_block(&sb, &sa, &sc, &sd);
        let g3 = eri_block(&sc, &sd, &sa, &sb);
        for ma in 0..3 {
            for mb in 0..1 {
                for mc in 0..3 {
                    for md in 0..1 {
                        assert_relative_eq!(
                            g1[ma][mb][mc][md],
                            g2[mb][ma][mc][md],
                            max_relative = 1e-11,
                            epsilon = 1e-14
                        );
                        assert_relative_eq!(
                            g1[ma][mb][mc][md],
                            g3[mc][md][ma][mb],
                            max_relative = 1e-11,
                            epsilon = 1e-14
                        );
                    }
                }
            }
        }
    }

    /// Same-center p-shell attraction closed form through the Hermite path.
    #[test]
    fn same_center_p_attraction() {
        let alpha = 0.8;
        let s = Shell::contracted(1, [0.0; 3], &[(alpha, 1.0)]);
        let v = nuclear_block_single(&s, &s, [0.0; 3]);
        let zeta = 2.0 * alpha;
        let expect =
            primitive_norm(1, alpha).powi(2) * 2.0 * std::f64::consts::PI / (3.0 * zeta * zeta);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_relative_eq!(v[i][j], expect, max_relative = 1e-12);
                } else {
                    assert!(v[i][j].abs() < 1e-14);
                }
            }
        }
    }
}
