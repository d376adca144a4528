//! Two-electron repulsion integrals over real solid harmonic Gaussian
//! shells, evaluated without any Cartesian intermediates.
//!
//! For one primitive quartet the bra pair contracts to (ζ, P) and the ket
//! pair to (η, Q); every integral reduces to the complex-basis kernel
//!
//!   W = ∫∫ 𝒴_{m₁}^{l₁}(u) 𝒴_{m₂}^{l₂}(u) e^{−ζu²} ·
//!         𝒴_{m₃}^{l₃}(w) 𝒴_{m₄}^{l₄}(w) e^{−ηw²} / |u − w + D| du dw,
//!
//! with D = P − Q. It is evaluated in closed form by four exact steps:
//!
//! 1. **Ket pair recoupling.** The product of two solid harmonics of the
//!    same argument is a finite sum of single harmonics times even powers:
//!    𝒴_{m₃}^{l₃} 𝒴_{m₄}^{l₄} = Σ_L (2L+1)(−1)^{m₃₄}
//!    ⟨l₃ l₄ L; 0 0 0⟩ ⟨l₃ l₄ L; m₃ m₄ −m₃₄⟩ · w^{2k} 𝒴_{m₃₄}^{L},
//!    where m₃₄ = m₃+m₄, k = (l₃+l₄−L)/2 and ⟨···⟩ are Wigner 3-j symbols.
//! 2. **Power-to-derivative.** w^{2k} e^{−sw²} = (−d/ds)^k e^{−sw²}, so the
//!    even power becomes a derivative tower in the ket exponent, taken at
//!    s = η. All s-derivatives are carried as truncated Taylor jets.
//! 3. **Single-harmonic Coulomb kernel.** With one ket harmonic left,
//!    ∫ 𝒴_{m₃₄}^{L}(w) e^{−sw²}/|w−g| dw = (2π/s) 𝒴_{m₃₄}^{L}(g) F_L(s g²)
//!    and 𝒴_{m₃₄}^{L}(g) F_L(s g²) = (−2s)^{−L} 𝒴_{m₃₄}^{L}(∇_D) F₀(s g²)
//!    for g = u + D, which moves all angular structure into a gradient that
//!    commutes with the bra integration.
//! 4. **Bra pair collapse.** The remaining bra integral is the standard
//!    single-center collapse with a shared order λ; integrating the Boys
//!    generator over its quadrature variable gives
//!
//!    V_L(s) = 2π (−1)^{L+l₁+l₂} (2s)^{−L} s^{−1} · π^{3/2}/(ζ √(ζ+s)) ·
//!             𝒴_{m₃₄}^{L}(∇_D) [ Σ_λ (2λ−1)!!/(2ζ)^λ q^{l₁+l₂−2λ}
//!             [𝒴𝒴]_λ(D) Σ_j C(λ,j) (−q)^j F_{l₁+l₂−2λ+j}(ρ(s) D²) ],
//!
//!    with q = s/(ζ+s), ρ(s) = ζ q, and the ε-weighted harmonic pair
//!    [𝒴𝒴]_λ(D) = Σ_μ (−1)^μ ε(l₁,λ,m₁,μ) ε(l₂,λ,m₂,−μ)
//!    𝒴_{m₁−μ}^{l₁−λ}(D) 𝒴_{m₂+μ}^{l₂−λ}(D). Then
//!    W = Σ_L Θ_L (−1)^k k! [V_L]_k with [·]_k the k-th Taylor coefficient.
//!
//! The quartet is evaluated in a frame with D on the +z axis. There the
//! gradient result is needed on-axis only, which forces the azimuthal match
//! m₃₄ = −(m₁+m₂) and prunes the symbolic gradient tables to their z-axis
//! monomials; those tables are geometry-independent and cached globally.
//! The lab-frame block is restored per index with orthogonal rotation
//! blocks, exactly as in the one-electron rotated pipeline.

use super::{pair_data, real_rows, rot_apply, sub, translation_table, EngineOptions, Shell};
use crate::angular::{binomial, double_factorial, eps_coeff, wigner_3j};
use crate::boys::{boys_jet, CJet, Jet};
use crate::harmonics::{
    cartesian_expansion, rotation_blocks, rotation_to_z, GradTerms, RadialKind,
};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

const PI: f64 = std::f64::consts::PI;

/// One z-axis monomial of a gradient-applied bra bracket:
/// coeff · ζ^{tp−λ} · v^{zpow} · q^n · F_n(ρ(s)v²), where v = |D|.
#[derive(Clone, Copy, Debug)]
struct SymEntry {
    zpow: u8,
    tp: u8,
    n: u8,
    coeff: Complex64,
}

/// Key: (L, l₁, m₁, l₂, m₂, λ); the gradient order m₃₄ = −(m₁+m₂) is
/// implied by the on-axis selection rule.
type SymKey = (u8, u8, i8, u8, i8, u8);

static SYM_CACHE: Lazy<Mutex<HashMap<SymKey, Arc<Vec<SymEntry>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Builds (or fetches) the symbolic z-axis table for one (L, bra, λ) slot:
/// 𝒴_{−(m₁+m₂)}^{L}(∇) applied to (2λ−1)!!/2^λ [𝒴𝒴]_λ(D) Σ_j C(λ,j)(−1)^j F_{w+j},
/// pruned to monomials that survive on the z axis.
fn sym_table(l1: i64, m1: i64, l2: i64, m2: i64, lam: i64, l_grad: i64) -> Arc<Vec<SymEntry>> {
    let key: SymKey = (
        l_grad as u8,
        l1 as u8,
        m1 as i8,
        l2 as u8,
        m2 as i8,
        lam as u8,
    );
    if let Some(hit) = SYM_CACHE.lock().unwrap().get(&key) {
        return hit.clone();
    }

    let m34 = -(m1 + m2);
    let w = l1 + l2 - 2 * lam;
    // ε-weighted product of the two residual harmonics, as monomials of D
    let mut poly: std::collections::BTreeMap<[u8; 3], Complex64> =
        std::collections::BTreeMap::new();
    for mu in -lam..=lam {
        let e1 = eps_coeff(l1, lam, m1, mu);
        if e1 == 0.0 {
            continue;
        }
        let e2 = eps_coeff(l2, lam, m2, -mu);
        if e2 == 0.0 {
            continue;
        }
        let sgn = if mu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let t1 = cartesian_expansion((l1 - lam) as u32, (m1 - mu) as i32);
        let t2 = cartesian_expansion((l2 - lam) as u32, (m2 + mu) as i32);
        for a in t1.iter() {
            for b in t2.iter() {
                let powers = [
                    (a.powers[0] + b.powers[0]) as u8,
                    (a.powers[1] + b.powers[1]) as u8,
                    (a.powers[2] + b.powers[2]) as u8,
                ];
                *poly.entry(powers).or_insert(Complex64::new(0.0, 0.0)) +=
                    sgn * e1 * e2 * a.coeff * b.coeff;
            }
        }
    }
    // radial tower: index n = w + j carries both the Boys order and the
    // power of q = s/(ζ+s); differentiation bumps n and tp together, so the
    // q power of any descendant term is always n − tp.
    let lam_scale = double_factorial(2 * lam - 1) / 2f64.powi(lam as i32);
    let mut base_terms: Vec<(Complex64, [u8; 3], u8)> = Vec::new();
    for j in 0..=lam {
        let cj = lam_scale * binomial(lam, j) * if j % 2 == 0 { 1.0 } else { -1.0 };
        for (&powers, &c) in &poly {
            base_terms.push((c * cj, powers, (w + j) as u8));
        }
    }
    let base = GradTerms::from_poly(RadialKind::Boys, base_terms);
    let grad = base.apply_harmonic_gradient(l_grad as u32, m34 as i32);
    let entries: Vec<SymEntry> = grad
        .map
        .iter()
        .filter(|((powers, _, _), _)| powers[0] == 0 && powers[1] == 0)
        .map(|(&(powers, tp, n), &coeff)| SymEntry {
            zpow: powers[2],
            tp,
            n,
            coeff,
        })
        .collect();
    let arc = Arc::new(entries);
    SYM_CACHE.lock().unwrap().insert(key, arc.clone());
    arc
}

/// Recoupling weight of the ket pair:
/// Θ_L = (2L+1)(−1)^{m₃₄} ⟨l₃ l₄ L;000⟩ ⟨l₃ l₄ L; m₃ m₄ −m₃₄⟩.
fn theta(l3: i64, l4: i64, lcap: i64, m3: i64, m4: i64) -> f64 {
    let m34 = m3 + m4;
    let sgn = if m34.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (2 * lcap + 1) as f64
        * sgn
        * wigner_3j(l3, l4, lcap, 0, 0, 0)
        * wigner_3j(l3, l4, lcap, m3, m4, -m34)
}

/// Transform one axis of a flat complex 4-index tensor by a sparse row map
/// (output row ← list of (input column, coefficient)).
fn transform_axis(
    data: &[Complex64],
    dims: [usize; 4],
    axis: usize,
    rows: &[Vec<(usize, Complex64)>],
) -> Vec<Complex64> {
    let strides = [dims[1] * dims[2] * dims[3], dims[2] * dims[3], dims[3], 1];
    let stride = strides[axis];
    let n = dims[axis];
    let total = dims[0] * dims[1] * dims[2] * dims[3];
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let outer = total / (n * stride);
    for hi in 0..outer {
        let base_hi = hi * n * stride;
        for lo in 0..stride {
            let base = base_hi + lo;
            for (m, row) in rows.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(k, c) in row {
                    acc += c * data[base + k * stride];
                }
                out[base + m * stride] = acc;
            }
        }
    }
    out
}

/// Same as [`transform_axis`] for a real tensor and a dense matrix applied
/// as its transpose: out[..,i,..] = Σ_k d[k][i] · in[..,k,..].
fn back_rotate_axis(data: &[f64], dims: [usize; 4], axis: usize, d: &[Vec<f64>]) -> Vec<f64> {
    let strides = [dims[1] * dims[2] * dims[3], dims[2] * dims[3], dims[3], 1];
    let stride = strides[axis];
    let n = dims[axis];
    let total = dims[0] * dims[1] * dims[2] * dims[3];
    let mut out = vec![0.0; total];
    let outer = total / (n * stride);
    for hi in 0..outer {
        let base_hi = hi * n * stride;
        for lo in 0..stride {
            let base = base_hi + lo;
            for k in 0..n {
                let v = data[base + k * stride];
                if v == 0.0 {
                    continue;
                }
                let drow = &d[k];
                for (i, &dki) in drow.iter().enumerate() {
                    out[base + i * stride] += dki * v;
                }
            }
        }
    }
    out
}

/// Adds one primitive quartet (already screened) to the contracted block.
#[allow(clippy::too_many_arguments)]
fn accumulate_quartet(
    out: &mut [f64],
    sa: &Shell,
    sb: &Shell,
    sc: &Shell,
    sd: &Shell,
    zeta: f64,
    p: [f64; 3],
    eta: f64,
    q: [f64; 3],
    weight: f64,
) {
    let (la, lb, lc, ld) = (sa.l as i64, sb.l as i64, sc.l as i64, sd.l as i64);
    let dims = [2 * sa.l + 1, 2 * sb.l + 1, 2 * sc.l + 1, 2 * sd.l + 1];
    let dvec = sub(p, q);
    let v = (dvec[0] * dvec[0] + dvec[1] * dvec[1] + dvec[2] * dvec[2]).sqrt();
    let rot = rotation_to_z(dvec);
    let ta = translation_table(sa.l, rot_apply(&rot, sub(p, sa.center)));
    let tb = translation_table(sb.l, rot_apply(&rot, sub(p, sb.center)));
    let tc = translation_table(sc.l, rot_apply(&rot, sub(q, sc.center)));
    let td = translation_table(sd.l, rot_apply(&rot, sub(q, sd.center)));

    // jets in the ket exponent around s₀ = η
    let order = ((lc + ld) / 2) as usize;
    let s_jet = Jet::variable(eta, order);
    let zs = Jet::variable(zeta + eta, order); // ζ + s
    let q_ratio = s_jet.mul(&zs.recip()); // q = s/(ζ+s)
    let tj = q_ratio.scale(zeta * v * v); // ρ(s)·D² with ρ = ζq
    let n_range = (la + lb + lc + ld) as usize;
    let mut q_pow = Vec::with_capacity(n_range + 1);
    q_pow.push(Jet::constant(1.0, order));
    for n in 1..=n_range {
        q_pow.push(q_pow[n - 1].mul(&q_ratio));
    }
    let rf: Vec<Jet> = (0..=n_range)
        .map(|n| q_pow[n].mul(&boys_jet(n, &tj)))
        .collect();
    let sinv = s_jet.recip();
    let l_top = (lc + ld) as usize;
    let mut pref = Vec::with_capacity(l_top + 1);
    pref.push(sinv.mul(&zs.powf(-0.5)).scale(2.0 * PI.powf(2.5) / zeta));
    for l in 1..=l_top {
        pref.push(pref[l - 1].mul(&sinv).scale(0.5));
    }

    // ket gather: G[L][k][m₃₄][kc][kd] = Σ Θ_L (−1)^k k! C'·D'
    let m34_span = (2 * (lc + ld) + 1) as usize;
    let k_top = l_top / 2;
    let mut gather =
        vec![
            vec![vec![vec![vec![Complex64::new(0.0, 0.0); dims[3]]; dims[2]]; m34_span]; k_top + 1];
            l_top + 1
        ];
    let mut kfact = vec![1.0; k_top + 1];
    for k in 1..=k_top {
        kfact[k] = kfact[k - 1] * k as f64;
    }
    for l3 in 0..=lc {
        for m3 in -l3..=l3 {
            let ccol = &tc.vals[l3 as usize][(m3 + l3) as usize];
            for l4 in 0..=ld {
                for m4 in -l4..=l4 {
                    let dcol = &td.vals[l4 as usize][(m4 + l4) as usize];
                    let m34 = m3 + m4;
                    let l_lo = (l3 - l4).abs().max(m34.abs());
                    let mut lcap = l3 + l4;
                    while lcap >= l_lo {
                        let k = ((l3 + l4 - lcap) / 2) as usize;
                        let th = theta(l3, l4, lcap, m3, m4);
                        if th != 0.0 {
                            let fk = th * kfact[k] * if k % 2 == 0 { 1.0 } else { -1.0 };
                            let dst = &mut gather[lcap as usize][k][(m34 + lc + ld) as usize];
                            let mc_lo = (m3 - (lc - l3)).max(-lc);
                            let mc_hi = (m3 + (lc - l3)).min(lc);
                            let md_lo = (m4 - (ld - l4)).max(-ld);
                            let md_hi = (m4 + (ld - l4)).min(ld);
                            for mc in mc_lo..=mc_hi {
                                let cv = ccol[(mc + lc) as usize] * fk;
                                if cv.norm_sqr() == 0.0 {
                                    continue;
                                }
                                let drow = &mut dst[(mc + lc) as usize];
                                for md in md_lo..=md_hi {
                                    drow[(md + ld) as usize] += cv * dcol[(md + ld) as usize];
                                }
                            }
                        }
                        lcap -= 2;
                    }
                }
            }
        }
    }

    // bra fold: for each (l₁,m₁,l₂,m₂), V_L jets → tmp[kc][kd], then the
    // outer product with the bra re-centering coefficients
    let mut t = vec![Complex64::new(0.0, 0.0); dims[0] * dims[1] * dims[2] * dims[3]];
    let mut tmp = vec![Complex64::new(0.0, 0.0); dims[2] * dims[3]];
    for l1 in 0..=la {
        for m1 in -l1..=l1 {
            let acol = &ta.vals[l1 as usize][(m1 + l1) as usize];
            for l2 in 0..=lb {
                for m2 in -l2..=l2 {
                    let m34 = -(m1 + m2);
                    if m34.abs() > lc + ld {
                        continue;
                    }
                    let bcol = &tb.vals[l2 as usize][(m2 + l2) as usize];
                    for x in tmp.iter_mut() {
                        *x = Complex64::new(0.0, 0.0);
                    }
                    let mut any = false;
                    for lcap in m34.abs()..=(lc + ld) {
                        // V_L jet for this bra pair and gradient order
                        let mut acc = CJet::zero(order);
                        let sign = if (lcap + l1 + l2).rem_euclid(2) == 0 {
                            1.0
                        } else {
                            -1.0
                        };
                        for lam in 0..=l1.min(l2) {
                            let tab = sym_table(l1, m1, l2, m2, lam, lcap);
                            for e in tab.iter() {
                                let scalar = e.coeff
                                    * sign
                                    * zeta.powi(e.tp as i32 - lam as i32)
                                    * v.powi(e.zpow as i32);
                                if scalar.norm_sqr() == 0.0 {
                                    continue;
                                }
                                acc.axpy(scalar, &rf[e.n as usize]);
                            }
                        }
                        let vjet = acc.mul_real(&pref[lcap as usize]);
                        let gl = &gather[lcap as usize];
                        for (k, gk) in gl.iter().enumerate().take(order + 1) {
                            let vc = vjet.c[k];
                            if vc.norm_sqr() == 0.0 {
                                continue;
                            }
                            let gm = &gk[(m34 + lc + ld) as usize];
                            for (kc, grow) in gm.iter().enumerate() {
                                let trow = &mut tmp[kc * dims[3]..(kc + 1) * dims[3]];
                                for (kd, &g) in grow.iter().enumerate() {
                                    if g.norm_sqr() != 0.0 {
                                        trow[kd] += vc * g;
                                        any = true;
                                    }
                                }
                            }
                        }
                    }
                    if !any {
                        continue;
                    }
                    let ma_lo = (m1 - (la - l1)).max(-la);
                    let ma_hi = (m1 + (la - l1)).min(la);
                    let mb_lo = (m2 - (lb - l2)).max(-lb);
                    let mb_hi = (m2 + (lb - l2)).min(lb);
                    for ma in ma_lo..=ma_hi {
                        let av = acol[(ma + la) as usize];
                        if av.norm_sqr() == 0.0 {
                            continue;
                        }
                        for mb in mb_lo..=mb_hi {
                            let bv = bcol[(mb + lb) as usize] * av;
                            if bv.norm_sqr() == 0.0 {
                                continue;
                            }
                            let base = ((ma + la) as usize * dims[1] + (mb + lb) as usize)
                                * dims[2]
                                * dims[3];
                            for (x, &y) in
                                t[base..base + dims[2] * dims[3]].iter_mut().zip(tmp.iter())
                            {
                                *x += bv * y;
                            }
                        }
                    }
                }
            }
        }
    }

    // complex → real per index
    let mut cur = t;
    for axis in 0..4 {
        let l = [sa.l, sb.l, sc.l, sd.l][axis];
        cur = transform_axis(&cur, dims, axis, real_rows(l));
    }
    let mut real: Vec<f64> = Vec::with_capacity(cur.len());
    for c in &cur {
        debug_assert!(
            c.im.abs() <= 1e-9 * c.re.abs().max(1.0),
            "real-basis repulsion block has imaginary residue {}",
            c.im
        );
        real.push(c.re);
    }
    // back-rotation per index, then accumulate
    let lmax = sa.l.max(sb.l).max(sc.l).max(sd.l);
    let blocks = rotation_blocks(lmax as u32, &rot);
    for axis in 0..4 {
        let l = [sa.l, sb.l, sc.l, sd.l][axis];
        real = back_rotate_axis(&real, dims, axis, &blocks[l]);
    }
    for (o, r) in out.iter_mut().zip(real) {
        *o += weight * r;
    }
}

/// Contracted repulsion block (ab|cd) in the chemists' convention:
/// electron 1 carries shells a,b and electron 2 carries shells c,d.
/// Indexed [Ma+la][Mb+lb][Mc+lc][Md+ld].
pub fn eri_block(
    sa: &Shell,
    sb: &Shell,
    sc: &Shell,
    sd: &Shell,
    opts: &EngineOptions,
) -> Vec<Vec<Vec<Vec<f64>>>> {
    let dims = [2 * sa.l + 1, 2 * sb.l + 1, 2 * sc.l + 1, 2 * sd.l + 1];
    let mut flat = vec![0.0; dims[0] * dims[1] * dims[2] * dims[3]];
    for ia in 0..sa.exponents.len() {
        for ib in 0..sb.exponents.len() {
            let bra = pair_data(sa, sb, ia, ib);
            for ic in 0..sc.exponents.len() {
                for id in 0..sd.exponents.len() {
                    let ket = pair_data(sc, sd, ic, id);
                    let w = bra.weight * ket.weight;
                    if let Some(thr) = opts.screening_threshold {
                        let bound = w.abs() * 2.0 * PI.powf(2.5)
                            / (bra.zeta * ket.zeta * (bra.zeta + ket.zeta).sqrt());
                        if bound < thr {
                            continue;
                        }
                    }
                    accumulate_quartet(
                        &mut flat, sa, sb, sc, sd, bra.zeta, bra.p, ket.zeta, ket.p, w,
                    );
                }
            }
        }
    }
    let mut out = vec![vec![vec![vec![0.0; dims[3]]; dims[2]]; dims[1]]; dims[0]];
    let mut idx = 0;
    for block_a in out.iter_mut() {
        for block_b in block_a.iter_mut() {
            for block_c in block_b.iter_mut() {
                for slot in block_c.iter_mut() {
                    *slot = flat[idx];
                    idx += 1;
                }
            }
        }
    }
    out
}

/// Full two-electron tensor over a shell list, row-major [i][j][k][l] with
/// chemists' pairing (ij|kl).
pub struct EriTensor {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl EriTensor {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[((i * self.dim + j) * self.dim + k) * self.dim + l]
    }
}

/// Assembles the full tensor. With `exploit_symmetry` only canonical shell
/// quartets (a≤b, c≤d, pair(ab)≤pair(cd)) are computed and the remaining
/// seven images are mirrored; otherwise every shell quartet is evaluated
/// independently (a debugging mode for symmetry checks — much slower).
/// Quartets are computed in parallel but written in a fixed order, so the
/// result is bitwise deterministic.
pub fn eri_tensor(shells: &[Shell], opts: &EngineOptions, exploit_symmetry: bool) -> EriTensor {
    let n = super::basis_dimension(shells);
    let off = super::shell_offsets(shells);
    let ns = shells.len();
    let mut quartets = Vec::new();
    if exploit_symmetry {
        for a in 0..ns {
            for b in a..ns {
                for c in 0..ns {
                    for d in c..ns {
                        if c * ns + d < a * ns + b {
                            continue;
                        }
                        quartets.push((a, b, c, d));
                    }
                }
            }
        }
    } else {
        for a in 0..ns {
            for b in 0..ns {
                for c in 0..ns {
                    for d in 0..ns {
                        quartets.push((a, b, c, d));
                    }
                }
            }
        }
    }
    let blocks: Vec<_> = quartets
        .par_iter()
        .map(|&(a, b, c, d)| {
            (
                (a, b, c, d),
                eri_block(&shells[a], &shells[b], &shells[c], &shells[d], opts),
            )
        })
        .collect();
    let mut data = vec![0.0; n * n * n * n];
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    for ((a, b, c, d), block) in blocks {
        for (ia, ba) in block.iter().enumerate() {
            let i = off[a] + ia;
            for (jb, bb) in ba.iter().enumerate() {
                let j = off[b] + jb;
                for (kc, bc) in bb.iter().enumerate() {
                    let k = off[c] + kc;
                    for (ld, &v) in bc.iter().enumerate() {
                        let l = off[d] + ld;
                        if exploit_symmetry {
                            data[idx(i, j, k, l)] = v;
                            data[idx(j, i, k, l)] = v;
                            data[idx(i, j, l, k)] = v;
                            data[idx(j, i, l, k)] = v;
                            data[idx(k, l, i, j)] = v;
                            data[idx(l, k, i, j)] = v;
                            data[idx(k, l, j, i)] = v;
                            data[idx(l, k, j, i)] = v;
                        } else {
                            data[idx(i, j, k, l)] = v;
                        }
                    }
                }
            }
        }
    }
    EriTensor { dim: n, data }
}

#[cfg(test)]
mod tests {
    use super::super::primitive_norm;
    use super::*;
    use crate::boys::boys;
    use crate::cgto;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn max_diff(a: &[Vec<Vec<Vec<f64>>>], b: &[Vec<Vec<Vec<f64>>>]) -> (f64, f64) {
        let mut d = 0.0f64;
        let mut scale = 0.0f64;
        for (x, y) in a
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .zip(b.iter().flatten().flatten().flatten())
        {
            d = d.max((x - y).abs());
            scale = scale.max(y.abs());
        }
        (d, scale)
    }

    /// (ss|ss) over two displaced primitives has the closed form
    /// 2π^{5/2}/(ζη√(ζ+η)) F₀(ρ|P−Q|²).
    #[test]
    fn primitive_ssss_closed_form() {
        let opts = EngineOptions {
            screening_threshold: None,
        };
        let a = [0.0, 0.0, 0.0];
        let c = [0.0, 1.2, -0.4];
        let (alpha, gamma) = (0.9, 1.3);
        let sa = Shell::contracted(0, a, &[(alpha, 1.0)]);
        let sc = Shell::contracted(0, c, &[(gamma, 1.0)]);
        let block = eri_block(&sa, &sa, &sc, &sc, &opts);
        let zeta = 2.0 * alpha;
        let eta = 2.0 * gamma;
        let rho = zeta * eta / (zeta + eta);
        let d2 = c.iter().map(|x| x * x).sum::<f64>();
        let norms = primitive_norm(0, alpha).powi(2) * primitive_norm(0, gamma).powi(2);
        let expect =
            norms * 2.0 * PI.powf(2.5) / (zeta * eta * (zeta + eta).sqrt()) * boys(0, rho * d2);
        let got = block[0][0][0][0];
        assert!(
            (got - expect).abs() < 1e-13 * expect.abs(),
            "got {got}, expected {expect}"
        );
    }

    /// Random low-order quartets against the Hermite-expansion reference
    /// route — completely independent algebra end to end.
    #[test]
    fn matches_reference_hermite_route() {
        let opts = EngineOptions {
            screening_threshold: None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for case in 0..5 {
            let mut shell = |lmax: usize| {
                let l = rng.gen_range(0..=lmax);
                let center = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                let nprim = rng.gen_range(1..=2);
                let prims: Vec<(f64, f64)> = (0..nprim)
                    .map(|_| (rng.gen_range(0.4..1.8), rng.gen_range(0.4..1.0)))
                    .collect();
                Shell::contracted(l, center, &prims)
            };
            let (sa, sb, sc, sd) = (shell(2), shell(2), shell(2), shell(2));
            let fast = eri_block(&sa, &sb, &sc, &sd, &opts);
            let slow = cgto::eri_block(&sa, &sb, &sc, &sd);
            let (d, scale) = max_diff(&fast, &slow);
            assert!(
                d <= 1e-10 * scale.max(1e-3),
                "case {case} (l = {},{},{},{}): max diff {d}, scale {scale}",
                sa.l,
                sb.l,
                sc.l,
                sd.l
            );
        }
    }

    /// Coincident pair centers (P = Q) exercise the D = 0 branch where the
    /// frame rotation degenerates to the identity.
    #[test]
    fn coincident_pair_centers() {
        let opts = EngineOptions {
            screening_threshold: None,
        };
        let sa = Shell::contracted(1, [0.0, 0.0, 0.8], &[(0.7, 1.0)]);
        let sb = Shell::contracted(0, [0.0, 0.0, -0.8], &[(0.7, 1.0)]);
        let sc = Shell::contracted(2, [0.6, 0.0, 0.0], &[(1.1, 1.0)]);
        let sd = Shell::contracted(0, [-0.6, 0.0, 0.0], &[(1.1, 1.0)]);
        let fast = eri_block(&sa, &sb, &sc, &sd, &opts);
        let slow = cgto::eri_block(&sa, &sb, &sc, &sd);
        let (d, scale) = max_diff(&fast, &slow);
        assert!(d <= 1e-11 * scale.max(1e-3), "max diff {d}, scale {scale}");
    }

    /// The computed block must respect all three generator symmetries of the
    /// real-basis tensor: a↔b, c↔d, and bra↔ket.
    #[test]
    fn block_respects_exchange_symmetries() {
        let opts = EngineOptions {
            screening_threshold: None,
        };
        let sa = Shell::contracted(2, [0.1, -0.3, 0.2], &[(1.2, 1.0)]);
        let sb = Shell::contracted(1, [-0.4, 0.2, 0.5], &[(0.6, 1.0)]);
        let sc = Shell::contracted(1, [0.3, 0.6, -0.2], &[(0.9, 1.0)]);
        let sd = Shell::contracted(0, [0.0, -0.5, -0.6], &[(0.5, 1.0)]);
        let base = eri_block(&sa, &sb, &sc, &sd, &opts);
        let swap_ab = eri_block(&sb, &sa, &sc, &sd, &opts);
        let swap_cd = eri_block(&sa, &sb, &sd, &sc, &opts);
        let swap_braket = eri_block(&sc, &sd, &sa, &sb, &opts);
        let mut scale = 0.0f64;
        for x in base.iter().flatten().flatten().flatten() {
            scale = scale.max(x.abs());
        }
        for ma in 0..sa.dim() {
            for mb in 0..sb.dim() {
                for mc in 0..sc.dim() {
                    for md in 0..sd.dim() {
                        let v = base[ma][mb][mc][md];
                        for (name, w) in [
                            ("ab", swap_ab[mb][ma][mc][md]),
                            ("cd", swap_cd[ma][mb][md][mc]),
                            ("braket", swap_braket[mc][md][ma][mb]),
                        ] {
                            assert!(
                                (v - w).abs() <= 1e-11 * scale.max(1e-3),
                                "{name} ({ma},{mb},{mc},{md}): {v} vs {w}"
                            );
                        }
                    }
                }
            }
        }
    }

    /// Full-tensor assembly: the mirrored canonical build must agree with
    /// the brute-force build, and repeated runs must be bitwise identical.
    #[test]
    fn tensor_symmetry_modes_agree() {
        let opts = EngineOptions::default();
        let shells = vec![
            Shell::contracted(0, [0.0, 0.0, 0.0], &[(1.0, 0.6), (0.3, 0.5)]),
            Shell::contracted(1, [0.0, 0.0, 1.4], &[(0.8, 1.0)]),
            Shell::contracted(2, [1.0, 0.3, -0.4], &[(0.7, 1.0)]),
        ];
        let sym = eri_tensor(&shells, &opts, true);
        let nosym = eri_tensor(&shells, &opts, false);
        let scale = nosym.data.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut worst = 0.0f64;
        for (a, b) in sym.data.iter().zip(&nosym.data) {
            worst = worst.max((a - b).abs());
        }
        assert!(worst <= 1e-11 * scale, "sym vs nosym: {worst}");
        let again = eri_tensor(&shells, &opts, true);
        assert_eq!(sym.data, again.data);
    }
}
