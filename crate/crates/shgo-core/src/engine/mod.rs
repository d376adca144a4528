//! The fast integral engine over real solid harmonic Gaussians.
//!
//! A shell is Φ_{l,M}(r − A)·Σᵢ cᵢ e^{−αᵢ|r−A|²} for all 2l+1 components at
//! once. All matrix elements reduce, per primitive pair, to three steps:
//!
//! 1. **Re-center**: both solid harmonics are translated to the Gaussian
//!    product center P with the exact finite re-centering sum (coefficients
//!    ε·𝒴(P−A)), turning every integral into single-center ones.
//! 2. **Collapse**: at a single center, ∫ 𝒴_{m₁}^{l₁} 𝒴_{m₂}^{l₂} e^{−ζr²} dτ
//!    is diagonal: (−1)^{m₁} δ_{l₁l₂} δ_{m₂,−m₁} K_{l₁}(ζ) with
//!    K_l(ζ) = (π/ζ)^{3/2} (2l−1)!!/(2ζ)^l. The Coulomb kernel keeps a short
//!    extra sum over a shared order λ (see [`nuclear_block`]).
//! 3. **Transform**: the complex block is carried to the real basis by the
//!    sparse unitary U (two entries per row).
//!
//! For nuclear attraction, the work is done in a rotated frame in which the
//! nucleus lies on the +z axis of the product center; there the Coulomb
//! kernel couples only m₂ = −m₁ and the assembly drops a full power of l in
//! cost. The lab-frame answer is recovered with orthogonal rotation blocks.
//! A direct lab-frame evaluation ([`nuclear_block_reference`]) is kept as a
//! slow cross-check.

pub mod eri;

use crate::angular::{double_factorial, eps_coeff, eps_table, L_MAX};
use crate::boys::boys_batch_into;
use crate::harmonics::{
    real_transform, rotation_blocks_into, rotation_to_z, solid_harmonic_table,
    solid_harmonic_table_into,
};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;

/// A point charge (nucleus).
#[derive(Clone, Copy, Debug)]
pub struct Center {
    pub position: [f64; 3],
    pub charge: f64,
}

/// A contracted shell of real solid harmonic Gaussians: all 2l+1 components
/// Φ_{l,M}(r−A) Σᵢ cᵢ e^{−αᵢ|r−A|²}. Coefficients stored here already
/// include primitive and contracted normalization.
#[derive(Clone, Debug)]
pub struct Shell {
    pub l: usize,
    pub center: [f64; 3],
    pub exponents: Vec<f64>,
    pub coefficients: Vec<f64>,
}

/// Tuning knobs shared by the matrix builders.
#[derive(Clone, Copy, Debug)]
pub struct EngineOptions {
    /// Primitive pairs whose Gaussian prefactor falls below this are
    /// skipped. `None` disables screening entirely.
    pub screening_threshold: Option<f64>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            screening_threshold: Some(1e-16),
        }
    }
}

/// K_l(ζ) = (π/ζ)^{3/2} (2l−1)!!/(2ζ)^l: the value of the collapsed
/// single-center bilinear integral, and also the squared norm of the
/// primitive Φ_{l,M} e^{−αr²} at ζ = 2α.
pub fn radial_moment(l: usize, zeta: f64) -> f64 {
    (std::f64::consts::PI / zeta).powf(1.5) * double_factorial(2 * l as i64 - 1)
        / (2.0 * zeta).powi(l as i32)
}

/// Normalization constant of a primitive Φ_{l,M} e^{−αr²} (independent of M).
pub fn primitive_norm(l: usize, alpha: f64) -> f64 {
    1.0 / radial_moment(l, 2.0 * alpha).sqrt()
}

impl Shell {
    /// Builds a shell from raw (exponent, contraction coefficient) pairs,
    /// applying primitive normalization and renormalizing the contraction so
    /// the diagonal self-overlap is exactly 1.
    pub fn contracted(l: usize, center: [f64; 3], primitives: &[(f64, f64)]) -> Shell {
        let exponents: Vec<f64> = primitives.iter().map(|p| p.0).collect();
        let mut coefficients: Vec<f64> = primitives
            .iter()
            .map(|&(a, c)| c * primitive_norm(l, a))
            .collect();
        let mut self_overlap = 0.0;
        for (i, &ai) in exponents.iter().enumerate() {
            for (j, &aj) in exponents.iter().enumerate() {
                self_overlap += coefficients[i] * coefficients[j] * radial_moment(l, ai + aj);
            }
        }
        let scale = 1.0 / self_overlap.sqrt();
        for c in &mut coefficients {
            *c *= scale;
        }
        Shell {
            l,
            center,
            exponents,
            coefficients,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.l + 1
    }
}

#[inline]
fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn norm2(a: [f64; 3]) -> f64 {
    a[0] * a[0] + a[1] * a[1] + a[2] * a[2]
}

#[inline]
fn rot_apply(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
        r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
        r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
    ]
}

/// Gaussian product data for one primitive pair.
struct PairData {
    zeta: f64,
    p: [f64; 3],
    /// exp(−αβ/ζ · |A−B|²) · c_a · c_b
    weight: f64,
}

fn pair_data(sa: &Shell, sb: &Shell, ia: usize, ib: usize) -> PairData {
    let alpha = sa.exponents[ia];
    let beta = sb.exponents[ib];
    let zeta = alpha + beta;
    let ab = sub(sa.center, sb.center);
    let p = [
        (alpha * sa.center[0] + beta * sb.center[0]) / zeta,
        (alpha * sa.center[1] + beta * sb.center[1]) / zeta,
        (alpha * sa.center[2] + beta * sb.center[2]) / zeta,
    ];
    let weight =
        (-alpha * beta / zeta * norm2(ab)).exp() * sa.coefficients[ia] * sb.coefficients[ib];
    PairData { zeta, p, weight }
}

/// Re-centering table for one shell: vals[l₁][m₁+l₁][m+l] is the coefficient
/// of 𝒴_{m₁}^{l₁}(r−P) in the expansion of 𝒴_m^l(r−A), i.e.
/// ε(l,l₁,m,m₁)·𝒴_{m−m₁}^{l−l₁}(P−A). Entries outside the window
/// |m−m₁| ≤ l−l₁ are exactly zero.
#[derive(Default)]
struct TransTable {
    vals: Vec<Vec<Vec<Complex64>>>,
}

fn translation_table(l: usize, shift: [f64; 3]) -> TransTable {
    let mut ytab = Vec::new();
    let mut out = TransTable::default();
    translation_table_into(l, shift, &mut ytab, &mut out);
    out
}

/// [`translation_table`] writing into caller-owned buffers (`ytab` holds the
/// solid harmonics of the shift); shapes stabilise per block, so repeat calls
/// allocate nothing.
fn translation_table_into(
    l: usize,
    shift: [f64; 3],
    ytab: &mut Vec<Vec<Complex64>>,
    out: &mut TransTable,
) {
    solid_harmonic_table_into(l as u32, shift, ytab);
    let eps = eps_table(l);
    let li = l as i64;
    out.vals.resize_with(l + 1, Vec::new);
    for l1 in 0..=li {
        let level = &mut out.vals[l1 as usize];
        level.resize_with((2 * l1 + 1) as usize, Vec::new);
        for m1 in -l1..=l1 {
            let row = &mut level[(m1 + l1) as usize];
            row.clear();
            row.extend((-li..=li).map(|m| {
                if (m - m1).abs() > li - l1 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let e = eps.get(l1, m, m1);
                    if e == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        e * ytab[(li - l1) as usize][(m - m1 + li - l1) as usize]
                    }
                }
            }));
        }
    }
}

/// One sparse row of the real↔complex transform: the (complex column,
/// coefficient) pairs of U for a single real index M.
type SparseRow = Vec<(usize, Complex64)>;

/// Sparse row structure of the real↔complex transform, cached per l.
static REAL_ROWS: Lazy<Vec<Vec<SparseRow>>> = Lazy::new(|| {
    (0..=L_MAX)
        .map(|l| {
            let u = real_transform(l as u32);
            (0..2 * l + 1)
                .map(|mi| {
                    u[mi]
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c.norm_sqr() != 0.0)
                        .map(|(j, c)| (j, *c))
                        .collect()
                })
                .collect()
        })
        .collect()
});

fn real_rows(l: usize) -> &'static [SparseRow] {
    assert!(l <= L_MAX, "angular momentum {l} exceeds L_MAX = {L_MAX}");
    &REAL_ROWS[l]
}

/// Shapes `buf` into a zeroed rows×cols matrix, reusing its allocations.
fn shape_rect<T: Copy>(buf: &mut Vec<Vec<T>>, rows: usize, cols: usize, zero: T) {
    buf.resize_with(rows, Vec::new);
    for row in buf.iter_mut() {
        row.clear();
        row.resize(cols, zero);
    }
}

/// Re(U_a · T · U_bᵀ): carries the complex single-center block to the real
/// basis. U has at most two entries per row, so this is O(dim²).
fn complex_to_real_block(t: &[Vec<Complex64>], la: usize, lb: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    complex_to_real_into(t, la, lb, &mut out);
    out
}

/// [`complex_to_real_block`] writing into a caller-owned buffer.
fn complex_to_real_into(t: &[Vec<Complex64>], la: usize, lb: usize, out: &mut Vec<Vec<f64>>) {
    let ra = real_rows(la);
    let rb = real_rows(lb);
    shape_rect(out, 2 * la + 1, 2 * lb + 1, 0.0);
    for (mi, rowa) in ra.iter().enumerate() {
        for (mj, rowb) in rb.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(ka, ca) in rowa {
                for &(kb, cb) in rowb {
                    acc += ca * cb * t[ka][kb];
                }
            }
            debug_assert!(
                acc.im.abs() <= 1e-10 * acc.re.abs().max(1.0),
                "real-basis block has imaginary residue {}",
                acc.im
            );
            out[mi][mj] = acc.re;
        }
    }
}

/// Reusable buffers for the per-primitive-pair assembly. Within one block
/// every table keeps the same shape, so after the first pair the resizes are
/// no-ops and the pair loop runs allocation-free; one instance serves a whole
/// block and never crosses threads.
#[derive(Default)]
struct BlockScratch {
    ytab: Vec<Vec<Complex64>>,
    ta: TransTable,
    tb: TransTable,
    boys: Vec<f64>,
    g: Vec<Vec<f64>>,
    vpow: Vec<f64>,
    radial: Vec<f64>,
    jk: Vec<Vec<Vec<f64>>>,
    phi: Vec<Vec<Vec<Complex64>>>,
    t: Vec<Vec<Complex64>>,
    sprime: Vec<Vec<f64>>,
    blocks_a: Vec<Vec<Vec<f64>>>,
    blocks_b: Vec<Vec<Vec<f64>>>,
    tmp: Vec<Vec<f64>>,
}

/// Overlap block ⟨Φ_{la,Ma}(r−A) | Φ_{lb,Mb}(r−B)⟩, indexed [Ma+la][Mb+lb].
pub fn overlap_block(sa: &Shell, sb: &Shell, opts: &EngineOptions) -> Vec<Vec<f64>> {
    let (la, lb) = (sa.l, sb.l);
    let (lai, lbi) = (la as i64, lb as i64);
    let mut out = vec![vec![0.0; 2 * lb + 1]; 2 * la + 1];
    let mut scratch = BlockScratch::default();
    for ia in 0..sa.exponents.len() {
        for ib in 0..sb.exponents.len() {
            let pd = pair_data(sa, sb, ia, ib);
            if let Some(thr) = opts.screening_threshold {
                if pd.weight.abs() < thr {
                    continue;
                }
            }
            translation_table_into(la, sub(pd.p, sa.center), &mut scratch.ytab, &mut scratch.ta);
            translation_table_into(lb, sub(pd.p, sb.center), &mut scratch.ytab, &mut scratch.tb);
            let BlockScratch {
                ta, tb, t, sprime, ..
            } = &mut scratch;
            shape_rect(t, 2 * la + 1, 2 * lb + 1, Complex64::new(0.0, 0.0));
            for l1 in 0..=la.min(lb) as i64 {
                let w = pd.weight * radial_moment(l1 as usize, pd.zeta);
                for m1 in -l1..=l1 {
                    let sign = if m1.rem_euclid(2) == 0 { w } else { -w };
                    let acol = &ta.vals[l1 as usize][(m1 + l1) as usize];
                    let bcol = &tb.vals[l1 as usize][(-m1 + l1) as usize];
                    let ma_lo = (m1 - (lai - l1)).max(-lai);
                    let ma_hi = (m1 + (lai - l1)).min(lai);
                    let mb_lo = (-m1 - (lbi - l1)).max(-lbi);
                    let mb_hi = (-m1 + (lbi - l1)).min(lbi);
                    for ma in ma_lo..=ma_hi {
                        let av = acol[(ma + lai) as usize] * sign;
                        if av.norm_sqr() == 0.0 {
                            continue;
                        }
                        let trow = &mut t[(ma + lai) as usize];
                        for mb in mb_lo..=mb_hi {
                            trow[(mb + lbi) as usize] += av * bcol[(mb + lbi) as usize];
                        }
                    }
                }
            }
            complex_to_real_into(t, la, lb, sprime);
            for (orow, rrow) in out.iter_mut().zip(sprime.iter()) {
                for (o, r) in orow.iter_mut().zip(rrow) {
                    *o += *r;
                }
            }
        }
    }
    out
}

/// G_λ(n) = Σ_{j≤λ} C(λ,j) (−1)^j F_{n−2λ+j}(T): the radial factors of the
/// Coulomb collapse, tabulated for λ ≤ λ_max and n ≤ n_max.
fn coulomb_radial_table(lambda_max: usize, n_max: usize, t: f64) -> Vec<Vec<f64>> {
    let mut boys = Vec::new();
    let mut out = Vec::new();
    coulomb_radial_table_into(lambda_max, n_max, t, &mut boys, &mut out);
    out
}

/// [`coulomb_radial_table`] writing into caller-owned buffers (`boys` holds
/// the Boys batch).
fn coulomb_radial_table_into(
    lambda_max: usize,
    n_max: usize,
    t: f64,
    boys: &mut Vec<f64>,
    out: &mut Vec<Vec<f64>>,
) {
    boys_batch_into(n_max, t, boys);
    out.resize_with(lambda_max + 1, Vec::new);
    for (lam, row) in out.iter_mut().enumerate() {
        row.clear();
        row.extend((0..=n_max).map(|n| {
            if n < 2 * lam {
                return 0.0;
            }
            let mut acc = 0.0;
            let mut binom = 1.0f64;
            for j in 0..=lam {
                let term = binom * boys[n - 2 * lam + j];
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
                binom *= (lam - j) as f64 / (j + 1) as f64;
            }
            acc
        }));
    }
}

/// The collapsed Coulomb kernel in a frame where the nucleus sits at
/// distance v along +z from the single center:
///
///   J'(l₁,l₂,m) = ∫ 𝒴_m^{l₁}(u) 𝒴_{−m}^{l₂}(u) e^{−ζu²} / |u − v ẑ| dτ · (−1)^m
///              = (2π/ζ) Σ_{λ=|m|}^{min(l₁,l₂)} (2λ−1)!!/(2ζ)^λ ·
///                ε(l₁,λ,m,m) ε(l₂,λ,m,m) · v^{l₁+l₂−2λ} · G_λ(l₁+l₂)
///
/// (other m-pairings vanish on the axis). Fills `scratch.jk`, indexed
/// [l₁][l₂][m+min], using the scratch radial buffers.
fn rotated_coulomb_kernel_into(la: usize, lb: usize, zeta: f64, v: f64, s: &mut BlockScratch) {
    let BlockScratch {
        boys,
        g,
        vpow,
        radial,
        jk,
        ..
    } = s;
    coulomb_radial_table_into(la.min(lb), la + lb, zeta * v * v, boys, g);
    let pref = 2.0 * std::f64::consts::PI / zeta;
    // v^n and (2λ−1)!!/(2ζ)^λ, hoisted out of the λ sums
    vpow.clear();
    vpow.resize(la + lb + 1, 1.0);
    for n in 1..vpow.len() {
        vpow[n] = vpow[n - 1] * v;
    }
    radial.clear();
    radial.extend(
        (0..=la.min(lb) as i64)
            .map(|lam| double_factorial(2 * lam - 1) / (2.0 * zeta).powi(lam as i32)),
    );
    jk.resize_with(la + 1, Vec::new);
    for l1 in 0..=la as i64 {
        let eps1 = eps_table(l1 as usize);
        let level = &mut jk[l1 as usize];
        level.resize_with(lb + 1, Vec::new);
        for l2 in 0..=lb as i64 {
            let eps2 = eps_table(l2 as usize);
            let mm = l1.min(l2);
            let row = &mut level[l2 as usize];
            row.clear();
            row.extend((-mm..=mm).map(|m| {
                let mut acc = 0.0;
                for lam in m.abs()..=mm {
                    acc += radial[lam as usize]
                        * eps1.get(lam, m, m)
                        * eps2.get(lam, m, m)
                        * vpow[(l1 + l2 - 2 * lam) as usize]
                        * g[lam as usize][(l1 + l2) as usize];
                }
                pref * acc
            }));
        }
    }
}

/// Attraction block ⟨Φ_{la,Ma}(r−A) | 1/|r−C| | Φ_{lb,Mb}(r−B)⟩ for a single
/// unit charge at `c`, indexed [Ma+la][Mb+lb]. Sign convention: these are
/// positive-kernel attraction integrals; multiply by the nuclear charge (and
/// −1 for a Hamiltonian) downstream.
pub fn nuclear_block_single(
    sa: &Shell,
    sb: &Shell,
    c: [f64; 3],
    opts: &EngineOptions,
) -> Vec<Vec<f64>> {
    let (la, lb) = (sa.l, sb.l);
    let mut out = vec![vec![0.0; 2 * lb + 1]; 2 * la + 1];
    let mut scratch = BlockScratch::default();
    for ia in 0..sa.exponents.len() {
        for ib in 0..sb.exponents.len() {
            let pd = pair_data(sa, sb, ia, ib);
            if let Some(thr) = opts.screening_threshold {
                if pd.weight.abs() < thr {
                    continue;
                }
            }
            accumulate_nuclear_pair(&mut out, sa, sb, &pd, c, 1.0, &mut scratch);
        }
    }
    out
}

/// One primitive pair of the rotated-frame attraction pipeline.
fn accumulate_nuclear_pair(
    out: &mut [Vec<f64>],
    sa: &Shell,
    sb: &Shell,
    pd: &PairData,
    c: [f64; 3],
    charge: f64,
    scratch: &mut BlockScratch,
) {
    let (la, lb) = (sa.l, sb.l);
    let (lai, lbi) = (la as i64, lb as i64);
    let d = sub(c, pd.p);
    let v = norm2(d).sqrt();
    let rot = rotation_to_z(d);
    // rotated-frame re-centering shifts
    translation_table_into(
        la,
        rot_apply(&rot, sub(pd.p, sa.center)),
        &mut scratch.ytab,
        &mut scratch.ta,
    );
    translation_table_into(
        lb,
        rot_apply(&rot, sub(pd.p, sb.center)),
        &mut scratch.ytab,
        &mut scratch.tb,
    );
    rotated_coulomb_kernel_into(la, lb, pd.zeta, v, scratch);
    let BlockScratch {
        ta,
        tb,
        jk,
        phi,
        t,
        sprime,
        blocks_a,
        blocks_b,
        tmp,
        ..
    } = scratch;
    let w = pd.weight * charge;

    // Φ'[l1][m1+l1][mb+lb] = Σ_{l2} J'(l1,l2,m1) · B'[l2][−m1][mb]
    phi.resize_with(la + 1, Vec::new);
    for (l1, level) in phi.iter_mut().enumerate() {
        level.resize_with(2 * l1 + 1, Vec::new);
        for row in level.iter_mut() {
            row.clear();
            row.resize(2 * lb + 1, Complex64::new(0.0, 0.0));
        }
    }
    for l1 in 0..=lai {
        for m1 in -l1.min(lbi)..=l1.min(lbi) {
            let dst = &mut phi[l1 as usize][(m1 + l1) as usize];
            for l2 in m1.abs()..=lbi {
                let j = jk[l1 as usize][l2 as usize][(m1 + l1.min(l2)) as usize];
                if j == 0.0 {
                    continue;
                }
                let sign_j = if m1.rem_euclid(2) == 0 { j } else { -j };
                let bcol = &tb.vals[l2 as usize][(-m1 + l2) as usize];
                let mb_lo = (-m1 - (lbi - l2)).max(-lbi);
                let mb_hi = (-m1 + (lbi - l2)).min(lbi);
                for mb in mb_lo..=mb_hi {
                    dst[(mb + lbi) as usize] += sign_j * bcol[(mb + lbi) as usize];
                }
            }
        }
    }
    // T'[ma][mb] = Σ_{l1,m1} A'[l1][m1][ma] · Φ'[l1][m1][mb]
    shape_rect(t, 2 * la + 1, 2 * lb + 1, Complex64::new(0.0, 0.0));
    for l1 in 0..=lai {
        for m1 in -l1.min(lbi)..=l1.min(lbi) {
            let acol = &ta.vals[l1 as usize][(m1 + l1) as usize];
            let prow = &phi[l1 as usize][(m1 + l1) as usize];
            let ma_lo = (m1 - (lai - l1)).max(-lai);
            let ma_hi = (m1 + (lai - l1)).min(lai);
            let mb_lo = (-m1 - (lbi - m1.abs())).max(-lbi);
            let mb_hi = (-m1 + (lbi - m1.abs())).min(lbi);
            for ma in ma_lo..=ma_hi {
                let av = acol[(ma + lai) as usize];
                if av.norm_sqr() == 0.0 {
                    continue;
                }
                let trow = &mut t[(ma + lai) as usize];
                for mb in mb_lo..=mb_hi {
                    trow[(mb + lbi) as usize] += av * prow[(mb + lbi) as usize];
                }
            }
        }
    }
    // real basis in the rotated frame, then back-rotate: S = Δaᵀ S' Δb
    complex_to_real_into(t, la, lb, sprime);
    rotation_blocks_into(la as u32, &rot, blocks_a);
    rotation_blocks_into(lb as u32, &rot, blocks_b);
    let da = &blocks_a[la];
    let db = &blocks_b[lb];
    let na = 2 * la + 1;
    let nb = 2 * lb + 1;
    // tmp = Δaᵀ · S'
    shape_rect(tmp, na, nb, 0.0);
    for k in 0..na {
        for i in 0..na {
            let dki = da[k][i];
            if dki == 0.0 {
                continue;
            }
            for j in 0..nb {
                tmp[i][j] += dki * sprime[k][j];
            }
        }
    }
    for i in 0..na {
        for j in 0..nb {
            let mut acc = 0.0;
            for k in 0..nb {
                acc += tmp[i][k] * db[k][j];
            }
            out[i][j] += w * acc;
        }
    }
}

/// Attraction block summed over a set of charged centers:
/// Σ_C Z_C ⟨a| 1/|r−C| |b⟩.
pub fn nuclear_block(
    sa: &Shell,
    sb: &Shell,
    nuclei: &[Center],
    opts: &EngineOptions,
) -> Vec<Vec<f64>> {
    let (la, lb) = (sa.l, sb.l);
    let mut out = vec![vec![0.0; 2 * lb + 1]; 2 * la + 1];
    let mut scratch = BlockScratch::default();
    for ia in 0..sa.exponents.len() {
        for ib in 0..sb.exponents.len() {
            let pd = pair_data(sa, sb, ia, ib);
            if let Some(thr) = opts.screening_threshold {
                if pd.weight.abs() < thr {
                    continue;
                }
            }
            for nuc in nuclei {
                accumulate_nuclear_pair(
                    &mut out,
                    sa,
                    sb,
                    &pd,
                    nuc.position,
                    nuc.charge,
                    &mut scratch,
                );
            }
        }
    }
    out
}

/// Slow lab-frame evaluation of the attraction block (no rotation; the full
/// m₁, m₂, μ sums with solid harmonics of the lab-frame separation). Used as
/// an internal cross-check of the rotated pipeline.
pub fn nuclear_block_reference(
    sa: &Shell,
    sb: &Shell,
    c: [f64; 3],
    opts: &EngineOptions,
) -> Vec<Vec<f64>> {
    let (la, lb) = (sa.l, sb.l);
    let (lai, lbi) = (la as i64, lb as i64);
    let mut out = vec![vec![0.0; 2 * lb + 1]; 2 * la + 1];
    for ia in 0..sa.exponents.len() {
        for ib in 0..sb.exponents.len() {
            let pd = pair_data(sa, sb, ia, ib);
            if let Some(thr) = opts.screening_threshold {
                if pd.weight.abs() < thr {
                    continue;
                }
            }
            let d = sub(c, pd.p);
            let g = coulomb_radial_table(la.min(lb), la + lb, pd.zeta * norm2(d));
            let ytab = solid_harmonic_table((la + lb) as u32, d);
            let ta = translation_table(la, sub(pd.p, sa.center));
            let tb = translation_table(lb, sub(pd.p, sb.center));
            let pref = 2.0 * std::f64::consts::PI / pd.zeta * pd.weight;
            let mut t = vec![vec![Complex64::new(0.0, 0.0); 2 * lb + 1]; 2 * la + 1];
            for l1 in 0..=lai {
                for l2 in 0..=lbi {
                    for m1 in -l1..=l1 {
                        for m2 in -l2..=l2 {
                            // J(l1,m1,l2,m2) = (2π/ζ) Σ_{λ,μ} (2λ−1)!!/(2ζ)^λ (−1)^μ
                            //   ε(l1,λ,m1,μ) ε(l2,λ,m2,−μ)
                            //   𝒴_{m1−μ}^{l1−λ}(d) 𝒴_{m2+μ}^{l2−λ}(d) G_λ(l1+l2)
                            let mut j = Complex64::new(0.0, 0.0);
                            for lam in 0..=l1.min(l2) {
                                let radial = double_factorial(2 * lam - 1)
                                    / (2.0 * pd.zeta).powi(lam as i32)
                                    * g[lam as usize][(l1 + l2) as usize];
                                if radial == 0.0 {
                                    continue;
                                }
                                let mut ang = Complex64::new(0.0, 0.0);
                                for mu in -lam..=lam {
                                    let e1 = eps_coeff(l1, lam, m1, mu);
                                    if e1 == 0.0 {
                                        continue;
                                    }
                                    let e2 = eps_coeff(l2, lam, m2, -mu);
                                    if e2 == 0.0 {
                                        continue;
                                    }
                                    let y1 =
                                        ytab[(l1 - lam) as usize][(m1 - mu + l1 - lam) as usize];
                                    let y2 =
                                        ytab[(l2 - lam) as usize][(m2 + mu + l2 - lam) as usize];
                                    let sgn = if mu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                                    ang += sgn * e1 * e2 * y1 * y2;
                                }
                                j += radial * ang;
                            }
                            if j.norm_sqr() == 0.0 {
                                continue;
                            }
                            j *= pref;
                            for ma in -lai..=lai {
                                let av =
                                    ta.vals[l1 as usize][(m1 + l1) as usize][(ma + lai) as usize];
                                if av.norm_sqr() == 0.0 {
                                    continue;
                                }
                                for mb in -lbi..=lbi {
                                    let bv = tb.vals[l2 as usize][(m2 + l2) as usize]
                                        [(mb + lbi) as usize];
                                    t[(ma + lai) as usize][(mb + lbi) as usize] += av * bv * j;
                                }
                            }
                        }
                    }
                }
            }
            let real = complex_to_real_block(&t, la, lb);
            for (orow, rrow) in out.iter_mut().zip(real) {
                for (o, r) in orow.iter_mut().zip(rrow) {
                    *o += r;
                }
            }
        }
    }
    out
}

/// Total basis dimension of a shell list.
pub fn basis_dimension(shells: &[Shell]) -> usize {
    shells.iter().map(|s| s.dim()).sum()
}

/// Offsets of each shell's first function in the full basis.
pub fn shell_offsets(shells: &[Shell]) -> Vec<usize> {
    let mut off = Vec::with_capacity(shells.len());
    let mut acc = 0;
    for s in shells {
        off.push(acc);
        acc += s.dim();
    }
    off
}

fn assemble_symmetric<F>(shells: &[Shell], block: F) -> Vec<Vec<f64>>
where
    F: Fn(usize, usize) -> Vec<Vec<f64>> + Sync,
{
    let n = basis_dimension(shells);
    let off = shell_offsets(shells);
    let pairs: Vec<(usize, usize)> = (0..shells.len())
        .flat_map(|i| (i..shells.len()).map(move |j| (i, j)))
        .collect();
    // Blocks are independent, so parallel evaluation is deterministic: each
    // block's own summation order is fixed and blocks land in disjoint
    // slices.
    let blocks: Vec<_> = pairs
        .par_iter()
        .map(|&(i, j)| ((i, j), block(i, j)))
        .collect();
    let mut m = vec![vec![0.0; n]; n];
    for ((i, j), b) in blocks {
        for (bi, row) in b.iter().enumerate() {
            for (bj, &v) in row.iter().enumerate() {
                m[off[i] + bi][off[j] + bj] = v;
                m[off[j] + bj][off[i] + bi] = v;
            }
        }
    }
    m
}

/// Full overlap matrix over a shell list (symmetric, deterministic).
pub fn overlap_matrix(shells: &[Shell], opts: &EngineOptions) -> Vec<Vec<f64>> {
    assemble_symmetric(shells, |i, j| overlap_block(&shells[i], &shells[j], opts))
}

/// Full nuclear attraction matrix Σ_C Z_C ⟨i|1/|r−C||j⟩.
pub fn nuclear_matrix(shells: &[Shell], nuclei: &[Center], opts: &EngineOptions) -> Vec<Vec<f64>> {
    assemble_symmetric(shells, |i, j| {
        nuclear_block(&shells[i], &shells[j], nuclei, opts)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::real_solid_harmonic;
    use crate::quadrature::integrate_radial_angular;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// K_l against the defining 3-D integral ∫ Φ_{l,m}² e^{−ζr²} dτ.
    #[test]
    fn radial_moment_matches_quadrature() {
        for l in 0..=4usize {
            for &zeta in &[0.7f64, 1.9] {
                for m in [-(l as i32), 0, l as i32] {
                    let v = integrate_radial_angular(
                        |s| s * s,
                        |r| {
                            let y = real_solid_harmonic(l as u32, m, r);
                            y * y * (-zeta * norm2(r)).exp()
                        },
                        [0.0; 3],
                        9.0 / zeta.sqrt(),
                        1e-13,
                        1e-12,
                    )
                    .unwrap();
                    assert_relative_eq!(v, radial_moment(l, zeta), max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn contracted_shell_is_normalized() {
        let opts = EngineOptions::default();
        for l in 0..=3 {
            let s = Shell::contracted(l, [0.4, -0.2, 0.9], &[(2.5, 0.3), (0.8, 0.5), (0.21, 0.4)]);
            let block = overlap_block(&s, &s, &opts);
            for (i, row) in block.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-12, "l={l} ({i},{j}): {v}");
                }
            }
        }
    }

    /// Two-center overlap against direct 3-D quadrature, d×p shells.
    #[test]
    fn overlap_matches_quadrature() {
        let opts = EngineOptions::default();
        let a = [0.0, 0.0, 0.0];
        let b = [0.8, -0.5, 0.3];
        let sa = Shell::contracted(2, a, &[(1.1, 1.0)]);
        let sb = Shell::contracted(1, b, &[(0.6, 1.0)]);
        let block = overlap_block(&sa, &sb, &opts);
        let (alpha, beta) = (1.1, 0.6);
        let zeta = alpha + beta;
        let p = [
            (alpha * a[0] + beta * b[0]) / zeta,
            (alpha * a[1] + beta * b[1]) / zeta,
            (alpha * a[2] + beta * b[2]) / zeta,
        ];
        for ma in -2i32..=2 {
            for mb in -1i32..=1 {
                let na = sa.coefficients[0];
                let nb = sb.coefficients[0];
                let q = integrate_radial_angular(
                    |s| s * s,
                    |r| {
                        let ra = sub(r, a);
                        let rb = sub(r, b);
                        na * real_solid_harmonic(2, ma, ra)
                            * (-alpha * norm2(ra)).exp()
                            * nb
                            * real_solid_harmonic(1, mb, rb)
                            * (-beta * norm2(rb)).exp()
                    },
                    p,
                    10.0,
                    1e-13,
                    1e-12,
                )
                .unwrap();
                let e = block[(ma + 2) as usize][(mb + 1) as usize];
                assert!(
                    (e - q).abs() < 1e-10,
                    "ma={ma} mb={mb}: engine={e} quad={q}"
                );
            }
        }
    }

    /// The rotated-frame pipeline against the lab-frame reference kernel at
    /// random geometry, all components, f×d shells.
    #[test]
    fn rotated_nuclear_matches_lab_frame_reference() {
        let opts = EngineOptions::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let a = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let b = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let c = [
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
            ];
            let sa = Shell::contracted(3, a, &[(rng.gen_range(0.3..2.0), 1.0)]);
            let sb = Shell::contracted(2, b, &[(rng.gen_range(0.3..2.0), 1.0)]);
            let fast = nuclear_block_single(&sa, &sb, c, &opts);
            let slow = nuclear_block_reference(&sa, &sb, c, &opts);
            for i in 0..sa.dim() {
                for j in 0..sb.dim() {
                    assert!(
                        (fast[i][j] - slow[i][j]).abs() < 1e-11 * slow[i][j].abs().max(1e-4),
                        "({i},{j}): rotated={} reference={}",
                        fast[i][j],
                        slow[i][j]
                    );
                }
            }
        }
    }

    /// Attraction against direct (singularity-cancelled) quadrature: pins
    /// the overall sign and the direction convention of the separation
    /// vector. p×s with a displaced nucleus.
    #[test]
    fn nuclear_matches_quadrature() {
        let opts = EngineOptions::default();
        let a = [0.0, 0.0, 0.0];
        let b = [0.4, 0.1, -0.3];
        let c = [0.3, -0.2, 0.5];
        let sa = Shell::contracted(1, a, &[(0.9, 1.0)]);
        let sb = Shell::contracted(0, b, &[(0.7, 1.0)]);
        let block = nuclear_block_single(&sa, &sb, c, &opts);
        for ma in -1i32..=1 {
            let na = sa.coefficients[0];
            let nb = sb.coefficients[0];
            let q = integrate_radial_angular(
                |s| s, // 1/|r−C| cancels one power of the Jacobian
                |r| {
                    let ra = sub(r, a);
                    let rb = sub(r, b);
                    na * real_solid_harmonic(1, ma, ra)
                        * (-0.9 * norm2(ra)).exp()
                        * nb
                        * (-0.7 * norm2(rb)).exp()
                },
                c,
                12.0,
                1e-13,
                1e-12,
            )
            .unwrap();
            let e = block[(ma + 1) as usize][0];
            assert!((e - q).abs() < 1e-10, "ma={ma}: engine={e} quad={q}");
        }
    }

    /// Same-center p-shell attraction has the closed form 2π/(3ζ²) per
    /// unnormalized 𝒴 pair; check the normalized diagonal and the vanishing
    /// off-diagonals.
    #[test]
    fn same_center_p_attraction_closed_form() {
        let opts = EngineOptions::default();
        let alpha = 0.8;
        let s = Shell::contracted(1, [0.2, 0.3, -0.1], &[(alpha, 1.0)]);
        let block = nuclear_block_single(&s, &s, s.center, &opts);
        let zeta = 2.0 * alpha;
        let norm2_const = primitive_norm(1, alpha).powi(2);
        let expect = norm2_const * 2.0 * std::f64::consts::PI / (3.0 * zeta * zeta);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_relative_eq!(block[i][j], expect, max_relative = 1e-12);
                } else {
                    assert!(block[i][j].abs() < 1e-14);
                }
            }
        }
    }

    /// Rigid translation of the whole system leaves every matrix element
    /// unchanged.
    #[test]
    fn translational_invariance() {
        let opts = EngineOptions::default();
        let shift = [1.3, -0.7, 2.1];
        let mk = |off: [f64; 3]| {
            let s1 = Shell::contracted(
                2,
                [0.1 + off[0], 0.2 + off[1], 0.3 + off[2]],
                &[(1.4, 0.6), (0.5, 0.5)],
            );
            let s2 = Shell::contracted(
                1,
                [-0.4 + off[0], 0.9 + off[1], -0.2 + off[2]],
                &[(0.8, 1.0)],
            );
            let c = Center {
                position: [0.5 + off[0], 0.5 + off[1], -0.5 + off[2]],
                charge: 3.0,
            };
            (s1, s2, c)
        };
        let (a0, b0, c0) = mk([0.0; 3]);
        let (a1, b1, c1) = mk(shift);
        let s0 = overlap_block(&a0, &b0, &opts);
        let s1 = overlap_block(&a1, &b1, &opts);
        let v0 = nuclear_block(&a0, &b0, &[c0], &opts);
        let v1 = nuclear_block(&a1, &b1, &[c1], &opts);
        for i in 0..a0.dim() {
            for j in 0..b0.dim() {
                assert_relative_eq!(s0[i][j], s1[i][j], max_relative = 1e-12, epsilon = 1e-14);
                assert_relative_eq!(v0[i][j], v1[i][j], max_relative = 1e-11, epsilon = 1e-13);
            }
        }
    }

    /// Parallel assembly must be bitwise deterministic and match blocks.
    #[test]
    fn matrix_assembly_is_deterministic() {
        let opts = EngineOptions::default();
        let shells = vec![
            Shell::contracted(0, [0.0, 0.0, 0.0], &[(1.2, 0.7), (0.4, 0.4)]),
            Shell::contracted(1, [0.0, 0.0, 1.5], &[(0.9, 1.0)]),
            Shell::contracted(2, [1.0, -0.5, 0.2], &[(0.6, 1.0)]),
        ];
        let nuclei = vec![
            Center {
                position: [0.0, 0.0, 0.0],
                charge: 1.0,
            },
            Center {
                position: [0.0, 0.0, 1.5],
                charge: 2.0,
            },
        ];
        let s1 = overlap_matrix(&shells, &opts);
        let s2 = overlap_matrix(&shells, &opts);
        assert_eq!(s1, s2);
        let v1 = nuclear_matrix(&shells, &nuclei, &opts);
        let v2 = nuclear_matrix(&shells, &nuclei, &opts);
        assert_eq!(v1, v2);
        // spot check one block against the direct call
        let b = nuclear_block(&shells[0], &shells[2], &nuclei, &opts);
        let off = shell_offsets(&shells);
        for i in 0..1 {
            for j in 0..5 {
                assert_eq!(v1[off[0] + i][off[2] + j], b[i][j]);
            }
        }
    }
}
