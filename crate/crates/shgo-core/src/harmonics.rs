//! Solid harmonics: exact monomial expansions, point evaluation, translation
//! (re-centering) coefficients, the real/complex change of basis, rotation
//! blocks for the real basis, and a small symbolic algebra for applying a
//! solid harmonic of the gradient operator to polynomial × radial functions.
//!
//! The complex solid harmonic used throughout is the Racah-normalised
//!
//!   𝒴ₘˡ(r) = √((l+m)!(l−m)!) Σ_{p+q+s=l, p−q=m}
//!            (−1)ᵖ / (2^{p+q} p! q! s!) · (x+iy)ᵖ (x−iy)^q z^s,
//!
//! so 𝒴₀⁰ = 1, 𝒴₀¹ = z, 𝒴₀ˡ((0,0,v)) = vˡ, and (𝒴ₘˡ)* = (−1)ᵐ 𝒴₋ₘˡ.
//! Expansion coefficients are accumulated in exact rational arithmetic and
//! rounded once, so every monomial coefficient is correct to the last bit up
//! to the final √ factor.

use crate::angular::{eps_coeff, L_MAX};
use crate::boys::{boys_batch, boys_jet, exp_neg_jet, CJet, Jet};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::{Lazy, OnceCell};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// One monomial c · x^i y^j z^k of a solid-harmonic expansion.
#[derive(Clone, Copy, Debug)]
pub struct MonomialTerm {
    pub coeff: Complex64,
    pub powers: [u32; 3],
}

fn big_fact(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Shared handle to the monomial expansion of one harmonic.
type SharedExpansion = Arc<Vec<MonomialTerm>>;

/// Shell-order expansions live in a flat per-(l, m) table of lazily filled
/// cells, so the hot evaluation paths never touch a lock after first use.
static EXPANSION_TABLE: Lazy<Vec<Vec<OnceCell<SharedExpansion>>>> = Lazy::new(|| {
    (0..=L_MAX)
        .map(|l| (0..2 * l + 1).map(|_| OnceCell::new()).collect())
        .collect()
});

/// Products of two shell orders can reach 2·L_MAX; those rare high orders go
/// through a plain memo map instead of widening the flat table.
static EXPANSION_OVERFLOW: Lazy<Mutex<HashMap<(u32, i32), SharedExpansion>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Monomial expansion of 𝒴ₘˡ, memoized. Coefficients are purely real or
/// purely imaginary depending on the parity of the y-power; the rational
/// part is accumulated exactly and multiplied by √((l+m)!(l−m)!) once.
pub fn cartesian_expansion(l: u32, m: i32) -> Arc<Vec<MonomialTerm>> {
    assert!(m.unsigned_abs() <= l, "|m| must not exceed l");
    if (l as usize) <= L_MAX {
        return EXPANSION_TABLE[l as usize][(m + l as i32) as usize]
            .get_or_init(|| Arc::new(build_expansion(l, m)))
            .clone();
    }
    if let Some(hit) = EXPANSION_OVERFLOW.lock().unwrap().get(&(l, m)) {
        return hit.clone();
    }
    let arc = Arc::new(build_expansion(l, m));
    EXPANSION_OVERFLOW
        .lock()
        .unwrap()
        .insert((l, m), arc.clone());
    arc
}

fn build_expansion(l: u32, m: i32) -> Vec<MonomialTerm> {
    let li = l as i64;
    let mi = m as i64;
    // rational accumulation per monomial (x-power, y-power, z-power)
    let mut acc: HashMap<[u32; 3], BigRational> = HashMap::new();
    for p in 0..=li {
        let q = p - mi;
        let s = li - p - q;
        if q < 0 || s < 0 {
            continue;
        }
        // (−1)^p / (2^{p+q} p! q! s!)
        let mut denom = big_fact(p) * big_fact(q) * big_fact(s);
        denom <<= (p + q) as usize;
        let base = BigRational::new(
            if p % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            },
            denom,
        );
        // (x+iy)^p (x−iy)^q → Σ C(p,a) C(q,b) x^{a+b} (iy)^{p−a} (−iy)^{q−b}
        for a in 0..=p {
            for b in 0..=q {
                let xpow = (a + b) as u32;
                let ypow = (p - a + q - b) as u32;
                let zpow = s as u32;
                // i^{p−a} · (−i)^{q−b} = i^{(p−a)−(q−b) mod 4}; the i-power
                // for a fixed monomial depends only on ypow (mod handled at
                // fold time), so track the rational including the sign of
                // (−1)^{q−b} … which is already part of (−i)^{q−b}. Split
                // (−i)^{q−b} = (−1)^{q−b} i^{q−b}: fold (−1)^{q−b} here and
                // i^{p−a+q−b} = i^{ypow} at the end.
                let mut term = &base
                    * BigRational::from_integer(big_fact(p) / (big_fact(a) * big_fact(p - a)))
                    * BigRational::from_integer(big_fact(q) / (big_fact(b) * big_fact(q - b)));
                if (q - b) % 2 == 1 {
                    term = -term;
                }
                *acc.entry([xpow, ypow, zpow])
                    .or_insert_with(BigRational::zero) += term;
            }
        }
    }
    let norm = (big_fact(li + mi) * big_fact(li - mi))
        .to_f64()
        .expect("factorial fits f64")
        .sqrt();
    let mut terms: Vec<MonomialTerm> = acc
        .into_iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(powers, r)| {
            let mag = r.to_f64().expect("rational fits f64") * norm;
            // attach i^{ypow}
            let coeff = match powers[1] % 4 {
                0 => Complex64::new(mag, 0.0),
                1 => Complex64::new(0.0, mag),
                2 => Complex64::new(-mag, 0.0),
                _ => Complex64::new(0.0, -mag),
            };
            MonomialTerm { coeff, powers }
        })
        .collect();
    terms.sort_by_key(|t| t.powers);
    terms
}

/// 𝒴ₘˡ(r) by direct expansion evaluation.
pub fn solid_harmonic(l: u32, m: i32, r: [f64; 3]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in cartesian_expansion(l, m).iter() {
        acc += t.coeff
            * r[0].powi(t.powers[0] as i32)
            * r[1].powi(t.powers[1] as i32)
            * r[2].powi(t.powers[2] as i32);
    }
    acc
}

/// All 𝒴ₘˡ(r) for l ≤ l_max, indexed [l][(m + l) as usize].
pub fn solid_harmonic_table(l_max: u32, r: [f64; 3]) -> Vec<Vec<Complex64>> {
    let mut out = Vec::new();
    solid_harmonic_table_into(l_max, r, &mut out);
    out
}

/// [`solid_harmonic_table`] writing into a caller-owned buffer; with a fixed
/// l_max the buffer's shape stabilises and repeat calls allocate nothing.
pub fn solid_harmonic_table_into(l_max: u32, r: [f64; 3], out: &mut Vec<Vec<Complex64>>) {
    out.resize_with(l_max as usize + 1, Vec::new);
    for (l, row) in out.iter_mut().enumerate() {
        let li = l as i32;
        row.clear();
        row.extend((-li..=li).map(|m| solid_harmonic(l as u32, m, r)));
    }
}

/// Re-centering coefficients: for a fixed shift vector t,
///
///   𝒴ₘˡ(r + t) = Σ_{l₁=0}^{l} Σ_{m₁} ε(l,l₁,m,m₁) 𝒴_{m−m₁}^{l−l₁}(t) · 𝒴_{m₁}^{l₁}(r)
///
/// with ε(l,l₁,m,m₁) = √(C(l+m, l₁+m₁) C(l−m, l₁−m₁)). The result is indexed
/// `[ (m + l) as usize ][ l₁ ][ (m₁ + l₁) as usize ]`.
pub fn translation_coefficients(l: u32, shift: [f64; 3]) -> Vec<Vec<Vec<Complex64>>> {
    let shift_table = solid_harmonic_table(l, shift);
    let li = l as i64;
    (-li..=li)
        .map(|m| {
            (0..=li)
                .map(|l1| {
                    (-l1..=l1)
                        .map(|m1| {
                            let eps = eps_coeff(li, l1, m, m1);
                            if eps == 0.0 {
                                Complex64::new(0.0, 0.0)
                            } else {
                                let lr = (li - l1) as usize;
                                let mr = (m - m1 + (li - l1)) as usize;
                                eps * shift_table[lr][mr]
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Shared handle to one cached complex-to-real change-of-basis matrix.
type SharedTransform = Arc<Vec<Vec<Complex64>>>;

static REAL_TRANSFORM_CACHE: Lazy<Mutex<HashMap<u32, SharedTransform>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The unitary change of basis U from complex to real solid harmonics:
/// Φ_{l,M} = Σ_m U[M][m] 𝒴ₘˡ, rows indexed by (M + l), columns by (m + l).
///
///   Φ_{l,0}  = 𝒴₀ˡ
///   Φ_{l,+M} = ((−1)^M 𝒴₊ₘ + 𝒴₋ₘ) / √2
///   Φ_{l,−M} = ((−1)^M 𝒴₊ₘ − 𝒴₋ₘ) / (i√2)
///
/// With this choice the l = 1 real functions in M = (−1, 0, +1) order are
/// exactly (y, z, x).
pub fn real_transform(l: u32) -> Arc<Vec<Vec<Complex64>>> {
    if let Some(hit) = REAL_TRANSFORM_CACHE.lock().unwrap().get(&l) {
        return hit.clone();
    }
    let dim = (2 * l + 1) as usize;
    let li = l as i32;
    let mut u = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    let idx = |m: i32| (m + li) as usize;
    u[idx(0)][idx(0)] = Complex64::new(1.0, 0.0);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for m in 1..=li {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        u[idx(m)][idx(m)] = Complex64::new(sign * inv_sqrt2, 0.0);
        u[idx(m)][idx(-m)] = Complex64::new(inv_sqrt2, 0.0);
        // 1/(i√2) = −i/√2
        u[idx(-m)][idx(m)] = Complex64::new(0.0, -sign * inv_sqrt2);
        u[idx(-m)][idx(-m)] = Complex64::new(0.0, inv_sqrt2);
    }
    let arc = Arc::new(u);
    REAL_TRANSFORM_CACHE.lock().unwrap().insert(l, arc.clone());
    arc
}

/// Real solid harmonic Φ_{l,M}(r).
pub fn real_solid_harmonic(l: u32, m_real: i32, r: [f64; 3]) -> f64 {
    let u = real_transform(l);
    let row = &u[(m_real + l as i32) as usize];
    let mut acc = Complex64::new(0.0, 0.0);
    for (col, w) in row.iter().enumerate() {
        if w.norm_sqr() != 0.0 {
            acc += w * solid_harmonic(l, col as i32 - l as i32, r);
        }
    }
    acc.re
}

/// Monomial expansion of the real solid harmonic Φ_{l,M}; coefficients are
/// real (the imaginary parts cancel by construction).
pub fn real_cartesian_expansion(l: u32, m_real: i32) -> Vec<(f64, [u32; 3])> {
    let u = real_transform(l);
    let row = &u[(m_real + l as i32) as usize];
    let mut acc: HashMap<[u32; 3], Complex64> = HashMap::new();
    for (col, w) in row.iter().enumerate() {
        if w.norm_sqr() == 0.0 {
            continue;
        }
        let m = col as i32 - l as i32;
        for t in cartesian_expansion(l, m).iter() {
            *acc.entry(t.powers).or_insert(Complex64::new(0.0, 0.0)) += w * t.coeff;
        }
    }
    let mut out: Vec<(f64, [u32; 3])> = acc
        .into_iter()
        .filter(|(_, c)| c.norm() > 1e-14)
        .map(|(p, c)| {
            debug_assert!(c.im.abs() <= 1e-12 * c.re.abs().max(1.0));
            (c.re, p)
        })
        .collect();
    out.sort_by_key(|(_, p)| *p);
    out
}

// ---------------------------------------------------------------------------
// Rotations of the real basis
// ---------------------------------------------------------------------------

/// Orthogonal matrix R with R·v = (0, 0, |v|). For v ≈ 0 returns the
/// identity. Built from an orthonormal frame with v̂ as the third row, so it
/// is exactly orthogonal up to rounding.
pub fn rotation_to_z(v: [f64; 3]) -> [[f64; 3]; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n < 1e-300 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    let e3 = [v[0] / n, v[1] / n, v[2] / n];
    // pick the seed axis least aligned with e3
    let seed = if e3[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    // e1 = normalize(seed − (seed·e3) e3)
    let dot = seed[0] * e3[0] + seed[1] * e3[1] + seed[2] * e3[2];
    let mut e1 = [
        seed[0] - dot * e3[0],
        seed[1] - dot * e3[1],
        seed[2] - dot * e3[2],
    ];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
    let e2 = [
        e3[1] * e1[2] - e3[2] * e1[1],
        e3[2] * e1[0] - e3[0] * e1[2],
        e3[0] * e1[1] - e3[1] * e1[0],
    ];
    [e1, e2, e3]
}

/// Rotation blocks Δˡ for the real solid harmonics, l = 0..=l_max:
/// Φ_{l,M}(R·r) = Σ_{M'} Δˡ[M+l][M'+l] Φ_{l,M'}(r).
///
/// Built by the recursive construction of Ivanic & Ruedenberg from the l = 1
/// block, which in the real-basis ordering (M = −1, 0, 1) ≙ (y, z, x) is the
/// 3×3 rotation matrix with rows/columns permuted accordingly. Each block is
/// orthogonal, and blocks compose: Δ(R₁R₂) = Δ(R₁)Δ(R₂).
pub fn rotation_blocks(l_max: u32, rot: &[[f64; 3]; 3]) -> Vec<Vec<Vec<f64>>> {
    let mut blocks = Vec::new();
    rotation_blocks_into(l_max, rot, &mut blocks);
    blocks
}

/// Shapes `block` into a zeroed dim×dim matrix, reusing its allocations.
fn shape_square(block: &mut Vec<Vec<f64>>, dim: usize) {
    block.resize_with(dim, Vec::new);
    for row in block.iter_mut() {
        row.clear();
        row.resize(dim, 0.0);
    }
}

/// [`rotation_blocks`] writing into a caller-owned buffer; with a fixed
/// l_max the buffer's shape stabilises and repeat calls allocate nothing.
pub fn rotation_blocks_into(l_max: u32, rot: &[[f64; 3]; 3], blocks: &mut Vec<Vec<Vec<f64>>>) {
    blocks.resize_with(l_max as usize + 1, Vec::new);
    shape_square(&mut blocks[0], 1);
    blocks[0][0][0] = 1.0;
    if l_max == 0 {
        return;
    }
    // (y, z, x) permutation of the Cartesian rotation
    let axis = [1usize, 2, 0];
    shape_square(&mut blocks[1], 3);
    for (i, &ai) in axis.iter().enumerate() {
        for (j, &aj) in axis.iter().enumerate() {
            blocks[1][i][j] = rot[ai][aj];
        }
    }
    for l in 2..=l_max as i64 {
        let dim = (2 * l + 1) as usize;
        let (done, rest) = blocks.split_at_mut(l as usize);
        let cur = &mut rest[0];
        shape_square(cur, dim);
        {
            let d1 = &done[1];
            let prev = &done[l as usize - 1];
            // helper: entry of Δ¹ by signed index i, j ∈ {−1, 0, 1}
            let r1 = |i: i64, j: i64| d1[(i + 1) as usize][(j + 1) as usize];
            // helper: entry of Δ^{l−1} by signed indices, 0 outside range
            let rp = |mu: i64, mp: i64| -> f64 {
                if mu.abs() > l - 1 || mp.abs() > l - 1 {
                    0.0
                } else {
                    prev[(mu + l - 1) as usize][(mp + l - 1) as usize]
                }
            };
            // P(i, μ, m') of the recursion
            let p = |i: i64, mu: i64, mp: i64| -> f64 {
                if mp.abs() < l {
                    r1(i, 0) * rp(mu, mp)
                } else if mp == l {
                    r1(i, 1) * rp(mu, l - 1) - r1(i, -1) * rp(mu, -l + 1)
                } else {
                    r1(i, -1) * rp(mu, l - 1) + r1(i, 1) * rp(mu, -l + 1)
                }
            };
            for m in -l..=l {
                for mp in -l..=l {
                    let denom = if mp.abs() < l {
                        ((l + mp) * (l - mp)) as f64
                    } else {
                        (2 * l * (2 * l - 1)) as f64
                    };
                    let u = (((l + m) * (l - m)) as f64 / denom).sqrt();
                    let v = 0.5
                        * ((if m == 0 { 2.0 } else { 1.0 })
                            * ((l + m.abs() - 1) * (l + m.abs())) as f64
                            / denom)
                            .sqrt()
                        * (if m == 0 { -1.0 } else { 1.0 });
                    let w = -0.5
                        * (((l - m.abs() - 1) * (l - m.abs())) as f64 / denom).sqrt()
                        * (if m == 0 { 0.0 } else { 1.0 });
                    let mut val = 0.0;
                    if u != 0.0 {
                        val += u * p(0, m, mp);
                    }
                    if v != 0.0 {
                        let vterm = if m == 0 {
                            p(1, 1, mp) + p(-1, -1, mp)
                        } else if m > 0 {
                            let d1m = m == 1;
                            p(1, m - 1, mp) * if d1m { std::f64::consts::SQRT_2 } else { 1.0 }
                                - p(-1, -m + 1, mp) * if d1m { 0.0 } else { 1.0 }
                        } else {
                            let d1m = m == -1;
                            p(1, m + 1, mp) * if d1m { 0.0 } else { 1.0 }
                                + p(-1, -m - 1, mp)
                                    * if d1m { std::f64::consts::SQRT_2 } else { 1.0 }
                        };
                        val += v * vterm;
                    }
                    if w != 0.0 {
                        let wterm = if m > 0 {
                            p(1, m + 1, mp) + p(-1, -m - 1, mp)
                        } else {
                            p(1, m - 1, mp) - p(-1, -m + 1, mp)
                        };
                        val += w * wterm;
                    }
                    cur[(m + l) as usize][(mp + l) as usize] = val;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomial × radial sums and harmonic gradients
// ---------------------------------------------------------------------------

/// Which radial family a term multiplies: F_n(T·r²) or e^{−T·r²}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RadialKind {
    Boys,
    Gaussian,
}

/// One term coeff · x^i y^j z^k · radial(radial_index, shared_scale·r²).
#[derive(Clone, Copy, Debug)]
pub struct Term {
    pub coeff: Complex64,
    pub powers: [u32; 3],
    pub radial_index: usize,
}

/// A closed family under ∇: Σ terms over a common radial kind and a common
/// numeric radial scale T (so ∂ₓ maps the family into itself:
/// ∂ₓ x^a F_n = a x^{a−1} F_n − 2T x^{a+1} F_{n+1}, and the same with the
/// index bump dropped for the Gaussian kind).
#[derive(Clone, Debug)]
pub struct TermSum {
    pub kind: RadialKind,
    pub shared_scale: f64,
    pub terms: Vec<Term>,
}

impl TermSum {
    /// Numerical value at a point.
    pub fn eval(&self, r: [f64; 3]) -> Complex64 {
        let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        let t = self.shared_scale * r2;
        let n_max = self.terms.iter().map(|t| t.radial_index).max().unwrap_or(0);
        let radial: Vec<f64> = match self.kind {
            RadialKind::Boys => boys_batch(n_max, t),
            RadialKind::Gaussian => vec![(-t).exp(); n_max + 1],
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            acc += term.coeff
                * r[0].powi(term.powers[0] as i32)
                * r[1].powi(term.powers[1] as i32)
                * r[2].powi(term.powers[2] as i32)
                * radial[term.radial_index];
        }
        acc
    }
}

/// Symbolic mirror of [`TermSum`] that keeps the power of the radial scale
/// per term instead of folding it into the coefficient. This is what makes
/// the same gradient algebra reusable when the scale is itself a function of
/// an external parameter (evaluated as a truncated Taylor jet). Terms live in
/// a BTreeMap so accumulation order — and hence rounding — is identical
/// across runs.
#[derive(Clone, Debug)]
pub(crate) struct GradTerms {
    pub kind: RadialKind,
    /// (x, y, z) powers, power of the radial scale, radial index → coeff
    pub map: BTreeMap<([u8; 3], u8, u8), Complex64>,
}

impl GradTerms {
    pub fn from_poly<I>(kind: RadialKind, terms: I) -> Self
    where
        I: IntoIterator<Item = (Complex64, [u8; 3], u8)>,
    {
        let mut map = BTreeMap::new();
        for (c, powers, n) in terms {
            *map.entry((powers, 0u8, n))
                .or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        GradTerms { kind, map }
    }

    /// Apply a single partial derivative along `axis`, treating the radial
    /// argument as scale·(x² + y² + z²).
    fn derivative(&self, axis: usize) -> GradTerms {
        let mut map: BTreeMap<([u8; 3], u8, u8), Complex64> = BTreeMap::new();
        let bump = match self.kind {
            RadialKind::Boys => 1,
            RadialKind::Gaussian => 0,
        };
        for (&(powers, tp, n), &c) in &self.map {
            if powers[axis] > 0 {
                let mut p = powers;
                p[axis] -= 1;
                *map.entry((p, tp, n)).or_insert(Complex64::new(0.0, 0.0)) +=
                    c * powers[axis] as f64;
            }
            let mut p = powers;
            p[axis] += 1;
            *map.entry((p, tp + 1, n + bump))
                .or_insert(Complex64::new(0.0, 0.0)) += c * -2.0;
        }
        GradTerms {
            kind: self.kind,
            map,
        }
    }

    /// Apply 𝒴ₘˡ(∇).
    pub fn apply_harmonic_gradient(&self, l: u32, m: i32) -> GradTerms {
        let mut out = GradTerms {
            kind: self.kind,
            map: BTreeMap::new(),
        };
        for op in cartesian_expansion(l, m).iter() {
            let mut cur = self.clone();
            for axis in 0..3 {
                for _ in 0..op.powers[axis] {
                    cur = cur.derivative(axis);
                }
            }
            for (&key, &c) in &cur.map {
                *out.map.entry(key).or_insert(Complex64::new(0.0, 0.0)) += op.coeff * c;
            }
        }
        out.map.retain(|_, c| c.norm_sqr() > 0.0);
        out
    }

    /// Fold a numeric scale into the coefficients, producing the public form.
    pub fn to_term_sum(&self, shared_scale: f64) -> TermSum {
        let mut folded: HashMap<([u8; 3], u8), Complex64> = HashMap::new();
        for (&(powers, tp, n), &c) in &self.map {
            *folded
                .entry((powers, n))
                .or_insert(Complex64::new(0.0, 0.0)) += c * shared_scale.powi(tp as i32);
        }
        let mut terms: Vec<Term> = folded
            .into_iter()
            .map(|((powers, n), coeff)| Term {
                coeff,
                powers: [powers[0] as u32, powers[1] as u32, powers[2] as u32],
                radial_index: n as usize,
            })
            .collect();
        terms.sort_by_key(|t| (t.powers, t.radial_index));
        TermSum {
            kind: self.kind,
            shared_scale,
            terms,
        }
    }

    /// Evaluate with the radial scale given as a jet ρ(s): returns the jet
    /// of s ↦ Σ coeff · r^p · ρ(s)^tp · radial(n, ρ(s)·|r|²). The repulsion
    /// engine inlines a fused variant of this loop; this reference form
    /// backs the consistency tests.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn eval_jet(&self, r: [f64; 3], scale: &Jet) -> CJet {
        let order = scale.order();
        let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        let tjet = scale.scale(r2);
        let max_tp = self.map.keys().map(|k| k.1).max().unwrap_or(0) as usize;
        let max_n = self.map.keys().map(|k| k.2).max().unwrap_or(0) as usize;
        // ρ^tp jets
        let mut scale_pows = Vec::with_capacity(max_tp + 1);
        scale_pows.push(Jet::constant(1.0, order));
        for tp in 1..=max_tp {
            scale_pows.push(scale_pows[tp - 1].mul(scale));
        }
        // radial jets per index
        let radial: Vec<Jet> = match self.kind {
            RadialKind::Boys => (0..=max_n).map(|n| boys_jet(n, &tjet)).collect(),
            RadialKind::Gaussian => {
                let e = exp_neg_jet(&tjet);
                vec![e; max_n + 1]
            }
        };
        let mut acc = CJet::zero(order);
        for (&(powers, tp, n), &c) in &self.map {
            let gamma = c
                * r[0].powi(powers[0] as i32)
                * r[1].powi(powers[1] as i32)
                * r[2].powi(powers[2] as i32);
            if gamma.norm_sqr() == 0.0 {
                continue;
            }
            let jet = scale_pows[tp as usize].mul(&radial[n as usize]);
            acc.axpy(gamma, &jet);
        }
        acc
    }
}

/// 𝒴ₘˡ(∇) applied to a [`TermSum`], staying in the same closed family.
pub fn apply_harmonic_gradient(l: u32, m: i32, ts: &TermSum) -> TermSum {
    let sym = GradTerms {
        kind: ts.kind,
        map: ts
            .terms
            .iter()
            .map(|t| {
                (
                    (
                        [t.powers[0] as u8, t.powers[1] as u8, t.powers[2] as u8],
                        0u8,
                        t.radial_index as u8,
                    ),
                    t.coeff,
                )
            })
            .collect(),
    };
    // fold the numeric scale back out of the symbolic result
    sym.apply_harmonic_gradient(l, m)
        .to_term_sum(ts.shared_scale)
}
