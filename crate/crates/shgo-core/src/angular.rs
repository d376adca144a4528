//! Exact combinatorial tables and angular-momentum coupling coefficients.
//!
//! Everything downstream (harmonic expansions, translation coefficients,
//! two-electron angular factors) is built from factorials, binomials, double
//! factorials and Wigner 3j symbols. To keep the numerical paths auditable,
//! the integer tables are computed exactly in `u128` once and mirrored to
//! `f64` (so every mirrored value is correctly rounded), and the 3j symbol
//! is evaluated in exact big-rational arithmetic with a single rounding at
//! the very end.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

/// Largest shell angular momentum the analytic paths accept.
///
/// The integer tables below comfortably cover every combinatorial quantity
/// that appears for l ≤ 12 (the biggest binomial argument is 2l = 24, the
/// biggest double factorial 2l − 1 = 23).
pub const L_MAX: usize = 12;

/// n! exactly, for n ≤ 34 (35! overflows u128).
const FACT_LEN: usize = 35;
static FACT_U128: Lazy<[u128; FACT_LEN]> = Lazy::new(|| {
    let mut t = [1u128; FACT_LEN];
    for n in 1..FACT_LEN {
        t[n] = t[n - 1] * n as u128;
    }
    t
});
static FACT_F64: Lazy<[f64; FACT_LEN]> = Lazy::new(|| FACT_U128.map(|v| v as f64));

/// n!! exactly for n ≤ 56 ((−1)!! = 0!! = 1; 57!! overflows u128).
const DFACT_EXACT_LEN: usize = 57;
static DFACT_U128: Lazy<[u128; DFACT_EXACT_LEN]> = Lazy::new(|| {
    let mut t = [1u128; DFACT_EXACT_LEN];
    for n in 2..DFACT_EXACT_LEN {
        t[n] = t[n - 2] * n as u128;
    }
    t
});

/// n!! in f64, exact (correctly rounded) through n = 56 and within a few
/// ulp beyond. The float table runs far past the exact one because the
/// large-argument Boys closed form consumes (2n−1)!! at orders where the
/// value no longer fits any machine integer but easily fits f64.
const DFACT_LEN: usize = 200;
static DFACT_F64: Lazy<[f64; DFACT_LEN]> = Lazy::new(|| {
    let mut t = [1.0f64; DFACT_LEN];
    for (n, v) in t.iter_mut().enumerate().take(DFACT_EXACT_LEN) {
        *v = DFACT_U128[n] as f64;
    }
    for n in DFACT_EXACT_LEN..DFACT_LEN {
        t[n] = t[n - 2] * n as f64;
    }
    t
});

/// C(n, k) exactly for n ≤ 64, via Pascal's triangle (C(64, 32) ≈ 1.8·10¹⁸
/// fits easily; larger n would eventually overflow and the table would stop
/// being exact, hence the hard cap).
const BINOM_LEN: usize = 65;
static BINOM_U128: Lazy<Vec<Vec<u128>>> = Lazy::new(|| {
    let mut t = Vec::with_capacity(BINOM_LEN);
    for n in 0..BINOM_LEN {
        let mut row = vec![0u128; n + 1];
        row[0] = 1;
        row[n] = 1;
        for k in 1..n {
            let prev: &Vec<u128> = &t[n - 1];
            row[k] = prev[k - 1] + prev[k];
        }
        t.push(row);
    }
    t
});
static BINOM_F64: Lazy<Vec<Vec<f64>>> = Lazy::new(|| {
    BINOM_U128
        .iter()
        .map(|row| row.iter().map(|&v| v as f64).collect())
        .collect()
});

/// n! as an exact integer. Errors for n ≥ 35 (u128 overflow).
pub fn factorial_exact(n: u32) -> Result<u128> {
    FACT_U128
        .get(n as usize)
        .copied()
        .ok_or_else(|| Error::Overflow(format!("{n}! exceeds the exact integer table (n ≤ 34)")))
}

/// n! correctly rounded to f64. Panics for n < 0 or n ≥ 35; every caller in
/// this crate is bounded by [`L_MAX`], which keeps n ≤ 2·L_MAX = 24.
pub fn factorial(n: i64) -> f64 {
    FACT_F64[usize::try_from(n).expect("factorial of negative integer")]
}

/// n!! as an exact integer, with (−1)!! = 0!! = 1. Errors for n ≥ 57.
pub fn double_factorial_exact(n: i64) -> Result<u128> {
    if n == -1 {
        return Ok(1);
    }
    usize::try_from(n)
        .ok()
        .and_then(|i| DFACT_U128.get(i).copied())
        .ok_or_else(|| Error::Overflow(format!("{n}!! exceeds the exact integer table (n ≤ 56)")))
}

/// n!! in f64, with (−1)!! = 0!! = 1; exact through n = 56, a few ulp
/// beyond. Panics outside −1 ≤ n ≤ 199.
pub fn double_factorial(n: i64) -> f64 {
    if n == -1 {
        return 1.0;
    }
    DFACT_F64[usize::try_from(n).expect("double factorial of integer below -1")]
}

/// C(n, k) as an exact integer. Returns 0 for k > n, errors for n ≥ 65.
pub fn binomial_exact(n: u32, k: u32) -> Result<u128> {
    let row = BINOM_U128.get(n as usize).ok_or_else(|| {
        Error::Overflow(format!(
            "C({n}, {k}) exceeds the exact integer table (n ≤ 64)"
        ))
    })?;
    Ok(row.get(k as usize).copied().unwrap_or(0))
}

/// C(n, k) correctly rounded to f64. Returns 0.0 whenever k < 0, k > n or
/// n < 0 (the natural extension used by coupling-coefficient windows).
/// Panics for n ≥ 65.
pub fn binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    BINOM_F64[n as usize][k as usize]
}

/// Coupling coefficient √(C(l1+m1, l2+m2) · C(l1−m1, l2−m2)).
///
/// This is the weight with which an (l2, m2) component couples into an
/// (l1, m1) component under translation. The l-arguments must satisfy
/// 0 ≤ l2 ≤ l1 (violations are programming errors and panic); m-arguments
/// outside the allowed window simply contribute nothing and yield 0.0.
pub fn eps_coeff(l1: i64, l2: i64, m1: i64, m2: i64) -> f64 {
    assert!(
        0 <= l2 && l2 <= l1,
        "eps_coeff requires 0 <= l2 <= l1, got l1={l1} l2={l2}"
    );
    if m1.abs() > l1 || m2.abs() > l2 || (m1 - m2).abs() > l1 - l2 {
        return 0.0;
    }
    (binomial(l1 + m1, l2 + m2) * binomial(l1 - m1, l2 - m2)).sqrt()
}

/// Flat cache of ε(l, l1, m, m1) over 0 ≤ l1 ≤ l, |m1| ≤ l1, |m| ≤ l for one
/// fixed l. [`eps_coeff`] costs a square root per call, which dominates the
/// geometry-independent coefficient work of the integral kernels; the cache
/// pays that cost once per process.
pub struct EpsTable {
    l: i64,
    stride: usize,
    vals: Vec<f64>,
}

impl EpsTable {
    /// ε(l, l1, m, m1); zero outside the coupling window, like [`eps_coeff`].
    #[inline]
    pub fn get(&self, l1: i64, m: i64, m1: i64) -> f64 {
        // rows for l1 occupy Σ_{k<l1}(2k+1) = l1² slots
        let row = (l1 * l1 + m1 + l1) as usize;
        self.vals[row * self.stride + (m + self.l) as usize]
    }
}

static EPS_TABLES: Lazy<Vec<EpsTable>> = Lazy::new(|| {
    (0..=L_MAX as i64)
        .map(|l| {
            let stride = (2 * l + 1) as usize;
            let mut vals = vec![0.0; (l + 1).pow(2) as usize * stride];
            for l1 in 0..=l {
                for m1 in -l1..=l1 {
                    let row = (l1 * l1 + m1 + l1) as usize;
                    for m in -l..=l {
                        vals[row * stride + (m + l) as usize] = eps_coeff(l, l1, m, m1);
                    }
                }
            }
            EpsTable { l, stride, vals }
        })
        .collect()
});

/// The cached ε table for shell angular momentum `l` (≤ [`L_MAX`]).
pub fn eps_table(l: usize) -> &'static EpsTable {
    assert!(l <= L_MAX, "angular momentum {l} exceeds L_MAX = {L_MAX}");
    &EPS_TABLES[l]
}

fn big_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

type Wigner3jKey = (i16, i16, i16, i16, i16, i16);
static WIGNER_CACHE: Lazy<Mutex<HashMap<Wigner3jKey, f64>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Wigner 3j symbol for integer angular momenta.
///
/// Evaluated with the Racah single-sum formula entirely in exact
/// big-rational arithmetic: the result is sign(s)·√(Δ·N·s²) where s is the
/// alternating sum and Δ·N the rational prefactor, so the only floating
/// point rounding happens in the final conversion and square root. Naïve
/// f64 evaluation loses all significant digits near j ≈ 20 (the alternating
/// sum cancels catastrophically); intermediate factorials like 37! also
/// overflow u128, hence big integers rather than the fixed tables above.
pub fn wigner_3j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
    if m1 + m2 + m3 != 0
        || j3 < (j1 - j2).abs()
        || j3 > j1 + j2
        || m1.abs() > j1
        || m2.abs() > j2
        || m3.abs() > j3
        || j1 < 0
        || j2 < 0
        || j3 < 0
    {
        return 0.0;
    }
    let key: Wigner3jKey = (
        j1 as i16, j2 as i16, j3 as i16, m1 as i16, m2 as i16, m3 as i16,
    );
    if let Some(&v) = WIGNER_CACHE.lock().unwrap().get(&key) {
        return v;
    }

    // Alternating Racah sum over k, exact.
    let kmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let kmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut s = BigRational::zero();
    for k in kmin..=kmax {
        let denom = big_factorial(k)
            * big_factorial(j1 + j2 - j3 - k)
            * big_factorial(j1 - m1 - k)
            * big_factorial(j2 + m2 - k)
            * big_factorial(j3 - j2 + m1 + k)
            * big_factorial(j3 - j1 - m2 + k);
        let term = BigRational::new(BigInt::one(), denom);
        if k % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    if s.is_zero() {
        WIGNER_CACHE.lock().unwrap().insert(key, 0.0);
        return 0.0;
    }

    // Rational radicand Δ(j1 j2 j3) · ∏(j ± m)! · s².
    let delta = BigRational::new(
        big_factorial(j1 + j2 - j3) * big_factorial(j1 - j2 + j3) * big_factorial(-j1 + j2 + j3),
        big_factorial(j1 + j2 + j3 + 1),
    );
    let norm = BigRational::from_integer(
        big_factorial(j1 + m1)
            * big_factorial(j1 - m1)
            * big_factorial(j2 + m2)
            * big_factorial(j2 - m2)
            * big_factorial(j3 + m3)
            * big_factorial(j3 - m3),
    );
    let radicand = delta * norm * (&s * &s);
    let mut value = radicand.to_f64().unwrap_or(f64::NAN).sqrt();
    // overall sign: phase (−1)^{j1−j2−m3} times the sign of the sum
    let mut negative = s.is_negative();
    if (j1 - j2 - m3).rem_euclid(2) == 1 {
        negative = !negative;
    }
    if negative {
        value = -value;
    }
    WIGNER_CACHE.lock().unwrap().insert(key, value);
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn factorial_tables_are_exact() {
        assert_eq!(factorial_exact(0).unwrap(), 1);
        assert_eq!(factorial_exact(5).unwrap(), 120);
        assert_eq!(
            factorial_exact(34).unwrap(),
            295232799039604140847618609643520000000
        );
        assert!(matches!(factorial_exact(35), Err(Error::Overflow(_))));
        assert_eq!(factorial(12), 479001600.0);
    }

    #[test]
    fn double_factorial_tables_are_exact() {
        assert_eq!(double_factorial_exact(-1).unwrap(), 1);
        assert_eq!(double_factorial_exact(0).unwrap(), 1);
        assert_eq!(double_factorial_exact(7).unwrap(), 105);
        assert_eq!(double_factorial_exact(10).unwrap(), 3840);
        assert_eq!(
            double_factorial_exact(56).unwrap(),
            81842841814930553085241614925824000000
        );
        assert!(matches!(
            double_factorial_exact(57),
            Err(Error::Overflow(_))
        ));
        assert_eq!(double_factorial(23), 316234143225.0);
        // float continuation past the exact range: 119!! ≈ 6.973·10⁹⁸, the
        // largest order the high-argument Boys closed form can request.
        assert_relative_eq!(
            double_factorial(119),
            6.972993461801137e98,
            max_relative = 1e-12
        );
    }

    #[test]
    fn binomial_table_matches_definition() {
        assert_eq!(binomial_exact(64, 32).unwrap(), 1832624140942590534);
        assert_eq!(binomial_exact(10, 3).unwrap(), 120);
        assert_eq!(binomial_exact(10, 11).unwrap(), 0);
        assert!(matches!(binomial_exact(65, 1), Err(Error::Overflow(_))));
        assert_eq!(binomial(24, 12), 2704156.0);
        assert_eq!(binomial(5, -1), 0.0);
        assert_eq!(binomial(-2, 0), 0.0);
    }

    #[test]
    fn eps_coeff_small_cases() {
        // l2 = 0 couples trivially: both binomials are C(·, 0) = 1.
        assert_eq!(eps_coeff(3, 0, 2, 0), 1.0);
        // √(C(2,1)·C(0,1)) has an empty second factor → 0.
        assert_eq!(eps_coeff(1, 1, 1, 0), 0.0);
        // √(C(2,2)·C(0,0)) = 1 for the aligned stretched case.
        assert_eq!(eps_coeff(1, 1, 1, 1), 1.0);
        // √(C(3,1)·C(1,1)) = √3.
        assert_relative_eq!(eps_coeff(2, 1, 1, 0), 3f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    #[should_panic(expected = "eps_coeff requires")]
    fn eps_coeff_rejects_inverted_l() {
        eps_coeff(1, 2, 0, 0);
    }

    #[test]
    fn eps_table_matches_direct_evaluation() {
        for l in 0..=L_MAX as i64 {
            let table = eps_table(l as usize);
            for l1 in 0..=l {
                for m1 in -l1..=l1 {
                    for m in -l..=l {
                        assert_eq!(
                            table.get(l1, m, m1),
                            eps_coeff(l, l1, m, m1),
                            "l={l} l1={l1} m={m} m1={m1}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn wigner_3j_closed_forms() {
        // (j j 0; m −m 0) = (−1)^{j−m} / √(2j+1)
        for j in 0..=6i64 {
            for m in -j..=j {
                let expect = (-1f64).powi((j - m) as i32) / ((2 * j + 1) as f64).sqrt();
                assert_relative_eq!(wigner_3j(j, j, 0, m, -m, 0), expect, max_relative = 1e-14);
            }
        }
        // textbook values
        assert_relative_eq!(
            wigner_3j(1, 1, 2, 0, 0, 0),
            (2.0 / 15.0f64).sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            wigner_3j(2, 2, 2, 0, 0, 0),
            -(2.0 / 35.0f64).sqrt(),
            max_relative = 1e-14
        );
        // stretched case from the closed form
        // (j1 j2 j1+j2; m1 m2 −m1−m2) with j1=j2=1, m1=m2=1:
        // (−1)^{j1−j2+m1+m2} √( (2j1)!(2j2)!(j1+j2+M)!(j1+j2−M)! /
        //                        ((2j1+2j2+1)!(j1+m1)!(j1−m1)!(j2+m2)!(j2−m2)!) )
        // = √(2·2·24·1 / (120·2·1·2·1)) = √(96/480) = √(1/5) … with M = 2.
        assert_relative_eq!(
            wigner_3j(1, 1, 2, 1, 1, -2),
            0.2f64.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn wigner_3j_selection_rules() {
        assert_eq!(wigner_3j(1, 1, 3, 0, 0, 0), 0.0);
        assert_eq!(wigner_3j(1, 1, 2, 1, 0, 0), 0.0); // m-sum ≠ 0
        assert_eq!(wigner_3j(1, 1, 2, 2, -2, 0), 0.0); // |m| > j
                                                       // odd j-sum with all m = 0 vanishes by parity
        assert_eq!(wigner_3j(1, 2, 2, 0, 0, 0), 0.0);
    }

    #[test]
    fn wigner_3j_large_arguments_stay_finite() {
        // Around j ≈ 20 an f64 Racah sum loses every significant digit; the
        // exact path must still produce clean values satisfying
        // orthogonality.
        let (j1, j2) = (12i64, 12i64);
        for (m1, m2) in [(0i64, 0i64), (3, -5), (12, -12), (7, 2)] {
            let mut sum = 0.0;
            for j3 in (j1 - j2).abs()..=(j1 + j2) {
                let w = wigner_3j(j1, j2, j3, m1, m2, -(m1 + m2));
                sum += (2 * j3 + 1) as f64 * w * w;
            }
            assert_relative_eq!(sum, 1.0, max_relative = 1e-13);
        }
    }

    proptest! {
        /// Even permutations of columns leave the symbol unchanged; odd
        /// permutations and m-negation multiply by (−1)^{j1+j2+j3}.
        #[test]
        fn wigner_3j_symmetries(j1 in 0i64..6, j2 in 0i64..6, d3 in 0i64..13, m1s in 0u8..40, m2s in 0u8..40) {
            let j3 = (j1 - j2).abs() + (d3 % (2 * j1.min(j2) + 1));
            let m1 = -j1 + (m1s as i64 % (2 * j1 + 1));
            let m2 = -j2 + (m2s as i64 % (2 * j2 + 1));
            let m3 = -(m1 + m2);
            let w = wigner_3j(j1, j2, j3, m1, m2, m3);
            let phase = (-1f64).powi((j1 + j2 + j3) as i32);
            // cyclic
            prop_assert!((wigner_3j(j2, j3, j1, m2, m3, m1) - w).abs() < 1e-12);
            prop_assert!((wigner_3j(j3, j1, j2, m3, m1, m2) - w).abs() < 1e-12);
            // transposition
            prop_assert!((wigner_3j(j2, j1, j3, m2, m1, m3) - phase * w).abs() < 1e-12);
            // m negation
            prop_assert!((wigner_3j(j1, j2, j3, -m1, -m2, -m3) - phase * w).abs() < 1e-12);
        }

        /// Orthogonality: Σ_{j3} (2j3+1) · 3j(m1 m2)·3j(m1' m2') collapses to
        /// δ_{m1 m1'} δ_{m2 m2'} when summed with matching total m.
        #[test]
        fn wigner_3j_orthogonality(j1 in 0i64..7, j2 in 0i64..7, m1s in 0u8..40, m2s in 0u8..40) {
            let m1 = -j1 + (m1s as i64 % (2 * j1 + 1));
            let m2 = -j2 + (m2s as i64 % (2 * j2 + 1));
            let mut sum = 0.0;
            for j3 in (j1 - j2).abs()..=(j1 + j2) {
                let w = wigner_3j(j1, j2, j3, m1, m2, -(m1 + m2));
                sum += (2 * j3 + 1) as f64 * w * w;
            }
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }
    }
}
