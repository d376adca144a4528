//! The Boys function F_n(T) = ∫₀¹ u^{2n} e^{−T u²} du and truncated Taylor
//! jets over it.
//!
//! Three evaluation regimes, chosen for certified absolute accuracy ~1e−15:
//!
//! * small/moderate T (T ≤ 50): upward series at the *highest* requested
//!   order, F_n = e^{−T} Σ_i (2T)^i / [(2n+1)(2n+3)···(2n+2i+1)], followed by
//!   downward recursion F_{n−1} = (2T·F_n + e^{−T}) / (2n−1). Both steps are
//!   numerically benign (all-positive series, contractive recursion).
//! * large T (T > 50): the complementary closed form
//!   F_n = (2n−1)!!/(2T)^n · ½√(π/T) − e^{−T} Σ_{i<n} (2n−1)!!/((2n−2i−1)!!(2T)^{i+1}),
//!   valid because erf(√T) = 1 to below 1e−21 there; then downward recursion.
//! * upward recursion exists only inside tests as a cross-check — it loses
//!   digits whenever 2T ≲ 2n+1 and must not be used for evaluation.
//!
//! [`Jet`] stores truncated Taylor coefficients c_k = f^{(k)}(s₀)/k! and
//! implements the ring/composition operations needed to push power, square
//! root, exponential and Boys evaluations through to high-order derivatives
//! exactly (derivative towers, not finite differences). [`boys_jet`] uses
//! dF_n/dT = −F_{n+1} to build the outer derivative tower.

use crate::error::Result;
use num_complex::Complex64;

/// Series/closed-form crossover. Below this the all-positive series at top
/// order converges in ≲130 terms; above it erf(√T) − 1 < 1e−21 so the
/// complementary form is exact to f64.
const SERIES_LIMIT: f64 = 50.0;

/// F_0 … F_{n_max} at a common argument, highest accuracy path.
pub fn boys_batch(n_max: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::new();
    boys_batch_into(n_max, t, &mut out);
    out
}

/// [`boys_batch`] writing into a caller-owned buffer, so hot loops can reuse
/// one allocation across calls.
pub fn boys_batch_into(n_max: usize, t: f64, out: &mut Vec<f64>) {
    assert!(t >= 0.0, "Boys function argument must be non-negative");
    let emt = (-t).exp();
    out.clear();
    out.resize(n_max + 1, 0.0);
    if t <= SERIES_LIMIT {
        // series at top order
        let n = n_max as f64;
        let mut term = 1.0 / (2.0 * n + 1.0);
        let mut acc = term;
        let mut i = 1.0;
        while term > acc * 1e-18 {
            term *= 2.0 * t / (2.0 * n + 2.0 * i + 1.0);
            acc += term;
            i += 1.0;
        }
        out[n_max] = emt * acc;
    } else {
        // complementary closed form at top order
        let n = n_max as i64;
        let half_sqrt_pi_t = 0.5 * (std::f64::consts::PI / t).sqrt();
        let mut lead = half_sqrt_pi_t;
        for k in 0..n {
            lead *= (2 * k + 1) as f64 / (2.0 * t);
        }
        let mut tail = 0.0;
        let mut ratio = 1.0 / (2.0 * t); // (2n−1)!!/((2n−2i−1)!!(2T)^{i+1}) at i=0
        for i in 0..n {
            tail += ratio;
            ratio *= (2 * (n - i) - 1) as f64 / (2.0 * t);
        }
        out[n_max] = lead - emt * tail;
    }
    for n in (0..n_max).rev() {
        out[n] = (2.0 * t * out[n + 1] + emt) / (2 * n + 1) as f64;
    }
}

/// F_n(T).
pub fn boys(n: usize, t: f64) -> f64 {
    boys_batch(n, t)[n]
}

/// Defining-integral evaluation by adaptive quadrature; the oracle the fast
/// paths are tested against. Absolute accuracy ~1e−15.
pub fn boys_reference(n: usize, t: f64) -> Result<f64> {
    let f = |u: f64| u.powi(2 * n as i32) * (-t * u * u).exp();
    Ok(crate::quadrature::adaptive_gk(&f, 0.0, 1.0, 1e-15)?.0)
}

/// Truncated Taylor series (a "jet"): coefficient k holds f^{(k)}(s₀)/k!.
/// All arithmetic truncates at the common fixed length.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub c: Vec<f64>,
}

impl Jet {
    /// The constant function v, carried to `order` derivatives.
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet { c }
    }

    /// The identity function s evaluated at s₀.
    pub fn variable(s0: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = s0;
        if order >= 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    /// Value of the k-th derivative (not the Taylor coefficient).
    pub fn derivative(&self, k: usize) -> f64 {
        let mut kfact = 1.0;
        for i in 2..=k {
            kfact *= i as f64;
        }
        self.c[k] * kfact
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        let c = self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect();
        Jet { c }
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        let c = self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect();
        Jet { c }
    }

    pub fn scale(&self, f: f64) -> Jet {
        Jet {
            c: self.c.iter().map(|a| a * f).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, rhs: &Jet) -> Jet {
        let n = self.c.len();
        let mut c = vec![0.0; n];
        for i in 0..n {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Jet { c }
    }

    /// 1/f, requiring f(s₀) ≠ 0.
    pub fn recip(&self) -> Jet {
        let n = self.c.len();
        let inv0 = 1.0 / self.c[0];
        let mut c = vec![0.0; n];
        c[0] = inv0;
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.c[j] * c[k - j];
            }
            c[k] = -inv0 * acc;
        }
        Jet { c }
    }

    /// f^p for arbitrary real p via the logarithmic-derivative recurrence
    /// g_k = (1/(k f₀)) Σ_{j=1..k} ((p+1)j − k) f_j g_{k−j}; needs f(s₀) > 0.
    pub fn powf(&self, p: f64) -> Jet {
        let n = self.c.len();
        let mut c = vec![0.0; n];
        c[0] = self.c[0].powf(p);
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((p + 1.0) * j as f64 - k as f64) * self.c[j] * c[k - j];
            }
            c[k] = acc / (k as f64 * self.c[0]);
        }
        Jet { c }
    }

    /// f^m for integer m (negative allowed when f(s₀) ≠ 0).
    pub fn powi(&self, m: i32) -> Jet {
        if m < 0 {
            return self.recip().powi(-m);
        }
        let mut acc = Jet::constant(1.0, self.order());
        let mut base = self.clone();
        let mut e = m as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// e^f via e_k = (1/k) Σ_{j=1..k} j f_j e_{k−j}.
    pub fn exp(&self) -> Jet {
        let n = self.c.len();
        let mut c = vec![0.0; n];
        c[0] = self.c[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * c[k - j];
            }
            c[k] = acc / k as f64;
        }
        Jet { c }
    }

    /// Compose an outer function given by its Taylor coefficients at
    /// self(s₀) with this jet: (outer ∘ self). `outer[k]` must be
    /// g^{(k)}(self.c[0]) / k!.
    pub fn compose_outer(&self, outer: &[f64]) -> Jet {
        let order = self.order();
        let mut dx = self.clone();
        dx.c[0] = 0.0;
        let mut acc = Jet::constant(0.0, order);
        for &b in outer.iter().rev() {
            acc = acc.mul(&dx);
            acc.c[0] += b;
        }
        acc
    }
}

/// Jet of s ↦ F_n(T(s)) given the jet of T. Uses the derivative tower
/// F_n^{(k)}(T) = (−1)^k F_{n+k}(T).
pub fn boys_jet(n: usize, t: &Jet) -> Jet {
    let order = t.order();
    let f = boys_batch(n + order, t.c[0]);
    let mut outer = vec![0.0; order + 1];
    let mut kfact = 1.0;
    for k in 0..=order {
        if k > 0 {
            kfact *= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        outer[k] = sign * f[n + k] / kfact;
    }
    t.compose_outer(&outer)
}

/// Jet of s ↦ e^{−T(s)} given the jet of T.
pub fn exp_neg_jet(t: &Jet) -> Jet {
    t.scale(-1.0).exp()
}

/// Complex-coefficient accumulator over real jets: builds Σ γ_i · f_i(s)
/// without materialising complex jets for every term.
#[derive(Clone, Debug)]
pub struct CJet {
    pub c: Vec<Complex64>,
}

impl CJet {
    pub fn zero(order: usize) -> Self {
        CJet {
            c: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    /// self += γ · jet
    pub fn axpy(&mut self, gamma: Complex64, jet: &Jet) {
        for (a, b) in self.c.iter_mut().zip(&jet.c) {
            *a += gamma * b;
        }
    }

    /// Truncated Cauchy product with a real jet.
    pub fn mul_real(&self, rhs: &Jet) -> CJet {
        let n = self.c.len();
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            if self.c[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..(n - i).min(rhs.c.len()) {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        CJet { c }
    }

    /// Value of the k-th derivative (not the Taylor coefficient).
    pub fn derivative(&self, k: usize) -> Complex64 {
        let mut kfact = 1.0;
        for i in 2..=k {
            kfact *= i as f64;
        }
        self.c[k] * kfact
    }
}
