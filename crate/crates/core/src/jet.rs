//! Truncated univariate Taylor series with complex coefficients.
//!
//! A [`Jet`] of degree `d` holds `c_0..=c_d` of `f(t) = sum c_k t^k` around
//! `t = 0`. Every operation returns the exact degree-`d` truncation of the
//! corresponding series operation, so evaluating a smooth expression on
//! `x0 + t v` yields its directional Taylor coefficients along `v`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

/// Highest supported degree (seventh derivatives).
pub const MAX_DEGREE: usize = 7;

const CAP: usize = MAX_DEGREE + 1;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [Complex64; CAP],
    degree: usize,
}

impl Jet {
    /// The constant `value`, truncated at `degree`.
    ///
    /// Panics if `degree > MAX_DEGREE`; callers validate degrees at the API
    /// boundary (see [`crate::multilinear::directional_jet`]).
    pub fn constant(value: impl Into<Complex64>, degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "jet degree {degree} > {MAX_DEGREE}");
        let mut coeffs = [ZERO; CAP];
        coeffs[0] = value.into();
        Jet { coeffs, degree }
    }

    /// `base + t * direction`.
    pub fn variable(base: f64, direction: Complex64, degree: usize) -> Self {
        let mut j = Self::constant(base, degree);
        if degree >= 1 {
            j.coeffs[1] = direction;
        }
        j
    }

    pub fn from_coeffs(coeffs: &[Complex64]) -> Self {
        let degree = coeffs.len().saturating_sub(1);
        let mut j = Self::constant(ZERO, degree);
        j.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        j
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs[..=self.degree]
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        if k <= self.degree {
            self.coeffs[k]
        } else {
            ZERO
        }
    }

    /// Plain value at the base point.
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Simultaneous sine and cosine through the coupled recurrences
    /// `k s_k = sum_j j u_j c_{k-j}`, `k c_k = -sum_j j u_j s_{k-j}`.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let d = self.degree;
        let mut s = [ZERO; CAP];
        let mut c = [ZERO; CAP];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..=d {
            let mut sk = ZERO;
            let mut ck = ZERO;
            for j in 1..=k {
                let ju = self.coeffs[j] * j as f64;
                sk += ju * c[k - j];
                ck -= ju * s[k - j];
            }
            s[k] = sk / k as f64;
            c[k] = ck / k as f64;
        }
        (Jet { coeffs: s, degree: d }, Jet { coeffs: c, degree: d })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut acc = Jet::constant(1.0, self.degree);
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    pub fn scale(&self, k: impl Into<Complex64>) -> Jet {
        let k = k.into();
        let mut out = *self;
        for c in out.coeffs[..=self.degree].iter_mut() {
            *c *= k;
        }
        out
    }

    fn common_degree(a: &Jet, b: &Jet) -> usize {
        a.degree.min(b.degree)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let d = Jet::common_degree(&self, &rhs);
        let mut coeffs = [ZERO; CAP];
        for (k, c) in coeffs.iter_mut().enumerate().take(d + 1) {
            *c = self.coeffs[k] + rhs.coeffs[k];
        }
        Jet { coeffs, degree: d }
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

/// Truncated Cauchy product.
impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let d = Jet::common_degree(&self, &rhs);
        let mut coeffs = [ZERO; CAP];
        for (k, c) in coeffs.iter_mut().enumerate().take(d + 1) {
            let mut acc = ZERO;
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            *c = acc;
        }
        Jet { coeffs, degree: d }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_is_truncated_cauchy_product() {
        // (1 + t)^3 = 1 + 3t + 3t^2 + t^3, truncated at degree 2
        let x = Jet::variable(1.0, c(1.0, 0.0), 2);
        let cube = x.powi(3);
        assert_eq!(cube.coeffs(), &[c(1.0, 0.0), c(3.0, 0.0), c(3.0, 0.0)]);
    }

    #[test]
    fn sin_of_variable_matches_series() {
        // sin(t) = t - t^3/6 + t^5/120 - t^7/5040
        let t = Jet::variable(0.0, c(1.0, 0.0), 7);
        let s = t.sin();
        let expected = [0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0, 0.0, -1.0 / 5040.0];
        for (k, e) in expected.iter().enumerate() {
            assert!((s.coeff(k) - c(*e, 0.0)).norm() < 1e-16, "k = {k}");
        }
    }

    #[test]
    fn cos_with_complex_direction() {
        // cos(a + i t) = cos a cosh t - i sin a sinh t
        let a = 0.7_f64;
        let j = Jet::variable(a, c(0.0, 1.0), 4);
        let cs = j.cos();
        assert!((cs.coeff(0) - c(a.cos(), 0.0)).norm() < 1e-15);
        assert!((cs.coeff(1) - c(0.0, -a.sin())).norm() < 1e-15);
        assert!((cs.coeff(2) - c(a.cos() / 2.0, 0.0)).norm() < 1e-15);
        assert!((cs.coeff(3) - c(0.0, -a.sin() / 6.0)).norm() < 1e-15);
        assert!((cs.coeff(4) - c(a.cos() / 24.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pythagorean_identity_holds_to_all_orders() {
        let j = Jet::from_coeffs(&[c(0.3, 0.1), c(1.2, -0.4), c(0.5, 0.5), c(-0.2, 0.0), c(0.1, 0.3)]);
        let (s, co) = j.sin_cos();
        let one = s * s + co * co;
        assert!((one.coeff(0) - c(1.0, 0.0)).norm() < 1e-14);
        for k in 1..=4 {
            assert!(one.coeff(k).norm() < 1e-13, "k = {k}: {}", one.coeff(k));
        }
    }

    #[test]
    fn degree_zero_is_plain_evaluation() {
        let x = Jet::constant(0.4, 0);
        let y = (x.sin() * x.cos() * 3.0 + x.powi(2)) - 1.0;
        let plain = 3.0 * 0.4f64.sin() * 0.4f64.cos() + 0.16 - 1.0;
        assert!((y.value().re - plain).abs() < 1e-15);
        assert_eq!(y.degree(), 0);
    }

    #[test]
    fn mixed_degree_arithmetic_truncates_to_lower() {
        let a = Jet::variable(1.0, c(1.0, 0.0), 5);
        let b = Jet::variable(1.0, c(1.0, 0.0), 2);
        assert_eq!((a * b).degree(), 2);
        assert_eq!((a + b).degree(), 2);
    }
}
