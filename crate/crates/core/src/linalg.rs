//! Dense complex linear algebra at small dimension.
//!
//! Everything here works on `n <= 8` systems: partial-pivot LU, the
//! resolvent solves `(sigma I - A) x = b`, the bordered `(n+1)` system used
//! for singular resolvents at `i*omega0`, and the critical eigen-triple
//! `(omega0, q, p)` via shifted inverse iteration.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative pivot threshold below which a matrix is treated as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-13;

/// A complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec(pub Vec<Complex64>);

impl ComplexVec {
    pub fn zeros(n: usize) -> Self {
        ComplexVec(vec![ZERO; n])
    }

    pub fn from_real(values: &[f64]) -> Self {
        ComplexVec(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Unit vector `e_k` of length `n`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn conj(&self) -> Self {
        ComplexVec(self.0.iter().map(|z| z.conj()).collect())
    }

    /// `<self, other> = sum conj(self_i) other_i`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVec) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest imaginary part in absolute value, as a vector norm.
    pub fn imag_norm(&self) -> f64 {
        self.0.iter().map(|z| z.im * z.im).sum::<f64>().sqrt()
    }

    pub fn scale(&self, k: impl Into<Complex64>) -> Self {
        let k = k.into();
        ComplexVec(self.0.iter().map(|z| z * k).collect())
    }

    pub fn distance(&self, other: &ComplexVec) -> f64 {
        (self - other).norm()
    }
}

impl Index<usize> for ComplexVec {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVec {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl From<Vec<Complex64>> for ComplexVec {
    fn from(v: Vec<Complex64>) -> Self {
        ComplexVec(v)
    }
}

impl Add<&ComplexVec> for &ComplexVec {
    type Output = ComplexVec;
    fn add(self, rhs: &ComplexVec) -> ComplexVec {
        debug_assert_eq!(self.len(), rhs.len());
        ComplexVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for ComplexVec {
    type Output = ComplexVec;
    fn add(self, rhs: ComplexVec) -> ComplexVec {
        &self + &rhs
    }
}

impl AddAssign<&ComplexVec> for ComplexVec {
    fn add_assign(&mut self, rhs: &ComplexVec) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl Sub<&ComplexVec> for &ComplexVec {
    type Output = ComplexVec;
    fn sub(self, rhs: &ComplexVec) -> ComplexVec {
        debug_assert_eq!(self.len(), rhs.len());
        ComplexVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Sub for ComplexVec {
    type Output = ComplexVec;
    fn sub(self, rhs: ComplexVec) -> ComplexVec {
        &self - &rhs
    }
}

impl Neg for ComplexVec {
    type Output = ComplexVec;
    fn neg(self) -> ComplexVec {
        self.scale(-1.0)
    }
}

impl Mul<&ComplexVec> for Complex64 {
    type Output = ComplexVec;
    fn mul(self, rhs: &ComplexVec) -> ComplexVec {
        rhs.scale(self)
    }
}

impl Mul<&ComplexVec> for f64 {
    type Output = ComplexVec;
    fn mul(self, rhs: &ComplexVec) -> ComplexVec {
        rhs.scale(self)
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parse("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::new(n, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        ComplexMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn mul_vec(&self, v: &ComplexVec) -> ComplexVec {
        debug_assert_eq!(v.len(), self.n);
        let n = self.n;
        ComplexVec(
            (0..n)
                .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
                .collect(),
        )
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> ComplexMatrix {
        let mut t = self.transpose();
        for z in t.data.iter_mut() {
            *z = z.conj();
        }
        t
    }

    /// `sigma I - self`.
    pub fn resolvent_matrix(&self, sigma: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for z in out.data.iter_mut() {
            *z = -*z;
        }
        for i in 0..self.n {
            out[(i, i)] += sigma;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    factors: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Result<Lu> {
        let n = a.n;
        let scale = a.max_abs();
        let threshold = PIVOT_TOLERANCE * if scale > 0.0 { scale } else { 1.0 };
        let mut f = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, mag) = (k..n)
                .map(|i| (i, f[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(mag > threshold) {
                return Err(Error::Singular { pivot: k, magnitude: mag.max(0.0) });
            }
            if p != k {
                for j in 0..n {
                    f.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = f[k * n + k];
            for i in k + 1..n {
                let m = f[i * n + k] / pivot;
                f[i * n + k] = m;
                for j in k + 1..n {
                    let u = f[k * n + j];
                    f[i * n + j] -= m * u;
                }
            }
        }
        Ok(Lu { n, factors: f, perm })
    }

    pub fn solve(&self, b: &ComplexVec) -> Result<ComplexVec> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.len() });
        }
        let f = &self.factors;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = f[i * n + j];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = f[i * n + j];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= f[i * n + i];
        }
        Ok(ComplexVec(x))
    }
}

/// Solve `A x = b` by partial-pivot LU.
pub fn lu_solve(a: &ComplexMatrix, b: &ComplexVec) -> Result<ComplexVec> {
    Lu::factor(a)?.solve(b)
}

/// Relative residual `|A x - b| / (|A| |x| + |b|)`.
pub fn relative_residual(a: &ComplexMatrix, x: &ComplexVec, b: &ComplexVec) -> f64 {
    let r = (&a.mul_vec(x) - b).norm();
    let denom = a.norm_inf() * x.norm() + b.norm();
    if denom == 0.0 {
        r
    } else {
        r / denom
    }
}

/// Solve `(sigma I - A) x = b`, reporting a singular resolvent by its shift.
pub fn resolvent_solve(a: &ComplexMatrix, sigma: Complex64, b: &ComplexVec) -> Result<ComplexVec> {
    match Lu::factor(&a.resolvent_matrix(sigma)) {
        Ok(lu) => lu.solve(b),
        Err(Error::Singular { .. }) => Err(Error::SingularResolvent { shift: sigma }),
        Err(e) => Err(e),
    }
}

/// Output of [`bordered_solve`] with the diagnostics needed to confirm that
/// the bordered solution also solves the original singular system.
#[derive(Debug, Clone, PartialEq)]
pub struct BorderedSolution {
    pub h: ComplexVec,
    /// The border unknown `s`; zero whenever `<p, rhs> = 0`.
    pub border: Complex64,
    /// `|(i omega0 I - A) h - rhs|`.
    pub singular_residual: f64,
    /// `|<p, h>|`.
    pub orthogonality: f64,
}

/// Default bound on `|<p, rhs>|` accepted by [`bordered_solve`].
pub const SOLVABILITY_TOLERANCE: f64 = 1e-8;

/// Solve the singular system `(i omega0 I - A) h = rhs` subject to
/// `<p, h> = 0` through the nonsingular bordered system
///
/// ```text
/// [ i omega0 I - A   q ] [ h ]   [ rhs ]
/// [     conj(p)^T    0 ] [ s ] = [  0  ]
/// ```
pub fn bordered_solve(
    a: &ComplexMatrix,
    omega0: f64,
    q: &ComplexVec,
    p: &ComplexVec,
    rhs: &ComplexVec,
    solvability_tol: f64,
) -> Result<BorderedSolution> {
    let n = a.dim();
    for v in [q, p, rhs] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let compat = p.inner(rhs).norm();
    if compat > solvability_tol {
        return Err(Error::Solvability { residual: compat, tolerance: solvability_tol });
    }
    let shift = Complex64::new(0.0, omega0);
    let core = a.resolvent_matrix(shift);
    let mut big = ComplexMatrix::zeros(n + 1);
    for i in 0..n {
        for j in 0..n {
            big[(i, j)] = core[(i, j)];
        }
        big[(i, n)] = q[i];
        big[(n, i)] = p[i].conj();
    }
    let mut b = ComplexVec::zeros(n + 1);
    b.0[..n].copy_from_slice(rhs.as_slice());
    let sol = Lu::factor(&big)
        .map_err(|e| Error::InvalidFrame(format!("bordered matrix singular ({e}); (omega0, q, p) is not a Hopf triple of A")))?
        .solve(&b)?;
    let h = ComplexVec(sol.0[..n].to_vec());
    let singular_residual = (&core.mul_vec(&h) - rhs).norm();
    let orthogonality = p.inner(&h).norm();
    Ok(BorderedSolution { h, border: sol[n], singular_residual, orthogonality })
}

/// How to fix the free complex factor of the critical eigenvector `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseConvention {
    /// `|q| = 1` with the largest-magnitude component real and positive.
    LargestComponentReal,
    /// Scale `q` so that `q[index] == value` exactly.
    FixedComponent { index: usize, value: Complex64 },
}

/// The critical eigen-data `A q = i omega0 q`, `A^H p = -i omega0 p`,
/// `<p, q> = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenTriple {
    pub omega0: f64,
    pub q: ComplexVec,
    pub p: ComplexVec,
}

impl EigenTriple {
    /// Residuals `(|A q - i w q| / |q|, |A^H p + i w p| / |p|, |<p,q> - 1|)`.
    pub fn residuals(&self, a: &ComplexMatrix) -> (f64, f64, f64) {
        let iw = Complex64::new(0.0, self.omega0);
        let rq = (&a.mul_vec(&self.q) - &self.q.scale(iw)).norm() / self.q.norm();
        let rp = (&a.conj_transpose().mul_vec(&self.p) + &self.p.scale(iw)).norm() / self.p.norm();
        let rn = (self.p.inner(&self.q) - ONE).norm();
        (rq, rp, rn)
    }
}

const MAX_INVERSE_ITERATIONS: usize = 100;

/// Eigenpair of `a` nearest `shift`, by inverse iteration with Rayleigh
/// quotient shift updates. A few fixed-shift sweeps come first so the
/// iteration locks onto the eigenvalue closest to the initial shift.
pub fn eigenpair_near(a: &ComplexMatrix, shift: Complex64) -> Result<(Complex64, ComplexVec)> {
    let n = a.dim();
    let mut v = ComplexVec((0..n).map(|k| Complex64::new(1.0, 0.1 * (k as f64 + 1.0))).collect());
    v = v.scale(1.0 / v.norm());
    let mut lambda = shift;
    let tol = 1e-15 * a.max_abs().max(1.0);
    for it in 0..MAX_INVERSE_ITERATIONS {
        let sigma = if it < 3 { shift } else { lambda };
        let mut m = a.clone();
        for i in 0..n {
            m[(i, i)] -= sigma;
        }
        let lu = match Lu::factor(&m) {
            Ok(lu) => lu,
            Err(Error::Singular { .. }) => {
                // Shift is an eigenvalue to working precision: nudge it off so
                // one more sweep still amplifies the eigendirection.
                let nudged = sigma + Complex64::new(1e-10, 1e-10) * sigma.norm().max(1.0);
                let mut m2 = a.clone();
                for i in 0..n {
                    m2[(i, i)] -= nudged;
                }
                Lu::factor(&m2)?
            }
            Err(e) => return Err(e),
        };
        let w = lu.solve(&v)?;
        let wn = w.norm();
        if !wn.is_finite() || wn == 0.0 {
            break;
        }
        v = w.scale(1.0 / wn);
        let new_lambda = v.inner(&a.mul_vec(&v));
        let step = (new_lambda - lambda).norm();
        lambda = new_lambda;
        let resid = (&a.mul_vec(&v) - &v.scale(lambda)).norm();
        if it >= 3 && step <= tol && resid <= tol * 10.0 {
            break;
        }
    }
    let resid = (&a.mul_vec(&v) - &v.scale(lambda)).norm();
    if resid > 1e-11 * a.max_abs().max(1.0) {
        return Err(Error::NoConvergence { what: "inverse iteration", iterations: MAX_INVERSE_ITERATIONS });
    }
    Ok((lambda, v))
}

/// Extract `(omega0, q, p)` for the eigenvalue `i*omega0` near
/// `i*omega_guess`, normalized by `convention` and `<p, q> = 1`.
pub fn eigen_triple(a: &ComplexMatrix, omega_guess: f64, convention: PhaseConvention) -> Result<EigenTriple> {
    if !(omega_guess > 0.0) {
        return Err(Error::Eigen { guess: omega_guess, reason: "guess must be positive".into() });
    }
    let guess = Complex64::new(0.0, omega_guess);
    let (lambda, q) = eigenpair_near(a, guess)?;
    if (lambda - guess).norm() > 0.1 * omega_guess {
        return Err(Error::Eigen {
            guess: omega_guess,
            reason: format!("nearest eigenvalue {lambda} lies outside the 10% neighborhood"),
        });
    }
    if lambda.re.abs() > 1e-8 * lambda.norm().max(1.0) {
        return Err(Error::Eigen {
            guess: omega_guess,
            reason: format!("nearest eigenvalue {lambda} is not on the imaginary axis"),
        });
    }
    let omega0 = lambda.im;
    let (mu, p) = eigenpair_near(&a.conj_transpose(), lambda.conj())?;
    if (mu - lambda.conj()).norm() > 1e-8 * omega0.max(1.0) {
        return Err(Error::Eigen { guess: omega_guess, reason: format!("adjoint eigenvalue {mu} does not match {lambda}") });
    }

    let q = match convention {
        PhaseConvention::LargestComponentReal => {
            let q = q.scale(1.0 / q.norm());
            let big = q
                .iter()
                .copied()
                .fold(ZERO, |best, z| if z.norm() > best.norm() { z } else { best });
            q.scale(big.norm() / big)
        }
        PhaseConvention::FixedComponent { index, value } => {
            if index >= q.len() || q[index].norm() < 1e-12 * q.norm() {
                return Err(Error::Eigen { guess: omega_guess, reason: format!("component {index} of q vanishes") });
            }
            let mut q = q.scale(value / q[index]);
            q[index] = value;
            q
        }
    };
    let pq = p.inner(&q);
    if pq.norm() < 1e-14 {
        return Err(Error::Eigen { guess: omega_guess, reason: "<p, q> = 0: eigenvalue is not simple".into() });
    }
    let p = p.scale(ONE / pq.conj());
    Ok(EigenTriple { omega0, q, p })
}

/// Full spectrum by a Schur decomposition.
pub fn spectrum(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.dim();
    if a.is_real() {
        let m = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| a[(i, j)].re);
        m.complex_eigenvalues().iter().copied().collect()
    } else {
        let m = nalgebra::DMatrix::<Complex64>::from_fn(n, n, |i, j| a[(i, j)]);
        m.schur()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let b = ComplexVec(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, -1.0)]);
        let x = lu_solve(&ComplexMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        let mut a = ComplexMatrix::zeros(3);
        a[(0, 0)] = c(2.0, 0.0);
        a[(1, 1)] = c(0.0, 1.0);
        a[(2, 2)] = c(-1.0, 0.0);
        let b = ComplexVec(vec![c(2.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        let x = lu_solve(&a, &b).unwrap();
        for z in x.iter() {
            assert!((z - ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn singular_matrix_reports_pivot() {
        let a = ComplexMatrix::from_real(3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 0.0, 1.0]).unwrap();
        match lu_solve(&a, &ComplexVec::zeros(3)) {
            Err(Error::Singular { pivot, .. }) => assert_eq!(pivot, 1),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let b = ComplexVec(vec![c(3.0, 1.0), c(-2.0, 0.0)]);
        let x = lu_solve(&a, &b).unwrap();
        assert_eq!(x.0, vec![c(-2.0, 0.0), c(3.0, 1.0)]);
    }

    #[test]
    fn bordered_rejects_incompatible_rhs() {
        // A = [[0, -1], [1, 0]] has eigenvalues +-i with q = (1, -i)/sqrt2.
        let a = ComplexMatrix::from_real(2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        let t = eigen_triple(&a, 1.0, PhaseConvention::LargestComponentReal).unwrap();
        let err = bordered_solve(&a, t.omega0, &t.q, &t.p, &t.q, SOLVABILITY_TOLERANCE).unwrap_err();
        assert!(matches!(err, Error::Solvability { residual, .. } if (residual - 1.0).abs() < 1e-12));
    }

    #[test]
    fn bordered_homogeneous_gives_zero() {
        let a = ComplexMatrix::from_real(3, &[0.0, -2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        let t = eigen_triple(&a, 2.0, PhaseConvention::LargestComponentReal).unwrap();
        let sol = bordered_solve(&a, t.omega0, &t.q, &t.p, &ComplexVec::zeros(3), SOLVABILITY_TOLERANCE).unwrap();
        assert_eq!(sol.h.norm(), 0.0);
        assert_eq!(sol.border.norm(), 0.0);
    }

    #[test]
    fn eigen_triple_on_rotation_block() {
        let a = ComplexMatrix::from_real(3, &[0.0, -2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        let t = eigen_triple(&a, 1.9, PhaseConvention::LargestComponentReal).unwrap();
        assert!((t.omega0 - 2.0).abs() < 1e-13);
        let (rq, rp, rn) = t.residuals(&a);
        assert!(rq < 1e-12 && rp < 1e-12 && rn < 1e-14, "{rq} {rp} {rn}");
        assert!((t.q.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_triple_rejects_guess_far_from_spectrum() {
        let a = ComplexMatrix::from_real(2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        let r = eigen_triple(&a, 3.0, PhaseConvention::LargestComponentReal);
        assert!(matches!(r, Err(Error::Eigen { .. })), "{r:?}");
    }

    #[test]
    fn eigen_triple_rejects_off_axis_eigenvalue() {
        // eigenvalues -0.5 +- i
        let a = ComplexMatrix::from_real(2, &[-0.5, -1.0, 1.0, -0.5]).unwrap();
        assert!(matches!(eigen_triple(&a, 1.0, PhaseConvention::LargestComponentReal), Err(Error::Eigen { .. })));
    }

    #[test]
    fn spectrum_of_real_rotation() {
        let a = ComplexMatrix::from_real(2, &[0.0, -3.0, 3.0, 0.0]).unwrap();
        let mut ev = spectrum(&a);
        ev.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((ev[0] - c(0.0, -3.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 3.0)).norm() < 1e-14);
    }
}
