//! Dormand–Prince 5(4) with step-size control and continuous (dense) output.
//!
//! Only autonomous systems are needed, so the stage times never appear.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Local error tolerances, applied componentwise as `abs + rel * |y|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepTolerances {
    pub rel: f64,
    pub abs: f64,
}

impl StepTolerances {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        for (name, v) in [("relative", rel), ("absolute", abs)] {
            if !(1e-13..=1e-3).contains(&v) {
                return Err(Error::Domain(format!("{name} tolerance {v} outside [1e-13, 1e-3]")));
            }
        }
        Ok(StepTolerances { rel, abs })
    }
}

impl Default for StepTolerances {
    fn default() -> Self {
        StepTolerances { rel: 1e-10, abs: 1e-12 }
    }
}

/// Explicit adaptive stepper for the autonomous system `y' = f(y)`.
pub struct Dopri5<const N: usize, F: Fn(&[f64; N]) -> [f64; N]> {
    f: F,
    tol: StepTolerances,
    h_max: f64,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    t_old: f64,
    dense: [[f64; N]; 5],
    steps: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl<const N: usize, F: Fn(&[f64; N]) -> [f64; N]> Dopri5<N, F> {
    pub fn new(f: F, t0: f64, y0: [f64; N], tol: StepTolerances) -> Self {
        let k1 = f(&y0);
        let mut s = Dopri5 {
            f,
            tol,
            h_max: f64::INFINITY,
            t: t0,
            y: y0,
            k1,
            h: 0.0,
            t_old: t0,
            dense: [y0; 5],
            steps: 0,
        };
        s.h = s.initial_step();
        s
    }

    pub fn with_max_step(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self.h = self.h.min(h_max);
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    pub fn t_old(&self) -> f64 {
        self.t_old
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.tol.abs + self.tol.rel * a.abs().max(b.abs())
    }

    fn rms(&self, v: &[f64; N], y: &[f64; N]) -> f64 {
        let s: f64 = (0..N).map(|i| (v[i] / self.scale(y[i], y[i])).powi(2)).sum();
        (s / N as f64).sqrt()
    }

    fn initial_step(&self) -> f64 {
        let d0 = self.rms(&self.y, &self.y);
        let d1 = self.rms(&self.k1, &self.y);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = axpy(&self.y, h0, &[(1.0, &self.k1)]);
        let f1 = (self.f)(&y1);
        let diff: [f64; N] = std::array::from_fn(|i| f1[i] - self.k1[i]);
        let d2 = self.rms(&diff, &self.y) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.h_max)
    }

    /// Takes one accepted step, never past `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<()> {
        let f = &self.f;
        let y = self.y;
        let k1 = self.k1;
        loop {
            let mut h = self.h.min(self.h_max);
            let last = self.t + h >= t_limit;
            if last {
                h = t_limit - self.t;
            }
            if h <= 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t: self.t });
            }
            let k2 = f(&axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(&axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(&axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(&axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(&axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(&y_new);

            let mut err = 0.0;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                err += (e / self.scale(y[i], y_new[i])).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() {
                self.h = h * 0.1;
                continue;
            }
            let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 10.0);
            if err <= 1.0 {
                for i in 0..N {
                    let ydiff = y_new[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    self.dense[0][i] = y[i];
                    self.dense[1][i] = ydiff;
                    self.dense[2][i] = bspl;
                    self.dense[3][i] = ydiff - h * k7[i] - bspl;
                    self.dense[4][i] =
                        h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                }
                self.t_old = self.t;
                self.t = if last { t_limit } else { self.t + h };
                self.y = y_new;
                self.k1 = k7;
                self.steps += 1;
                if !last {
                    self.h = h * factor.min(5.0);
                }
                return Ok(());
            }
            self.h = h * factor.min(1.0);
        }
    }

    /// State at `t` within the last accepted step.
    pub fn dense(&self, t: f64) -> [f64; N] {
        let h = self.t - self.t_old;
        let theta = if h > 0.0 { (t - self.t_old) / h } else { 1.0 };
        let th1 = 1.0 - theta;
        let d = &self.dense;
        std::array::from_fn(|i| d[0][i] + theta * (d[1][i] + th1 * (d[2][i] + theta * (d[3][i] + th1 * d[4][i]))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut s = Dopri5::new(|y: &[f64; 1]| [-y[0]], 0.0, [1.0], StepTolerances::new(1e-10, 1e-12).unwrap());
        while s.t() < 5.0 {
            s.step(5.0).unwrap();
        }
        assert_eq!(s.t(), 5.0);
        assert!((s.y()[0] - (-5.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn dense_output_tracks_harmonic_oscillator() {
        let mut s = Dopri5::new(|y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], StepTolerances::default())
            .with_max_step(0.5);
        let mut worst: f64 = 0.0;
        while s.t() < 10.0 {
            s.step(10.0).unwrap();
            for k in 0..=10 {
                let t = s.t_old() + (s.t() - s.t_old()) * k as f64 / 10.0;
                let y = s.dense(t);
                worst = worst.max((y[0] - t.sin()).abs()).max((y[1] - t.cos()).abs());
            }
        }
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn tolerance_bounds() {
        assert!(StepTolerances::new(1e-14, 1e-10).is_err());
        assert!(StepTolerances::new(1e-6, 1e-2).is_err());
        assert!(StepTolerances::new(1e-13, 1e-3).is_ok());
    }
}
