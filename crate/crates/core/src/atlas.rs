//! The critical surface `eps = 2 alpha beta^{3/2}` as a `(beta, alpha)` plane:
//! closed-form l1 and l2, sign regions, zero curves, the codimension-three
//! point Q and its transversality data.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::eigenpair_near;
use crate::watt::{self, Params};

/// `g = 3 + (alpha^2 - 5) beta^2 + alpha^4 beta^6`; `l1` has the sign of `-g`.
pub fn g_eval(beta: f64, alpha: f64) -> f64 {
    let (b2, a2) = (beta * beta, alpha * alpha);
    3.0 + (a2 - 5.0) * b2 + a2 * a2 * b2 * b2 * b2
}

/// `(dg/dbeta, dg/dalpha)`.
pub fn g_gradient(beta: f64, alpha: f64) -> [f64; 2] {
    let (b2, a2) = (beta * beta, alpha * alpha);
    [
        2.0 * (a2 - 5.0) * beta + 6.0 * a2 * a2 * b2 * b2 * beta,
        2.0 * alpha * b2 + 4.0 * a2 * alpha * b2 * b2 * b2,
    ]
}

/// First Lyapunov coefficient on the critical surface, in closed form.
pub fn l1_closed(beta: f64, alpha: f64) -> f64 {
    let (b2, a2) = (beta * beta, alpha * alpha);
    let b4 = b2 * b2;
    let num = alpha * beta * beta.sqrt() * (1.0 - b2) * g_eval(beta, alpha);
    let den = (1.0 - b2 + a2 * b4) * (1.0 - b2 + 4.0 * a2 * b4);
    -0.5 * num / den
}

/// The degree-30 numerator polynomial of the closed-form `l2`.
pub fn h_poly(beta: f64, alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let a8 = a4 * a4;
    let a10 = a8 * a2;
    let a12 = a8 * a4;
    let a14 = a12 * a2;
    let a16 = a8 * a8;
    let b = |k: i32| beta.powi(k);

    -162.0 - 54.0 * (-9.0 + 37.0 * a2) * b(2)
        - 9.0 * (-126.0 + 61.0 * a2 + 60.0 * a4) * b(4)
        - 18.0 * (405.0 - 3212.0 * a2 + 1128.0 * a4) * b(6)
        + (13770.0 - 210843.0 * a2 + 113612.0 * a4 - 5533.0 * a6) * b(8)
        - 6.0 * (2133.0 - 57687.0 * a2 + 38218.0 * a4 + 5186.0 * a6) * b(10)
        + (5994.0 - 301275.0 * a2 + 215340.0 * a4 + 284264.0 * a6 - 16022.0 * a8) * b(12)
        + 2.0 * (-567.0 + 67878.0 * a2 - 45196.0 * a4 - 379430.0 * a6 + 9347.0 * a8) * b(14)
        + a2 * (-25029.0 + 9540.0 * a2 + 990831.0 * a4 + 155856.0 * a6 - 21205.0 * a8) * b(16)
        + 4.0 * a4 * (513.0 - a2 * (163340.0 + 120616.0 * a2 - 16768.0 * a4)) * b(18)
        - 2.0 * a6 * (-86887.0 - 258835.0 * a2 + 30173.0 * a4 + 7208.0 * a6) * b(20)
        + 2.0 * a8 * (-96867.0 - 8956.0 * a2 + 23208.0 * a4) * b(22)
        + a10 * (33671.0 - 58288.0 * a2 - 4880.0 * a4) * b(24)
        + 16.0 * a12 * (1603.0 + 718.0 * a2) * b(26)
        - 16.0 * a14 * (453.0 + 40.0 * a2) * b(28)
        + 640.0 * a16 * b(30)
}

/// Expanded coefficients of `h`: row `k` holds the coefficients of
/// `alpha^{2j} beta^{2k}` for `j = 0, 1, ...`.
const H_EXPANDED: [&[f64]; 16] = [
    &[-162.0],
    &[486.0, -1998.0],
    &[1134.0, -549.0, -540.0],
    &[-7290.0, 57816.0, -20304.0],
    &[13770.0, -210843.0, 113612.0, -5533.0],
    &[-12798.0, 346122.0, -229308.0, -31116.0],
    &[5994.0, -301275.0, 215340.0, 284264.0, -16022.0],
    &[-1134.0, 135756.0, -90392.0, -758860.0, 18694.0],
    &[0.0, -25029.0, 9540.0, 990831.0, 155856.0, -21205.0],
    &[0.0, 0.0, 2052.0, -653360.0, -482464.0, 67072.0],
    &[0.0, 0.0, 0.0, 173774.0, 517670.0, -60346.0, -14416.0],
    &[0.0, 0.0, 0.0, 0.0, -193734.0, -17912.0, 46416.0],
    &[0.0, 0.0, 0.0, 0.0, 0.0, 33671.0, -58288.0, -4880.0],
    &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 25648.0, 11488.0],
    &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -7248.0, -640.0],
    &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 640.0],
];

fn h_terms(beta: f64, alpha: f64, abs: bool) -> f64 {
    let (b2, a2) = (beta * beta, alpha * alpha);
    let mut total = 0.0;
    let mut bk = 1.0;
    for row in H_EXPANDED {
        let mut aj = 1.0;
        for &c in row {
            total += if abs { c.abs() } else { c } * aj * bk;
            aj *= a2;
        }
        bk *= b2;
    }
    total
}

/// `h` from its expanded monomials; used to cross-check [`h_poly`].
pub fn h_expanded(beta: f64, alpha: f64) -> f64 {
    h_terms(beta, alpha, false)
}

/// Sum of absolute monomial values of `h`: the natural scale for residuals.
pub fn h_scale(beta: f64, alpha: f64) -> f64 {
    h_terms(beta, alpha, true)
}

/// The `alpha` with `g(beta, alpha) = 0`, which exists only for
/// `beta > sqrt(3/5)`: `g` is quadratic in `alpha^2` with one positive root.
pub fn l1_zero_alpha(beta: f64) -> Option<f64> {
    let b2 = beta * beta;
    let (a, b, c) = (b2 * b2 * b2, b2, 3.0 - 5.0 * b2);
    if !(beta > 0.0 && beta < 1.0) || c >= 0.0 {
        return None;
    }
    // Cancellation-free form of the positive root.
    let root = 2.0 * (-c) / (b + (b * b - 4.0 * a * c).sqrt());
    Some(root.sqrt())
}

/// Second Lyapunov coefficient on the critical surface, in closed form.
pub fn l2_closed(beta: f64, alpha: f64) -> f64 {
    l2_from_h(beta, alpha, h_poly(beta, alpha))
}

/// `l2` given the value `h` of the numerator polynomial at `(beta, alpha)`.
pub fn l2_from_h(beta: f64, alpha: f64, h: f64) -> f64 {
    let (b2, a2) = (beta * beta, alpha * alpha);
    let b4 = b2 * b2;
    let d1 = 1.0 - b2 + a2 * b4;
    let d2 = 9.0 - 9.0 * b2 + 4.0 * a2 * b4;
    let d3 = 1.0 - b2 + 4.0 * a2 * b4;
    alpha * beta * beta.sqrt() * h / (36.0 * d1.powi(3) * d2 * d3.powi(3))
}

/// Full-precision coordinates of Q, for reference and default seeds.
pub const Q_BETA: f64 = 0.868_280_339_979_712_8;
pub const Q_ALPHA: f64 = 0.850_500_484_306_850_2;
pub const Q_EPSILON: f64 = 1.376_241_064_846_599_5;

/// Points within this `(beta, alpha)` distance of Q are tagged [`Region::QNeighborhood`].
pub const Q_NEIGHBORHOOD: f64 = 1e-3;

/// Points with `|g|` below this are treated as lying on `l1 = 0`.
pub const ON_CURVE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `l1 < 0`: supercritical, stable cycle for `eps < eps_c`.
    S,
    /// `l1 > 0`: subcritical.
    U,
    /// `l1 = 0`, `l2 < 0`.
    C1,
    /// `l1 = 0`, `l2 > 0`.
    C2,
    QNeighborhood,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::S => "S",
            Region::U => "U",
            Region::C1 => "C1",
            Region::C2 => "C2",
            Region::QNeighborhood => "Q",
        }
    }

    pub fn classify(beta: f64, alpha: f64, l2: f64) -> Region {
        if (beta - Q_BETA).hypot(alpha - Q_ALPHA) < Q_NEIGHBORHOOD {
            return Region::QNeighborhood;
        }
        let g = g_eval(beta, alpha);
        if g.abs() < ON_CURVE {
            if l2 < 0.0 { Region::C1 } else { Region::C2 }
        } else if g > 0.0 {
            Region::S
        } else {
            Region::U
        }
    }
}

/// A point of the critical surface with both closed-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub beta: f64,
    pub alpha: f64,
    pub epsilon_c: f64,
    pub l1: f64,
    pub l2: f64,
    pub region: Region,
}

impl CriticalPoint {
    pub fn new(beta: f64, alpha: f64) -> Result<Self> {
        Params::critical(beta, alpha)?;
        let l2 = l2_closed(beta, alpha);
        Ok(CriticalPoint {
            beta,
            alpha,
            epsilon_c: watt::critical_epsilon(beta, alpha),
            l1: l1_closed(beta, alpha),
            l2,
            region: Region::classify(beta, alpha, l2),
        })
    }
}

/// Rectangle in `(beta, alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBox {
    pub beta: (f64, f64),
    pub alpha: (f64, f64),
}

impl Default for ParamBox {
    fn default() -> Self {
        ParamBox { beta: (0.01, 0.99), alpha: (0.01, 3.0) }
    }
}

impl ParamBox {
    pub fn new(beta: (f64, f64), alpha: (f64, f64)) -> Result<Self> {
        let b = ParamBox { beta, alpha };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let (b0, b1) = self.beta;
        let (a0, a1) = self.alpha;
        if !(b0 > 0.0 && b1 < 1.0 && b0 < b1) {
            return Err(Error::Domain(format!("beta range [{b0}, {b1}] must be increasing inside (0, 1)")));
        }
        if !(a0 > 0.0 && a1.is_finite() && a0 < a1) {
            return Err(Error::Domain(format!("alpha range [{a0}, {a1}] must be increasing inside (0, inf)")));
        }
        Ok(())
    }

    /// Parses `b0,b1,a0,a1`.
    pub fn parse(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("box '{s}': {e}")))?;
        if v.len() != 4 {
            return Err(Error::Parse(format!("box '{s}' needs four numbers beta0,beta1,alpha0,alpha1")));
        }
        Self::new((v[0], v[1]), (v[2], v[3]))
    }

    fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![0.5 * (range.0 + range.1)];
        }
        (0..n).map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64).collect()
    }
}

/// Closed-form sign map over `n_beta x n_alpha` nodes, row-major with `alpha`
/// indexing rows.
pub fn scan_signs(bx: &ParamBox, n_beta: usize, n_alpha: usize) -> Result<Vec<CriticalPoint>> {
    bx.validate()?;
    if n_beta == 0 || n_alpha == 0 {
        return Err(Error::Domain("scan resolution must be positive".into()));
    }
    let betas = ParamBox::axis(bx.beta, n_beta);
    let alphas = ParamBox::axis(bx.alpha, n_alpha);
    (0..n_beta * n_alpha)
        .into_par_iter()
        .map(|k| CriticalPoint::new(betas[k % n_beta], alphas[k / n_beta]))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroCurve {
    L1,
    L2,
}

impl ZeroCurve {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZeroCurve::L1 => "l1_zero",
            ZeroCurve::L2 => "l2_zero",
        }
    }

    /// The defining function, scaled so `1e-12` is a meaningful residual.
    pub fn residual(&self, beta: f64, alpha: f64) -> f64 {
        match self {
            ZeroCurve::L1 => g_eval(beta, alpha),
            ZeroCurve::L2 => h_poly(beta, alpha) / h_scale(beta, alpha),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTrace {
    pub which: ZeroCurve,
    pub points: Vec<CriticalPoint>,
    pub residual_bound: f64,
}

/// Residual reached by bisection on each grid edge.
pub const TRACE_TOLERANCE: f64 = 1e-12;

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo) < 1e-16 * mid.abs().max(1.0) {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zeros of `which` found on the edges of a grid with spacing `step`, then
/// ordered greedily by nearest neighbour starting from the smallest `beta`.
pub fn trace_zero_curve(which: ZeroCurve, bx: &ParamBox, step: f64) -> Result<CurveTrace> {
    bx.validate()?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step {step} must be positive")));
    }
    let nb = ((bx.beta.1 - bx.beta.0) / step).ceil() as usize + 1;
    let na = ((bx.alpha.1 - bx.alpha.0) / step).ceil() as usize + 1;
    let betas = ParamBox::axis(bx.beta, nb);
    let alphas = ParamBox::axis(bx.alpha, na);
    let f = |b: f64, a: f64| which.residual(b, a);

    // Edges along beta at fixed alpha, then along alpha at fixed beta.
    let mut raw: Vec<(f64, f64)> = alphas
        .par_iter()
        .flat_map_iter(|&a| {
            betas
                .windows(2)
                .filter(move |w| f(w[0], a).signum() != f(w[1], a).signum())
                .map(move |w| (bisect(|b| f(b, a), w[0], w[1]), a))
                .collect::<Vec<_>>()
        })
        .collect();
    let by_column: Vec<(f64, f64)> = betas
        .par_iter()
        .flat_map_iter(|&b| {
            alphas
                .windows(2)
                .filter(move |w| f(b, w[0]).signum() != f(b, w[1]).signum())
                .map(move |w| (b, bisect(|a| f(b, a), w[0], w[1])))
                .collect::<Vec<_>>()
        })
        .collect();
    raw.extend(by_column);

    let dedup = step * 1e-6;
    raw.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    raw.dedup_by(|p, q| (p.0 - q.0).hypot(p.1 - q.1) < dedup);

    let mut ordered = Vec::with_capacity(raw.len());
    if !raw.is_empty() {
        let mut current = raw.remove(0);
        ordered.push(current);
        while !raw.is_empty() {
            let (k, _) = raw
                .iter()
                .enumerate()
                .map(|(k, p)| (k, (p.0 - current.0).hypot(p.1 - current.1)))
                .fold((0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
            current = raw.remove(k);
            ordered.push(current);
        }
    }

    let points = ordered
        .into_iter()
        .map(|(b, a)| CriticalPoint::new(b, a))
        .collect::<Result<Vec<_>>>()?;
    let residual_bound = points
        .iter()
        .map(|p| which.residual(p.beta, p.alpha).abs())
        .fold(0.0, f64::max);
    Ok(CurveTrace { which, points, residual_bound })
}

/// Default Newton seed for [`locate_q`].
pub const Q_SEED: (f64, f64) = (0.87, 0.85);

const NEWTON_MAX_ITERATIONS: usize = 50;
const H_FD_STEP: f64 = 1e-7;

/// Newton's method on `(g, h) = 0`, analytic in `g` and central differences
/// in `h`. Converged when `|g| < 1e-14` and `|h| < 1e-10` relative to its
/// monomial scale, and the last step is below `1e-12`.
pub fn locate_q(seed: (f64, f64)) -> Result<CriticalPoint> {
    let (mut b, mut a) = seed;
    Params::critical(b, a)?;
    for it in 0..NEWTON_MAX_ITERATIONS {
        let g = g_eval(b, a);
        let h = h_poly(b, a);
        let [gb, ga] = g_gradient(b, a);
        let hb = (h_poly(b + H_FD_STEP, a) - h_poly(b - H_FD_STEP, a)) / (2.0 * H_FD_STEP);
        let ha = (h_poly(b, a + H_FD_STEP) - h_poly(b, a - H_FD_STEP)) / (2.0 * H_FD_STEP);
        let det = gb * ha - ga * hb;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoConvergence { what: "Q Newton (singular Jacobian)", iterations: it });
        }
        let db = (g * ha - ga * h) / det;
        let da = (gb * h - g * hb) / det;
        b -= db;
        a -= da;
        if !(b > 0.0 && b < 1.0 && a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("Newton left the domain at beta = {b}, alpha = {a}")));
        }
        let small_step = db.abs().max(da.abs()) < 1e-12;
        if small_step && g_eval(b, a).abs() < 1e-14 && h_poly(b, a).abs() < 1e-10 * h_scale(b, a) {
            return CriticalPoint::new(b, a);
        }
    }
    Err(Error::NoConvergence { what: "Q Newton", iterations: NEWTON_MAX_ITERATIONS })
}

/// Gradients of the closed-form coefficients at a point and the determinant
/// of the matrix with those gradients as rows.
///
/// `Re G21 = 2 l1` is the quantity often tabulated instead of `l1`; its
/// gradient and determinant are carried alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transversality {
    pub grad_l1: [f64; 2],
    pub grad_l2: [f64; 2],
    pub determinant: f64,
    pub grad_re_g21: [f64; 2],
    pub determinant_re_g21: f64,
    /// Largest change in any gradient entry when the step is reduced tenfold.
    pub richardson_gap: f64,
}

fn central_gradients(beta: f64, alpha: f64, h: f64) -> ([f64; 2], [f64; 2]) {
    let d = |f: fn(f64, f64) -> f64| {
        [
            (f(beta + h, alpha) - f(beta - h, alpha)) / (2.0 * h),
            (f(beta, alpha + h) - f(beta, alpha - h)) / (2.0 * h),
        ]
    };
    (d(l1_closed), d(l2_closed))
}

pub fn transversality_at_q(point: &CriticalPoint) -> Transversality {
    let (g1, g2) = central_gradients(point.beta, point.alpha, 1e-6);
    let (r1, r2) = central_gradients(point.beta, point.alpha, 1e-7);
    let richardson_gap = g1
        .iter()
        .chain(&g2)
        .zip(r1.iter().chain(&r2))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let det = g1[0] * g2[1] - g1[1] * g2[0];
    Transversality {
        grad_l1: g1,
        grad_l2: g2,
        determinant: det,
        grad_re_g21: [2.0 * g1[0], 2.0 * g1[1]],
        determinant_re_g21: 2.0 * det,
        richardson_gap,
    }
}

/// `d Re(lambda)/d eps` at `eps = eps_c` for the critical pair, by central
/// differences on the tracked eigenvalue.
pub fn eps_transversality(beta: f64, alpha: f64) -> Result<f64> {
    let crit = Params::critical(beta, alpha)?;
    let step = 1e-6 * crit.epsilon.max(1.0);
    let guess = Complex64::new(0.0, crit.omega0());
    let re_at = |eps: f64| -> Result<f64> {
        let p = Params::new(beta, alpha, eps)?;
        let (lambda, _) = eigenpair_near(&watt::jacobian(&p), guess)?;
        if (lambda - guess).norm() > 0.1 * crit.omega0() {
            return Err(Error::Eigen { guess: crit.omega0(), reason: format!("lost track of the critical pair ({lambda})") });
        }
        Ok(lambda.re)
    };
    Ok((re_at(crit.epsilon + step)? - re_at(crit.epsilon - step)?) / (2.0 * step))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_examples() {
        assert_eq!(g_eval(0.5, 1.0), 2.015625);
        assert!((g_eval(1e-9, 0.7) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn g_gradient_matches_differences() {
        let (b, a, h) = (0.6, 1.3, 1e-6);
        let [gb, ga] = g_gradient(b, a);
        assert!((gb - (g_eval(b + h, a) - g_eval(b - h, a)) / (2.0 * h)).abs() < 1e-8);
        assert!((ga - (g_eval(b, a + h) - g_eval(b, a - h)) / (2.0 * h)).abs() < 1e-8);
    }

    #[test]
    fn l1_at_half_one() {
        assert!((l1_closed(0.5, 1.0) + 0.328_906_639_806_723_4).abs() < 1e-15);
    }

    #[test]
    fn grouped_and_expanded_h_agree() {
        for &(b, a) in &[(0.3, 0.4), (0.5, 1.0), (0.86828, 0.8505), (0.95, 2.5), (0.2, 2.9)] {
            let (x, y) = (h_poly(b, a), h_expanded(b, a));
            assert!((x - y).abs() < 1e-12 * h_scale(b, a), "{b} {a}: {x} vs {y}");
        }
    }

    #[test]
    fn l1_zero_alpha_is_a_root() {
        assert_eq!(l1_zero_alpha(0.7), None);
        assert!((l1_zero_alpha(1.0 - 1e-12).unwrap() - 1.0).abs() < 1e-9);
        for b in [0.78, 0.85, 0.9, 0.97] {
            let a = l1_zero_alpha(b).unwrap();
            assert!(g_eval(b, a).abs() < 1e-14, "{b}");
        }
    }

    #[test]
    fn l2_small_beta_limit() {
        let b: f64 = 1e-4;
        assert!((h_poly(b, 1.0) + 162.0).abs() < 1e-4);
        let l2 = l2_closed(b, 1.0);
        let lead = -162.0 * b.powf(1.5) / (36.0 * 9.0);
        assert!(l2 < 0.0 && ((l2 - lead) / lead).abs() < 1e-6);
    }

    #[test]
    fn region_tags() {
        assert_eq!(CriticalPoint::new(0.5, 1.0).unwrap().region, Region::S);
        assert_eq!(CriticalPoint::new(0.95, 0.5).unwrap().region, Region::U);
        assert_eq!(CriticalPoint::new(Q_BETA, Q_ALPHA).unwrap().region, Region::QNeighborhood);
    }

    #[test]
    fn box_parsing() {
        assert_eq!(ParamBox::parse("0.1,0.9,0.5,2").unwrap(), ParamBox { beta: (0.1, 0.9), alpha: (0.5, 2.0) });
        assert!(ParamBox::parse("0.1,1.2,0.5,2").is_err());
        assert!(ParamBox::parse("0.1,0.9,0.5").is_err());
        assert!(ParamBox::parse("a,b,c,d").is_err());
    }
}
