//! Direct integration of the governor equations: trajectories, cycles on the
//! section `y = 0`, onset scaling and a randomized search for coexisting
//! attractors.

pub mod dopri;

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::atlas;
use crate::error::{Error, Result};
use crate::watt::{self, Params};

pub use dopri::{Dopri5, StepTolerances};

pub type State = [f64; 3];

fn in_domain(s: &State) -> bool {
    s.iter().all(|v| v.is_finite()) && s[0] > 0.0 && s[0] < FRAC_PI_2 && s[2] >= 0.0
}

fn distance(a: &State, b: &State) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn check_initial(x0: &State) -> Result<()> {
    if !in_domain(x0) {
        return Err(Error::Domain(format!(
            "initial state {x0:?} outside x in (0, pi/2), z >= 0"
        )));
    }
    Ok(())
}

/// Steps per nominal oscillation period are at least this many, so a step
/// never jumps over two section crossings.
const STEPS_PER_PERIOD: f64 = 16.0;

fn solver(params: &Params, x0: State, tol: StepTolerances) -> Dopri5<3, impl Fn(&State) -> State + '_> {
    let h_max = 2.0 * PI / params.omega0() / STEPS_PER_PERIOD;
    Dopri5::new(move |s: &State| watt::rhs(s, params), 0.0, x0, tol).with_max_step(h_max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub tolerances: StepTolerances,
}

/// Integrates from `x0` to `t_end`, recording every accepted step.
pub fn integrate(params: &Params, x0: State, t_end: f64, rel_tol: f64, abs_tol: f64) -> Result<Trajectory> {
    let tol = StepTolerances::new(rel_tol, abs_tol)?;
    check_initial(&x0)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain(format!("t_end = {t_end} must be positive")));
    }
    let mut s = solver(params, x0, tol);
    let mut times = vec![0.0];
    let mut states = vec![x0];
    while s.t() < t_end {
        s.step(t_end)?;
        let y = *s.y();
        if !in_domain(&y) {
            return Err(Error::DomainExit { t: s.t(), state: y });
        }
        times.push(s.t());
        states.push(y);
    }
    Ok(Trajectory { times, states, tolerances: tol })
}

/// Crossing of `y = 0`, upward (`x` at a minimum) or downward (`x` at a maximum).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Crossing {
    t: f64,
    state: State,
    up: bool,
}

const CROSSING_TIME_TOL: f64 = 1e-12;

fn crossing_in_last_step<F: Fn(&State) -> State>(s: &Dopri5<3, F>, y_prev: f64) -> Option<Crossing> {
    let y_new = s.y()[1];
    let up = y_prev < 0.0 && y_new >= 0.0;
    let down = y_prev > 0.0 && y_new <= 0.0;
    if !(up || down) {
        return None;
    }
    let (mut lo, mut hi) = (s.t_old(), s.t());
    while hi - lo > CROSSING_TIME_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let ym = s.dense(mid)[1];
        if (ym < 0.0) == (y_prev < 0.0) && ym != 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = if hi == s.t() && lo == s.t_old() { hi } else { 0.5 * (lo + hi) };
    let mut state = s.dense(t);
    state[1] = 0.0;
    Some(Crossing { t, state, up })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleStability {
    Attracting,
    Repelling,
    Inconclusive,
}

impl CycleStability {
    pub fn as_str(&self) -> &'static str {
        match self {
            CycleStability::Attracting => "attracting",
            CycleStability::Repelling => "repelling",
            CycleStability::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleEstimate {
    pub period: f64,
    /// `max |x - x0|` over the last return interval.
    pub amplitude: f64,
    /// States on the section `y = 0`, `y` increasing.
    pub crossings: Vec<State>,
    pub crossing_times: Vec<f64>,
    pub converged: bool,
    pub stability: CycleStability,
    pub final_time: f64,
    pub final_state: State,
}

/// Settings for [`detect_cycle_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleOptions {
    pub settle_time: f64,
    pub max_returns: usize,
    /// Successive returns closer than this count as converged.
    pub return_tol: f64,
    pub tol: StepTolerances,
}

impl Default for CycleOptions {
    fn default() -> Self {
        CycleOptions { settle_time: 100.0, max_returns: 5000, return_tol: 1e-7, tol: StepTolerances::default() }
    }
}

/// Returns averaged for the period estimate.
const PERIOD_WINDOW: usize = 10;

/// Section returns `{y = 0, y' > 0}` after `settle_time`, until two
/// successive returns agree to `1e-7` or `max_returns` is reached.
pub fn detect_cycle(params: &Params, x0: State, settle_time: f64, max_returns: usize) -> Result<CycleEstimate> {
    detect_cycle_with(params, x0, &CycleOptions { settle_time, max_returns, ..CycleOptions::default() })
}

pub fn detect_cycle_with(params: &Params, x0: State, opts: &CycleOptions) -> Result<CycleEstimate> {
    check_initial(&x0)?;
    let p0 = watt::equilibrium(params);
    let nominal = 2.0 * PI / params.omega0();
    // Without a return for this long the motion is not oscillating about P0.
    let quiet = 10.0 * nominal;

    let mut s = solver(params, x0, opts.tol);
    let mut returns: Vec<Crossing> = Vec::new();
    let mut extremes: Vec<Crossing> = Vec::new();
    let mut last_event = opts.settle_time;
    let mut converged = false;
    let t_limit = f64::INFINITY;

    while returns.len() < opts.max_returns {
        if distance(s.y(), &p0) < 1e-12 {
            break;
        }
        let y_prev = s.y()[1];
        s.step(t_limit)?;
        if !in_domain(s.y()) {
            return Err(Error::DomainExit { t: s.t(), state: *s.y() });
        }
        if let Some(c) = crossing_in_last_step(&s, y_prev) {
            if c.t >= opts.settle_time {
                last_event = c.t;
                if c.up {
                    returns.push(c);
                    extremes.retain(|e| e.t >= returns[returns.len().saturating_sub(2)].t);
                    let n = returns.len();
                    if n >= 3 && distance(&returns[n - 1].state, &returns[n - 2].state) < opts.return_tol {
                        converged = true;
                        break;
                    }
                } else {
                    extremes.push(c);
                }
            }
        }
        if s.t() - last_event > quiet {
            break;
        }
    }

    let n = returns.len();
    let (period, amplitude) = if n >= 2 {
        let k = (n - 1).min(PERIOD_WINDOW);
        let period = (returns[n - 1].t - returns[n - 1 - k].t) / k as f64;
        let (a, b) = (returns[n - 2].t, returns[n - 1].t);
        let amplitude = returns[n - 2..]
            .iter()
            .chain(extremes.iter().filter(|e| e.t > a && e.t < b))
            .map(|c| (c.state[0] - p0[0]).abs())
            .fold(0.0, f64::max);
        (period, amplitude)
    } else {
        (f64::NAN, f64::NAN)
    };
    let converged = converged && n >= 3;
    Ok(CycleEstimate {
        period,
        amplitude,
        crossings: returns.iter().map(|c| c.state).collect(),
        crossing_times: returns.iter().map(|c| c.t).collect(),
        converged,
        stability: if converged { CycleStability::Attracting } else { CycleStability::Inconclusive },
        final_time: s.t(),
        final_state: *s.y(),
    })
}

/// First-order radius of the bifurcating cycle, `r^2 = -Re(lambda) / l1`,
/// with `Re(lambda)` from the eigenvalue crossing speed. The `x` amplitude
/// is `2 r` under the `q_x = -i` normalization.
pub fn predicted_amplitude(beta: f64, alpha: f64, epsilon: f64) -> Result<f64> {
    let crit = Params::critical(beta, alpha)?;
    let speed = atlas::eps_transversality(beta, alpha)?;
    let re_lambda = speed * (epsilon - crit.epsilon);
    let l1 = atlas::l1_closed(beta, alpha);
    let r2 = -re_lambda / l1;
    if !(r2 > 0.0) {
        return Err(Error::Domain(format!(
            "no small cycle predicted at eps = {epsilon} (Re lambda = {re_lambda:e}, l1 = {l1:e})"
        )));
    }
    Ok(2.0 * r2.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPoint {
    pub delta: f64,
    pub epsilon: f64,
    pub predicted_amplitude: f64,
    pub estimate: CycleEstimate,
}

/// Cycles at `eps = eps_c (1 - delta)` for each `delta`, each started on the
/// predicted orbit.
pub fn amplitude_scaling(beta: f64, alpha: f64, deltas: &[f64]) -> Result<Vec<ScalingPoint>> {
    let crit = Params::critical(beta, alpha)?;
    if atlas::l1_closed(beta, alpha) >= 0.0 {
        return Err(Error::Domain(format!("(beta, alpha) = ({beta}, {alpha}) is not in region S (l1 < 0)")));
    }
    if let Some(d) = deltas.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
        return Err(Error::Domain(format!("delta = {d} must lie in (0, 1)")));
    }
    deltas
        .par_iter()
        .map(|&delta| {
            let params = Params::new(beta, alpha, crit.epsilon * (1.0 - delta))?;
            let predicted = predicted_amplitude(beta, alpha, params.epsilon)?;
            let p0 = watt::equilibrium(&params);
            let seed = [p0[0] + predicted, 0.0, p0[2]];
            let opts = CycleOptions { settle_time: 0.0, max_returns: 20_000, ..CycleOptions::default() };
            let estimate = detect_cycle_with(&params, seed, &opts)?;
            Ok(ScalingPoint { delta, epsilon: params.epsilon, predicted_amplitude: predicted, estimate })
        })
        .collect()
}

/// One full turn of the section map from `(x, 0, z)`.
fn return_map(params: &Params, start: [f64; 2], tol: StepTolerances) -> Result<(State, f64, f64)> {
    let x0 = [start[0], 0.0, start[1]];
    check_initial(&x0)?;
    let p0 = watt::equilibrium(params);
    let limit = 5.0 * 2.0 * PI / params.omega0();
    let mut s = solver(params, x0, tol);
    let mut x_far: f64 = (x0[0] - p0[0]).abs();
    while s.t() < limit {
        let y_prev = s.y()[1];
        s.step(limit)?;
        if !in_domain(s.y()) {
            return Err(Error::DomainExit { t: s.t(), state: *s.y() });
        }
        if let Some(c) = crossing_in_last_step(&s, y_prev) {
            x_far = x_far.max((c.state[0] - p0[0]).abs());
            if c.up {
                return Ok((c.state, c.t, x_far));
            }
        }
    }
    Err(Error::NoConvergence { what: "section return", iterations: 0 })
}

const SHOOTING_MAX_ITERATIONS: usize = 40;

/// Periodic orbit through the section point nearest `seed`, by Newton's
/// method on the return map. Works for repelling cycles, which forward
/// integration cannot reach; stability comes from the return-map derivative.
pub fn shoot_cycle(params: &Params, seed: State) -> Result<CycleEstimate> {
    let tol = StepTolerances::new(1e-12, 1e-13)?;
    let p0 = watt::equilibrium(params);
    let mut s = [seed[0], seed[2]];
    for _ in 0..SHOOTING_MAX_ITERATIONS {
        let (ret, period, x_far) = return_map(params, s, tol)?;
        let f = [ret[0] - s[0], ret[2] - s[1]];
        let fd = 1e-6 * (s[0] - p0[0]).abs().max(1e-4);
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let (mut sp, mut sm) = (s, s);
            sp[j] += fd;
            sm[j] -= fd;
            let (rp, _, _) = return_map(params, sp, tol)?;
            let (rm, _, _) = return_map(params, sm, tol)?;
            jac[0][j] = (rp[0] - rm[0]) / (2.0 * fd);
            jac[1][j] = (rp[2] - rm[2]) / (2.0 * fd);
        }
        if f[0].hypot(f[1]) < 1e-11 {
            let tr = jac[0][0] + jac[1][1];
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            let disc = tr * tr - 4.0 * det;
            let radius = if disc >= 0.0 {
                (0.5 * (tr.abs() + disc.sqrt())).abs()
            } else {
                det.abs().sqrt()
            };
            let start = [s[0], 0.0, s[1]];
            return Ok(CycleEstimate {
                period,
                amplitude: x_far,
                crossings: vec![start, ret],
                crossing_times: vec![0.0, period],
                converged: true,
                stability: if radius > 1.0 { CycleStability::Repelling } else { CycleStability::Attracting },
                final_time: period,
                final_state: ret,
            });
        }
        // Newton on P(s) - s with J - I.
        let m = [[jac[0][0] - 1.0, jac[0][1]], [jac[1][0], jac[1][1] - 1.0]];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoConvergence { what: "cycle shooting (singular Jacobian)", iterations: 0 });
        }
        let dx = (-f[0] * m[1][1] + f[1] * m[0][1]) / det;
        let dz = (-m[0][0] * f[1] + m[1][0] * f[0]) / det;
        let cap = 0.5 * (s[0] - p0[0]).abs().max(1e-3);
        let scale = (cap / dx.hypot(dz)).min(1.0);
        s = [s[0] + scale * dx, s[1] + scale * dz];
    }
    Err(Error::NoConvergence { what: "cycle shooting", iterations: SHOOTING_MAX_ITERATIONS })
}

/// The repelling cycle around the stable equilibrium just past a subcritical
/// onset, at `eps = eps_c (1 + delta)` for `(beta, alpha)` in region U.
pub fn subcritical_cycle(beta: f64, alpha: f64, delta: f64) -> Result<CycleEstimate> {
    let crit = Params::critical(beta, alpha)?;
    let params = Params::new(beta, alpha, crit.epsilon * (1.0 + delta))?;
    let predicted = predicted_amplitude(beta, alpha, params.epsilon)?;
    let p0 = watt::equilibrium(&params);
    shoot_cycle(&params, [p0[0] - predicted, 0.0, p0[2]])
}

/// Determinant of the flow's tangent map over `[0, t]`, for comparison
/// with `exp(-eps t)` (the divergence is `-eps` everywhere).
pub fn volume_contraction(params: &Params, x0: State, t: f64) -> Result<(f64, f64)> {
    check_initial(&x0)?;
    let eps = params.epsilon;
    let alpha = params.alpha;
    let f = move |u: &[f64; 12]| -> [f64; 12] {
        let st = [u[0], u[1], u[2]];
        let v = watt::rhs(&st, params);
        let (s, c) = u[0].sin_cos();
        let z = u[2];
        let j = [[0.0, 1.0, 0.0], [z * z * (c * c - s * s) - c, -eps, 2.0 * z * s * c], [-alpha * s, 0.0, 0.0]];
        let mut out = [0.0; 12];
        out[..3].copy_from_slice(&v);
        for r in 0..3 {
            for col in 0..3 {
                out[3 + 3 * r + col] = (0..3).map(|k| j[r][k] * u[3 + 3 * k + col]).sum();
            }
        }
        out
    };
    let mut u0 = [0.0; 12];
    u0[..3].copy_from_slice(&x0);
    u0[3] = 1.0;
    u0[7] = 1.0;
    u0[11] = 1.0;
    let mut s = Dopri5::new(f, 0.0, u0, StepTolerances::default());
    while s.t() < t {
        s.step(t)?;
    }
    let m = &s.y()[3..];
    let det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) + m[2] * (m[3] * m[7] - m[4] * m[6]);
    Ok((det, (-eps * t).exp()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attractor {
    Equilibrium,
    Cycle,
    Undecided,
}

impl Attractor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Attractor::Equilibrium => "equilibrium",
            Attractor::Cycle => "cycle",
            Attractor::Undecided => "undecided",
        }
    }
}

/// Thresholds for labelling where a trajectory ends up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub cycle: CycleOptions,
    /// Final distance to P0 below which the run counts as converging to it.
    pub equilibrium_tol: f64,
    /// Converged cycles smaller than this are read as decay to P0.
    pub min_amplitude: f64,
    /// Extra integration time allowed to reach `equilibrium_tol`.
    pub equilibrium_time: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            cycle: CycleOptions { settle_time: 200.0, max_returns: 2000, ..CycleOptions::default() },
            equilibrium_tol: 1e-6,
            min_amplitude: 1e-4,
            equilibrium_time: 5000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub attractor: Attractor,
    pub final_distance: f64,
    pub cycle: Option<CycleEstimate>,
    pub note: Option<String>,
}

/// Labels the omega-limit of the orbit through `x0`.
pub fn classify(params: &Params, x0: State, opts: &ClassifyOptions) -> Result<Classification> {
    let p0 = watt::equilibrium(params);
    let est = match detect_cycle_with(params, x0, &opts.cycle) {
        Ok(e) => e,
        Err(Error::DomainExit { t, state }) => {
            return Ok(Classification {
                attractor: Attractor::Undecided,
                final_distance: distance(&state, &p0),
                cycle: None,
                note: Some(format!("left the domain at t = {t}")),
            })
        }
        Err(e) => return Err(e),
    };
    let mut note = None;
    if est.converged && est.amplitude > opts.min_amplitude {
        // A slowly decaying oscillation also passes the return test, so the
        // cycle must survive a Newton solve of the return map.
        let last = *est.crossings.last().expect("converged estimate has crossings");
        match shoot_cycle(params, last) {
            Ok(c) if c.stability == CycleStability::Attracting
                && (c.amplitude - est.amplitude).abs() <= 0.1 * est.amplitude =>
            {
                return Ok(Classification {
                    attractor: Attractor::Cycle,
                    final_distance: distance(&est.final_state, &p0),
                    cycle: Some(CycleEstimate { stability: CycleStability::Attracting, ..est }),
                    note: None,
                });
            }
            _ => note = Some(format!("returns settled at amplitude {:.3e} but no cycle there", est.amplitude)),
        }
    }
    let mut s = solver(params, est.final_state, opts.cycle.tol);
    let t_end = opts.equilibrium_time;
    let mut d = distance(s.y(), &p0);
    while d >= opts.equilibrium_tol && s.t() < t_end {
        s.step(t_end)?;
        if !in_domain(s.y()) {
            break;
        }
        d = distance(s.y(), &p0);
    }
    let attractor = if d < opts.equilibrium_tol { Attractor::Equilibrium } else { Attractor::Undecided };
    Ok(Classification { attractor, final_distance: d, cycle: None, note })
}

/// Search window and sampling for [`find_coexistence`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoexistenceConfig {
    pub beta: f64,
    pub alpha: f64,
    pub eps_range: (f64, f64),
    pub eps_samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub radius: f64,
    pub classify: ClassifyOptions,
    /// Also shoot for cycles at the radii predicted by the degenerate
    /// normal form `Re(lambda) + l1 r^2 + l2 r^4 = 0`.
    pub shooting: bool,
}

impl CoexistenceConfig {
    pub fn new(beta: f64, alpha: f64, eps_range: (f64, f64), eps_samples: usize, trials: usize, seed: u64) -> Self {
        CoexistenceConfig {
            beta,
            alpha,
            eps_range,
            eps_samples,
            trials,
            seed,
            radius: 0.3,
            classify: ClassifyOptions::default(),
            shooting: true,
        }
    }

    /// A window at `alpha = alpha_{l1=0}(beta) - offset`, spanning
    /// `eps_c +- w` where `w` is the normal-form width
    /// `l1^2 / (4 |l2| |dRe(lambda)/d eps|)` (never below `1e-5`).
    pub fn beside_curve(beta: f64, offset: f64, eps_samples: usize, trials: usize, seed: u64) -> Result<Self> {
        let alpha = atlas::l1_zero_alpha(beta)
            .ok_or_else(|| Error::Domain(format!("beta = {beta}: l1 = 0 needs beta in (sqrt(3/5), 1)")))?
            - offset;
        let crit = Params::critical(beta, alpha)?;
        let (l1, l2) = (atlas::l1_closed(beta, alpha), atlas::l2_closed(beta, alpha));
        let speed = atlas::eps_transversality(beta, alpha)?.abs();
        let w = (l1 * l1 / (4.0 * l2.abs() * speed)).max(1e-5);
        Ok(CoexistenceConfig::new(beta, alpha, (crit.epsilon - w, crit.epsilon + w), eps_samples, trials, seed))
    }

    pub fn epsilons(&self) -> Vec<f64> {
        let (a, b) = self.eps_range;
        match self.eps_samples {
            0 => vec![],
            1 => vec![0.5 * (a + b)],
            n => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub epsilon: f64,
    pub trial: usize,
    pub stream: u64,
    pub initial: State,
    pub classification: Classification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMethod {
    /// Two random initial conditions with different omega-limits.
    Trials,
    /// An attracting cycle confirmed by Newton on the return map while the
    /// spectrum of P0 lies in the open left half-plane.
    Certified,
}

impl WitnessMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessMethod::Trials => "trials",
            WitnessMethod::Certified => "certified",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingResult {
    pub epsilon: f64,
    pub predicted_amplitude: f64,
    pub cycle: std::result::Result<CycleEstimate, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub epsilon: f64,
    pub method: WitnessMethod,
    /// For certified witnesses this is P0 itself.
    pub equilibrium_initial: State,
    pub cycle_initial: State,
    pub cycle: CycleEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoexistenceReport {
    pub config: CoexistenceConfig,
    pub epsilon_c: f64,
    pub l1: f64,
    pub l2: f64,
    pub trials: Vec<TrialResult>,
    pub shooting: Vec<ShootingResult>,
    pub witnesses: Vec<Witness>,
}

/// Uniform point in the ball of radius `r` about `center`, clipped to the
/// phase domain.
fn sample_ball(rng: &mut ChaCha8Rng, center: &State, r: f64) -> State {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            let mut s: State = std::array::from_fn(|i| center[i] + r * v[i]);
            s[0] = s[0].clamp(1e-6, FRAC_PI_2 - 1e-6);
            s[2] = s[2].max(0.0);
            return s;
        }
    }
}

/// Random initial conditions at each sampled `eps`, each run labelled by its
/// omega-limit. An `eps` with both an equilibrium and a cycle outcome is a
/// witness of coexisting attractors. Trial `k` draws from ChaCha stream `k`
/// of `seed`, so results do not depend on scheduling.
pub fn find_coexistence(cfg: &CoexistenceConfig) -> Result<CoexistenceReport> {
    let crit = Params::critical(cfg.beta, cfg.alpha)?;
    let (a, b) = cfg.eps_range;
    if !(a > 0.0 && a <= b && b.is_finite()) {
        return Err(Error::Domain(format!("eps range [{a}, {b}] must be positive and increasing")));
    }
    if !(cfg.radius > 0.0) {
        return Err(Error::Domain(format!("sampling radius {} must be positive", cfg.radius)));
    }
    let eps = cfg.epsilons();
    let jobs: Vec<(usize, usize)> =
        (0..eps.len()).flat_map(|i| (0..cfg.trials).map(move |k| (i, k))).collect();
    let trials = jobs
        .par_iter()
        .map(|&(i, k)| {
            let params = Params::new(cfg.beta, cfg.alpha, eps[i])?;
            let stream = (i * cfg.trials + k) as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(stream);
            let initial = sample_ball(&mut rng, &watt::equilibrium(&params), cfg.radius);
            let classification = classify(&params, initial, &cfg.classify)?;
            Ok(TrialResult { epsilon: eps[i], trial: k, stream, initial, classification })
        })
        .collect::<Result<Vec<_>>>()?;

    let l1 = atlas::l1_closed(cfg.beta, cfg.alpha);
    let l2 = atlas::l2_closed(cfg.beta, cfg.alpha);
    let shooting = if cfg.shooting { shoot_predicted(cfg, &eps, crit.epsilon, l1, l2)? } else { Vec::new() };

    let mut witnesses = Vec::new();
    for &e in &eps {
        let at: Vec<&TrialResult> = trials.iter().filter(|t| t.epsilon == e).collect();
        let eq = at.iter().find(|t| t.classification.attractor == Attractor::Equilibrium);
        let cy = at.iter().find(|t| t.classification.attractor == Attractor::Cycle);
        if let (Some(eq), Some(cy)) = (eq, cy) {
            witnesses.push(Witness {
                epsilon: e,
                method: WitnessMethod::Trials,
                equilibrium_initial: eq.initial,
                cycle_initial: cy.initial,
                cycle: cy.classification.cycle.clone().expect("cycle outcome carries its estimate"),
            });
        }
        let params = Params::new(cfg.beta, cfg.alpha, e)?;
        if watt::stability_classify(&params) != watt::Stability::AsymptoticallyStable {
            continue;
        }
        let from_shooting = shooting.iter().filter(|r| r.epsilon == e).find_map(|r| match &r.cycle {
            Ok(c) if c.stability == CycleStability::Attracting => Some((c.crossings[0], c)),
            _ => None,
        });
        let from_trials = cy.map(|t| (t.initial, t.classification.cycle.as_ref().expect("cycle outcome carries its estimate")));
        if let Some((initial, c)) = from_shooting.or(from_trials) {
            witnesses.push(Witness {
                epsilon: e,
                method: WitnessMethod::Certified,
                equilibrium_initial: watt::equilibrium(&params),
                cycle_initial: initial,
                cycle: c.clone(),
            });
        }
    }
    Ok(CoexistenceReport { config: cfg.clone(), epsilon_c: crit.epsilon, l1, l2, trials, shooting, witnesses })
}

/// Shooting from each positive root `s = r^2` of `Re(lambda) + l1 s + l2 s^2`.
fn shoot_predicted(cfg: &CoexistenceConfig, eps: &[f64], eps_c: f64, l1: f64, l2: f64) -> Result<Vec<ShootingResult>> {
    let speed = atlas::eps_transversality(cfg.beta, cfg.alpha)?;
    let mut seeds = Vec::new();
    for &e in eps {
        let re = speed * (e - eps_c);
        let roots: Vec<f64> = if l2 == 0.0 {
            vec![-re / l1]
        } else {
            let disc = l1 * l1 - 4.0 * l2 * re;
            if disc < 0.0 {
                vec![]
            } else {
                let q = -0.5 * (l1 + l1.signum() * disc.sqrt());
                if q == 0.0 { vec![] } else { vec![q / l2, re / q] }
            }
        };
        let mut roots: Vec<f64> = roots.into_iter().filter(|s| *s > 0.0 && s.is_finite()).collect();
        roots.sort_by(f64::total_cmp);
        for s in roots {
            seeds.push((e, 2.0 * s.sqrt()));
        }
    }
    seeds
        .par_iter()
        .map(|&(e, amp)| {
            let params = Params::new(cfg.beta, cfg.alpha, e)?;
            let p0 = watt::equilibrium(&params);
            let cycle = shoot_cycle(&params, [p0[0] - amp, 0.0, p0[2]]).map_err(|err| err.to_string());
            Ok(ShootingResult { epsilon: e, predicted_amplitude: amp, cycle })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_is_stationary() {
        let p = Params::new(0.5, 1.0, 1.0).unwrap();
        let p0 = watt::equilibrium(&p);
        let tr = integrate(&p, p0, 50.0, 1e-10, 1e-12).unwrap();
        assert!(tr.states.iter().all(|s| distance(s, &p0) < 1e-10));
    }

    #[test]
    fn domain_checks() {
        let p = Params::new(0.5, 1.0, 1.0).unwrap();
        assert!(matches!(integrate(&p, [2.0, 0.0, 1.0], 1.0, 1e-8, 1e-10), Err(Error::Domain(_))));
        assert!(matches!(integrate(&p, [0.5, 0.0, 1.0], -1.0, 1e-8, 1e-10), Err(Error::Domain(_))));
        assert!(matches!(integrate(&p, [0.5, 0.0, 1.0], 1.0, 1e-2, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn stationary_start_is_inconclusive() {
        let p = Params::critical(0.5, 1.0).unwrap();
        let est = detect_cycle(&p, watt::equilibrium(&p), 0.0, 10).unwrap();
        assert!(!est.converged);
        assert_eq!(est.stability, CycleStability::Inconclusive);
    }

    #[test]
    fn ball_samples_stay_in_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = [0.1, 0.0, 0.05];
        for _ in 0..200 {
            let s = sample_ball(&mut rng, &c, 0.3);
            assert!(s[0] > 0.0 && s[2] >= 0.0);
        }
    }
}
