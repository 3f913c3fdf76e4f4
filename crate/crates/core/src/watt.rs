//! The Watt centrifugal governor in nondimensional form,
//!
//! ```text
//! x' = y
//! y' = z^2 sin x cos x - sin x - eps y
//! z' = alpha (cos x - beta)
//! ```
//!
//! with `beta in (0, 1)`, `alpha > 0`, `eps > 0`. The Hopf points lie on the
//! critical surface `eps = 2 alpha beta^{3/2}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::HopfFrame;
use crate::jet::Jet;
use crate::linalg::{ComplexMatrix, ComplexVec};
use crate::multilinear::SmoothModel;

/// Dimensional governor constants (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Arm length (m).
    pub l: f64,
    /// Ball mass (kg).
    pub m: f64,
    /// Friction constant (kg/s).
    pub b: f64,
    /// Transmission ratio.
    pub c: f64,
    /// Flywheel moment of inertia (kg m^2).
    #[serde(rename = "I")]
    pub inertia: f64,
    /// Load torque (N m).
    #[serde(rename = "F")]
    pub load: f64,
    /// Torque proportionality constant (N m).
    pub mu: f64,
    /// Gravitational acceleration (m/s^2).
    pub g: f64,
}

/// Nondimensional parameters `(beta, alpha, eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub beta: f64,
    pub alpha: f64,
    pub epsilon: f64,
}

fn check_beta_alpha(beta: f64, alpha: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain(format!("beta = {beta} violates beta in (0, 1)")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha = {alpha} violates alpha in (0, inf)")));
    }
    Ok(())
}

impl Params {
    pub fn new(beta: f64, alpha: f64, epsilon: f64) -> Result<Self> {
        check_beta_alpha(beta, alpha)?;
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Domain(format!("epsilon = {epsilon} violates epsilon in (0, inf)")));
        }
        Ok(Params { beta, alpha, epsilon })
    }

    /// The point of the critical surface above `(beta, alpha)`.
    pub fn critical(beta: f64, alpha: f64) -> Result<Self> {
        check_beta_alpha(beta, alpha)?;
        Ok(Params { beta, alpha, epsilon: critical_epsilon(beta, alpha) })
    }

    pub fn omega0(&self) -> f64 {
        omega0(self.beta)
    }

    pub fn epsilon_c(&self) -> f64 {
        critical_epsilon(self.beta, self.alpha)
    }
}

/// `eps = (b/m) sqrt(l/g)`, `alpha = c l mu / (g I)`, `beta = F / mu`.
pub fn nondimensionalize(phys: &PhysicalParams) -> Result<Params> {
    let fields = [
        ("l", phys.l),
        ("m", phys.m),
        ("b", phys.b),
        ("c", phys.c),
        ("I", phys.inertia),
        ("F", phys.load),
        ("mu", phys.mu),
        ("g", phys.g),
    ];
    for (name, v) in fields {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("physical parameter {name} = {v} must be positive")));
        }
    }
    let epsilon = phys.b / phys.m * (phys.l / phys.g).sqrt();
    let alpha = phys.c * phys.l * phys.mu / (phys.g * phys.inertia);
    let beta = phys.load / phys.mu;
    Params::new(beta, alpha, epsilon)
}

/// `omega0 = sqrt((1 - beta^2) / beta)`.
pub fn omega0(beta: f64) -> f64 {
    ((1.0 - beta * beta) / beta).sqrt()
}

/// `eps_c = 2 alpha beta^{3/2}`.
pub fn critical_epsilon(beta: f64, alpha: f64) -> f64 {
    2.0 * alpha * beta * beta.sqrt()
}

/// Right-hand side at a plain state `[x, y, z]`.
pub fn rhs(state: &[f64; 3], params: &Params) -> [f64; 3] {
    let [x, y, z] = *state;
    let (s, c) = x.sin_cos();
    [y, z * z * s * c - s - params.epsilon * y, params.alpha * (c - params.beta)]
}

/// Same field over jets.
pub fn rhs_jet(state: &[Jet], params: &Params) -> Vec<Jet> {
    let (x, y, z) = (state[0], state[1], state[2]);
    let (s, c) = x.sin_cos();
    vec![y, z * z * s * c - s - y * params.epsilon, (c - params.beta) * params.alpha]
}

/// The admissible equilibrium `P0 = (arccos beta, 0, 1/sqrt beta)`.
pub fn equilibrium(params: &Params) -> [f64; 3] {
    [params.beta.acos(), 0.0, (1.0 / params.beta).sqrt()]
}

/// Jacobian at `P0`.
pub fn jacobian(params: &Params) -> ComplexMatrix {
    let b = params.beta;
    let one_minus = 1.0 - b * b;
    ComplexMatrix::from_real(
        3,
        &[
            0.0,
            1.0,
            0.0,
            -one_minus / b,
            -params.epsilon,
            2.0 * (b * one_minus).sqrt(),
            -params.alpha * one_minus.sqrt(),
            0.0,
            0.0,
        ],
    )
    .expect("3x3 finite")
}

/// Coefficients of `-p(lambda) = lambda^3 + c2 lambda^2 + c1 lambda + c0`.
pub fn characteristic_polynomial(params: &Params) -> [f64; 3] {
    let b = params.beta;
    let k = (1.0 - b * b) / b;
    [critical_epsilon(b, params.alpha) * k, k, params.epsilon]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    AsymptoticallyStable,
    Unstable,
    Critical,
}

/// Band around `eps = eps_c` reported as [`Stability::Critical`].
pub const CRITICAL_BAND: f64 = 1e-12;

/// Linear stability of `P0` from the sign of `eps - 2 alpha beta^{3/2}`.
pub fn stability_classify(params: &Params) -> Stability {
    let gap = params.epsilon - params.epsilon_c();
    if gap.abs() <= CRITICAL_BAND * params.epsilon_c().max(1.0) {
        Stability::Critical
    } else if gap > 0.0 {
        Stability::AsymptoticallyStable
    } else {
        Stability::Unstable
    }
}

/// Closed-form Hopf frame on the critical surface:
/// `q = (-i, omega0, eps_c / (2 beta))`,
/// `p = (-i/2, (omega0 - i eps_c) / (2 (omega0^2 + eps_c^2)), beta (eps_c + i omega0) / (omega0^2 + eps_c^2))`.
pub fn critical_frame(beta: f64, alpha: f64) -> Result<HopfFrame> {
    let params = Params::critical(beta, alpha)?;
    let w = params.omega0();
    let e = params.epsilon;
    let d = w * w + e * e;
    let q = ComplexVec(vec![Complex64::new(0.0, -1.0), Complex64::new(w, 0.0), Complex64::new(e / (2.0 * beta), 0.0)]);
    let p = ComplexVec(vec![
        Complex64::new(0.0, -0.5),
        Complex64::new(w, -e) / (2.0 * d),
        Complex64::new(e, w) * (beta / d),
    ]);
    HopfFrame::new(jacobian(&params), w, q, p)
}

/// Per-order coefficients of the closed-form symmetric forms. The second
/// component of the order-k form is
/// `c0 prod x_i1 + c1 sum_j x_j3 prod_{i!=j} x_i1 + c2 sum_{j<l} x_j3 x_l3 prod_{i!=j,l} x_i1`,
/// the third is `c_third prod x_i1`; the first component vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormCoefficients {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c_third: f64,
}

/// Coefficients of B, C, D, E, K, L (orders 2..=7).
pub fn form_coefficients(order: usize, beta: f64, alpha: f64) -> Result<FormCoefficients> {
    let w = omega0(beta);
    let sb = beta.sqrt();
    let b32 = beta * sb;
    let two_b2_m1 = 2.0 * beta * beta - 1.0;
    let c = match order {
        // B
        2 => FormCoefficients { c0: -3.0 * w * sb, c1: 2.0 * two_b2_m1 / sb, c2: 2.0 * w * b32, c_third: -alpha * beta },
        // C
        3 => FormCoefficients {
            c0: (4.0 - 7.0 * beta * beta) / beta,
            c1: -8.0 * w * beta,
            c2: 2.0 * two_b2_m1,
            c_third: alpha * sb * w,
        },
        // D
        4 => FormCoefficients { c0: 15.0 * w * sb, c1: -8.0 * two_b2_m1 / sb, c2: -8.0 * w * b32, c_third: alpha * beta },
        // E
        5 => FormCoefficients {
            c0: (31.0 * beta * beta - 16.0) / beta,
            c1: 32.0 * w * beta,
            c2: -8.0 * two_b2_m1,
            c_third: -alpha * w * sb,
        },
        // K
        6 => FormCoefficients { c0: -63.0 * w * sb, c1: 32.0 * two_b2_m1 / sb, c2: 32.0 * w * b32, c_third: -alpha * beta },
        // L. The seventh derivative of alpha (cos x - beta) at x0 is
        // alpha sin x0 = alpha omega0 sqrt(beta).
        7 => FormCoefficients {
            c0: 64.0 * w * w - 63.0 * beta,
            c1: -128.0 * w * beta,
            c2: 32.0 * beta * (beta - w * w),
            c_third: alpha * w * sb,
        },
        _ => return Err(Error::DegreeOutOfRange { degree: order, min: 2, max: 7 }),
    };
    Ok(c)
}

/// Closed-form symmetric multilinear form of the Watt field at `P0`.
pub fn exact_multilinear(order: usize, args: &[&ComplexVec], beta: f64, alpha: f64) -> Result<ComplexVec> {
    let k = form_coefficients(order, beta, alpha)?;
    if args.len() != order {
        return Err(Error::ArityMismatch { order, got: args.len() });
    }
    if let Some(bad) = args.iter().find(|a| a.len() != 3) {
        return Err(Error::DimensionMismatch { expected: 3, got: bad.len() });
    }
    let x1: Vec<Complex64> = args.iter().map(|a| a[0]).collect();
    let x3: Vec<Complex64> = args.iter().map(|a| a[2]).collect();
    let prod_x1 = |skip: &[usize]| -> Complex64 {
        x1.iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, v)| *v)
            .product()
    };
    let all = prod_x1(&[]);
    let mut single = Complex64::new(0.0, 0.0);
    let mut pair = Complex64::new(0.0, 0.0);
    for j in 0..order {
        single += x3[j] * prod_x1(&[j]);
        for l in j + 1..order {
            pair += x3[j] * x3[l] * prod_x1(&[j, l]);
        }
    }
    Ok(ComplexVec(vec![
        Complex64::new(0.0, 0.0),
        all * k.c0 + single * k.c1 + pair * k.c2,
        all * k.c_third,
    ]))
}

/// The Watt field at fixed parameters, as a [`SmoothModel`] at `P0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WattModel {
    pub params: Params,
}

impl WattModel {
    pub fn new(params: Params) -> Self {
        WattModel { params }
    }

    pub fn critical(beta: f64, alpha: f64) -> Result<Self> {
        Ok(WattModel { params: Params::critical(beta, alpha)? })
    }
}

impl SmoothModel for WattModel {
    fn dim(&self) -> usize {
        3
    }

    fn equilibrium(&self) -> Vec<f64> {
        equilibrium(&self.params).to_vec()
    }

    fn rhs_jet(&self, state: &[Jet]) -> Vec<Jet> {
        rhs_jet(state, &self.params)
    }

    fn exact_multilinear(&self, order: usize, args: &[&ComplexVec]) -> Option<ComplexVec> {
        exact_multilinear(order, args, self.params.beta, self.params.alpha).ok()
    }

    fn jacobian(&self) -> ComplexMatrix {
        jacobian(&self.params)
    }
}

/// Model parameters as read from a JSON document: either the
/// nondimensional group (`beta`, `alpha`, optional `epsilon`) or all eight
/// physical keys (`l`, `m`, `b`, `c`, `I`, `F`, `mu`, `g`), never both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Nondimensional { beta: f64, alpha: f64, epsilon: Option<f64> },
    Physical(PhysicalParams),
}

const NONDIM_KEYS: [&str; 3] = ["beta", "alpha", "epsilon"];
const PHYSICAL_KEYS: [&str; 8] = ["l", "m", "b", "c", "I", "F", "mu", "g"];

impl ModelSpec {
    /// Read the model group from a JSON object; `Ok(None)` when neither
    /// group is present.
    pub fn from_json(doc: &serde_json::Value) -> Result<Option<Self>> {
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::Parse("config must be a JSON object".into()))?;
        let num = |k: &str| -> Result<Option<f64>> {
            match obj.get(k) {
                None => Ok(None),
                Some(v) => v
                    .as_f64()
                    .map(Some)
                    .ok_or_else(|| Error::Parse(format!("config key {k} must be a number"))),
            }
        };
        let has_nondim = NONDIM_KEYS.iter().any(|k| obj.contains_key(*k));
        let present_phys: Vec<&str> = PHYSICAL_KEYS.iter().copied().filter(|k| obj.contains_key(*k)).collect();
        match (has_nondim, present_phys.is_empty()) {
            (true, false) => Err(Error::Parse(
                "config mixes nondimensional (beta/alpha/epsilon) and physical keys; give exactly one group".into(),
            )),
            (false, true) => Ok(None),
            (true, true) => {
                let beta = num("beta")?.ok_or_else(|| Error::Parse("config key beta missing".into()))?;
                let alpha = num("alpha")?.ok_or_else(|| Error::Parse("config key alpha missing".into()))?;
                Ok(Some(ModelSpec::Nondimensional { beta, alpha, epsilon: num("epsilon")? }))
            }
            (false, false) => {
                if present_phys.len() != PHYSICAL_KEYS.len() {
                    let missing: Vec<&str> = PHYSICAL_KEYS.iter().copied().filter(|k| !obj.contains_key(*k)).collect();
                    return Err(Error::Parse(format!("physical config missing keys: {}", missing.join(", "))));
                }
                let phys: PhysicalParams = serde_json::from_value(serde_json::Value::Object(
                    PHYSICAL_KEYS
                        .iter()
                        .map(|k| (k.to_string(), obj[*k].clone()))
                        .collect(),
                ))?;
                Ok(Some(ModelSpec::Physical(phys)))
            }
        }
    }

    /// Resolve to nondimensional parameters; a missing epsilon means the
    /// critical value.
    pub fn resolve(&self) -> Result<Params> {
        match *self {
            ModelSpec::Nondimensional { beta, alpha, epsilon: Some(e) } => Params::new(beta, alpha, e),
            ModelSpec::Nondimensional { beta, alpha, epsilon: None } => Params::critical(beta, alpha),
            ModelSpec::Physical(p) => nondimensionalize(&p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn unit_physical() -> PhysicalParams {
        // l = g, b = m, c l mu = g I, F = mu / 2
        PhysicalParams { l: 9.81, m: 2.0, b: 2.0, c: 2.0, inertia: 3.0, load: 0.75, mu: 1.5, g: 9.81 }
    }

    #[test]
    fn nondimensionalize_unit_ratios() {
        let p = nondimensionalize(&unit_physical()).unwrap();
        assert!((p.beta - 0.5).abs() < 1e-15);
        assert!((p.alpha - 1.0).abs() < 1e-15);
        assert!((p.epsilon - 1.0).abs() < 1e-15);
    }

    #[test]
    fn doubling_friction_doubles_epsilon_only() {
        let base = nondimensionalize(&unit_physical()).unwrap();
        let mut phys = unit_physical();
        phys.b *= 2.0;
        let p = nondimensionalize(&phys).unwrap();
        assert!((p.epsilon - 2.0 * base.epsilon).abs() < 1e-15);
        assert_eq!(p.alpha, base.alpha);
        assert_eq!(p.beta, base.beta);
    }

    #[test]
    fn load_equal_to_mu_is_rejected() {
        let mut phys = unit_physical();
        phys.load = phys.mu;
        let err = nondimensionalize(&phys).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("beta")), "{err}");
        phys.load = phys.mu * (1.0 - 1e-9);
        assert!(nondimensionalize(&phys).unwrap().beta < 1.0);
    }

    #[test]
    fn rhs_vanishes_at_equilibrium() {
        for &(b, a, e) in &[(0.5, 1.0, 1.0), (0.86828, 0.8505, 1.37624), (0.1, 3.0, 0.2)] {
            let p = Params::new(b, a, e).unwrap();
            let f = rhs(&equilibrium(&p), &p);
            assert!(f.iter().all(|v| v.abs() < 1e-15), "{f:?}");
        }
    }

    #[test]
    fn rhs_direct_substitution() {
        let p = Params::new(0.5, 1.0, 1.0).unwrap();
        let f = rhs(&[FRAC_PI_4, 0.0, 0.0], &p);
        assert_eq!(f[0], 0.0);
        assert!((f[1] + FRAC_PI_4.sin()).abs() < 1e-16);
        assert!((f[2] - (FRAC_PI_4.cos() - 0.5)).abs() < 1e-16);
        let f = rhs(&[FRAC_PI_2, 0.3, 2.0], &p);
        assert!((f[1] - (-1.0 - 0.3)).abs() < 1e-15);
    }

    #[test]
    fn equilibrium_coordinates() {
        let p = Params::new(0.5, 1.0, 1.0).unwrap();
        let e = equilibrium(&p);
        assert!((e[0] - FRAC_PI_3).abs() < 1e-15);
        assert!((e[2] - 2f64.sqrt()).abs() < 1e-15);
        let p = Params::new(1.0 - 1e-14, 1.0, 1.0).unwrap();
        let e = equilibrium(&p);
        assert!(e[0] < 2e-7 && (e[2] - 1.0).abs() < 1e-13);
        let p = Params::new(0.86828, 1.0, 1.0).unwrap();
        assert!((equilibrium(&p)[0] - 0.519_071_819_993_607).abs() < 1e-14);
    }

    #[test]
    fn jacobian_boundary_entries_vanish() {
        let p = Params::new(1.0 - 1e-15, 1.0, 1.0).unwrap();
        let a = jacobian(&p);
        assert!(a[(1, 0)].norm() < 1e-14 && a[(2, 0)].norm() < 1e-7);
    }

    #[test]
    fn critical_epsilon_values() {
        assert!((critical_epsilon(0.25, 1.0) - 0.25).abs() < 1e-16);
        assert!((critical_epsilon(0.86828, 0.85050) - 1.37624).abs() < 5e-6);
        assert!(critical_epsilon(0.5, 1e-300) < 1e-299);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(stability_classify(&Params::new(0.5, 1.0, 1.0).unwrap()), Stability::AsymptoticallyStable);
        assert_eq!(stability_classify(&Params::new(0.5, 1.0, 0.5).unwrap()), Stability::Unstable);
        assert_eq!(stability_classify(&Params::critical(0.3, 2.0).unwrap()), Stability::Critical);
    }

    #[test]
    fn omega0_at_half() {
        assert!((omega0(0.5) - 1.224_744_871_391_589).abs() < 1e-15);
    }

    #[test]
    fn critical_frame_is_normalized() {
        let f = critical_frame(0.4, 1.7).unwrap();
        assert!((f.p.inner(&f.q) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(f.q[0], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn b_on_first_unit_vector() {
        let (b, a) = (0.5, 1.0);
        let e1 = ComplexVec::unit(3, 0);
        let v = exact_multilinear(2, &[&e1, &e1], b, a).unwrap();
        assert!((v[1].re + 3.0 * omega0(b) * b.sqrt()).abs() < 1e-15);
        assert!((v[2].re + a * b).abs() < 1e-15);
        let l = exact_multilinear(7, &[&e1; 7], b, a).unwrap();
        assert!((l[1].re - (64.0 * omega0(b).powi(2) - 63.0 * b)).abs() < 1e-12);
    }

    #[test]
    fn third_component_needs_all_first_components() {
        let u = ComplexVec(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 2.0), Complex64::new(0.5, -1.0)]);
        let v = ComplexVec(vec![Complex64::new(1.0, 1.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 3.0)]);
        for k in 2..=7 {
            let mut args = vec![&v; k - 1];
            args.push(&u);
            let f = exact_multilinear(k, &args, 0.6, 1.2).unwrap();
            assert_eq!(f[2], Complex64::new(0.0, 0.0));
            assert_eq!(f[0], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn config_groups() {
        let nd: serde_json::Value = serde_json::json!({"beta": 0.5, "alpha": 1.0});
        assert_eq!(
            ModelSpec::from_json(&nd).unwrap(),
            Some(ModelSpec::Nondimensional { beta: 0.5, alpha: 1.0, epsilon: None })
        );
        let phys = serde_json::json!({"l": 9.81, "m": 2.0, "b": 2.0, "c": 2.0, "I": 3.0, "F": 0.75, "mu": 1.5, "g": 9.81});
        let p = ModelSpec::from_json(&phys).unwrap().unwrap().resolve().unwrap();
        assert!((p.alpha - 1.0).abs() < 1e-15);
        let both = serde_json::json!({"beta": 0.5, "alpha": 1.0, "l": 1.0});
        assert!(ModelSpec::from_json(&both).is_err());
        let partial = serde_json::json!({"l": 1.0, "m": 1.0});
        assert!(ModelSpec::from_json(&partial).is_err());
        assert_eq!(ModelSpec::from_json(&serde_json::json!({"seed": 3})).unwrap(), None);
    }
}
