//! Symmetric multilinear forms of orders 2..=7 of a vector field at its
//! equilibrium, from directional Taylor jets and the polarization identity.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_DEGREE};
use crate::linalg::{ComplexMatrix, ComplexVec};

/// Lowest form order handled here (the Jacobian is order 1).
pub const MIN_ORDER: usize = 2;

/// A smooth autonomous vector field `x' = F(x)` at a fixed parameter value.
pub trait SmoothModel: Sync {
    fn dim(&self) -> usize;

    /// The equilibrium the forms are taken at.
    fn equilibrium(&self) -> Vec<f64>;

    /// `F` evaluated over jet scalars.
    fn rhs_jet(&self, state: &[Jet]) -> Vec<Jet>;

    /// Closed-form multilinear forms, when the model provides them.
    fn exact_multilinear(&self, _order: usize, _args: &[&ComplexVec]) -> Option<ComplexVec> {
        None
    }

    /// Jacobian at the equilibrium from first-order jet coefficients.
    fn jacobian(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut a = ComplexMatrix::zeros(n);
        for j in 0..n {
            let col = directional_jet_unchecked(self, &ComplexVec::unit(n, j), 1);
            for i in 0..n {
                a[(i, j)] = col[1][i];
            }
        }
        a
    }
}

/// Which evaluator produced a certificate's multilinear forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormSource {
    /// Closed forms supplied by the model.
    Exact,
    /// Jets plus polarization.
    Jet,
}

impl FormSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormSource::Exact => "exact",
            FormSource::Jet => "jet",
        }
    }
}

/// Taylor coefficients `F_0..=F_degree` of `t -> F(x0 + t v)`.
pub fn directional_jet<M: SmoothModel + ?Sized>(
    model: &M,
    direction: &ComplexVec,
    degree: usize,
) -> Result<Vec<ComplexVec>> {
    if !(MIN_ORDER..=MAX_DEGREE).contains(&degree) {
        return Err(Error::DegreeOutOfRange { degree, min: MIN_ORDER, max: MAX_DEGREE });
    }
    if direction.len() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: direction.len() });
    }
    Ok(directional_jet_unchecked(model, direction, degree))
}

fn directional_jet_unchecked<M: SmoothModel + ?Sized>(model: &M, direction: &ComplexVec, degree: usize) -> Vec<ComplexVec> {
    let x0 = model.equilibrium();
    let state: Vec<Jet> = x0
        .iter()
        .zip(direction.iter())
        .map(|(&base, &dir)| Jet::variable(base, dir, degree))
        .collect();
    let out = model.rhs_jet(&state);
    (0..=degree)
        .map(|k| ComplexVec(out.iter().map(|j| j.coeff(k)).collect()))
        .collect()
}

fn cmp_vec(a: &ComplexVec, b: &ComplexVec) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// The order-`k` symmetric form applied to `args`, by polarization:
///
/// ```text
/// M(x_1..x_k) = 2^{1-k} sum_{e_1 = +1, e_2..e_k = +-1} (e_1...e_k) c_k(e_1 x_1 + ... + e_k x_k)
/// ```
///
/// where `c_k(v)` is the `k`-th Taylor coefficient along `v` (so
/// `k! c_k(v) = M(v, .., v)`). Arguments are put in a canonical order first,
/// which makes the result bit-for-bit independent of argument order.
pub fn multilinear<M: SmoothModel + ?Sized>(model: &M, order: usize, args: &[&ComplexVec]) -> Result<ComplexVec> {
    if !(MIN_ORDER..=MAX_DEGREE).contains(&order) {
        return Err(Error::DegreeOutOfRange { degree: order, min: MIN_ORDER, max: MAX_DEGREE });
    }
    if args.len() != order {
        return Err(Error::ArityMismatch { order, got: args.len() });
    }
    let n = model.dim();
    if let Some(bad) = args.iter().find(|a| a.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
    }

    // Polarization cancels badly when argument sizes differ by orders of
    // magnitude, so each argument is brought to unit size by a power of two
    // (exact) and the scale is restored by multilinearity.
    let mut restore = 1.0;
    let mut scaled: Vec<ComplexVec> = Vec::with_capacity(order);
    for a in args {
        let size = a.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
        if size == 0.0 {
            return Ok(ComplexVec::zeros(n));
        }
        let k = size.log2().round() as i32;
        restore *= 2f64.powi(k);
        scaled.push(a.scale(2f64.powi(-k)));
    }
    let mut sorted: Vec<&ComplexVec> = scaled.iter().collect();
    sorted.sort_by(|a, b| cmp_vec(a, b));

    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    // Bit j of `mask` flips the sign of argument j + 1; argument 0 stays positive.
    for mask in 0u32..(1 << (order - 1)) {
        let mut dir = sorted[0].clone();
        let mut sign = 1.0;
        for (j, arg) in sorted.iter().enumerate().skip(1) {
            if mask & (1 << (j - 1)) != 0 {
                sign = -sign;
                for (d, a) in dir.0.iter_mut().zip(arg.iter()) {
                    *d -= a;
                }
            } else {
                for (d, a) in dir.0.iter_mut().zip(arg.iter()) {
                    *d += a;
                }
            }
        }
        let coeffs = directional_jet_unchecked(model, &dir, order);
        for (a, c) in acc.iter_mut().zip(coeffs[order].iter()) {
            *a += c * sign;
        }
    }
    let norm = 0.5f64.powi(order as i32 - 1) * restore;
    Ok(ComplexVec(acc.into_iter().map(|z| z * norm).collect()))
}

/// Forms from `source`, falling back to polarization when the model has no
/// closed forms.
pub fn evaluate_form<M: SmoothModel + ?Sized>(
    model: &M,
    source: FormSource,
    order: usize,
    args: &[&ComplexVec],
) -> Result<ComplexVec> {
    if source == FormSource::Exact {
        if args.len() != order {
            return Err(Error::ArityMismatch { order, got: args.len() });
        }
        if let Some(v) = model.exact_multilinear(order, args) {
            return Ok(v);
        }
    }
    multilinear(model, order, args)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// F(x, y) = (x^2 y, sin(x) + y^3), equilibrium at the origin.
    struct Toy;

    impl SmoothModel for Toy {
        fn dim(&self) -> usize {
            2
        }
        fn equilibrium(&self) -> Vec<f64> {
            vec![0.0, 0.0]
        }
        fn rhs_jet(&self, s: &[Jet]) -> Vec<Jet> {
            vec![s[0] * s[0] * s[1], s[0].sin() + s[1].powi(3)]
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn third_order_form_of_polynomial_field() {
        // C_1(u, v, w) = 2 (u1 v1 w2 + u1 v2 w1 + u2 v1 w1)
        // C_2(u, v, w) = -u1 v1 w1 + 6 u2 v2 w2
        let u = ComplexVec(vec![c(1.0, 0.5), c(-0.3, 0.2)]);
        let v = ComplexVec(vec![c(0.2, -1.0), c(0.7, 0.0)]);
        let w = ComplexVec(vec![c(-0.4, 0.1), c(0.0, 1.1)]);
        let m = multilinear(&Toy, 3, &[&u, &v, &w]).unwrap();
        let e1 = (u[0] * v[0] * w[1] + u[0] * v[1] * w[0] + u[1] * v[0] * w[0]) * 2.0;
        let e2 = -u[0] * v[0] * w[0] + u[1] * v[1] * w[1] * 6.0;
        assert!((m[0] - e1).norm() < 1e-14, "{} vs {}", m[0], e1);
        assert!((m[1] - e2).norm() < 1e-14, "{} vs {}", m[1], e2);
    }

    #[test]
    fn zero_argument_gives_zero() {
        let u = ComplexVec(vec![c(1.0, 0.5), c(-0.3, 0.2)]);
        let z = ComplexVec::zeros(2);
        for k in 2..=7 {
            let mut args = vec![&u; k - 1];
            args.push(&z);
            let m = multilinear(&Toy, k, &args).unwrap();
            assert!(m.norm() < 1e-15, "order {k}: {}", m.norm());
        }
    }

    #[test]
    fn rejects_bad_orders_and_arity() {
        let u = ComplexVec::zeros(2);
        assert!(matches!(multilinear(&Toy, 1, &[&u]), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(multilinear(&Toy, 8, &[&u; 8]), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(multilinear(&Toy, 3, &[&u, &u]), Err(Error::ArityMismatch { .. })));
        let bad = ComplexVec::zeros(3);
        assert!(matches!(multilinear(&Toy, 2, &[&u, &bad]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(directional_jet(&Toy, &u, 9), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn default_jacobian_from_jets() {
        let a = Toy.jacobian();
        // d/dx sin(x) = 1 at 0, everything else vanishes at the origin.
        assert_eq!(a[(1, 0)], c(1.0, 0.0));
        assert_eq!(a[(0, 0)], c(0.0, 0.0));
        assert_eq!(a[(1, 1)], c(0.0, 0.0));
    }
}
