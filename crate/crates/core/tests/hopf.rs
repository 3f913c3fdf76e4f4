use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use watt_hopf::atlas::{self, Q_ALPHA, Q_BETA};
use watt_hopf::hopf::{weighted_g32, Projection, Tolerances};
use watt_hopf::jet::Jet;
use watt_hopf::linalg::{ComplexMatrix, PhaseConvention};
use watt_hopf::verify::{table_deviation, Q_ROUNDED};
use watt_hopf::{certify, certify_watt, watt, Error, FormSource, HopfFrame, SmoothModel, WattModel};

#[test]
fn both_form_sources_reproduce_the_table_at_q() {
    for source in [FormSource::Jet, FormSource::Exact] {
        let cert = certify_watt(Q_BETA, Q_ALPHA, source).unwrap();
        let (dev, at) = table_deviation(&cert);
        assert!(dev < 1e-4, "{source:?}: {dev:e} at {at}");
        assert!(cert.validity.l2_strict && cert.validity.l3_strict);
        assert!((cert.l3() - 0.39050).abs() < 1e-5);
    }
}

#[test]
fn jet_and_exact_certificates_agree() {
    for (b, a) in [(0.5, 1.0), (0.3, 2.2), (Q_BETA, Q_ALPHA), (0.95, 0.5)] {
        let j = certify_watt(b, a, FormSource::Jet).unwrap();
        let x = certify_watt(b, a, FormSource::Exact).unwrap();
        for (u, v) in [(j.first.g21, x.first.g21), (j.second.g32, x.second.g32), (j.third.g43, x.third.g43)] {
            assert!((u - v).norm() <= 1e-9 * v.norm().max(1.0), "({b}, {a}): {u} vs {v}");
        }
    }
}

#[test]
fn rounded_q_is_close_but_not_exact() {
    let cert = certify_watt(Q_ROUNDED.0, Q_ROUNDED.1, FormSource::Jet).unwrap();
    // Rounding beta and alpha to 5 decimals moves G43 by about 1.5e-2.
    let (dev, _) = table_deviation(&cert);
    assert!(dev > 1e-4 && dev < 0.05, "{dev}");
    assert!(cert.l1().abs() < 1e-5 && cert.l2().abs() < 1e-5);
}

#[test]
fn first_coefficient_at_half_one() {
    let cert = certify_watt(0.5, 1.0, FormSource::Jet).unwrap();
    assert!((cert.l1() + 0.328_906_64).abs() < 1e-8);
    assert!((cert.l1() - atlas::l1_closed(0.5, 1.0)).abs() < 1e-12);
    // Far from l1 = 0 the higher coefficients are not the normal-form ones.
    assert!(!cert.validity.l2_strict);
}

#[test]
fn coefficients_do_not_depend_on_the_phase_of_q() {
    let model = WattModel::critical(0.7, 1.3).unwrap();
    let frame = watt::critical_frame(0.7, 1.3).unwrap();
    let base = certify(&model, &frame, FormSource::Jet, Tolerances::default()).unwrap();
    for theta in [0.3, 1.9, -2.5] {
        let r = certify(&model, &frame.rotated(theta), FormSource::Jet, Tolerances::default()).unwrap();
        for (u, v) in [(base.l1(), r.l1()), (base.l2(), r.l2()), (base.l3(), r.l3())] {
            assert!((u - v).abs() <= 1e-8 * v.abs().max(1.0), "theta {theta}: {u} vs {v}");
        }
    }
}

fn g32_terms(beta: f64, alpha: f64, frame: &HopfFrame) -> (f64, f64) {
    let model = WattModel::critical(beta, alpha).unwrap();
    let mut proj = Projection::new(&model, frame, FormSource::Jet, Tolerances::default());
    let first = proj.first_coefficient().unwrap();
    let second = proj.second_coefficient(&first).unwrap();
    let terms = proj.g32_decomposition(&first, &second.h31, &second.h22);
    (weighted_g32(&terms), second.g32.re)
}

#[test]
fn weighted_terms_sum_to_re_g32() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let b = rng.random_range(0.05..0.95);
        let a = rng.random_range(0.1..2.5);
        let frame = watt::critical_frame(b, a).unwrap();
        let (sum, re) = g32_terms(b, a, &frame);
        assert!((sum - re).abs() < 1e-8, "({b}, {a}): {sum} vs {re}");
        let (rotated, _) = g32_terms(b, a, &frame.rotated(0.77));
        assert!((rotated - sum).abs() < 1e-8);
    }
    let frame = watt::critical_frame(Q_ROUNDED.0, Q_ROUNDED.1).unwrap();
    assert!(g32_terms(Q_ROUNDED.0, Q_ROUNDED.1, &frame).0.abs() < 1e-4);
}

/// `z' = i w z + c z |z|^2` in real coordinates, plus a stable third
/// direction fed by `x^2`: the first coefficient is `2 Re c` for unit `q`.
struct Planar {
    omega: f64,
    c: Complex64,
}

impl SmoothModel for Planar {
    fn dim(&self) -> usize {
        3
    }

    fn equilibrium(&self) -> Vec<f64> {
        vec![0.0; 3]
    }

    fn rhs_jet(&self, s: &[Jet]) -> Vec<Jet> {
        let (x, y, w) = (s[0], s[1], s[2]);
        let r2 = x * x + y * y;
        let (cr, ci) = (self.c.re, self.c.im);
        vec![
            -self.omega * y + r2 * (cr * x - ci * y),
            self.omega * x + r2 * (ci * x + cr * y),
            -2.0 * w + x * x,
        ]
    }
}

#[test]
fn generic_model_first_coefficient() {
    for c in [Complex64::new(-0.7, 0.4), Complex64::new(1.3, -2.0)] {
        let model = Planar { omega: 1.7, c };
        let frame = HopfFrame::from_model(&model, 1.65, PhaseConvention::LargestComponentReal).unwrap();
        assert!((frame.omega0 - 1.7).abs() < 1e-12);
        let cert = certify(&model, &frame, FormSource::Jet, Tolerances::default()).unwrap();
        // x^2 feeds w, which does not feed back into (x, y).
        assert!((cert.l1() - 2.0 * c.re).abs() < 1e-10, "{} vs {}", cert.l1(), 2.0 * c.re);
    }
}

#[test]
fn frame_validation() {
    let frame = watt::critical_frame(0.5, 1.0).unwrap();
    let bad_p = frame.p.scale(2.0);
    assert!(matches!(
        HopfFrame::new(frame.a.clone(), frame.omega0, frame.q.clone(), bad_p),
        Err(Error::InvalidFrame(_))
    ));
    assert!(matches!(
        HopfFrame::new(frame.a.clone(), frame.omega0 * 1.1, frame.q.clone(), frame.p.clone()),
        Err(Error::InvalidFrame(_))
    ));
    let off = ComplexMatrix::from_real(3, &watt_off_critical()).unwrap();
    assert!(HopfFrame::new(off, frame.omega0, frame.q.clone(), frame.p.clone()).is_err());
}

fn watt_off_critical() -> Vec<f64> {
    let p = watt::Params::new(0.5, 1.0, 1.0).unwrap();
    let a = watt::jacobian(&p);
    (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].re).collect()
}

#[test]
fn bordered_solves_meet_their_bounds() {
    let cert = certify_watt(Q_BETA, Q_ALPHA, FormSource::Jet).unwrap();
    assert!(!cert.bordered.is_empty());
    for b in &cert.bordered {
        assert!(b.singular_residual < 1e-9 && b.border < 1e-9 && b.orthogonality < 1e-9, "{b:?}");
    }
    assert!(cert.max_resolvent_residual() < 1e-12);
}
