use watt_hopf::atlas::{self, ParamBox, Region, ZeroCurve, Q_ALPHA, Q_BETA, Q_EPSILON};

#[test]
fn scan_grid_is_row_major_and_tagged() {
    let bx = ParamBox::new((0.1, 0.99), (0.1, 3.0)).unwrap();
    let pts = atlas::scan_signs(&bx, 7, 5).unwrap();
    assert_eq!(pts.len(), 35);
    assert_eq!((pts[0].beta, pts[0].alpha), (0.1, 0.1));
    assert_eq!((pts[6].beta, pts[6].alpha), (0.99, 0.1));
    assert_eq!(pts[7].alpha, pts[7 + 3].alpha);
    for p in &pts {
        let expected = if atlas::g_eval(p.beta, p.alpha) > 0.0 { Region::S } else { Region::U };
        assert_eq!(p.region, expected, "{p:?}");
        assert_eq!(p.l1 < 0.0, p.region == Region::S);
    }
    assert!(pts.iter().any(|p| p.region == Region::U));
    assert_eq!(atlas::scan_signs(&bx, 7, 5).unwrap(), pts);
}

#[test]
fn l1_curve_passes_through_q() {
    let trace = atlas::trace_zero_curve(ZeroCurve::L1, &ParamBox::default(), 0.01).unwrap();
    assert!(trace.points.len() > 50);
    assert!(trace.residual_bound < 1e-10);
    let nearest = trace
        .points
        .iter()
        .map(|p| (p.beta - Q_BETA).hypot(p.alpha - Q_ALPHA))
        .fold(f64::INFINITY, f64::min);
    assert!(nearest < 0.01, "{nearest}");
    // The curve rises from (sqrt(3/5), 0) towards (1, 1) and is tagged C1/C2.
    assert!(trace.points.iter().all(|p| p.beta > 0.6f64.sqrt() - 1e-9));
    let c2 = trace.points.iter().filter(|p| p.region == Region::C2).count();
    let c1 = trace.points.iter().filter(|p| p.region == Region::C1).count();
    assert!(c1 > 0 && c2 > 0);
    for p in trace.points.iter().filter(|p| p.region == Region::C1) {
        assert!(p.beta > Q_BETA && p.l2 < 0.0);
    }
}

#[test]
fn l2_curve_crosses_l1_curve_at_q() {
    let trace = atlas::trace_zero_curve(ZeroCurve::L2, &ParamBox::default(), 0.01).unwrap();
    assert!(!trace.points.is_empty());
    let nearest = trace
        .points
        .iter()
        .map(|p| (p.beta - Q_BETA).hypot(p.alpha - Q_ALPHA))
        .fold(f64::INFINITY, f64::min);
    assert!(nearest < 0.01);
}

#[test]
fn q_from_several_seeds() {
    for seed in [(0.87, 0.85), (0.86, 0.83), (0.88, 0.87)] {
        let q = atlas::locate_q(seed).unwrap();
        assert!((q.beta - Q_BETA).abs() < 1e-12 && (q.alpha - Q_ALPHA).abs() < 1e-12, "{seed:?}");
        assert!((q.epsilon_c - Q_EPSILON).abs() < 1e-12);
        assert_eq!(q.region, Region::QNeighborhood);
    }
    assert!(atlas::locate_q((1.5, 0.8)).is_err());
}

#[test]
fn transversality_at_q() {
    let q = atlas::locate_q(atlas::Q_SEED).unwrap();
    let t = atlas::transversality_at_q(&q);
    assert!((t.determinant_re_g21 - 2.0 * t.determinant).abs() < 1e-9);
    assert!(t.determinant.abs() > 0.1);
    assert!(t.richardson_gap < 1e-5);
}

#[test]
fn eigenvalue_crossing_speed() {
    let d = atlas::eps_transversality(0.5, 1.0).unwrap();
    assert!((d + 0.375).abs() < 1e-6, "{d}");
}

#[test]
fn curve_alpha_matches_closed_form_zero() {
    for b in [0.78, 0.85, Q_BETA, 0.95, 0.999] {
        let a = atlas::l1_zero_alpha(b).unwrap();
        assert!(atlas::l1_closed(b, a).abs() < 1e-14);
    }
    assert!(atlas::l1_zero_alpha(0.7).is_none());
}
