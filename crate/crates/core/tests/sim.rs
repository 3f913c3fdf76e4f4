use std::f64::consts::PI;

use watt_hopf::sim::{self, Attractor, CoexistenceConfig, CycleStability, WitnessMethod};
use watt_hopf::watt::{self, Params};
use watt_hopf::Error;

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn equilibrium_start_stays_put() {
    let p = Params::new(0.5, 1.0, 1.0).unwrap();
    let p0 = watt::equilibrium(&p);
    let t = sim::integrate(&p, p0, 50.0, 1e-10, 1e-12).unwrap();
    assert!(t.states.iter().all(|s| dist(s, &p0) < 1e-10));
    let r = watt::rhs(&p0, &p);
    assert!(r.iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn stable_side_converges_and_tolerances_self_converge() {
    let p = Params::new(0.5, 1.0, 1.0).unwrap();
    let p0 = watt::equilibrium(&p);
    let x0 = [p0[0] + 0.05, p0[1], p0[2]];
    let coarse = sim::integrate(&p, x0, 400.0, 1e-8, 1e-10).unwrap();
    let fine = sim::integrate(&p, x0, 400.0, 5e-9, 5e-11).unwrap();
    let (a, b) = (coarse.states.last().unwrap(), fine.states.last().unwrap());
    assert!(dist(a, &p0) < 1e-6);
    assert!(dist(a, b) < 10.0 * 1e-8);
    assert_eq!(*coarse.times.last().unwrap(), 400.0);
}

#[test]
fn integrate_rejects_bad_input() {
    let p = Params::new(0.5, 1.0, 1.0).unwrap();
    assert!(matches!(sim::integrate(&p, [2.0, 0.0, 1.0], 1.0, 1e-10, 1e-12), Err(Error::Domain(_))));
    assert!(matches!(sim::integrate(&p, [0.5, 0.0, 1.0], -1.0, 1e-10, 1e-12), Err(Error::Domain(_))));
    assert!(matches!(sim::integrate(&p, [0.5, 0.0, 1.0], 1.0, 1e-15, 1e-12), Err(Error::Domain(_))));
}

#[test]
fn cycle_below_onset_and_decay_above() {
    let crit = Params::critical(0.5, 1.0).unwrap();
    let below = Params::new(0.5, 1.0, 0.98 * crit.epsilon).unwrap();
    let p0 = watt::equilibrium(&below);
    let c = sim::detect_cycle(&below, [p0[0] + 0.05, 0.0, p0[2]], 100.0, 5000).unwrap();
    assert!(c.converged);
    assert!((c.period - 2.0 * PI / 1.5f64.sqrt()).abs() < 0.1 * 2.0 * PI / 1.5f64.sqrt());
    assert!(c.amplitude > 0.1);

    // Closure: one period after a section return the orbit is back.
    let start = *c.crossings.last().unwrap();
    let t = sim::integrate(&below, start, c.period, 1e-12, 1e-13).unwrap();
    assert!(dist(t.states.last().unwrap(), &start) < 1e-5);

    let above = Params::new(0.5, 1.0, 1.05 * crit.epsilon).unwrap();
    let q0 = watt::equilibrium(&above);
    let r = sim::classify(&above, [q0[0] + 0.05, 0.0, q0[2]], &sim::ClassifyOptions::default()).unwrap();
    assert_eq!(r.attractor, Attractor::Equilibrium);
}

#[test]
fn stationary_input_at_onset_is_inconclusive() {
    let crit = Params::critical(0.5, 1.0).unwrap();
    let c = sim::detect_cycle(&crit, watt::equilibrium(&crit), 0.0, 100).unwrap();
    assert!(!c.converged);
    assert_eq!(c.stability, CycleStability::Inconclusive);
}

#[test]
fn amplitudes_follow_square_root_law() {
    let pts = sim::amplitude_scaling(0.5, 1.0, &[0.02, 0.01, 0.005]).unwrap();
    for w in pts.windows(2) {
        let ratio = w[0].estimate.amplitude / w[1].estimate.amplitude;
        assert!((1.25..=1.60).contains(&ratio), "{ratio}");
    }
    assert!(pts.iter().all(|p| p.estimate.stability == CycleStability::Attracting));
    assert!(sim::amplitude_scaling(0.95, 0.5, &[0.01]).is_err());
}

#[test]
fn repelling_cycle_around_stable_equilibrium_in_region_u() {
    let c = sim::subcritical_cycle(0.95, 0.5, 0.01).unwrap();
    assert_eq!(c.stability, CycleStability::Repelling);
    let predicted = sim::predicted_amplitude(0.95, 0.5, Params::critical(0.95, 0.5).unwrap().epsilon * 1.01).unwrap();
    assert!((c.amplitude - predicted).abs() < 0.1 * predicted, "{} vs {predicted}", c.amplitude);
}

#[test]
fn volume_contracts_at_rate_epsilon() {
    let p = Params::new(0.5, 1.0, 1.0).unwrap();
    let p0 = watt::equilibrium(&p);
    let (det, expected) = sim::volume_contraction(&p, [p0[0] + 0.1, 0.05, p0[2]], 2.0).unwrap();
    assert!((det - expected).abs() < 0.05 * expected);
}

#[test]
fn region_s_above_onset_has_only_the_equilibrium() {
    let crit = Params::critical(0.5, 1.0).unwrap();
    let mut cfg = CoexistenceConfig::new(0.5, 1.0, (1.1 * crit.epsilon, 1.3 * crit.epsilon), 2, 4, 3);
    cfg.shooting = false;
    let r = sim::find_coexistence(&cfg).unwrap();
    assert_eq!(r.trials.len(), 8);
    assert!(r.trials.iter().all(|t| t.classification.attractor == Attractor::Equilibrium));
    assert!(r.witnesses.is_empty());
}

#[test]
fn coexistence_search_is_reproducible() {
    let mut cfg = CoexistenceConfig::beside_curve(0.92, 0.01, 2, 3, 99).unwrap();
    cfg.classify.equilibrium_time = 500.0;
    let a = sim::find_coexistence(&cfg).unwrap();
    let b = sim::find_coexistence(&cfg).unwrap();
    assert_eq!(a.trials.len(), b.trials.len());
    for (x, y) in a.trials.iter().zip(&b.trials) {
        assert_eq!((x.stream, x.initial, x.classification.attractor), (y.stream, y.initial, y.classification.attractor));
        assert_eq!(x.classification.final_distance.to_bits(), y.classification.final_distance.to_bits());
    }
}

#[test]
fn tongue_next_to_c1_has_a_certified_witness() {
    // Inside the normal-form window: stable P0, repelling small cycle,
    // attracting outer cycle.
    let mut cfg = CoexistenceConfig::beside_curve(0.92, 0.01, 1, 0, 1).unwrap();
    let ec = Params::critical(cfg.beta, cfg.alpha).unwrap().epsilon;
    cfg.eps_range = (ec + 0.5 * (cfg.eps_range.1 - ec), ec + 0.5 * (cfg.eps_range.1 - ec));
    let r = sim::find_coexistence(&cfg).unwrap();
    let found: Vec<CycleStability> = r.shooting.iter().filter_map(|s| s.cycle.as_ref().ok()).map(|c| c.stability).collect();
    assert_eq!(found, vec![CycleStability::Repelling, CycleStability::Attracting]);
    assert_eq!(r.witnesses.len(), 1);
    assert_eq!(r.witnesses[0].method, WitnessMethod::Certified);
    assert_eq!(watt::stability_classify(&Params::new(cfg.beta, cfg.alpha, r.witnesses[0].epsilon).unwrap()), watt::Stability::AsymptoticallyStable);
}
