//! CSV and JSON renderings of results, and guarded file output.
//!
//! Floats in CSV are written with 17 significant digits in exponent form so
//! the text is byte-identical across runs and round-trips exactly. JSON uses
//! the shortest round-tripping representation; non-finite values become
//! `null`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::atlas::{CriticalPoint, CurveTrace, Transversality};
use crate::error::{Error, Result};
use crate::hopf::HopfCertificate;
use crate::linalg::ComplexVec;
use crate::sim::{CoexistenceReport, CycleEstimate, ScalingPoint, ShootingResult, Trajectory};

/// Fixed 17-significant-digit rendering.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "nan".to_string()
    }
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn complex_vec(v: &ComplexVec) -> Value {
    Value::Array(v.iter().map(|z| complex(*z)).collect())
}

fn vec3(s: &[f64; 3]) -> Value {
    json!([num(s[0]), num(s[1]), num(s[2])])
}

fn pair(p: [f64; 2]) -> Value {
    json!([num(p[0]), num(p[1])])
}

pub fn certificate_json(cert: &HopfCertificate, beta: f64, alpha: f64) -> Value {
    let h: Map<String, Value> = cert.h_vectors().into_iter().map(|(k, v)| (k.to_string(), complex_vec(v))).collect();
    json!({
        "beta": num(beta),
        "alpha": num(alpha),
        "epsilon_c": num(crate::watt::critical_epsilon(beta, alpha)),
        "omega0": num(cert.omega0),
        "source": cert.source.as_str(),
        "q": complex_vec(&cert.q),
        "p": complex_vec(&cert.p),
        "h": h,
        "G21": complex(cert.first.g21),
        "G32": complex(cert.second.g32),
        "G43": complex(cert.third.g43),
        "l1": num(cert.l1()),
        "l2": num(cert.l2()),
        "l3": num(cert.l3()),
        "validity": {
            "l2_strict": cert.validity.l2_strict,
            "l3_strict": cert.validity.l3_strict,
        },
        "tolerances": {
            "solvability": num(cert.tolerances.solvability),
            "l2_validity": num(cert.tolerances.l2_validity),
            "l3_validity": num(cert.tolerances.l3_validity),
        },
        "bordered": cert.bordered.iter().map(|b| json!({
            "label": b.label,
            "singular_residual": num(b.singular_residual),
            "border": num(b.border),
            "orthogonality": num(b.orthogonality),
        })).collect::<Vec<_>>(),
        "max_resolvent_residual": num(cert.max_resolvent_residual()),
    })
}

pub fn critical_point_json(p: &CriticalPoint) -> Value {
    json!({
        "beta": num(p.beta),
        "alpha": num(p.alpha),
        "epsilon_c": num(p.epsilon_c),
        "l1": num(p.l1),
        "l2": num(p.l2),
        "region": p.region.as_str(),
    })
}

pub fn q_json(q: &CriticalPoint, t: &Transversality, l3: f64) -> Value {
    json!({
        "q": critical_point_json(q),
        "l3": num(l3),
        "transversality": {
            "grad_l1": pair(t.grad_l1),
            "grad_l2": pair(t.grad_l2),
            "determinant": num(t.determinant),
            "grad_re_g21": pair(t.grad_re_g21),
            "determinant_re_g21": num(t.determinant_re_g21),
            "richardson_gap": num(t.richardson_gap),
        },
    })
}

pub fn cycle_json(c: &CycleEstimate) -> Value {
    json!({
        "period": num(c.period),
        "amplitude": num(c.amplitude),
        "converged": c.converged,
        "stability": c.stability.as_str(),
        "returns": c.crossings.len(),
        "last_crossing": c.crossings.last().map(vec3),
        "final_time": num(c.final_time),
        "final_state": vec3(&c.final_state),
    })
}

pub fn scaling_json(points: &[ScalingPoint]) -> Value {
    let rows: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({
                "delta": num(p.delta),
                "epsilon": num(p.epsilon),
                "predicted_amplitude": num(p.predicted_amplitude),
                "cycle": cycle_json(&p.estimate),
            })
        })
        .collect();
    let ratios: Vec<Value> = points.windows(2).map(|w| num(w[0].estimate.amplitude / w[1].estimate.amplitude)).collect();
    json!({ "points": rows, "ratios": ratios })
}

fn shooting_json(r: &ShootingResult) -> Value {
    match &r.cycle {
        Ok(c) => json!({ "epsilon": num(r.epsilon), "predicted_amplitude": num(r.predicted_amplitude), "cycle": cycle_json(c) }),
        Err(e) => json!({ "epsilon": num(r.epsilon), "predicted_amplitude": num(r.predicted_amplitude), "error": e }),
    }
}

pub fn coexistence_json(r: &CoexistenceReport) -> Value {
    let c = &r.config;
    json!({
        "window": {
            "beta": num(c.beta),
            "alpha": num(c.alpha),
            "eps_range": pair([c.eps_range.0, c.eps_range.1]),
            "eps_samples": c.eps_samples,
            "trials": c.trials,
            "seed": c.seed,
            "radius": num(c.radius),
            "shooting": c.shooting,
            "equilibrium_tol": num(c.classify.equilibrium_tol),
            "min_amplitude": num(c.classify.min_amplitude),
            "equilibrium_time": num(c.classify.equilibrium_time),
            "settle_time": num(c.classify.cycle.settle_time),
            "max_returns": c.classify.cycle.max_returns,
        },
        "epsilon_c": num(r.epsilon_c),
        "l1": num(r.l1),
        "l2": num(r.l2),
        "trials": r.trials.iter().map(|t| json!({
            "epsilon": num(t.epsilon),
            "trial": t.trial,
            "stream": t.stream,
            "initial": vec3(&t.initial),
            "attractor": t.classification.attractor.as_str(),
            "final_distance": num(t.classification.final_distance),
            "cycle": t.classification.cycle.as_ref().map(cycle_json),
            "note": t.classification.note,
        })).collect::<Vec<_>>(),
        "shooting": r.shooting.iter().map(shooting_json).collect::<Vec<_>>(),
        "witnesses": r.witnesses.iter().map(|w| json!({
            "epsilon": num(w.epsilon),
            "method": w.method.as_str(),
            "equilibrium_initial": vec3(&w.equilibrium_initial),
            "cycle_initial": vec3(&w.cycle_initial),
            "cycle": cycle_json(&w.cycle),
        })).collect::<Vec<_>>(),
    })
}

pub fn scan_csv(points: &[CriticalPoint]) -> String {
    let mut out = String::from("beta,alpha,eps_c,l1,l2,region\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            sig17(p.beta),
            sig17(p.alpha),
            sig17(p.epsilon_c),
            sig17(p.l1),
            sig17(p.l2),
            p.region.as_str()
        );
    }
    out
}

pub fn curves_csv(traces: &[CurveTrace]) -> String {
    let mut out = String::from("beta,alpha,eps_c,which\n");
    for t in traces {
        for p in &t.points {
            let _ = writeln!(out, "{},{},{},{}", sig17(p.beta), sig17(p.alpha), sig17(p.epsilon_c), t.which.as_str());
        }
    }
    out
}

pub fn trajectory_csv(t: &Trajectory) -> String {
    let mut out = String::from("t,x,y,z\n");
    for (time, s) in t.times.iter().zip(&t.states) {
        let _ = writeln!(out, "{},{},{},{}", sig17(*time), sig17(s[0]), sig17(s[1]), sig17(s[2]));
    }
    out
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or standard output when `path` is `None`. An existing
/// file is only replaced when `force` is set.
pub fn emit(path: Option<&Path>, contents: &str, force: bool) -> Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
        }
        Some(p) => {
            if p.exists() && !force {
                return Err(Error::Io(format!("{} exists; pass --force to overwrite", p.display())));
            }
            std::fs::write(p, contents)?;
        }
    }
    Ok(())
}
