use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use watt_hopf::atlas::{self, ParamBox, ZeroCurve};
use watt_hopf::output::{self, emit, num, pretty};
use watt_hopf::sim::{self, CoexistenceConfig, StepTolerances};
use watt_hopf::verify::{self, VerifyConfig};
use watt_hopf::watt::{self, ModelSpec, Params};
use watt_hopf::{certify_watt, Error, FormSource, Result};

#[derive(Parser, Debug)]
#[command(name = "watt-hopf", version, about = "Hopf points, Lyapunov coefficients and simulations of the Watt governor")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON file with defaults for any flag (keys as flag names, `-` as `_`);
    /// may also hold the model as beta/alpha/epsilon or the physical keys
    /// l, m, b, c, I, F, mu, g. Flags on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: standard output)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replace an existing output file
    #[arg(long, global = true)]
    force: bool,
    /// Worker threads for grid and trial loops (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
struct Model {
    /// beta in (0, 1)
    #[arg(long)]
    beta: Option<f64>,
    /// alpha > 0
    #[arg(long)]
    alpha: Option<f64>,
    /// epsilon > 0 (default: the critical value 2 alpha beta^{3/2})
    #[arg(long)]
    epsilon: Option<f64>,
    /// epsilon as a multiple of the critical value
    #[arg(long, conflicts_with = "epsilon")]
    eps_rel: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certificate of the Hopf point: h vectors, G21, G32, G43, l1, l2, l3 (JSON)
    Coeffs {
        #[command(flatten)]
        model: Model,
        /// Where the multilinear forms come from
        #[arg(long, value_enum)]
        source: Option<Source>,
    },
    /// Signs of l1 and l2 over a (beta, alpha) grid on the critical surface (CSV)
    Scan {
        /// Points per axis (default: 50)
        #[arg(long)]
        grid: Option<usize>,
        /// beta0,beta1,alpha0,alpha1 (default: 0.01,0.99,0.01,3)
        #[arg(long = "box")]
        bx: Option<String>,
    },
    /// Zero curves of l1 and l2 on the critical surface (CSV)
    Curves {
        /// Which curve (default: both)
        #[arg(long, value_enum)]
        which: Option<Which>,
        /// beta0,beta1,alpha0,alpha1 (default: 0.01,0.99,0.01,3)
        #[arg(long = "box")]
        bx: Option<String>,
        /// Grid spacing used to bracket the curves (default: 0.01)
        #[arg(long)]
        step: Option<f64>,
    },
    /// The point Q where l1 = l2 = 0, with l3 and transversality (JSON)
    LocateQ {
        /// Newton seed for beta (default: 0.87)
        #[arg(long)]
        beta: Option<f64>,
        /// Newton seed for alpha (default: 0.85)
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Integrate the governor equations (CSV t,x,y,z)
    Simulate {
        #[command(flatten)]
        model: Model,
        /// Final time (default: 600)
        #[arg(long)]
        t_end: Option<f64>,
        /// Relative step tolerance; the absolute one is 1e-2 of it (default: 1e-10)
        #[arg(long)]
        tol: Option<f64>,
        /// Initial state x,y,z (default: equilibrium shifted by 0.05 in x)
        #[arg(long)]
        x0: Option<String>,
    },
    /// Randomized search for coexisting attractors (JSON)
    Coexist {
        #[command(flatten)]
        model: Model,
        /// Lower end of the epsilon window (default: eps_c - w)
        #[arg(long)]
        eps_min: Option<f64>,
        /// Upper end of the epsilon window (default: eps_c + w)
        #[arg(long)]
        eps_max: Option<f64>,
        /// Epsilon samples across the window (default: 5)
        #[arg(long)]
        samples: Option<usize>,
        /// Random initial conditions per epsilon (default: 6)
        #[arg(long)]
        trials: Option<usize>,
        /// RNG seed (default: 20240601)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the acceptance checks; exit 1 if any fails
    Verify {
        /// RNG seed for the randomized checks (default: 20240601)
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Source {
    Jet,
    Exact,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Which {
    L1,
    L2,
    Both,
}

/// Flag values merged over a JSON config.
struct Settings {
    config: Map<String, Value>,
}

impl Settings {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let config = match path {
            None => Map::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                match serde_json::from_str::<Value>(&text)? {
                    Value::Object(m) => m,
                    _ => return Err(Error::Parse("config must be a JSON object".into())),
                }
            }
        };
        Ok(Settings { config })
    }

    fn f64(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64> {
        Ok(flag.or(self.opt_f64(key)?).unwrap_or(default))
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.config.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| Error::Parse(format!("config key {key} must be a number"))),
        }
    }

    fn u64(&self, flag: Option<u64>, key: &str, default: u64) -> Result<u64> {
        match (flag, self.config.get(key)) {
            (Some(v), _) => Ok(v),
            (None, None) => Ok(default),
            (None, Some(v)) => v.as_u64().ok_or_else(|| Error::Parse(format!("config key {key} must be a non-negative integer"))),
        }
    }

    fn usize(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize> {
        Ok(self.u64(flag.map(|v| v as u64), key, default as u64)? as usize)
    }

    fn string(&self, flag: Option<String>, key: &str) -> Result<Option<String>> {
        match (flag, self.config.get(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, None) => Ok(None),
            (None, Some(v)) => {
                v.as_str().map(|s| Some(s.to_string())).ok_or_else(|| Error::Parse(format!("config key {key} must be a string")))
            }
        }
    }

    fn bool(&self, flag: bool, key: &str) -> Result<bool> {
        match self.config.get(key) {
            _ if flag => Ok(true),
            None => Ok(false),
            Some(v) => v.as_bool().ok_or_else(|| Error::Parse(format!("config key {key} must be true or false"))),
        }
    }

    /// Model parameters; `beta`/`alpha` flags override the config's model group.
    fn params(&self, m: &Model, defaults: Option<(f64, f64)>) -> Result<Params> {
        let from_config = ModelSpec::from_json(&Value::Object(self.config.clone()))?;
        let (base_beta, base_alpha, base_eps) = match from_config {
            Some(spec @ ModelSpec::Physical(_)) => {
                let p = spec.resolve()?;
                (Some(p.beta), Some(p.alpha), Some(p.epsilon))
            }
            Some(ModelSpec::Nondimensional { beta, alpha, epsilon }) => (Some(beta), Some(alpha), epsilon),
            None => (None, None, None),
        };
        let pick = |flag: Option<f64>, base: Option<f64>, idx: usize, name: &str| -> Result<f64> {
            flag.or(base)
                .or(defaults.map(|d| if idx == 0 { d.0 } else { d.1 }))
                .ok_or_else(|| Error::Domain(format!("--{name} is required")))
        };
        let beta = pick(m.beta, base_beta, 0, "beta")?;
        let alpha = pick(m.alpha, base_alpha, 1, "alpha")?;
        let crit = Params::critical(beta, alpha)?;
        let eps_rel = m.eps_rel.or(self.opt_f64("eps_rel")?);
        let epsilon = match (m.epsilon, eps_rel) {
            (Some(e), _) => Some(e),
            (None, Some(r)) => Some(r * crit.epsilon),
            (None, None) => base_eps,
        };
        match epsilon {
            Some(e) => Params::new(beta, alpha, e),
            None => Ok(crit),
        }
    }
}

fn parse_triple(s: &str) -> Result<[f64; 3]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?} in {s:?}"))))
        .collect::<Result<_>>()?;
    v.try_into().map_err(|_| Error::Parse(format!("expected x,y,z, got {s:?}")))
}

fn run(cli: Cli) -> Result<bool> {
    let settings = Settings::load(cli.common.config.as_ref())?;
    let out = cli.common.out.clone().or(settings.string(None, "out")?.map(PathBuf::from));
    let force = settings.bool(cli.common.force, "force")?;
    if let Some(jobs) = cli.common.jobs.or(settings.opt_f64("jobs")?.map(|j| j as usize)) {
        if jobs == 0 {
            return Err(Error::Domain("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    }
    let write = |text: String| emit(out.as_deref(), &text, force);

    match cli.command {
        Command::Coeffs { model, source } => {
            let p = settings.params(&model, None)?;
            let ec = p.epsilon_c();
            if (p.epsilon - ec).abs() > 1e-9 * ec.max(1.0) {
                return Err(Error::Domain(format!(
                    "epsilon = {} is off the critical surface (eps_c = {ec}); the Hopf certificate needs epsilon = 2 alpha beta^(3/2)",
                    p.epsilon
                )));
            }
            let source = match source.map(Ok).unwrap_or_else(|| match settings.string(None, "source")?.as_deref() {
                None | Some("jet") => Ok(Source::Jet),
                Some("exact") => Ok(Source::Exact),
                Some(other) => Err(Error::Parse(format!("source must be jet or exact, got {other}"))),
            })? {
                Source::Jet => FormSource::Jet,
                Source::Exact => FormSource::Exact,
            };
            let cert = certify_watt(p.beta, p.alpha, source)?;
            write(pretty(&output::certificate_json(&cert, p.beta, p.alpha)))?;
        }
        Command::Scan { grid, bx } => {
            let n = settings.usize(grid, "grid", 50)?;
            let bx = match settings.string(bx, "box")? {
                Some(s) => ParamBox::parse(&s)?,
                None => ParamBox::default(),
            };
            write(output::scan_csv(&atlas::scan_signs(&bx, n, n)?))?;
        }
        Command::Curves { which, bx, step } => {
            let bx = match settings.string(bx, "box")? {
                Some(s) => ParamBox::parse(&s)?,
                None => ParamBox::default(),
            };
            let step = settings.f64(step, "step", 0.01)?;
            let which = match which {
                Some(w) => w,
                None => match settings.string(None, "which")?.as_deref() {
                    None | Some("both") => Which::Both,
                    Some("l1") => Which::L1,
                    Some("l2") => Which::L2,
                    Some(other) => return Err(Error::Parse(format!("which must be l1, l2 or both, got {other}"))),
                },
            };
            let curves: &[ZeroCurve] = match which {
                Which::L1 => &[ZeroCurve::L1],
                Which::L2 => &[ZeroCurve::L2],
                Which::Both => &[ZeroCurve::L1, ZeroCurve::L2],
            };
            let traces = curves.iter().map(|c| atlas::trace_zero_curve(*c, &bx, step)).collect::<Result<Vec<_>>>()?;
            write(output::curves_csv(&traces))?;
        }
        Command::LocateQ { beta, alpha } => {
            let seed = (settings.f64(beta, "beta", atlas::Q_SEED.0)?, settings.f64(alpha, "alpha", atlas::Q_SEED.1)?);
            let q = atlas::locate_q(seed)?;
            let t = atlas::transversality_at_q(&q);
            let cert = certify_watt(q.beta, q.alpha, FormSource::Jet)?;
            let mut doc = output::q_json(&q, &t, cert.l3());
            doc["seed"] = json!([num(seed.0), num(seed.1)]);
            write(pretty(&doc))?;
        }
        Command::Simulate { model, t_end, tol, x0 } => {
            let p = settings.params(&model, None)?;
            let t_end = settings.f64(t_end, "t_end", 600.0)?;
            let rel = settings.f64(tol, "tol", StepTolerances::default().rel)?;
            let x0 = match settings.string(x0, "x0")? {
                Some(s) => parse_triple(&s)?,
                None => {
                    let e = watt::equilibrium(&p);
                    [e[0] + 0.05, e[1], e[2]]
                }
            };
            let traj = sim::integrate(&p, x0, t_end, rel, (rel * 1e-2).max(1e-13))?;
            write(output::trajectory_csv(&traj))?;
        }
        Command::Coexist { model, eps_min, eps_max, samples, trials, seed } => {
            let samples = settings.usize(samples, "samples", 5)?;
            let trials = settings.usize(trials, "trials", 6)?;
            let seed = settings.u64(seed, "seed", VerifyConfig::default().seed)?;
            let defaults = VerifyConfig::default().coexist_c2;
            let default_alpha = atlas::l1_zero_alpha(defaults.0).expect("default beta lies where l1 = 0 exists") - defaults.1;
            let p = settings.params(&model, Some((defaults.0, default_alpha)))?;
            let window = match atlas::l1_zero_alpha(p.beta) {
                Some(a) => CoexistenceConfig::beside_curve(p.beta, a - p.alpha, samples, trials, seed)?,
                None => {
                    let ec = p.epsilon_c();
                    CoexistenceConfig::new(p.beta, p.alpha, (ec * 0.99, ec * 1.01), samples, trials, seed)
                }
            };
            let mut cfg = window;
            cfg.eps_range = (settings.f64(eps_min, "eps_min", cfg.eps_range.0)?, settings.f64(eps_max, "eps_max", cfg.eps_range.1)?);
            if !(cfg.eps_range.0 > 0.0 && cfg.eps_range.0 <= cfg.eps_range.1) {
                return Err(Error::Domain(format!("epsilon window {:?} must satisfy 0 < min <= max", cfg.eps_range)));
            }
            let report = sim::find_coexistence(&cfg)?;
            write(pretty(&output::coexistence_json(&report)))?;
        }
        Command::Verify { seed } => {
            let cfg = VerifyConfig { seed: settings.u64(seed, "seed", VerifyConfig::default().seed)?, ..VerifyConfig::default() };
            let report = verify::run_all(&cfg);
            print!("{}", report.render());
            if let Some(path) = out.as_deref() {
                let doc = serde_json::to_value(&report)?;
                emit(Some(path), &pretty(&doc), force)?;
            }
            return Ok(report.all_pass());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("watt-hopf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
