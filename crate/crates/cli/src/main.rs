//! `latcov`: command-line access to the lattice-covering toolkit.
//!
//! Every run writes its JSON result to stdout (or `--out FILE`) and a run
//! manifest to stderr (or `--manifest FILE`). Reruns with identical
//! arguments, seed included, produce byte-identical JSON payloads.
//!
//! Exit codes: 0 success, 1 failed lemma checks, 2 validation or file
//! errors, 3 budget or bisection stalls, 4 failed final coverage check.

use clap::{Args, Parser, Subcommand};
use lattice_covering::constants as consts;
use lattice_covering::density::{estimate_uncovered_density, ProductBody};
use lattice_covering::io as lc_io;
use lattice_covering::io::LatticeDoc;
use lattice_covering::lemmas;
use lattice_covering::lift::{
    lift_until_good, pipeline, LiftOptions, PipelineConfig, RobustCovering,
};
use lattice_covering::robust::{certify_robust, deficit_grid, min_robust_radius, search_robust_2d};
use lattice_covering::{Error as LcError, Lattice};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "latcov", version, about = "Lattice sphere covering toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Plain-text key=value config file with defaults for seed, samples,
    /// grid, tol, tau, threads. Flags override config. The LATCOV_CONFIG
    /// environment variable supplies the path when this flag is absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Write the run manifest here instead of stderr.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    /// Cap on worker threads (0 = automatic). Results are identical for any
    /// value: all parallel reductions are order-independent.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the closed-form constants and bound calculators.
    Constants {
        /// Block dimension d.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Robust covering density D: a number or a built-in name
        /// ("hex", "cube(D)"). Defaults to the cube density nu_d.
        #[arg(long = "D")]
        big_d: Option<String>,
        /// Ambient dimension n: adds initial-covering parameters, the delta
        /// schedule, the density bound, and the lower-bound floor.
        #[arg(long)]
        n: Option<usize>,
        /// Number of lifting stages (defaults to the asymptotic choice).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Certify or refute robustness of a lattice covering at a radius.
    VerifyRobust {
        #[arg(long)]
        lattice: PathBuf,
        /// Radius to certify (falls back to the lattice file's radius).
        #[arg(long)]
        radius: Option<f64>,
        /// Base grid spacing (refined adaptively near the worst points).
        #[arg(long)]
        grid: Option<f64>,
        /// Dump the deficit on the base grid as CSV rows w1,..,wd,f.
        #[arg(long)]
        deficit_csv: Option<PathBuf>,
    },
    /// Bracket the minimal robust radius of a lattice by bisection.
    MinRadius {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Local search for low-density planar robust coverings.
    Search {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        iters: usize,
    },
    /// Estimate the uncovered density of lattice + body by Monte Carlo.
    Estimate {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        body: PathBuf,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Sample random lifts until the uncovered density clears the threshold.
    Lift {
        /// Base lattice file.
        #[arg(long)]
        base: PathBuf,
        /// Robust covering name ("hex", "cube(D)").
        #[arg(long)]
        robust: String,
        /// Body file for the base pair.
        #[arg(long)]
        body: PathBuf,
        /// Current uncovered density delta of the base pair.
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long, default_value_t = 20)]
        max_tries: usize,
        /// Use the analytic per-lift constant instead of tau.
        #[arg(long)]
        paper_constants: bool,
        /// Check each anchored-parallelepiped event separately.
        #[arg(long)]
        per_event: bool,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Run the full lift-and-expand construction end to end.
    Pipeline {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        robust: String,
        /// Explicit initial lattice file (defaults to the best built-in).
        #[arg(long)]
        initial_lattice: Option<PathBuf>,
        /// Explicit initial body file.
        #[arg(long)]
        initial_body: Option<PathBuf>,
        /// Single-ball radius for the initial body over the default lattice.
        #[arg(long)]
        initial_radius: Option<f64>,
        /// Target measured uncovered density of the default initial pair.
        #[arg(long, default_value_t = 0.1)]
        delta0: f64,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long, default_value_t = 20)]
        max_tries: usize,
        #[arg(long)]
        paper_constants: bool,
        #[arg(long)]
        per_event: bool,
        /// Dump per-stage estimates as CSV rows stage,dim,delta,ci,resamples.
        #[arg(long)]
        stages_csv: Option<PathBuf>,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Run the bundled lemma checks; nonzero exit if any fails.
    CheckLemmas {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[command(flatten)]
        mc: McArgs,
    },
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, Value>,
    seed: u64,
    versions: String,
    outputs: Vec<String>,
    wall_time_ms: u128,
}

/// Defaults resolved from (flag, config file, built-in default).
struct Defaults {
    cfg: BTreeMap<String, String>,
}

impl Defaults {
    fn load(path: Option<&Path>) -> Result<Self, String> {
        let path = match path {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os("LATCOV_CONFIG").map(PathBuf::from),
        };
        let mut cfg = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("config {}: {e}", path.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| format!("config line {} is not key=value", lineno + 1))?;
                cfg.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Defaults { cfg })
    }

    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, fallback: T) -> T {
        if let Some(v) = flag {
            return v;
        }
        self.cfg
            .get(key)
            .and_then(|s| s.parse().ok())
            .unwrap_or(fallback)
    }
}

fn exit_code_for(err: &LcError) -> i32 {
    match err {
        LcError::EnumerationBudgetExceeded { .. }
        | LcError::GridTooCoarse { .. }
        | LcError::BisectionStalled { .. }
        | LcError::MaxTriesExceeded { .. } => 3,
        LcError::CoverageCheckFailed { .. } => 4,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let started = Instant::now();

    if let Some(threads) = cli.threads {
        if threads > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
            {
                eprintln!("latcov: failed to set thread count: {e}");
                return 2;
            }
        }
    }

    let defaults = match Defaults::load(cli.config.as_deref()) {
        Ok(d) => d,
        Err(msg) => {
            eprintln!("latcov: {msg}");
            return 2;
        }
    };

    let mut outputs: Vec<String> = Vec::new();
    let (payload, seed, params, code) = match execute(&cli.command, &defaults, &mut outputs) {
        Ok(done) => done,
        Err(err) => {
            eprintln!("latcov: {err}");
            return exit_code_for(&err);
        }
    };

    let text = serde_json::to_string_pretty(&payload).expect("JSON serialization");
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("latcov: writing {}: {e}", path.display());
                return 2;
            }
            outputs.push(path.display().to_string());
        }
        None => println!("{text}"),
    }

    let manifest = RunManifest {
        command: command_name(&cli.command).to_string(),
        parameters: params,
        seed,
        versions: format!("latcov {}", env!("CARGO_PKG_VERSION")),
        outputs,
        wall_time_ms: started.elapsed().as_millis(),
    };
    let mtext = serde_json::to_string(&manifest).expect("manifest serialization");
    match &cli.manifest {
        Some(path) => {
            if let Err(e) = std::fs::write(path, mtext + "\n") {
                eprintln!("latcov: writing {}: {e}", path.display());
                return 2;
            }
        }
        None => eprintln!("{mtext}"),
    }
    code
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Constants { .. } => "constants",
        Command::VerifyRobust { .. } => "verify-robust",
        Command::MinRadius { .. } => "min-radius",
        Command::Search { .. } => "search",
        Command::Estimate { .. } => "estimate",
        Command::Lift { .. } => "lift",
        Command::Pipeline { .. } => "pipeline",
        Command::CheckLemmas { .. } => "check-lemmas",
    }
}

type Executed = (Value, u64, BTreeMap<String, Value>, i32);

fn execute(
    cmd: &Command,
    defaults: &Defaults,
    outputs: &mut Vec<String>,
) -> lattice_covering::Result<Executed> {
    let mut params: BTreeMap<String, Value> = BTreeMap::new();
    match cmd {
        Command::Constants { d, big_d, n, k } => {
            let payload = constants_payload(*d, big_d.as_deref(), *n, *k)?;
            params.insert("d".into(), json!(d));
            if let Some(s) = big_d {
                params.insert("D".into(), json!(s));
            }
            if let Some(n) = n {
                params.insert("n".into(), json!(n));
            }
            if let Some(k) = k {
                params.insert("k".into(), json!(k));
            }
            Ok((payload, 0, params, 0))
        }

        Command::VerifyRobust {
            lattice,
            radius,
            grid,
            deficit_csv,
        } => {
            let (lat, file_radius) = lc_io::read_lattice(lattice)?;
            let r = radius.or(file_radius).ok_or_else(|| {
                LcError::invalid("no radius given and the lattice file carries none")
            })?;
            let grid_h = defaults.get(*grid, "grid", 1e-3);
            let cert = certify_robust(&lat, r, grid_h)?;
            if let Some(csv) = deficit_csv {
                let rows = deficit_grid(&lat, r, grid_h)?;
                let mut text = String::new();
                for (w, f) in rows {
                    for c in &w {
                        text.push_str(&format!("{c},"));
                    }
                    text.push_str(&format!("{f}\n"));
                }
                std::fs::write(csv, text)
                    .map_err(|e| LcError::Io(format!("{}: {e}", csv.display())))?;
                outputs.push(csv.display().to_string());
            }
            params.insert("lattice".into(), json!(lattice.display().to_string()));
            params.insert("radius".into(), json!(r));
            params.insert("grid".into(), json!(grid_h));
            Ok((serde_json::to_value(&cert).expect("serializable"), 0, params, 0))
        }

        Command::MinRadius { lattice, tol } => {
            let (lat, _) = lc_io::read_lattice(lattice)?;
            let tol = defaults.get(*tol, "tol", 1e-3);
            let bracket = min_robust_radius(&lat, tol)?;
            params.insert("lattice".into(), json!(lattice.display().to_string()));
            params.insert("tol".into(), json!(tol));
            let payload = json!({
                "lo": bracket.lo,
                "hi": bracket.hi,
                "width": bracket.hi - bracket.lo,
                "tol": tol,
            });
            Ok((payload, 0, params, 0))
        }

        Command::Search { seed, iters } => {
            let seed = defaults.get(*seed, "seed", 1);
            let result = search_robust_2d(seed, *iters)?;
            params.insert("iters".into(), json!(iters));
            params.insert("seed".into(), json!(seed));
            Ok((
                serde_json::to_value(&result).expect("serializable"),
                seed,
                params,
                0,
            ))
        }

        Command::Estimate { lattice, body, mc } => {
            let (lat, _) = lc_io::read_lattice(lattice)?;
            let body_doc = lc_io::read_body(body)?;
            let samples = defaults.get(mc.samples, "samples", 100_000);
            let seed = defaults.get(mc.seed, "seed", 1);
            let est = estimate_uncovered_density(&lat, &body_doc, samples, seed)?;
            params.insert("lattice".into(), json!(lattice.display().to_string()));
            params.insert("body".into(), json!(body.display().to_string()));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(seed));
            Ok((
                serde_json::to_value(&est).expect("serializable"),
                seed,
                params,
                0,
            ))
        }

        Command::Lift {
            base,
            robust,
            body,
            delta,
            tau,
            max_tries,
            paper_constants,
            per_event,
            mc,
        } => {
            let (base_lat, _) = lc_io::read_lattice(base)?;
            let body_doc = lc_io::read_body(body)?;
            let robust_cov = RobustCovering::from_name(robust)?;
            let samples = defaults.get(mc.samples, "samples", 200_000);
            let seed = defaults.get(mc.seed, "seed", 1);
            let tau = defaults.get(*tau, "tau", 3.0);
            let opts = LiftOptions {
                samples,
                tau,
                paper_constants: *paper_constants,
                per_event: *per_event,
            };
            let outcome = lift_until_good(
                &base_lat, &robust_cov, &body_doc, *delta, seed, *max_tries, &opts,
            )?;
            params.insert("base".into(), json!(base.display().to_string()));
            params.insert("robust".into(), json!(robust));
            params.insert("delta".into(), json!(delta));
            params.insert("tau".into(), json!(tau));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(seed));
            params.insert("max_tries".into(), json!(max_tries));
            let ys: Vec<Vec<f64>> = outcome
                .lift
                .ys
                .iter()
                .map(|y| y.iter().copied().collect())
                .collect();
            let payload = json!({
                "tries": outcome.tries,
                "threshold": outcome.threshold,
                "estimate": outcome.estimate,
                "lifted_lattice": LatticeDoc::from_lattice(&outcome.lift.lifted, None),
                "translations": ys,
            });
            Ok((payload, seed, params, 0))
        }

        Command::Pipeline {
            n,
            d,
            k,
            robust,
            initial_lattice,
            initial_body,
            initial_radius,
            delta0,
            tau,
            max_tries,
            paper_constants,
            per_event,
            stages_csv,
            mc,
        } => {
            let samples = defaults.get(mc.samples, "samples", 100_000);
            let seed = defaults.get(mc.seed, "seed", 1);
            let tau = defaults.get(*tau, "tau", 3.0);
            let initial = resolve_initial(
                *n,
                *d,
                *k,
                initial_lattice.as_deref(),
                initial_body.as_deref(),
                *initial_radius,
            )?;
            let cfg = PipelineConfig {
                n: *n,
                d: *d,
                k: *k,
                robust_name: robust.clone(),
                initial,
                initial_delta: *delta0,
                samples,
                seed,
                max_tries: *max_tries,
                opts: LiftOptions {
                    samples,
                    tau,
                    paper_constants: *paper_constants,
                    per_event: *per_event,
                },
            };
            let result = pipeline(&cfg)?;
            if let Some(csv) = stages_csv {
                let mut text = String::from("stage,dim,delta,ci,resamples\n");
                for (i, s) in result.stages.iter().enumerate() {
                    text.push_str(&format!(
                        "{},{},{},{},{}\n",
                        i,
                        s.dim,
                        s.delta_estimate.estimate,
                        s.delta_estimate.ci95_halfwidth,
                        s.resamples
                    ));
                }
                std::fs::write(csv, text)
                    .map_err(|e| LcError::Io(format!("{}: {e}", csv.display())))?;
                outputs.push(csv.display().to_string());
            }
            params.insert("n".into(), json!(n));
            params.insert("d".into(), json!(d));
            params.insert("k".into(), json!(k));
            params.insert("robust".into(), json!(robust));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(seed));
            params.insert("tau".into(), json!(tau));
            Ok((
                serde_json::to_value(&result).expect("serializable"),
                seed,
                params,
                0,
            ))
        }

        Command::CheckLemmas { trials, mc } => {
            let samples = defaults.get(mc.samples, "samples", 10_000);
            let seed = defaults.get(mc.seed, "seed", 1);
            let checks = lemmas::run_all(*trials, samples, seed)?;
            let all_passed = checks.iter().all(|c| c.passed);
            for c in &checks {
                eprintln!(
                    "{}: {} ({})",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    c.detail
                );
            }
            params.insert("trials".into(), json!(trials));
            params.insert("samples".into(), json!(samples));
            params.insert("seed".into(), json!(seed));
            let payload = json!({
                "all_passed": all_passed,
                "checks": checks,
            });
            Ok((payload, seed, params, if all_passed { 0 } else { 1 }))
        }
    }
}

fn resolve_initial(
    n: usize,
    d: usize,
    k: usize,
    lattice: Option<&Path>,
    body: Option<&Path>,
    radius: Option<f64>,
) -> lattice_covering::Result<Option<(Lattice, ProductBody)>> {
    if n < k * d + 1 {
        return Err(LcError::infeasible(format!(
            "need n >= k*d + 1 (n = {n}, k*d = {})",
            k * d
        )));
    }
    let m = n - k * d;
    match (lattice, body, radius) {
        (None, None, None) => Ok(None),
        (Some(lp), Some(bp), None) => {
            let (lat, _) = lc_io::read_lattice(lp)?;
            Ok(Some((lat, lc_io::read_body(bp)?)))
        }
        (Some(lp), None, Some(r)) => {
            let (lat, _) = lc_io::read_lattice(lp)?;
            Ok(Some((lat, ProductBody::single_ball(m, r))))
        }
        (None, None, Some(r)) => {
            let lat = match m {
                2 => lattice_covering::lattice::hex_lattice(),
                _ => Lattice::integer(m),
            };
            Ok(Some((lat, ProductBody::single_ball(m, r))))
        }
        _ => Err(LcError::invalid(
            "give --initial-lattice with --initial-body or --initial-radius, \
             or --initial-radius alone for the default lattice",
        )),
    }
}

fn parse_density(d: usize, spec: &str) -> lattice_covering::Result<f64> {
    if let Ok(v) = spec.parse::<f64>() {
        return Ok(v);
    }
    let cov = RobustCovering::from_name(spec)?;
    if cov.dim() != d {
        return Err(LcError::infeasible(format!(
            "density source {spec} lives in dimension {}, expected {d}",
            cov.dim()
        )));
    }
    Ok(cov.density())
}

fn constants_payload(
    d: usize,
    big_d: Option<&str>,
    n: Option<usize>,
    k: Option<usize>,
) -> lattice_covering::Result<Value> {
    let mut entries: Vec<Value> = Vec::new();
    let push = |entries: &mut Vec<Value>, name: &str, value: Value, provenance: &str| {
        entries.push(json!({
            "name": name,
            "value": value,
            "provenance": provenance,
        }));
    };

    let density = match big_d {
        Some(spec) => parse_density(d, spec)?,
        None => consts::ball_volume_sqrt_d(d),
    };
    let report = consts::exponents(d, density)?;
    push(&mut entries, "alpha", json!(report.alpha), "0.5 * log2(2 pi e)");
    push(
        &mut entries,
        "beta",
        json!(report.beta),
        "0.5 * log2(8 pi e / (3 sqrt 3))",
    );
    push(
        &mut entries,
        "gamma",
        json!(report.gamma),
        "alpha - (1/d) log2(nu_d / D)",
    );
    push(&mut entries, "d", json!(d), "input");
    push(
        &mut entries,
        "D",
        json!(density),
        "robust covering density in use",
    );
    push(
        &mut entries,
        "nu_d",
        json!(consts::ball_volume_sqrt_d(d)),
        "(pi d)^(d/2) / Gamma(d/2 + 1)",
    );
    let lift = consts::lift_constants(d)?;
    push(
        &mut entries,
        "c_points",
        json!(lift.c_points),
        "(4^d d^(d/2) + 1)^(d 2^d)",
    );
    push(
        &mut entries,
        "c_lift",
        json!(lift.c_lift),
        "((c_points + 1) d)^(2^d - 1)",
    );
    push(
        &mut entries,
        "log2_c_points",
        json!(lift.log2_c_points),
        "log2 of c_points",
    );
    push(
        &mut entries,
        "log2_c_lift",
        json!(lift.log2_c_lift),
        "log2 of c_lift",
    );

    if let Some(n) = n {
        let bounds = consts::robust_lower_bounds(n)?;
        push(
            &mut entries,
            "nu_over_2n",
            json!(bounds.nu_over_2n),
            "nu_n / 2^n: floor on robust covering density",
        );
        push(
            &mut entries,
            "exponent_floor",
            json!(bounds.exponent_floor),
            "0.5 * log2(2 pi e) - 1",
        );
        let mode = match k {
            Some(k) => consts::ParamMode::Manual {
                k,
                eta_override: None,
            },
            None => consts::ParamMode::Asymptotic,
        };
        let p = consts::pipeline_params(n, d, density, mode)?;
        push(
            &mut entries,
            "k",
            json!(p.k),
            "(1/d) log2 ln n + 4, rounded up (or manual)",
        );
        push(
            &mut entries,
            "eta",
            json!(p.eta),
            "(m/4) ln(27/16) - 3 ln m at m = n - k d",
        );
        push(
            &mut entries,
            "eta_negative",
            json!(p.eta_negative),
            "eta <= 0 at this scale",
        );
        push(
            &mut entries,
            "delta0_bound",
            json!(p.delta0_bound),
            "m^3 (16/27)^(m/4), leading constant taken as 1",
        );
        push(
            &mut entries,
            "delta_schedule",
            json!(p.delta_schedule),
            "delta_i = c_lift * delta_(i-1)^(2^d)",
        );
        push(
            &mut entries,
            "density_bound",
            json!(p.density_bound),
            "2 e eta (D/nu_d)^k (2 pi e)^(k d / 2)",
        );
    }

    Ok(Value::Array(entries))
}
