//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 on success, 1 on domain errors (non-admissible seeds,
//! out-of-hypothesis parameters, singularities), 2 on usage errors.

use crate::config::load_config;
use crate::emit::{emit_csv, emit_svg, EmitError, PlotOptions};
use crate::sweep::{sweep, SweepConfig, DEFAULT_ITERS, DEFAULT_KEEP_FROM, DEFAULT_STEP};
use clap::{Parser, Subcommand};
use ratrec::admissibility::{check_admissible, AdmissibilityVerdict, CheckOpts};
use ratrec::classifier::{
    classify_report_with_tol, limit_periodic_point, periodic_stability,
    periodic_stability_probe, zero_stability, Behavior,
};
use ratrec::orbit::iterate;
use ratrec::scalar::Mode;
use ratrec::{classifier, Error, Exact, Float, Params, Scalar, SeedPair};
use serde_json::json;
use std::collections::HashMap;
use std::ffi::OsString;
use std::path::PathBuf;

const SYNOPSIS: &str = "\
usage: ratrec [--mode exact|float] [--tol T] [--params a,b] [--seed x,y] [--config FILE] <command>
  solve       --steps N [--format csv|json] [--out FILE]
  classify    [--out FILE]
  limit       [--out FILE]
  admissible  [--n-cap N] [--out FILE]
  stability   [--point p,q] [--deltas d1,d2,..] [--steps N] [--out FILE]
  bifurcate   --b B --a-min LO --a-max HI [--step S] [--iters N] [--keep-from K]
              [--out FILE] [--svg FILE] [--y-clip Y]";

#[derive(Parser, Debug)]
#[command(name = "ratrec", version, disable_help_subcommand = true)]
#[command(about = "Orbits, classification, certified limits, stability and bifurcation sweeps \
                   for the recurrence x[n+1] = x[n-1]/(a + b x[n] x[n-1])")]
struct Cli {
    /// Arithmetic mode: exact rationals or binary64 floats
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Certificate tolerance (limit, classify)
    #[arg(long, global = true, allow_hyphen_values = true)]
    tol: Option<String>,
    /// Parameters as "a,b"
    #[arg(long, global = true, allow_hyphen_values = true)]
    params: Option<String>,
    /// Initial pair as "x[-1],x[0]"
    #[arg(long, global = true, allow_hyphen_values = true)]
    seed: Option<String>,
    /// key=value file supplying defaults for any flag (flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute an orbit and emit CSV ("n,x") or a JSON document
    Solve {
        #[arg(long)]
        steps: Option<u32>,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full classification report as JSON
    Classify {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified limiting 2-periodic point (p, q, error bound) as JSON
    Limit {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Admissibility verdict as JSON; exits 1 when non-admissible
    Admissible {
        #[arg(long = "n-cap")]
        n_cap: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zero-equilibrium verdict, and for --point p,q the periodic verdict
    /// plus an empirical perturbation probe (float mode)
    Stability {
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        deltas: Option<String>,
        #[arg(long)]
        steps: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a over a fixed-step grid, orbit per grid point, CSV out
    /// (optionally an SVG scatter). Always runs in float mode.
    Bifurcate {
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long = "a-min", allow_hyphen_values = true)]
        a_min: Option<String>,
        #[arg(long = "a-max", allow_hyphen_values = true)]
        a_max: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        step: Option<String>,
        #[arg(long)]
        iters: Option<u32>,
        #[arg(long = "keep-from")]
        keep_from: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long = "y-clip", allow_hyphen_values = true)]
        y_clip: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
    Io(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn domain(e: Error) -> Failure {
    Failure::Domain(e.to_string())
}

/// Run the CLI against an argument vector and return the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            if code == 2 {
                eprintln!("{SYNOPSIS}");
            }
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("{SYNOPSIS}");
            2
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

/// Layered option lookup: flag, then config file, then default.
struct Opts {
    file: HashMap<String, String>,
}

impl Opts {
    fn str_opt(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.file.get(key).cloned())
    }

    fn u32_opt(&self, flag: Option<u32>, key: &str) -> Result<Option<u32>, Failure> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Failure::Usage(format!("{key} must be an integer, got {v}"))),
            None => Ok(None),
        }
    }

    fn path_opt(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| self.file.get(key).map(PathBuf::from))
    }
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    let opts = Opts {
        file: match &cli.config {
            Some(path) => load_config(path).map_err(Failure::Usage)?,
            None => HashMap::new(),
        },
    };
    let mode = match opts.str_opt(cli.mode.clone(), "mode").as_deref() {
        None | Some("float") => Mode::Float,
        Some("exact") => Mode::Exact,
        Some(other) => {
            return Err(Failure::Usage(format!(
                "mode must be exact or float, got {other}"
            )))
        }
    };
    let params = opts.str_opt(cli.params.clone(), "params");
    let seed = opts.str_opt(cli.seed.clone(), "seed");
    let tol = opts.str_opt(cli.tol.clone(), "tol");

    match cli.command {
        Command::Solve { steps, format, out } => {
            let steps = opts.u32_opt(steps, "steps")?.unwrap_or(100);
            let format = opts.str_opt(format, "format").unwrap_or_else(|| "csv".into());
            let out = opts.path_opt(out, "out");
            match mode {
                Mode::Float => cmd_solve::<Float>(&params, &seed, steps, &format, out),
                Mode::Exact => cmd_solve::<Exact>(&params, &seed, steps, &format, out),
            }
        }
        Command::Classify { out } => {
            let out = opts.path_opt(out, "out");
            match mode {
                Mode::Float => cmd_classify::<Float>(&params, &seed, &tol, out),
                Mode::Exact => cmd_classify::<Exact>(&params, &seed, &tol, out),
            }
        }
        Command::Limit { out } => {
            let out = opts.path_opt(out, "out");
            match mode {
                Mode::Float => cmd_limit::<Float>(&params, &seed, &tol, out),
                Mode::Exact => cmd_limit::<Exact>(&params, &seed, &tol, out),
            }
        }
        Command::Admissible { n_cap, out } => {
            let n_cap = opts.u32_opt(n_cap, "n-cap")?;
            let out = opts.path_opt(out, "out");
            match mode {
                Mode::Float => cmd_admissible::<Float>(&params, &seed, n_cap, out),
                Mode::Exact => cmd_admissible::<Exact>(&params, &seed, n_cap, out),
            }
        }
        Command::Stability {
            point,
            deltas,
            steps,
            out,
        } => {
            let point = opts.str_opt(point, "point");
            let deltas = opts.str_opt(deltas, "deltas");
            let steps = opts.u32_opt(steps, "steps")?.unwrap_or(10_000);
            let out = opts.path_opt(out, "out");
            match mode {
                Mode::Float => cmd_stability::<Float>(&params, &point, &deltas, steps, out),
                Mode::Exact => cmd_stability::<Exact>(&params, &point, &deltas, steps, out),
            }
        }
        Command::Bifurcate {
            b,
            a_min,
            a_max,
            step,
            iters,
            keep_from,
            out,
            svg,
            y_clip,
        } => {
            let cfg = SweepConfig {
                a_min: req_f64(opts.str_opt(a_min, "a-min"), "a-min")?,
                a_max: req_f64(opts.str_opt(a_max, "a-max"), "a-max")?,
                step: opt_f64(opts.str_opt(step, "step"), "step")?.unwrap_or(DEFAULT_STEP),
                b: req_f64(opts.str_opt(b, "b"), "b")?,
                x_prev: 0.0,
                x_zero: 0.0,
                iters: opts.u32_opt(iters, "iters")?.unwrap_or(DEFAULT_ITERS),
                keep_from: opts
                    .u32_opt(keep_from, "keep-from")?
                    .unwrap_or(DEFAULT_KEEP_FROM),
            };
            let seed_str = seed.ok_or_else(|| Failure::Usage("--seed x,y is required".into()))?;
            let (x_prev, x_zero) = parse_pair::<Float>(&seed_str)?;
            let cfg = SweepConfig {
                x_prev,
                x_zero,
                ..cfg
            };
            let out = opts.path_opt(out, "out");
            let svg = opts.path_opt(svg, "svg");
            let y_clip = opt_f64(opts.str_opt(y_clip, "y-clip"), "y-clip")?;
            cmd_bifurcate(cfg, out, svg, y_clip)
        }
    }
}

fn req_f64(v: Option<String>, key: &str) -> Result<f64, Failure> {
    opt_f64(v, key)?.ok_or_else(|| Failure::Usage(format!("--{key} is required")))
}

fn opt_f64(v: Option<String>, key: &str) -> Result<Option<f64>, Failure> {
    match v {
        None => Ok(None),
        Some(s) => Float::parse_literal(&s)
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{key} must be a number, got {s}"))),
    }
}

fn parse_scalar<S: Scalar>(s: &str, what: &str) -> Result<S, Failure> {
    S::parse_literal(s).map_err(|_| Failure::Usage(format!("cannot parse {what}: {s}")))
}

fn parse_pair<S: Scalar>(s: &str) -> Result<(S, S), Failure> {
    let (u, v) = s
        .split_once(',')
        .ok_or_else(|| Failure::Usage(format!("expected two comma-separated values, got {s}")))?;
    Ok((parse_scalar(u, "value")?, parse_scalar(v, "value")?))
}

fn need_params<S: Scalar>(params: &Option<String>) -> Result<Params<S>, Failure> {
    let s = params
        .as_ref()
        .ok_or_else(|| Failure::Usage("--params a,b is required".into()))?;
    let (a, b) = parse_pair::<S>(s)?;
    Params::new(a, b).map_err(domain)
}

fn need_seed<S: Scalar>(seed: &Option<String>) -> Result<SeedPair<S>, Failure> {
    let s = seed
        .as_ref()
        .ok_or_else(|| Failure::Usage("--seed x,y is required".into()))?;
    let (x, y) = parse_pair::<S>(s)?;
    SeedPair::new(x, y).map_err(domain)
}

fn write_out(out: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json_out(out: Option<PathBuf>, value: &serde_json::Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    write_out(out, &text)
}

fn cmd_solve<S: Scalar>(
    params: &Option<String>,
    seed: &Option<String>,
    steps: u32,
    format: &str,
    out: Option<PathBuf>,
) -> Result<i32, Failure> {
    let params = need_params::<S>(params)?;
    let seed = need_seed::<S>(seed)?;
    let orbit = iterate(&params, &seed, steps);
    match format {
        "csv" => write_out(out, &orbit.to_csv())?,
        "json" => json_out(out, &orbit.json_value())?,
        other => {
            return Err(Failure::Usage(format!(
                "format must be csv or json, got {other}"
            )))
        }
    }
    Ok(0)
}

fn cmd_classify<S: Scalar>(
    params: &Option<String>,
    seed: &Option<String>,
    tol: &Option<String>,
    out: Option<PathBuf>,
) -> Result<i32, Failure> {
    let params = need_params::<S>(params)?;
    let seed = need_seed::<S>(seed)?;
    let tol = match tol {
        Some(s) => parse_scalar::<S>(s, "tol")?,
        None => S::from_ratio(1, 1_000_000_000),
    };
    let report = classify_report_with_tol(&params, &seed, &tol);
    let non_admissible = matches!(
        classifier::classify(&params, &seed),
        Behavior::NotAdmissible { .. }
    );
    json_out(out, &report)?;
    Ok(if non_admissible { 1 } else { 0 })
}

fn cmd_limit<S: Scalar>(
    params: &Option<String>,
    seed: &Option<String>,
    tol: &Option<String>,
    out: Option<PathBuf>,
) -> Result<i32, Failure> {
    let params = need_params::<S>(params)?;
    let seed = need_seed::<S>(seed)?;
    let tol = match tol {
        Some(s) => parse_scalar::<S>(s, "tol")?,
        None => S::from_ratio(1, 1_000_000_000),
    };
    let pp = limit_periodic_point(&params, &seed, &tol).map_err(domain)?;
    let target = if params.b().is_zero() {
        serde_json::Value::Null
    } else {
        ((S::one() - params.a().clone()) / params.b().clone()).json_value()
    };
    json_out(
        out,
        &json!({
            "p": pp.p.json_value(),
            "q": pp.q.json_value(),
            "period": pp.period,
            "error_bound": pp.error_bound.json_value(),
            "pq_product": (pp.p.clone() * pp.q.clone()).json_value(),
            "target_pq": target,
        }),
    )?;
    Ok(0)
}

fn cmd_admissible<S: Scalar>(
    params: &Option<String>,
    seed: &Option<String>,
    n_cap: Option<u32>,
    out: Option<PathBuf>,
) -> Result<i32, Failure> {
    let params = need_params::<S>(params)?;
    let seed = need_seed::<S>(seed)?;
    let mut opts: CheckOpts<S> = CheckOpts::default();
    if let Some(cap) = n_cap {
        opts.n_cap = cap;
    }
    let verdict = check_admissible(&params, &seed, &opts);
    json_out(out, &verdict.json_value())?;
    Ok(match verdict {
        AdmissibilityVerdict::NonAdmissible { .. } => 1,
        _ => 0,
    })
}

fn cmd_stability<S: Scalar + Send + Sync>(
    params: &Option<String>,
    point: &Option<String>,
    deltas: &Option<String>,
    steps: u32,
    out: Option<PathBuf>,
) -> Result<i32, Failure> {
    let params = need_params::<S>(params)?;
    let zero = zero_stability(&params);
    let mut report = json!({
        "zero": zero.json_value(),
        "periodic": serde_json::Value::Null,
        "probe": serde_json::Value::Null,
    });
    if let Some(point) = point {
        let (p, q) = parse_pair::<S>(point)?;
        let periodic = periodic_stability(&params, &p, &q).map_err(domain)?;
        report["periodic"] = periodic.json_value();
        let delta_values: Vec<S> = match deltas {
            Some(list) => list
                .split(',')
                .map(|d| parse_scalar::<S>(d, "delta"))
                .collect::<Result<_, _>>()?,
            None => vec![
                S::from_ratio(1, 100),
                S::from_ratio(1, 1_000),
                S::from_ratio(1, 10_000),
            ],
        };
        // the probe iterates thousands of steps; it only makes sense in
        // float mode, exact mode reports the analytic verdict alone
        if !S::EXACT {
            match periodic_stability_probe(&params, &p, &q, &delta_values, steps) {
                Ok(probe) => report["probe"] = probe.json_value(),
                Err(Error::NotInRange) => {}
                Err(e) => return Err(domain(e)),
            }
        }
    }
    json_out(out, &report)?;
    Ok(0)
}

fn cmd_bifurcate(
    cfg: SweepConfig,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    y_clip: Option<f64>,
) -> Result<i32, Failure> {
    cfg.validate().map_err(Failure::Usage)?;
    let samples = sweep(&cfg);
    let mut csv = Vec::new();
    emit_csv(&samples, &mut csv)?;
    match out {
        Some(path) => std::fs::write(path, &csv)?,
        None => print!("{}", String::from_utf8_lossy(&csv)),
    }
    if let Some(path) = svg {
        let plot = PlotOptions {
            y_clip,
            ..Default::default()
        };
        match emit_svg(&samples, &plot) {
            Ok(image) => std::fs::write(path, image)?,
            Err(EmitError::NoPlottableData) => {
                return Err(Failure::Domain("no plottable data for SVG".into()))
            }
        }
    }
    Ok(0)
}
