//! popcheck CLI: evaluate inequality residuals, run property sweeps, search
//! for counterexamples, classify convexity, and compute means directly.
//!
//! Exit codes: 0 = inequality holds / no violation, 1 = usage or domain
//! error, 2 = certified violation.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use popcheck::convexity::{
    h_convexity_defect, mn_convexity_check, ConvexityVerdict, FunctionKind, FunctionSpec, HSpec,
};
use popcheck::error::{Error, Result};
use popcheck::inequalities::{HJensenMode, Inequality, ResidualReport, Verdict};
use popcheck::interval::Interval;
use popcheck::means::{self, Generator, PointSet, Triple};
use popcheck::search::{find_counterexample, CertificateStatus, SearchConfig, SearchRegion};
use popcheck::specfun;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "popcheck", version, about = "Numerical checks for Popoviciu-type inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one inequality at one point.
    Eval(CommonArgs),
    /// Evaluate an inequality at seeded-random triples and summarize.
    Sweep(CommonArgs),
    /// Grid-scan a region and refine toward a counterexample.
    Search(CommonArgs),
    /// Classify a function's generalized convexity.
    Classify(CommonArgs),
    /// Evaluate a mean directly.
    Means(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Inequality id (popoviciu, semiconvex, strong, agm-log, qa-pop,
    /// hyp-pop, vol-pop, al-gap, hpop, h-ratio-i, h-ratio-ii, h-jensen,
    /// h-pair-pop).
    #[arg(long)]
    ineq: Option<String>,
    /// Function, registry syntax name[:param...] (e.g. power:2, gamma,
    /// hyp2f1:0.5:0.5:0.75, lpvol:2). For means: logmean2 | logmean3 |
    /// identric select the named mean instead of a generator mean.
    #[arg(long = "fn")]
    function: Option<String>,
    /// Second function of an h-Jensen pair (defaults to --fn).
    #[arg(long)]
    g: Option<String>,
    /// Generator of the inner quasi-arithmetic mean.
    #[arg(long)]
    phi: Option<String>,
    /// Generator of the outer quasi-arithmetic mean.
    #[arg(long)]
    psi: Option<String>,
    /// h-function kind (identity, power:s, reciprocal, one).
    #[arg(long)]
    h: Option<String>,
    /// Strong-convexity modulus.
    #[arg(long)]
    c: Option<f64>,
    /// Evaluation point.
    #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true)]
    triple: Option<Vec<f64>>,
    /// Point set for h-jensen / means.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    points: Option<Vec<f64>>,
    /// Weights matching --points.
    #[arg(long, num_args = 1..)]
    weights: Option<Vec<f64>>,
    /// Box region: `lo hi` (cube) or `lo hi lo hi lo hi`.
    #[arg(long, num_args = 2..=6, allow_negative_numbers = true)]
    region: Option<Vec<f64>>,
    /// Grid resolution (search scan, classify, curvature bounds).
    #[arg(long)]
    grid: Option<usize>,
    /// Sample count for sweeps.
    #[arg(long)]
    samples: Option<usize>,
    /// RNG seed (fallback: POPCHECK_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Violation tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Flat key=value file supplying defaults for any long flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Uniform report shape shared by every command.
#[derive(Serialize)]
struct Report {
    schema_version: u32,
    command: String,
    inequality_id: String,
    inputs: serde_json::Value,
    lhs: f64,
    rhs: f64,
    residual: f64,
    verdict: String,
    tolerance: f64,
    hypothesis_flags: Vec<String>,
    witness: Option<Vec<f64>>,
    timing_ms: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, mut args) = match cli.command {
        Command::Eval(a) => ("eval", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Search(a) => ("search", a),
        Command::Classify(a) => ("classify", a),
        Command::Means(a) => ("means", a),
    };
    if let Err(e) = apply_config(&mut args) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let started = Instant::now();
    let outcome = match name {
        "eval" => cmd_eval(&args),
        "sweep" => cmd_sweep(&args),
        "search" => cmd_search(&args),
        "classify" => cmd_classify(&args),
        "means" => cmd_means(&args),
        _ => unreachable!(),
    };
    match outcome {
        Ok((mut report, code)) => {
            report.command = name.to_string();
            report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
            match emit(&report, &args) {
                Ok(()) => ExitCode::from(code),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Fill unset flags from a key=value config file (flags win over the file).
fn apply_config(args: &mut CommonArgs) -> Result<()> {
    let Some(path) = &args.config else { return Ok(()) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("config line {} is not key=value", lineno + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let parse_num = |v: &str, key: &str| -> Result<f64> {
        v.parse()
            .map_err(|e| Error::Invalid(format!("config key '{key}': {e}")))
    };
    let parse_list = |v: &str, key: &str| -> Result<Vec<f64>> {
        v.split_whitespace()
            .map(|t| parse_num(t, key))
            .collect()
    };
    for (k, v) in &map {
        match k.as_str() {
            "ineq" => args.ineq.get_or_insert_with(|| v.clone()),
            "fn" => args.function.get_or_insert_with(|| v.clone()),
            "g" => args.g.get_or_insert_with(|| v.clone()),
            "phi" => args.phi.get_or_insert_with(|| v.clone()),
            "psi" => args.psi.get_or_insert_with(|| v.clone()),
            "h" => args.h.get_or_insert_with(|| v.clone()),
            "c" => {
                args.c.get_or_insert(parse_num(v, k)?);
                continue;
            }
            "triple" => {
                if args.triple.is_none() {
                    args.triple = Some(parse_list(v, k)?);
                }
                continue;
            }
            "points" => {
                if args.points.is_none() {
                    args.points = Some(parse_list(v, k)?);
                }
                continue;
            }
            "weights" => {
                if args.weights.is_none() {
                    args.weights = Some(parse_list(v, k)?);
                }
                continue;
            }
            "region" => {
                if args.region.is_none() {
                    args.region = Some(parse_list(v, k)?);
                }
                continue;
            }
            "grid" => {
                args.grid.get_or_insert(parse_num(v, k)? as usize);
                continue;
            }
            "samples" => {
                args.samples.get_or_insert(parse_num(v, k)? as usize);
                continue;
            }
            "seed" => {
                args.seed.get_or_insert(
                    v.parse()
                        .map_err(|e| Error::Invalid(format!("config key 'seed': {e}")))?,
                );
                continue;
            }
            "tol" => {
                args.tol.get_or_insert(parse_num(v, k)?);
                continue;
            }
            _ => return Err(Error::Invalid(format!("unknown config key '{k}'"))),
        };
    }
    Ok(())
}

fn resolve_seed(args: &CommonArgs) -> u64 {
    args.seed
        .or_else(|| std::env::var("POPCHECK_SEED").ok()?.parse().ok())
        .unwrap_or(0)
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::Invalid(format!("missing required flag --{flag}")))
}

fn parse_region(args: &CommonArgs) -> Result<Option<[Interval; 3]>> {
    let Some(vals) = &args.region else { return Ok(None) };
    let ivs = match vals.len() {
        2 => {
            let iv = Interval::new(vals[0], vals[1])?;
            [iv; 3]
        }
        6 => [
            Interval::new(vals[0], vals[1])?,
            Interval::new(vals[2], vals[3])?,
            Interval::new(vals[4], vals[5])?,
        ],
        n => {
            return Err(Error::Invalid(format!(
                "--region takes 2 or 6 values, got {n}"
            )))
        }
    };
    Ok(Some(ivs))
}

fn parse_triple(args: &CommonArgs) -> Result<Triple> {
    let t = need(&args.triple, "triple")?;
    Ok(Triple::new(t[0], t[1], t[2]))
}

fn parse_fn(args: &CommonArgs) -> Result<FunctionSpec> {
    FunctionSpec::parse(need(&args.function, "fn")?)
}

fn parse_gen(opt: &Option<String>) -> Result<Generator> {
    match opt {
        Some(s) => Generator::parse(s),
        None => Ok(Generator::Identity),
    }
}

/// Builds the fully-parameterized inequality named by --ineq.
fn build_inequality(args: &CommonArgs) -> Result<Inequality> {
    let id = need(&args.ineq, "ineq")?.as_str();
    Ok(match id {
        "popoviciu" => Inequality::Popoviciu { f: parse_fn(args)? },
        "semiconvex" => {
            let f = parse_fn(args)?;
            let iv = match parse_region(args)? {
                Some(ivs) => ivs[0],
                None if f.domain.is_bounded() => f.domain,
                None => {
                    return Err(Error::Invalid(
                        "semiconvex needs --region (or a bounded function domain) for curvature bounds"
                            .into(),
                    ))
                }
            };
            let bounds = specfun::curvature_bounds(&f, iv, args.grid.unwrap_or(201))?;
            Inequality::Semiconvex { f, bounds }
        }
        "strong" => Inequality::Strong {
            f: parse_fn(args)?,
            c: *need(&args.c, "c")?,
        },
        "agm-log" => Inequality::AgmLog,
        "qa-pop" => Inequality::QaPop {
            f: parse_fn(args)?,
            phi: parse_gen(&args.phi)?,
            psi: parse_gen(&args.psi)?,
        },
        "hyp-pop" => {
            let f = parse_fn(args)?;
            match f.kind {
                FunctionKind::Hyp2f1(p) | FunctionKind::ReciprocalHyp2f1(p) => {
                    Inequality::HypPop { params: p }
                }
                _ => {
                    return Err(Error::Invalid(
                        "hyp-pop needs --fn hyp2f1:a:b:c".into(),
                    ))
                }
            }
        }
        "vol-pop" => {
            let f = parse_fn(args)?;
            match f.kind {
                FunctionKind::LpVolume(alpha) => Inequality::VolPop { alpha },
                _ => return Err(Error::Invalid("vol-pop needs --fn lpvol:alpha".into())),
            }
        }
        "al-gap" => Inequality::AlGap { f: parse_fn(args)? },
        "hpop" => Inequality::HPop {
            f: parse_fn(args)?,
            h: HSpec::parse(need(&args.h, "h")?)?,
        },
        "h-ratio-i" => Inequality::HRatioI {
            f: parse_fn(args)?,
            h: HSpec::parse(need(&args.h, "h")?)?,
        },
        "h-ratio-ii" => Inequality::HRatioII {
            f: parse_fn(args)?,
            h: HSpec::parse(need(&args.h, "h")?)?,
        },
        "h-jensen" => Inequality::HJensen {
            f: parse_fn(args)?,
            h: HSpec::parse(need(&args.h, "h")?)?,
            mode: HJensenMode::ConvexSuper,
        },
        "h-pair-pop" => {
            let f = parse_fn(args)?;
            let g = match &args.g {
                Some(s) => FunctionSpec::parse(s)?,
                None => f.clone(),
            };
            Inequality::HPairPop {
                f,
                g,
                h: HSpec::parse(need(&args.h, "h")?)?,
            }
        }
        other => return Err(Error::Invalid(format!("unknown inequality '{other}'"))),
    })
}

fn inputs_value(args: &CommonArgs) -> serde_json::Value {
    let mut m = serde_json::Map::new();
    let mut put_s = |k: &str, v: &Option<String>| {
        if let Some(v) = v {
            m.insert(k.into(), serde_json::Value::String(v.clone()));
        }
    };
    put_s("fn", &args.function);
    put_s("g", &args.g);
    put_s("phi", &args.phi);
    put_s("psi", &args.psi);
    put_s("h", &args.h);
    if let Some(c) = args.c {
        m.insert("c".into(), c.into());
    }
    for (k, v) in [
        ("triple", &args.triple),
        ("points", &args.points),
        ("weights", &args.weights),
        ("region", &args.region),
    ] {
        if let Some(v) = v {
            m.insert(k.into(), serde_json::json!(v));
        }
    }
    if let Some(g) = args.grid {
        m.insert("grid".into(), g.into());
    }
    if let Some(s) = args.samples {
        m.insert("samples".into(), s.into());
    }
    serde_json::Value::Object(m)
}

fn report_from_residual(args: &CommonArgs, rep: &ResidualReport) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        command: String::new(),
        inequality_id: rep.inequality_id.clone(),
        inputs: inputs_value(args),
        lhs: rep.lhs,
        rhs: rep.rhs,
        residual: rep.residual,
        verdict: match rep.verdict {
            Verdict::Holds => "holds".into(),
            Verdict::Violated => "violated".into(),
        },
        tolerance: rep.tolerance,
        hypothesis_flags: rep.hypothesis_flags.clone(),
        witness: Some(rep.point.clone()),
        timing_ms: 0.0,
    }
}

fn cmd_eval(args: &CommonArgs) -> Result<(Report, u8)> {
    let ineq = build_inequality(args)?;
    let mut rep = if matches!(ineq, Inequality::HJensen { .. }) && args.points.is_some() {
        let (f, h, mode) = match &ineq {
            Inequality::HJensen { f, h, mode } => (f, h, *mode),
            _ => unreachable!(),
        };
        let pts = PointSet::uniform(args.points.clone().unwrap())?;
        popcheck::inequalities::h_jensen(f, h, &pts, mode)?
    } else {
        ineq.eval_triple(parse_triple(args)?)?
    };
    if let Some(tol) = args.tol {
        rep.tolerance = tol;
        rep.verdict = if rep.residual >= -tol {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
    }
    let code = if rep.verdict == Verdict::Holds { 0 } else { 2 };
    Ok((report_from_residual(args, &rep), code))
}

fn sweep_box(args: &CommonArgs, ineq: &Inequality) -> Result<[Interval; 3]> {
    if let Some(ivs) = parse_region(args)? {
        return Ok(ivs);
    }
    match ineq.default_domain() {
        Some(iv) => Ok([iv; 3]),
        None => Err(Error::Invalid(
            "this inequality has an unbounded domain; supply --region".into(),
        )),
    }
}

fn cmd_sweep(args: &CommonArgs) -> Result<(Report, u8)> {
    let ineq = build_inequality(args)?;
    let ivs = sweep_box(args, &ineq)?;
    let samples = args.samples.unwrap_or(1000);
    if samples == 0 {
        return Err(Error::Invalid("--samples must be >= 1".into()));
    }
    let seed = resolve_seed(args);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |iv: Interval| iv.lo + (iv.hi - iv.lo) * rng.random::<f64>();

    let mut violations = 0usize;
    let mut skipped = 0usize;
    let mut evaluated = 0usize;
    let mut sum = 0.0;
    let mut worst: Option<ResidualReport> = None;
    for _ in 0..samples {
        let t = Triple::new(draw(ivs[0]), draw(ivs[1]), draw(ivs[2]));
        match ineq.eval_triple(t) {
            Ok(mut rep) => {
                if let Some(tol) = args.tol {
                    rep.tolerance = tol;
                    rep.verdict = if rep.residual >= -tol {
                        Verdict::Holds
                    } else {
                        Verdict::Violated
                    };
                }
                evaluated += 1;
                sum += rep.residual;
                if rep.verdict == Verdict::Violated {
                    violations += 1;
                }
                if worst.as_ref().map_or(true, |w| rep.residual < w.residual) {
                    worst = Some(rep);
                }
            }
            Err(_) => skipped += 1,
        }
    }
    let worst = worst.ok_or_else(|| {
        Error::Search(format!("all {samples} sampled points failed to evaluate"))
    })?;
    let mut report = report_from_residual(args, &worst);
    report.verdict = if violations == 0 { "holds".into() } else { "violated".into() };
    report.hypothesis_flags.push(format!("samples={samples}"));
    report.hypothesis_flags.push(format!("seed={seed}"));
    report.hypothesis_flags.push(format!("violations={violations}"));
    report.hypothesis_flags.push(format!("skipped={skipped}"));
    report
        .hypothesis_flags
        .push(format!("mean_residual={}", sum / evaluated as f64));
    Ok((report, if violations == 0 { 0 } else { 2 }))
}

fn cmd_search(args: &CommonArgs) -> Result<(Report, u8)> {
    let ineq = build_inequality(args)?;
    let ivs = parse_region(args)?
        .ok_or_else(|| Error::Invalid("search needs --region".into()))?;
    let region = SearchRegion::new(ivs, args.grid.unwrap_or(15), resolve_seed(args))?;
    let config = SearchConfig {
        tolerance: args.tol,
        ..SearchConfig::default()
    };
    let cert = find_counterexample(&ineq, &region, &config)?;
    let violated = cert.status == CertificateStatus::ViolationCertified;
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: String::new(),
        inequality_id: cert.inequality_id.clone(),
        inputs: inputs_value(args),
        lhs: cert.lhs,
        rhs: cert.rhs,
        residual: cert.residual,
        verdict: if violated {
            "violation_certified".into()
        } else {
            "no_violation_found".into()
        },
        tolerance: cert.tolerance,
        hypothesis_flags: vec![
            format!("scanned_minimum={}", cert.scanned_minimum),
            format!("skipped_nodes={}", cert.skipped_nodes),
        ],
        witness: Some(cert.point.to_vec()),
        timing_ms: 0.0,
    };
    Ok((report, if violated { 2 } else { 0 }))
}

fn cmd_classify(args: &CommonArgs) -> Result<(Report, u8)> {
    let mut f = parse_fn(args)?;
    if let Some(ivs) = parse_region(args)? {
        f = f.with_domain(ivs[0].lo, ivs[0].hi)?;
    }
    let grid = args.grid.unwrap_or(41);
    let (verdict, slack, tol, id) = if let Some(h) = &args.h {
        let h = HSpec::parse(h)?;
        let d = h_convexity_defect(&f, &h, grid)?;
        let tol = args.tol.unwrap_or(1e-9);
        let verdict = if d.min_slack >= -tol { "h-convex" } else { "not-h-convex" };
        (verdict.to_string(), d.min_slack, tol, "h-convexity")
    } else {
        let phi = parse_gen(&args.phi)?;
        let psi = parse_gen(&args.psi)?;
        let r = mn_convexity_check(&f, phi, psi, grid)?;
        let verdict = match r.verdict {
            ConvexityVerdict::Convex => "convex",
            ConvexityVerdict::Concave => "concave",
            ConvexityVerdict::Neither => "neither",
        };
        let slack = r.transform_convex_slack.max(r.transform_concave_slack);
        (verdict.to_string(), slack, r.tolerance, "mn-convexity")
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: String::new(),
        inequality_id: id.into(),
        inputs: inputs_value(args),
        lhs: slack,
        rhs: 0.0,
        residual: slack,
        verdict,
        tolerance: tol,
        hypothesis_flags: vec![format!("grid={grid}")],
        witness: None,
        timing_ms: 0.0,
    };
    Ok((report, 0))
}

fn cmd_means(args: &CommonArgs) -> Result<(Report, u8)> {
    let points = need(&args.points, "points")?.clone();
    let (value, id) = match args.function.as_deref() {
        Some("logmean2") => {
            if points.len() != 2 {
                return Err(Error::Invalid("logmean2 takes exactly 2 points".into()));
            }
            (means::log_mean2(points[0], points[1])?, "logmean2".to_string())
        }
        Some("identric") => {
            if points.len() != 2 {
                return Err(Error::Invalid("identric takes exactly 2 points".into()));
            }
            (means::identric_mean(points[0], points[1])?, "identric".to_string())
        }
        Some("logmean3") => {
            if points.len() != 3 {
                return Err(Error::Invalid("logmean3 takes exactly 3 points".into()));
            }
            (
                means::log_mean3(points[0], points[1], points[2])?,
                "logmean3".to_string(),
            )
        }
        Some(other) => {
            return Err(Error::Invalid(format!(
                "unknown mean '{other}'; use --phi for quasi-arithmetic means"
            )))
        }
        None => {
            let g = parse_gen(&args.phi)?;
            let pts = match &args.weights {
                Some(w) => PointSet::weighted(points.clone(), w.clone())?,
                None => PointSet::uniform(points.clone())?,
            };
            (means::qa_mean(g, &pts)?, format!("qa:{}", g.name()))
        }
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: String::new(),
        inequality_id: id,
        inputs: inputs_value(args),
        lhs: value,
        rhs: value,
        residual: 0.0,
        verdict: "ok".into(),
        tolerance: 0.0,
        hypothesis_flags: vec![],
        witness: Some(points),
        timing_ms: 0.0,
    };
    Ok((report, 0))
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(report)
            .map_err(|e| Error::Invalid(format!("serialization failed: {e}"))),
        Format::Csv => {
            let header = "schema_version,command,inequality_id,inputs,lhs,rhs,residual,verdict,tolerance,hypothesis_flags,witness,timing_ms";
            let witness = report
                .witness
                .as_ref()
                .map(|w| {
                    w.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(";")
                })
                .unwrap_or_default();
            let row = [
                report.schema_version.to_string(),
                report.command.clone(),
                report.inequality_id.clone(),
                csv_escape(&report.inputs.to_string()),
                report.lhs.to_string(),
                report.rhs.to_string(),
                report.residual.to_string(),
                report.verdict.clone(),
                report.tolerance.to_string(),
                csv_escape(&report.hypothesis_flags.join(";")),
                witness,
                report.timing_ms.to_string(),
            ]
            .join(",");
            Ok(format!("{header}\n{row}"))
        }
    }
}

fn emit(report: &Report, args: &CommonArgs) -> Result<()> {
    let text = render(report, args.format)?;
    println!("{text}");
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
