//! `fht`: evaluate finite Hilbert transforms, solve the airfoil equation,
//! compute norms and run the verification suite.

mod config;
mod spec;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fht_core::airfoil::solve_airfoil;
use fht_core::function::hilbert;
use fht_core::measure::{optdomain_norm, Search, SearchOptions};
use fht_core::ri::{norm_fn, NormValue};
use fht_core::transform::{fht_point, spectral_transform, PvConfig, PvMethod};
use fht_core::verify::{run_suite, Suite, VerifyConfig};
use fht_core::{Error, Grid, GridFunction, SpaceSpec};

use config::ConfigFile;

#[derive(Parser, Debug)]
#[command(name = "fht", version, about = "Finite Hilbert transform on (-1, 1)")]
struct Cli {
    /// key=value file mirroring the flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Chebyshev–Gauss nodes (≥ 16, default 512).
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Cells of the modulation partition (≥ 1, default 12).
    #[arg(long, global = true)]
    cells: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate T(f) at points, or at the grid nodes when no points are given.
    Eval(EvalArgs),
    /// Solve T(f) = g in the given space.
    Solve(SolveArgs),
    /// Norm of f, of T(f), or an optimal-domain estimate.
    Norm(NormArgs),
    /// Run the verification suite; exit 5 when a check fails.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Function spec: poly:a0,a1,..  indicator:a,b[;a,b..]  w  invw  sigma  g0  0  file:PATH
    #[arg(long = "f")]
    function: String,
    /// Comma-separated evaluation points; repeatable.
    #[arg(long = "x", allow_hyphen_values = true)]
    points: Vec<String>,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long = "g")]
    rhs: String,
    /// Lp:p, Lorentz:p,q or WeakLp:p.
    #[arg(long)]
    space: Option<String>,
    /// Largest |∫ g/w dμ| accepted in the low-index regime.
    #[arg(long, default_value_t = 1e-6)]
    range_tol: f64,
}

#[derive(Args, Debug)]
struct NormArgs {
    #[arg(long = "f")]
    function: String,
    #[arg(long)]
    space: Option<String>,
    #[arg(long, value_enum, default_value = "plain")]
    of: NormOf,
    #[arg(long, value_enum, default_value = "random-restart")]
    search: SearchArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Option<SuiteArg>,
    /// Tolerance override CHECK=VAL, keyed by check id or criterion number; repeatable.
    #[arg(long = "tol")]
    tolerances: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, ValueEnum)]
enum Method {
    Auto,
    Subtract,
    Cosine,
    Spectral,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum NormOf {
    /// ‖f‖_X.
    Plain,
    /// ‖T(f)‖_X.
    Transform,
    /// Lower estimate of ‖f‖_[T,X].
    Optdomain,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SearchArg {
    Exhaustive,
    GreedyFlip,
    RandomRestart,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SuiteArg {
    Identities,
    Measure,
    Norms,
    All,
}

/// Process exit codes.
mod exit {
    pub const USAGE: u8 = 2;
    pub const NOT_IN_RANGE: u8 = 3;
    pub const CRITICAL_INDEX: u8 = 4;
    pub const CHECKS_FAILED: u8 = 5;
}

struct Settings {
    nodes: usize,
    cells: usize,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
    file: ConfigFile,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code_of(&e))
        }
    }
}

fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        let kind = c
            .downcast_ref::<io::Error>()
            .map(io::Error::kind)
            .or_else(|| c.downcast_ref::<serde_json::Error>().and_then(serde_json::Error::io_error_kind));
        kind == Some(io::ErrorKind::BrokenPipe)
    })
}

fn code_of(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NotInRange { .. }) => exit::NOT_IN_RANGE,
        Some(Error::CriticalIndex { .. }) => exit::CRITICAL_INDEX,
        Some(Error::Parse { .. } | Error::Structural(_) | Error::Domain { .. }) => exit::USAGE,
        _ if e.downcast_ref::<config::UsageError>().is_some() => exit::USAGE,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let nodes = file.pick(cli.nodes, "nodes")?.unwrap_or(512);
    let cells = file.pick(cli.cells, "cells")?.unwrap_or(12);
    let seed = file.pick(cli.seed, "seed")?.unwrap_or(0);
    if nodes < 16 {
        return Err(config::usage(format!("--nodes must be at least 16, got {nodes}")));
    }
    if cells < 1 {
        return Err(config::usage("--cells must be at least 1"));
    }
    let out = cli.out.clone().or_else(|| file.get("out").map(PathBuf::from));
    let format = match cli.format {
        Some(f) => f,
        None => match file.get("format") {
            Some("csv") => Format::Csv,
            Some("json") | None => Format::Json,
            Some(other) => return Err(config::usage(format!("format must be json or csv, got {other:?}"))),
        },
    };
    let settings = Settings {
        nodes,
        cells,
        seed,
        out,
        format,
        file,
    };
    match cli.command {
        Command::Eval(a) => cmd_eval(&a, &settings),
        Command::Solve(a) => cmd_solve(&a, &settings),
        Command::Norm(a) => cmd_norm(&a, &settings),
        Command::Verify(a) => cmd_verify(&a, &settings),
    }
}

fn space(arg: &Option<String>, s: &Settings) -> anyhow::Result<SpaceSpec> {
    let text = arg
        .as_deref()
        .or_else(|| s.file.get("space"))
        .ok_or_else(|| config::usage("--space is required"))?;
    Ok(text.parse::<SpaceSpec>()?)
}

fn sink(s: &Settings) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &s.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json(s: &Settings, v: &serde_json::Value) -> anyhow::Result<()> {
    let mut w = sink(s)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Finite numbers as JSON numbers, the rest as strings ("inf", "NaN").
fn num(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

fn cmd_eval(a: &EvalArgs, s: &Settings) -> anyhow::Result<u8> {
    let f = spec::parse_function(&a.function)?;
    let mut points = Vec::new();
    for p in &a.points {
        points.extend(spec::parse_points(p)?);
    }
    if points.is_empty() {
        points = Grid::chebyshev_gauss(s.nodes)?.nodes().to_vec();
    }
    let cfg = PvConfig {
        method: match a.method {
            Method::Auto => PvMethod::ClosedFormAuto,
            Method::Subtract => PvMethod::SubtractSingularity,
            Method::Cosine => PvMethod::CosineSubstitution,
            Method::Spectral => PvMethod::ClosedFormAuto,
        },
        nodes: s.nodes,
        ..Default::default()
    };
    let rows: Vec<(f64, Result<fht_core::C64, Error>)> = if a.method == Method::Spectral {
        let grid = Arc::new(Grid::chebyshev_gauss(s.nodes)?);
        let tr = spectral_transform(&GridFunction::sample(grid, f.as_ref())?, None)?;
        points
            .iter()
            .map(|&x| (x, if x.abs() < 1.0 { Ok(tr.eval(x)) } else { Err(Error::Domain { x }) }))
            .collect()
    } else {
        points.iter().map(|&x| (x, fht_point(&f, x, &cfg))).collect()
    };
    match s.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(x, r)| match r {
                    Ok(v) => json!({"x": x, "re": num(v.re), "im": num(v.im)}),
                    Err(e) => json!({"x": x, "error": e.to_string()}),
                })
                .collect();
            write_json(s, &json!({"function": a.function, "rows": rows}))?;
        }
        Format::Csv => {
            let mut w = sink(s)?;
            writeln!(w, "x,re,im,error")?;
            for (x, r) in &rows {
                match r {
                    Ok(v) => writeln!(w, "{x:e},{:e},{:e},", v.re, v.im)?,
                    Err(e) => writeln!(w, "{x:e},,,\"{}\"", e.to_string().replace('"', "'"))?,
                }
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_solve(a: &SolveArgs, s: &Settings) -> anyhow::Result<u8> {
    let g = spec::parse_function(&a.rhs)?;
    let x = space(&a.space, s)?;
    let sol = solve_airfoil(&g, &x, a.range_tol)?;
    let grid = Grid::chebyshev_gauss(s.nodes)?;
    let samples: Vec<(f64, fht_core::C64)> = grid
        .nodes()
        .iter()
        .map(|&t| Ok((t, sol.particular.eval(t)?)))
        .collect::<fht_core::Result<_>>()?;
    let note = if sol.kernel_coefficient_free {
        "f + c/w solves the equation for every constant c"
    } else {
        "unique solution"
    };
    match s.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = samples
                .iter()
                .map(|(t, v)| json!({"x": t, "re": num(v.re), "im": num(v.im)}))
                .collect();
            write_json(
                s,
                &json!({
                    "space": x.to_string(),
                    "regime": format!("{:?}", sol.regime),
                    "kernel_coefficient_free": sol.kernel_coefficient_free,
                    "note": note,
                    "range_defect": sol.range_defect.map(num),
                    "residual": num(sol.residual),
                    "rows": rows,
                }),
            )?;
        }
        Format::Csv => {
            let mut w = sink(s)?;
            writeln!(w, "# space={x} regime={:?} residual={:e} note={note}", sol.regime, sol.residual)?;
            if let Some(d) = sol.range_defect {
                writeln!(w, "# range_defect={d:e}")?;
            }
            writeln!(w, "x,re,im")?;
            for (t, v) in &samples {
                writeln!(w, "{t:e},{:e},{:e}", v.re, v.im)?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_norm(a: &NormArgs, s: &Settings) -> anyhow::Result<u8> {
    let f = spec::parse_function(&a.function)?;
    let x = space(&a.space, s)?;
    let (value, resolved, extra) = match a.of {
        NormOf::Plain => {
            let NormValue { value, resolved } = norm_fn(&f, &x)?;
            (value, resolved, json!(null))
        }
        NormOf::Transform => {
            let NormValue { value, resolved } = norm_fn(&hilbert(&f), &x)?;
            (value, resolved, json!(null))
        }
        NormOf::Optdomain => {
            let opts = SearchOptions {
                cells: s.cells,
                search: match a.search {
                    SearchArg::Exhaustive => Search::Exhaustive,
                    SearchArg::GreedyFlip => Search::GreedyFlip,
                    SearchArg::RandomRestart => Search::RandomRestart,
                },
                seed: s.seed,
                ..Default::default()
            };
            let grid = Arc::new(Grid::chebyshev_gauss(s.nodes)?);
            let est = optdomain_norm(&f, &x, &opts, &grid)?;
            let witness: Vec<f64> = est.witness.coefficients.iter().map(|c| c.re).collect();
            (est.value, true, json!({"cells": est.cells, "search": est.search, "witness": witness}))
        }
    };
    let label = match a.of {
        NormOf::Plain => "plain",
        NormOf::Transform => "transform",
        NormOf::Optdomain => "optdomain",
    };
    match s.format {
        Format::Json => write_json(
            s,
            &json!({
                "function": a.function,
                "space": x.to_string(),
                "of": label,
                "value": num(value),
                "resolved": resolved,
                "search": extra,
            }),
        )?,
        Format::Csv => {
            let mut w = sink(s)?;
            writeln!(w, "function,space,of,value,resolved")?;
            writeln!(w, "\"{}\",{x},{label},{value:e},{resolved}", a.function)?;
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, s: &Settings) -> anyhow::Result<u8> {
    let suite = match a.suite {
        Some(SuiteArg::Identities) => Suite::Identities,
        Some(SuiteArg::Measure) => Suite::Measure,
        Some(SuiteArg::Norms) => Suite::Norms,
        Some(SuiteArg::All) => Suite::All,
        None => match s.file.get("suite") {
            Some(t) => t.parse()?,
            None => Suite::All,
        },
    };
    let mut tolerances = BTreeMap::new();
    let from_file = s.file.get_all("tol");
    // file entries first so that flags override them
    for t in from_file.iter().map(String::as_str).chain(a.tolerances.iter().map(String::as_str)) {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| config::usage(format!("--tol expects CHECK=VAL, got {t:?}")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| config::usage(format!("tolerance {v:?} is not a number")))?;
        if !(v >= 0.0) {
            bail!(config::usage(format!("tolerance for {k} must be non-negative")));
        }
        tolerances.insert(k.trim().to_string(), v);
    }
    let cfg = VerifyConfig {
        nodes: s.nodes,
        cells: s.cells,
        seed: s.seed,
        tolerances,
    };
    let report = run_suite(suite, &cfg);
    {
        let w = sink(s)?;
        match s.format {
            Format::Json => report.write_json(w)?,
            Format::Csv => report.write_csv(w)?,
        }
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!(
            "FAIL {}: computed {:e}, expected {:e} ± {:e}{}",
            c.check_id,
            c.computed,
            c.expected,
            c.tolerance,
            c.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        );
    }
    Ok(if report.all_pass { 0 } else { exit::CHECKS_FAILED })
}
