//! Command-line runs with reproducible JSON/CSV outputs.
//!
//! Exit codes: 0 when everything certified or a search completed, 2 when a
//! certified counterexample was found, 1 on usage or runtime errors.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::catalog::{evaluate_bound, list_bounds, root_norm, BoundCase, BoundId, ParamRule};
use crate::engine::{Engine, ExpInvPoly, PrecisionConfig};
use crate::error::{Error, Result};
use crate::means::MeanOrder;
use crate::search::{best_nk_constants, best_shift_constants, critical_shift_curve, threshold_n};
use crate::verifier::{
    chain_check, complete_monotonicity_check, expm1_limit_check, limit_check, sweep_many, sweep_many_with,
    CsvSampleWriter, Grid, SampleGrid, Spacing, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate a function (`--fn`) or the selected bounds at `--x`.
    Eval,
    /// Sweep the selected bounds over the grid.
    Verify,
    /// Structural checks: nesting chain, limits, complete monotonicity.
    Report,
    /// Best shift constants and the critical-shift curve.
    Search,
    /// Smallest `n` for which B06 fails on the grid.
    Threshold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SpacingArg {
    Log,
    Linear,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FnArg {
    Digamma,
    Polygamma,
    DigammaInverse,
    RootNorm,
    ExpInvDerivative,
}

/// Everything that determines a run; embedded verbatim in its output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[command(name = "polybound", version, about = "Certified checks of polygamma inequalities")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Comma-separated bound ids (`B05`, `b05.root-order-sandwich`, ...) or `all`.
    #[arg(long, default_value = "all")]
    pub bounds: String,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 8)]
    pub n_max: u32,
    #[arg(long, default_value_t = 7)]
    pub k_max: u32,
    /// Order of the generalized logarithmic mean (-1 is the logarithmic mean).
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub order: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub x_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub x_max: f64,
    #[arg(long, default_value_t = 10_000)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "log")]
    pub spacing: SpacingArg,
    /// Extra seeded log-uniform points added to a log or linear grid.
    #[arg(long, default_value_t = 1_000)]
    pub random_points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "POLYBOUND_DIGITS", default_value_t = 40)]
    pub digits: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long = "fn", value_enum)]
    pub function: Option<FnArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, default_value_t = 64)]
    pub n_cap: u32,
    /// Lifts the `n <= 2` restriction of B06.
    #[arg(long)]
    pub exploratory: bool,
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        let main = |spacing| SampleGrid::new(self.x_min, self.x_max, self.points, spacing);
        let parts = match self.spacing {
            SpacingArg::Random => vec![main(Spacing::Random { seed: self.seed })?],
            other => {
                let spacing = if other == SpacingArg::Log { Spacing::Log } else { Spacing::Linear };
                let mut parts = vec![main(spacing)?];
                if self.random_points > 0 {
                    parts.push(SampleGrid::new(
                        self.x_min,
                        self.x_max,
                        self.random_points,
                        Spacing::Random { seed: self.seed },
                    )?);
                }
                parts
            }
        };
        Grid::new(parts)
    }

    pub fn engine(&self) -> Result<Engine> {
        Engine::new(PrecisionConfig::with_digits(self.digits))
    }

    pub fn order(&self) -> Result<MeanOrder> {
        MeanOrder::new(self.order)
    }

    /// Cases named by `--bounds`, expanded over `n <= n_max`, `k <= k_max` and
    /// filtered by `--n`/`--k` when given.
    pub fn cases(&self) -> Result<Vec<BoundCase>> {
        let ids: Vec<BoundId> = if self.bounds.trim().eq_ignore_ascii_case("all") {
            BoundId::all().to_vec()
        } else {
            self.bounds
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_>>()?
        };
        let mut cases = Vec::new();
        for id in ids {
            let expanded = if id == BoundId::B06 && self.exploratory {
                (1..=self.n_max.max(self.n.unwrap_or(0)))
                    .map(|n| BoundCase::new(id).n(n).exploratory())
                    .collect()
            } else {
                let mut c = BoundCase::expand(id, self.n_max.max(self.n.unwrap_or(0)), self.k_max.max(self.k.unwrap_or(0)));
                if self.n.is_some() && id.info().n == ParamRule::Absent {
                    c.clear();
                }
                if self.k.is_some() && id.info().k == ParamRule::Absent {
                    c.clear();
                }
                c
            };
            cases.extend(
                expanded
                    .into_iter()
                    .filter(|c| self.n.is_none_or(|n| c.n == Some(n)))
                    .filter(|c| self.k.is_none_or(|k| c.k == Some(k))),
            );
        }
        if cases.is_empty() {
            return Err(Error::Config(format!(
                "no valid cases for --bounds {} with the given n/k",
                self.bounds
            )));
        }
        Ok(cases)
    }

    fn header(&self) -> serde_json::Value {
        json!({
            "tool": "polybound",
            "version": env!("CARGO_PKG_VERSION"),
            "config": self,
        })
    }

    fn comment_lines(&self) -> Result<Vec<String>> {
        Ok(vec![
            format!("polybound {}", env!("CARGO_PKG_VERSION")),
            format!("config {}", serde_json::to_string(self)?),
        ])
    }
}

/// Output destination: `--out` or stdout.
fn open_out<'a>(cfg: &RunConfig, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?)),
        None => Box::new(stdout),
    })
}

fn emit_json(cfg: &RunConfig, stdout: &mut dyn Write, result: serde_json::Value) -> Result<()> {
    let mut doc = cfg.header();
    doc["result"] = result;
    let mut out = open_out(cfg, stdout)?;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn summary(reports: &[VerificationReport]) -> serde_json::Value {
    let count = |f: fn(&VerificationReport) -> usize| reports.iter().map(f).sum::<usize>();
    json!({
        "cases": reports.len(),
        "samples": count(|r| r.samples),
        "certified": count(|r| r.certified_count),
        "uncertified": count(|r| r.uncertified_count),
        "violated": count(|r| r.violated_count),
        "errors": count(|r| r.errors.len()),
        "cases_with_counterexamples": reports.iter().filter(|r| r.has_counterexample()).map(|r| r.label.clone()).collect::<Vec<_>>(),
    })
}

/// Executes one run, writing results to `--out` or `stdout` and progress
/// lines to `stderr`; returns the exit code.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cfg.command {
        Command::Eval => run_eval(cfg, stdout),
        Command::Verify => run_verify(cfg, stdout),
        Command::Report => run_report(cfg, stdout),
        Command::Search => run_search(cfg, stdout),
        Command::Threshold => run_threshold(cfg, stdout, stderr),
    }
}

fn run_eval(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let engine = cfg.engine()?;
    let x = cfg.x.ok_or_else(|| Error::Config("eval needs --x".into()))?;
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| Error::Config(format!("this function needs --{flag}")));
    let text = |v: &crate::ApproxReal| v.to_string();
    let Some(function) = cfg.function else {
        let mut rows = Vec::new();
        let mut exit = EXIT_OK;
        for case in cfg.cases()? {
            let ev = evaluate_bound(&case, x, &engine)?;
            if ev.status() == crate::catalog::Status::Violated {
                exit = EXIT_COUNTEREXAMPLE;
            }
            rows.push(json!({
                "case": case.tag(),
                "x": x,
                "lhs": text(&ev.lhs),
                "rhs": text(&ev.rhs),
                "margin": text(&ev.margin),
                "status": ev.status(),
            }));
        }
        emit_json(cfg, stdout, json!(rows))?;
        return Ok(exit);
    };
    let value = match function {
        FnArg::Digamma => engine.digamma(x)?,
        FnArg::Polygamma => engine.polygamma(need(cfg.n, "n")?, x)?,
        FnArg::DigammaInverse => engine.digamma_inverse(x)?,
        FnArg::RootNorm => root_norm(&engine, need(cfg.n, "n")?, x)?,
        FnArg::ExpInvDerivative => ExpInvPoly::new(need(cfg.k, "k")?).eval_at(&engine.num(x))?,
    };
    match cfg.format {
        Format::Csv => {
            let mut out = open_out(cfg, stdout)?;
            writeln!(out, "{value}")?;
            out.flush()?;
        }
        Format::Json => emit_json(
            cfg,
            stdout,
            json!({
                "value": value.value_string(cfg.digits as usize),
                "err": value.err().to_string_radix(10, Some(4)),
                "display": text(&value),
            }),
        )?,
    }
    Ok(EXIT_OK)
}

fn exit_for(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(VerificationReport::has_counterexample) {
        EXIT_COUNTEREXAMPLE
    } else {
        EXIT_OK
    }
}

fn run_verify(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let engine = cfg.engine()?;
    let grid = cfg.grid()?;
    let cases = cfg.cases()?;
    let reports = match cfg.format {
        Format::Json => {
            let reports = sweep_many(&cases, &grid, &engine)?;
            emit_json(
                cfg,
                stdout,
                json!({ "grid": grid.describe(), "summary": summary(&reports), "reports": reports }),
            )?;
            reports
        }
        Format::Csv => {
            let out = open_out(cfg, stdout)?;
            let mut w = CsvSampleWriter::new(out, &cfg.comment_lines()?)?;
            let reports = sweep_many_with(&cases, &grid, &engine, |ev| w.write(ev))?;
            w.finish()?.flush()?;
            reports
        }
    };
    Ok(exit_for(&reports))
}

fn run_report(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let engine = cfg.engine()?;
    let grid = cfg.grid()?;
    let chain = chain_check(cfg.n_max.max(2), &grid, &engine)?;
    let cm = complete_monotonicity_check(cfg.k_max.min(8), &grid, &engine)?;
    let mut limits = Vec::new();
    for k in [16u32, 32, 64, 128] {
        let expm1 = [0.5, 1.0, 2.0]
            .iter()
            .map(|&t| expm1_limit_check(t, k, &engine).map(|d| json!({"t": t, "deviation": d})))
            .collect::<Result<Vec<_>>>()?;
        limits.push(json!({
            "k": k,
            "x_root_norm_deviation_at_1": limit_check(1.0, k, &engine)?,
            "expm1_deviation": expm1,
        }));
    }
    let reports = [chain, cm];
    emit_json(
        cfg,
        stdout,
        json!({
            "grid": grid.describe(),
            "bounds": list_bounds(),
            "chain": reports[0],
            "complete_monotonicity": reports[1],
            "limits": limits,
        }),
    )?;
    Ok(exit_for(&reports))
}

fn run_search(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let engine = cfg.engine()?;
    let grid = cfg.grid()?;
    let order = cfg.order()?;
    let n = cfg.n.unwrap_or(1);
    match cfg.format {
        Format::Csv => {
            if cfg.k.is_some() {
                return Err(Error::Config("the CSV curve covers the digamma form only; drop --k".into()));
            }
            let curve = critical_shift_curve(n, order, &grid, &engine)?;
            let mut out = open_out(cfg, stdout)?;
            curve.write_csv(&mut out, &cfg.comment_lines()?)?;
            out.flush()?;
        }
        Format::Json => {
            let constants = match cfg.k {
                Some(k) => best_nk_constants(n, k, order, &grid, &engine)?,
                None => best_shift_constants(n, order, &grid, &engine)?,
            };
            emit_json(cfg, stdout, serde_json::to_value(constants)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn run_threshold(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let engine = cfg.engine()?;
    let grid = cfg.grid()?;
    let result = threshold_n(&grid, cfg.n_cap, &engine)?;
    match (&result.smallest_failing_n, &result.witness) {
        (Some(n), Some(w)) => writeln!(
            stderr,
            "smallest failing n = {n} (largest valid n on this grid = {}), witness x = {:e}, margin = {:e}",
            result.largest_valid_n(),
            w.x,
            w.margin
        )?,
        _ => writeln!(stderr, "no failing n <= {}", result.n_cap)?,
    }
    emit_json(cfg, stdout, serde_json::to_value(&result)?)?;
    Ok(EXIT_OK)
}

/// Parses `args` and runs; usage errors map to exit code 1.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            use clap::error::ErrorKind;
            let info = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if info { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return if info { EXIT_OK } else { EXIT_ERROR };
        }
    };
    match run(&cfg, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
