use std::io::Write;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use weylwalks_core::model::parse_rational;
use weylwalks_core::oracle::{count_endpoints_capped, sample_series, DEFAULT_MAX_LENGTH};
use weylwalks_core::real::{MAX_PRECISION, MIN_PRECISION};
use weylwalks_core::{asymptotics_with, Error, ModelKind, Options, Weights, DEFAULT_PRECISION};

use crate::report::{grid_axis, sweep, validate, EstimateReport, ValidateConfig};

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    /// `validate` ran but the errors did not meet the bound.
    ValidationFailed = 1,
    Parse = 2,
    Resource = 3,
    Pipeline = 4,
}

#[derive(Debug, Parser)]
#[command(
    name = "weylwalks",
    version,
    about = "Weighted walks in the A2 Weyl chamber: exact counts and asymptotics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Working precision in bits for the saddle-point expansion.
    #[arg(long, global = true, env = "WEYLWALKS_PRECISION", default_value_t = DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u32).range(MIN_PRECISION as i64..=MAX_PRECISION as i64))]
    pub precision: u32,

    /// Largest walk length the exact counter may reach.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_LENGTH)]
    pub max_n: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact weighted count q(n) of walks of length n.
    Count {
        #[arg(value_parser = parse_model)]
        model: ModelKind,
        #[arg(value_parser = parse_weight)]
        a: BigRational,
        #[arg(value_parser = parse_weight)]
        b: BigRational,
        n: usize,
        /// Also print unweighted counts per endpoint as CSV rows i,j,count.
        #[arg(long)]
        endpoints: bool,
    },
    /// Leading asymptotics q(n) ~ gamma * rho^n * n^(-r).
    Asymptotics {
        #[arg(value_parser = parse_model)]
        model: ModelKind,
        #[arg(value_parser = parse_weight)]
        a: BigRational,
        #[arg(value_parser = parse_weight)]
        b: BigRational,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Compare the estimate with exact counts and print a JSON report.
    Validate {
        #[arg(value_parser = parse_model)]
        model: ModelKind,
        #[arg(value_parser = parse_weight)]
        a: BigRational,
        #[arg(value_parser = parse_weight)]
        b: BigRational,
        /// Comma-separated walk lengths.
        #[arg(long = "n", value_delimiter = ',', default_value = "250,500,1000,2000")]
        lengths: Vec<usize>,
        /// Largest accepted relative error at the last length.
        #[arg(long, default_value_t = 0.02)]
        bound: f64,
        /// Include wall-clock timings (makes the output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Regime, growth and exponent on a rational grid, as CSV.
    Sweep {
        #[arg(value_parser = parse_model)]
        model: ModelKind,
        /// Grid size WxH.
        #[arg(long, default_value = "80x80", value_parser = parse_grid)]
        grid: (usize, usize),
        /// Weight range lo:hi used for both axes.
        #[arg(long, default_value = "0:4", value_parser = parse_range)]
        range: (BigRational, BigRational),
    },
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse()
        .map_err(|_| format!("unknown model `{s}` (expected tandem or double-tandem)"))
}

fn parse_weight(s: &str) -> Result<BigRational, String> {
    match parse_rational(s) {
        Some(q) if q > BigRational::from_integer(0.into()) => Ok(q),
        Some(_) => Err(format!("weight `{s}` must be positive")),
        None => Err(format!("`{s}` is not a fraction p/q")),
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid `{s}` is not WxH"))?;
    let w: usize = w.parse().map_err(|_| format!("bad grid width `{w}`"))?;
    let h: usize = h.parse().map_err(|_| format!("bad grid height `{h}`"))?;
    if w == 0 || h == 0 {
        return Err("grid dimensions must be positive".into());
    }
    Ok((w, h))
}

fn parse_range(s: &str) -> Result<(BigRational, BigRational), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("range `{s}` is not lo:hi"))?;
    let lo = parse_rational(lo).ok_or_else(|| format!("bad range bound `{lo}`"))?;
    let hi = parse_rational(hi).ok_or_else(|| format!("bad range bound `{hi}`"))?;
    if hi <= lo {
        return Err("range needs lo < hi".into());
    }
    Ok((lo, hi))
}

fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::InvalidWeights => ExitCode::Parse,
        Error::ResourceLimit { .. } | Error::SeriesCap { .. } | Error::Precision(_) => {
            ExitCode::Resource
        }
        _ => ExitCode::Pipeline,
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Inconsistent(format!("output error: {e}"))
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode {
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_for(&e)
        }
    }
}

fn weights(a: &BigRational, b: &BigRational) -> weylwalks_core::Result<Weights> {
    Weights::new(a.clone(), b.clone())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> weylwalks_core::Result<ExitCode> {
    let options = Options {
        precision: cli.precision,
        ..Options::default()
    };
    match &cli.command {
        Command::Count {
            model,
            a,
            b,
            n,
            endpoints,
        } => {
            let w = weights(a, b)?;
            let q = sample_series(*model, std::slice::from_ref(&w), &[*n], cli.max_n)?
                .pop()
                .and_then(|s| s.get(*n).cloned())
                .expect("sampled length");
            writeln!(out, "{q}").map_err(io_err)?;
            if *endpoints {
                let table = count_endpoints_capped(*model, *n, cli.max_n)?;
                let mut csv = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(out);
                csv.write_record(["i", "j", "count"]).map_err(io_err)?;
                for ((i, j), c) in &table.counts {
                    csv.write_record([i.to_string(), j.to_string(), c.to_string()])
                        .map_err(io_err)?;
                }
                csv.flush().map_err(io_err)?;
            }
        }
        Command::Asymptotics { model, a, b, json } => {
            let est = asymptotics_with(*model, &weights(a, b)?, options)?;
            let report = EstimateReport::new(&est);
            if *json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report).map_err(io_err)?
                )
                .map_err(io_err)?;
            } else {
                writeln!(out, "model:       {}", report.model).map_err(io_err)?;
                writeln!(out, "weights:     a = {}, b = {}", report.a, report.b).map_err(io_err)?;
                writeln!(out, "regime:      {}", report.regime).map_err(io_err)?;
                writeln!(
                    out,
                    "rho:         {} = {}",
                    report.rho_exact, report.rho_float
                )
                .map_err(io_err)?;
                writeln!(out, "r:           {}", est.r).map_err(io_err)?;
                writeln!(out, "gamma:       {}", report.gamma_float).map_err(io_err)?;
                writeln!(out, "conjectured: {}", report.conjectured).map_err(io_err)?;
                for c in &est.oscillating {
                    let (re, im) = c.coefficient;
                    writeln!(
                        out,
                        "oscillating: ({re:?}{im:+e}i)·(rho·w^-{})^n",
                        c.rotation
                    )
                    .map_err(io_err)?;
                }
            }
        }
        Command::Validate {
            model,
            a,
            b,
            lengths,
            bound,
            timings,
        } => {
            if lengths.is_empty() {
                return Err(Error::InvalidWeights);
            }
            let cfg = ValidateConfig {
                lengths: lengths.clone(),
                bound: *bound,
                cap: cli.max_n,
                options,
                timings: *timings,
            };
            let report = validate(*model, &weights(a, b)?, &cfg)?;
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).map_err(io_err)?
            )
            .map_err(io_err)?;
            if !report.passed {
                return Ok(ExitCode::ValidationFailed);
            }
        }
        Command::Sweep { model, grid, range } => {
            let a_axis = grid_axis(&range.0, &range.1, grid.0);
            let b_axis = grid_axis(&range.0, &range.1, grid.1);
            let opts = Options {
                companions: false,
                ..options
            };
            let rows = sweep(*model, &a_axis, &b_axis, opts)?;
            let mut csv = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            for row in &rows {
                csv.serialize(row).map_err(io_err)?;
            }
            csv.flush().map_err(io_err)?;
        }
    }
    Ok(ExitCode::Ok)
}
