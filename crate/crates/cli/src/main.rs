//! `kdsky`: benchmark and verify the k-dominant skyline engines.
//!
//! Exit status: 0 success, 1 verification mismatch, 2 usage or configuration
//! error, 3 ingestion error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use kdsky_core::engine::Fault;
use kdsky_core::harness::{run_bench, run_verify, RunSettings, StreamSource};
use kdsky_core::streamgen::{stream_dims, Distribution, GeneratorSpec, ProbModel};
use kdsky_core::{EngineKind, Error, NormalizationBounds};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INGEST: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InjectFault {
    SkipEvictionUpdate,
}

#[derive(Debug, Parser)]
#[command(name = "kdsky", version, about = "Probabilistic k-dominant skyline over sliding windows")]
struct Args {
    /// Engine to benchmark.
    #[arg(long, default_value = "mi")]
    engine: EngineKind,

    /// Dimensionality of generated streams (taken from the file with --input).
    #[arg(long)]
    dim: Option<usize>,

    #[arg(long, default_value_t = 11)]
    k: usize,

    /// Sliding window capacity.
    #[arg(long, default_value_t = 300)]
    window: usize,

    /// Number of generated items.
    #[arg(long, default_value_t = 10_000)]
    items: usize,

    /// Sorted-profile position for the lower threshold; defaults to (k-1)/2.
    #[arg(long)]
    pivot: Option<usize>,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    #[arg(long, default_value = "independent")]
    dist: Distribution,

    /// `uniform` or `fixed:<p>`.
    #[arg(long, default_value = "uniform")]
    prob: ProbModel,

    /// CSV stream instead of a generated one.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Name of the probability column in --input.
    #[arg(long, default_value = "prob")]
    prob_column: String,

    /// `min,max` for every dimension, or `min1,max1,min2,max2,...`.
    /// Generated streams default to `0,1`; files default to their own range.
    #[arg(long)]
    bounds: Option<String>,

    #[arg(long, default_value_t = 10)]
    repeat: usize,

    /// Run naive and MI engines in lockstep and compare every snapshot.
    #[arg(long)]
    verify: bool,

    /// Write JSON-lines records here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Comma-separated k values.
    #[arg(long, value_delimiter = ',')]
    sweep_k: Vec<usize>,

    /// Comma-separated window capacities.
    #[arg(long, value_delimiter = ',')]
    sweep_window: Vec<usize>,

    /// Rebuild all probabilities from scratch every N events.
    #[arg(long)]
    recompute_every: Option<u64>,

    #[arg(long, hide = true)]
    inject_fault: Option<InjectFault>,
}

fn parse_bounds(spec: &str, dims: usize) -> Result<NormalizationBounds, String> {
    let values = spec
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad bound `{v}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let ranges: Vec<(f64, f64)> = match values.len() {
        2 => vec![(values[0], values[1]); dims],
        n if n == 2 * dims => values.chunks(2).map(|c| (c[0], c[1])).collect(),
        n => return Err(format!("--bounds needs 2 or {} numbers, got {n}", 2 * dims)),
    };
    NormalizationBounds::new(ranges).map_err(|e| e.to_string())
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Inconsistency(_) => EXIT_MISMATCH,
        e if e.is_ingestion() => EXIT_INGEST,
        _ => EXIT_USAGE,
    }
}

fn source(args: &Args) -> Result<StreamSource, (u8, String)> {
    let usage = |m: String| (EXIT_USAGE, m);
    match &args.input {
        Some(path) => {
            let bounds = match &args.bounds {
                None => None,
                Some(spec) => {
                    let dims = stream_dims(path, &args.prob_column).map_err(|e| (exit_for(&e), e.to_string()))?;
                    Some(parse_bounds(spec, dims).map_err(usage)?)
                }
            };
            Ok(StreamSource::File {
                path: path.clone(),
                prob_column: args.prob_column.clone(),
                bounds,
            })
        }
        None => {
            let dims = args.dim.unwrap_or(12);
            let value_range = parse_bounds(args.bounds.as_deref().unwrap_or("0,1"), dims).map_err(usage)?;
            let spec = GeneratorSpec {
                distribution: args.dist,
                dims,
                count: args.items,
                seed: args.seed,
                value_range,
                prob_model: args.prob,
            };
            spec.validate().map_err(|e| usage(e.to_string()))?;
            Ok(StreamSource::Generated(spec))
        }
    }
}

fn run(args: &Args) -> Result<u8, (u8, String)> {
    let source = source(args)?;
    let ks = if args.sweep_k.is_empty() { vec![args.k] } else { args.sweep_k.clone() };
    let windows = if args.sweep_window.is_empty() {
        vec![args.window]
    } else {
        args.sweep_window.clone()
    };

    let mut out: Box<dyn Write> = match &args.report {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| (EXIT_USAGE, format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut emit = |line: String| -> Result<(), (u8, String)> {
        writeln!(out, "{line}").map_err(|e| (EXIT_USAGE, e.to_string()))
    };
    let fail = |e: Error| (exit_for(&e), e.to_string());

    let mut status = 0;
    for &k in &ks {
        for &capacity in &windows {
            let settings = RunSettings {
                engine: args.engine,
                k,
                capacity,
                pivot: args.pivot,
                repeat: args.repeat,
                recompute_interval: args.recompute_every,
                fault: args.inject_fault.map(|f| match f {
                    InjectFault::SkipEvictionUpdate => Fault::SkipEvictionUpdate,
                }),
            };
            if args.verify {
                let stream = source.load(0).map_err(fail)?;
                let outcome = run_verify(&settings, &stream).map_err(fail)?;
                emit(json_line(&outcome))?;
                if let Some(d) = &outcome.first_divergence {
                    eprintln!(
                        "verify FAILED (k={k}, window={capacity}): first divergence at event {} ({}): {:?}",
                        d.event, d.item, d.mismatch
                    );
                    status = EXIT_MISMATCH;
                } else {
                    eprintln!(
                        "verify passed (k={k}, window={capacity}): {} events, max |diff| {:.3e}",
                        outcome.events, outcome.max_abs_diff
                    );
                }
            } else {
                let outcome = run_bench(&settings, &source).map_err(fail)?;
                for record in outcome.records() {
                    emit(json_line(record))?;
                }
            }
        }
    }
    out.flush().map_err(|e| (EXIT_USAGE, e.to_string()))?;
    Ok(status)
}

fn json_line(record: &impl Serialize) -> String {
    serde_json::to_string(record).expect("report records serialize")
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("kdsky: {message}");
            ExitCode::from(code)
        }
    }
}
