//! Benchmark and verification drivers.
//!
//! Timings cover event processing only: stream generation and parsing happen
//! before the clock starts.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::engine::{self, EngineConfig, EngineKind, EngineStats, Fault};
use crate::error::{Error, Result};
use crate::index::NormalizationBounds;
use crate::item::{ItemId, UncertainItem};
use crate::streamgen::{self, Distribution, GeneratorSpec, ProbModel};
use crate::window::SnapshotMismatch;

/// Absolute tolerance for engine agreement.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub enum StreamSource {
    Generated(GeneratorSpec),
    File {
        path: PathBuf,
        prob_column: String,
        /// Declared bounds; derived from the file contents when absent.
        bounds: Option<NormalizationBounds>,
    },
}

/// A fully materialized stream together with the bounds it is normalized by.
#[derive(Clone, Debug)]
pub struct Stream {
    pub items: Vec<UncertainItem>,
    pub bounds: NormalizationBounds,
    pub source: StreamSource,
}

impl StreamSource {
    /// Materializes the stream. Generated sources use `seed + repetition`.
    pub fn load(&self, repetition: u64) -> Result<Stream> {
        match self {
            StreamSource::Generated(spec) => {
                let spec = GeneratorSpec {
                    seed: spec.seed.wrapping_add(repetition),
                    ..spec.clone()
                };
                Ok(Stream {
                    items: streamgen::generate(&spec)?,
                    bounds: spec.value_range.clone(),
                    source: StreamSource::Generated(spec),
                })
            }
            StreamSource::File {
                path,
                prob_column,
                bounds,
            } => {
                let items = streamgen::load_stream(path, bounds.as_ref(), prob_column)?;
                let bounds = match bounds {
                    Some(b) => b.clone(),
                    None => NormalizationBounds::covering(&items)?,
                };
                Ok(Stream {
                    items,
                    bounds,
                    source: self.clone(),
                })
            }
        }
    }

    /// Whether repetitions see different data.
    pub fn varies_per_run(&self) -> bool {
        matches!(self, StreamSource::Generated(_))
    }
}

/// Engine parameters independent of the stream's dimensionality and bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSettings {
    pub engine: EngineKind,
    pub k: usize,
    pub capacity: usize,
    /// `None` picks the middle of `0..k`.
    pub pivot: Option<usize>,
    pub repeat: usize,
    pub recompute_interval: Option<u64>,
    #[doc(hidden)]
    pub fault: Option<Fault>,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            engine: EngineKind::Mi,
            k: 11,
            capacity: 300,
            pivot: None,
            repeat: 10,
            recompute_interval: None,
            fault: None,
        }
    }
}

impl RunSettings {
    pub fn engine_config(&self, stream: &Stream) -> Result<EngineConfig> {
        let dims = stream.bounds.dims();
        let mut config = EngineConfig::new(dims, self.k, self.capacity, stream.bounds.clone())?
            .with_recompute_interval(self.recompute_interval);
        if let Some(p) = self.pivot {
            config = config.with_pivot(p)?;
        }
        config.fault = self.fault;
        Ok(config)
    }
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub engine: EngineKind,
    pub dims: usize,
    pub k: usize,
    pub capacity: usize,
    pub pivot: usize,
    pub items: usize,
    pub source: String,
    pub seed: Option<u64>,
    pub distribution: Option<Distribution>,
    pub prob_model: Option<String>,
}

impl ConfigEcho {
    fn new(engine: EngineKind, config: &EngineConfig, stream: &Stream) -> Self {
        let (source, seed, distribution, prob_model) = match &stream.source {
            StreamSource::Generated(spec) => (
                "generated".to_owned(),
                Some(spec.seed),
                Some(spec.distribution),
                Some(spec.prob_model.to_string()),
            ),
            StreamSource::File { path, .. } => (path.display().to_string(), None, None, None),
        };
        ConfigEcho {
            engine,
            dims: config.dims,
            k: config.k,
            capacity: config.capacity,
            pivot: config.pivot,
            items: stream.items.len(),
            source,
            seed,
            distribution,
            prob_model,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Run,
    Average,
}

/// One JSON-lines record of a benchmark.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub kind: ReportKind,
    /// Zero-based repetition index; absent on the average record.
    pub run: Option<usize>,
    /// Number of repetitions folded into this record.
    pub runs: usize,
    #[serde(flatten)]
    pub config: ConfigEcho,
    pub total_seconds: f64,
    pub mean_event_us: f64,
    pub median_event_us: f64,
    pub dominance_tests: u64,
    pub pruned: u64,
    pub evictions: u64,
    pub digest: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BenchOutcome {
    pub runs: Vec<RunReport>,
    pub average: RunReport,
}

impl BenchOutcome {
    /// All records, runs first, then the average.
    pub fn records(&self) -> impl Iterator<Item = &RunReport> {
        self.runs.iter().chain(std::iter::once(&self.average))
    }
}

/// Drives one engine over the stream `settings.repeat` times.
pub fn run_bench(settings: &RunSettings, source: &StreamSource) -> Result<BenchOutcome> {
    if settings.repeat == 0 {
        return Err(Error::InvalidSpec("repeat must be at least 1".into()));
    }
    let mut runs = Vec::with_capacity(settings.repeat);
    let mut cached: Option<Stream> = None;
    for r in 0..settings.repeat {
        let stream = match (&cached, source.varies_per_run()) {
            (Some(s), false) => s.clone(),
            _ => source.load(r as u64)?,
        };
        runs.push(bench_once(settings, &stream, r)?);
        cached = Some(stream);
    }
    let average = average(&runs);
    Ok(BenchOutcome { runs, average })
}

fn bench_once(settings: &RunSettings, stream: &Stream, run: usize) -> Result<RunReport> {
    let config = settings.engine_config(stream)?;
    let echo = ConfigEcho::new(settings.engine, &config, stream);
    let mut engine = engine::build(settings.engine, config)?;
    let mut per_event = Vec::with_capacity(stream.items.len());
    for item in &stream.items {
        let item = item.clone();
        let start = Instant::now();
        engine.ingest(item)?;
        per_event.push(start.elapsed().as_secs_f64());
    }
    let stats = engine.stats();
    let total: f64 = per_event.iter().sum();
    Ok(RunReport {
        kind: ReportKind::Run,
        run: Some(run),
        runs: 1,
        config: echo,
        total_seconds: total,
        mean_event_us: if per_event.is_empty() { 0.0 } else { total / per_event.len() as f64 * 1e6 },
        median_event_us: median(&mut per_event) * 1e6,
        dominance_tests: stats.dominance_tests,
        pruned: stats.pruned,
        evictions: stats.evictions,
        digest: Some(engine.snapshot().digest()),
    })
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len().is_multiple_of(2) {
        (values[mid - 1] + values[mid]) / 2.0
    } else {
        values[mid]
    }
}

fn average(runs: &[RunReport]) -> RunReport {
    let n = runs.len() as f64;
    let mean = |f: fn(&RunReport) -> f64| runs.iter().map(f).sum::<f64>() / n;
    let mean_u64 = |f: fn(&RunReport) -> u64| (runs.iter().map(f).sum::<u64>() as f64 / n).round() as u64;
    let first = &runs[0];
    let mut config = first.config.clone();
    if runs.iter().any(|r| r.config.seed != config.seed) {
        // base seed; run i used base + i
        config.seed = runs.iter().filter_map(|r| r.config.seed).min();
    }
    let digest = runs.iter().all(|r| r.digest == first.digest).then(|| first.digest.clone()).flatten();
    RunReport {
        kind: ReportKind::Average,
        run: None,
        runs: runs.len(),
        config,
        total_seconds: mean(|r| r.total_seconds),
        mean_event_us: mean(|r| r.mean_event_us),
        median_event_us: mean(|r| r.median_event_us),
        dominance_tests: mean_u64(|r| r.dominance_tests),
        pruned: mean_u64(|r| r.pruned),
        evictions: mean_u64(|r| r.evictions),
        digest,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divergence {
    /// One-based position of the event in the stream.
    pub event: usize,
    pub item: ItemId,
    pub mismatch: SnapshotMismatch,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub kind: &'static str,
    #[serde(flatten)]
    pub config: ConfigEcho,
    pub passed: bool,
    pub events: usize,
    pub tolerance: f64,
    pub max_abs_diff: f64,
    pub first_divergence: Option<Divergence>,
    /// Whether MI never ran more dominance tests than the naive engine on
    /// any single event.
    pub mi_tests_never_exceed_naive: bool,
    pub naive: EngineStats,
    pub mi: EngineStats,
}

/// Runs the naive and MI engines in lockstep and compares every snapshot.
///
/// The MI engine runs with auditing on, so an unsound cut-off surfaces as an
/// [`Error::Inconsistency`].
pub fn run_verify(settings: &RunSettings, stream: &Stream) -> Result<VerifyOutcome> {
    let config = settings.engine_config(stream)?;
    let mut naive_config = config.clone();
    naive_config.fault = None;
    let mut naive = engine::build(EngineKind::Naive, naive_config)?;
    let mut mi = engine::build(EngineKind::Mi, config.clone().with_audit(true))?;

    let mut outcome = VerifyOutcome {
        kind: "verify",
        config: ConfigEcho::new(EngineKind::Mi, &config, stream),
        passed: true,
        events: 0,
        tolerance: VERIFY_TOLERANCE,
        max_abs_diff: 0.0,
        first_divergence: None,
        mi_tests_never_exceed_naive: true,
        naive: EngineStats::default(),
        mi: EngineStats::default(),
    };
    for (i, item) in stream.items.iter().enumerate() {
        let before = (naive.stats().dominance_tests, mi.stats().dominance_tests);
        let expected = naive.push(item.clone())?;
        let actual = mi.push(item.clone())?;
        outcome.events = i + 1;
        if mi.stats().dominance_tests - before.1 > naive.stats().dominance_tests - before.0 {
            outcome.mi_tests_never_exceed_naive = false;
        }
        if let Some(diff) = expected.max_abs_diff(&actual) {
            outcome.max_abs_diff = outcome.max_abs_diff.max(diff);
        }
        if let Some(mismatch) = expected.compare(&actual, VERIFY_TOLERANCE) {
            outcome.passed = false;
            outcome.first_divergence = Some(Divergence {
                event: i + 1,
                item: item.id,
                mismatch,
            });
            break;
        }
    }
    outcome.naive = naive.stats();
    outcome.mi = mi.stats();
    Ok(outcome)
}

/// Default synthetic source: independent attributes on `[0, 1]`, uniform
/// probabilities.
pub fn default_source(dims: usize, count: usize, seed: u64) -> Result<StreamSource> {
    Ok(StreamSource::Generated(GeneratorSpec {
        prob_model: ProbModel::Uniform,
        ..GeneratorSpec::new(dims, count, seed)?
    }))
}
