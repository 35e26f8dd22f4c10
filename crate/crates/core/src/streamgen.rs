//! Reproducible stream sources: seeded synthetic generators and CSV files.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::NormalizationBounds;
use crate::item::{ItemId, UncertainItem};

/// Attribute correlation family of a synthetic stream.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    #[default]
    Independent,
    /// Items cluster around the main diagonal: good in one dimension means
    /// good in all.
    Correlated,
    /// Items cluster around the plane `sum(x) = d/2`: good in one dimension
    /// means bad in others.
    Anticorrelated,
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::Independent => "independent",
            Distribution::Correlated => "correlated",
            Distribution::Anticorrelated => "anticorrelated",
        })
    }
}

impl FromStr for Distribution {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "independent" => Ok(Distribution::Independent),
            "correlated" => Ok(Distribution::Correlated),
            "anticorrelated" | "anti-correlated" => Ok(Distribution::Anticorrelated),
            _ => Err(format!(
                "unknown distribution `{s}` (expected independent, correlated or anticorrelated)"
            )),
        }
    }
}

/// How occurrence probabilities are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbModel {
    /// Uniform on `(0, 1]`.
    #[default]
    Uniform,
    Fixed(f64),
}

impl fmt::Display for ProbModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbModel::Uniform => f.write_str("uniform"),
            ProbModel::Fixed(p) => write!(f, "fixed:{p}"),
        }
    }
}

impl FromStr for ProbModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "uniform" {
            return Ok(ProbModel::Uniform);
        }
        let p = s
            .strip_prefix("fixed:")
            .ok_or_else(|| format!("unknown probability model `{s}` (expected uniform or fixed:<p>)"))?;
        let p: f64 = p.parse().map_err(|e| format!("bad fixed probability `{p}`: {e}"))?;
        if !(p > 0.0 && p <= 1.0) {
            return Err(format!("fixed probability {p} is outside (0, 1]"));
        }
        Ok(ProbModel::Fixed(p))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub distribution: Distribution,
    pub dims: usize,
    pub count: usize,
    pub seed: u64,
    pub value_range: NormalizationBounds,
    pub prob_model: ProbModel,
}

impl GeneratorSpec {
    /// Independent attributes on `[0, 1]` with uniform probabilities.
    pub fn new(dims: usize, count: usize, seed: u64) -> Result<Self> {
        Ok(GeneratorSpec {
            distribution: Distribution::Independent,
            dims,
            count,
            seed,
            value_range: NormalizationBounds::uniform(dims, 0.0, 1.0)?,
            prob_model: ProbModel::Uniform,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidSpec("count must be at least 1".into()));
        }
        if self.dims == 0 {
            return Err(Error::InvalidSpec("dimensionality must be at least 1".into()));
        }
        if self.value_range.dims() != self.dims {
            return Err(Error::InvalidSpec(format!(
                "value range covers {} dimensions, expected {}",
                self.value_range.dims(),
                self.dims
            )));
        }
        if let ProbModel::Fixed(p) = self.prob_model {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Ok(())
    }
}

/// Generates `spec.count` items with ids `1..=count`. Output is a pure
/// function of `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Vec<UncertainItem>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut unit = vec![0.0; spec.dims];
    (1..=spec.count as u64)
        .map(|id| {
            match spec.distribution {
                Distribution::Independent => unit.iter_mut().for_each(|x| *x = rng.random()),
                Distribution::Correlated => correlated(&mut rng, &mut unit),
                Distribution::Anticorrelated => anticorrelated(&mut rng, &mut unit),
            }
            let attrs: Vec<f64> = unit
                .iter()
                .zip(spec.value_range.ranges())
                .map(|(&x, &(lo, hi))| (lo + x * (hi - lo)).clamp(lo, hi))
                .collect();
            let prob = match spec.prob_model {
                // random() is in [0, 1), so this lands in (0, 1]
                ProbModel::Uniform => 1.0 - rng.random::<f64>(),
                ProbModel::Fixed(p) => p,
            };
            UncertainItem::new(ItemId(id), attrs, prob)
        })
        .collect()
}

fn correlated(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let noise = Normal::<f64>::new(0.0, 0.05).expect("valid normal");
    let centre: f64 = rng.random();
    for x in out.iter_mut() {
        *x = (centre + noise.sample(rng)).clamp(0.0, 1.0);
    }
}

fn anticorrelated(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let plane = Normal::<f64>::new(0.5, 0.02).expect("valid normal");
    let centre = plane.sample(rng).clamp(0.05, 0.95);
    for x in out.iter_mut() {
        *x = rng.random_range(-1.0..1.0);
    }
    let mean = out.iter().sum::<f64>() / out.len() as f64;
    let spread = out.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
    // Deviations sum to zero, so every point stays on the plane; the scale
    // keeps it inside the unit cube.
    let scale = if spread > 0.0 {
        rng.random::<f64>() * centre.min(1.0 - centre) / spread
    } else {
        0.0
    };
    for x in out.iter_mut() {
        *x = (centre + (*x - mean) * scale).clamp(0.0, 1.0);
    }
}

/// Reads a CSV stream: a header naming the attribute columns plus one
/// probability column, then one item per row. Ids are assigned `1..` in
/// file order. When `bounds` is given, every attribute must fall inside it.
pub fn load_stream(path: &Path, bounds: Option<&NormalizationBounds>, prob_column: &str) -> Result<Vec<UncertainItem>> {
    let csv_err = |source| Error::Csv {
        path: path.to_owned(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    let prob_idx = headers
        .iter()
        .position(|h| h == prob_column)
        .ok_or_else(|| Error::MissingProbabilityColumn {
            path: path.to_owned(),
            column: prob_column.to_owned(),
        })?;
    let dims = headers.len() - 1;
    if let Some(b) = bounds {
        if b.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                found: b.dims(),
            });
        }
    }

    let mut items = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |reason: String| Error::BadRow {
            path: path.to_owned(),
            line,
            reason,
        };
        let parse = |field: &str, name: &str| {
            field
                .parse::<f64>()
                .map_err(|e| bad(format!("column `{name}`: cannot parse `{field}`: {e}")))
        };

        let mut attrs = Vec::with_capacity(dims);
        let mut prob = f64::NAN;
        for (i, (field, name)) in record.iter().zip(headers.iter()).enumerate() {
            let v = parse(field, name)?;
            if i == prob_idx {
                prob = v;
            } else {
                attrs.push(v);
            }
        }
        if let Some(b) = bounds {
            crate::index::normalize(&attrs, b).map_err(|e| bad(e.to_string()))?;
        }
        let item = UncertainItem::new(ItemId(items.len() as u64 + 1), attrs, prob).map_err(|e| bad(e.to_string()))?;
        items.push(item);
    }
    Ok(items)
}

/// Number of attribute columns in a CSV stream's header.
pub fn stream_dims(path: &Path, prob_column: &str) -> Result<usize> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.to_owned(),
            source,
        })?;
    let headers = reader.headers().map_err(|source| Error::Csv {
        path: path.to_owned(),
        source,
    })?;
    if !headers.iter().any(|h| h == prob_column) {
        return Err(Error::MissingProbabilityColumn {
            path: path.to_owned(),
            column: prob_column.to_owned(),
        });
    }
    Ok(headers.len() - 1)
}
