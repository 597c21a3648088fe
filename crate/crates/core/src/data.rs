//! Iris ingestion, binary subset selection, angle preprocessing and
//! stratified splitting.
//!
//! The binary task keeps setosa (label −1) against versicolor (label +1) on
//! petal length and petal width. A copy of those 100 rows is embedded in the
//! crate; a CSV path may be supplied instead.

use std::f64::consts::PI;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Setosa and versicolor rows of the standard Iris CSV.
pub const EMBEDDED_IRIS: &str = include_str!("../data/iris_binary.csv");

const PETAL_LENGTH: usize = 2;
const PETAL_WIDTH: usize = 3;

/// One encoded sample: rotation angles and a ±1 label.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub angles: [f64; 2],
    pub label: f64,
}

/// Raw two-feature samples (cm) with ±1 labels.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Dataset {
    pub features: Vec<[f64; 2]>,
    pub labels: Vec<f64>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i]).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn count_label(&self, label: f64) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Maps every row to angles with `stats`.
    pub fn encode(&self, stats: &PreprocessStats) -> Vec<Sample> {
        self.features
            .iter()
            .zip(&self.labels)
            .map(|(&f, &label)| Sample {
                angles: stats.transform(f),
                label,
            })
            .collect()
    }
}

pub enum IrisSource<'a> {
    Embedded,
    Path(&'a Path),
}

pub fn load_iris_binary(source: IrisSource<'_>) -> Result<Dataset> {
    match source {
        IrisSource::Embedded => parse_iris_binary(EMBEDDED_IRIS),
        IrisSource::Path(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            parse_iris_binary(&text)
        }
    }
}

fn species_label(raw: &str) -> Result<Option<f64>> {
    let lower = raw.trim().to_ascii_lowercase();
    let name = lower.strip_prefix("iris-").unwrap_or(&lower);
    match name {
        "setosa" => Ok(Some(-1.0)),
        "versicolor" => Ok(Some(1.0)),
        "virginica" => Ok(None),
        _ => Err(Error::UnknownSpecies(raw.trim().to_string())),
    }
}

/// Parses 5-column Iris CSV text (optional header) into the binary task.
pub fn parse_iris_binary(text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut ds = Dataset::default();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 5 {
            return Err(Error::MalformedRow {
                line,
                reason: format!("expected 5 columns, found {}", record.len()),
            });
        }
        let numbers: std::result::Result<Vec<f64>, _> = record.iter().take(4).map(str::parse::<f64>).collect();
        let numbers = match numbers {
            Ok(v) => v,
            // a non-numeric first row is a header
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(Error::MalformedRow {
                    line,
                    reason: e.to_string(),
                })
            }
        };
        if numbers.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedRow {
                line,
                reason: "non-finite feature".into(),
            });
        }
        if let Some(label) = species_label(&record[4])? {
            ds.features.push([numbers[PETAL_LENGTH], numbers[PETAL_WIDTH]]);
            ds.labels.push(label);
        }
    }
    if ds.count_label(-1.0) == 0 || ds.count_label(1.0) == 0 {
        return Err(Error::MissingClass);
    }
    Ok(ds)
}

/// Per-feature range of the training split.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreprocessStats {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl PreprocessStats {
    pub fn fit(train: &Dataset) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for f in &train.features {
            for j in 0..2 {
                min[j] = min[j].min(f[j]);
                max[j] = max[j].max(f[j]);
            }
        }
        if (0..2).any(|j| max[j] <= min[j]) {
            return Err(Error::InvalidConfig(
                "a feature is constant on the training split".into(),
            ));
        }
        Ok(Self { min, max })
    }

    /// Linear map `[min, max] → [0, π]` per feature, clamped.
    ///
    /// Two features already fill the two qubits, so no padding is needed.
    pub fn transform(&self, features: [f64; 2]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for j in 0..2 {
            let t = (features[j] - self.min[j]) / (self.max[j] - self.min[j]);
            out[j] = (t * PI).clamp(0.0, PI);
        }
        out
    }
}

/// Stratified split; each class contributes `⌈ratio·n_c⌉` rows to training.
/// Returns sorted `(train, validation)` index lists.
pub fn split_indices(ds: &Dataset, ratio: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidRatio(ratio));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut val = Vec::new();
    for class in [-1.0, 1.0] {
        let mut idx: Vec<usize> = (0..ds.len()).filter(|&i| ds.labels[i] == class).collect();
        idx.shuffle(&mut rng);
        let n_train = (ratio * idx.len() as f64).ceil() as usize;
        train.extend_from_slice(&idx[..n_train]);
        val.extend_from_slice(&idx[n_train..]);
    }
    if train.is_empty() {
        return Err(Error::EmptySplit("training"));
    }
    if val.is_empty() {
        return Err(Error::EmptySplit("validation"));
    }
    train.sort_unstable();
    val.sort_unstable();
    Ok((train, val))
}

pub fn split(ds: &Dataset, ratio: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let (tr, va) = split_indices(ds, ratio, seed)?;
    Ok((ds.subset(&tr), ds.subset(&va)))
}

/// Encoded train/validation samples ready for training.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedData {
    pub train: Vec<Sample>,
    pub val: Vec<Sample>,
    pub stats: PreprocessStats,
}

/// Splits, fits the angle map on the training rows and encodes both sides.
pub fn prepare(ds: &Dataset, ratio: f64, seed: u64) -> Result<PreparedData> {
    let (train, val) = split(ds, ratio, seed)?;
    let stats = PreprocessStats::fit(&train)?;
    Ok(PreparedData {
        train: train.encode(&stats),
        val: val.encode(&stats),
        stats,
    })
}
