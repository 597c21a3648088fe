//! Sweep driver: single runs, the channel × probability × seed grid, and
//! the files written for it.

pub mod report;
pub mod summary;
pub mod svg;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::channels::{check_probability, ChannelKind};
use crate::circuit::AnsatzConfig;
use crate::data::{prepare, Dataset};
use crate::error::{Error, Result};
use crate::training::{train, RunConfig, RunRecord};

pub use report::{
    format_prob, outcomes_from_rows, read_results_file, read_summary_file, run_file_name, run_id, write_results,
    write_results_file, write_summary, write_summary_file, ResultRow, SummaryRow,
};
pub use summary::{
    summarize, summarize_outcomes, LearnabilitySummary, RunOutcome, SummaryCell, FINAL_WINDOW, TRAINABLE_THRESHOLD,
};
pub use svg::{emit_group_svg, emit_svg, mean_curves};

pub const DEFAULT_SPLIT_RATIO: f64 = 0.75;

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.csv";

/// Probabilities 0.1, 0.2, ..., 1.0.
pub fn default_probabilities() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub channels: Vec<ChannelKind>,
    pub probabilities: Vec<f64>,
    pub seeds: Vec<u64>,
    pub steps: usize,
    pub batch: usize,
    pub layers: usize,
    pub lr: f64,
    pub momentum: f64,
    pub split_ratio: f64,
    /// Run the noise-free configuration once per seed alongside the grid.
    pub baseline: bool,
    pub out_dir: PathBuf,
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            channels: ChannelKind::NOISY.to_vec(),
            probabilities: default_probabilities(),
            seeds: (1..=5).collect(),
            steps: 100,
            batch: 5,
            layers: 5,
            lr: 0.01,
            momentum: 0.9,
            split_ratio: DEFAULT_SPLIT_RATIO,
            baseline: true,
            out_dir: PathBuf::from("out"),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// One (channel, probability, seed) job.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSpec {
    pub channel: ChannelKind,
    pub probability: f64,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("at least one seed is required".into()));
        }
        for &p in &self.probabilities {
            check_probability(p)?;
        }
        if self.steps == 0 || self.batch == 0 || self.layers == 0 {
            return Err(Error::InvalidConfig("steps, batch and layers must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be positive".into()));
        }
        Ok(())
    }

    /// Baselines first (one per seed), then channel-major, probability,
    /// seed. A noise-free entry in `channels` is folded into the baseline.
    pub fn runs(&self) -> Vec<RunSpec> {
        let mut out = Vec::new();
        let noisy: Vec<ChannelKind> = self.channels.iter().copied().filter(|c| c.is_noisy()).collect();
        if self.baseline || noisy.len() < self.channels.len() {
            for &seed in &self.seeds {
                out.push(RunSpec {
                    channel: ChannelKind::NoiseFree,
                    probability: 0.0,
                    seed,
                });
            }
        }
        for &channel in &noisy {
            for &probability in &self.probabilities {
                for &seed in &self.seeds {
                    out.push(RunSpec {
                        channel,
                        probability,
                        seed,
                    });
                }
            }
        }
        out
    }

    pub fn run_config(&self, seed: u64) -> RunConfig {
        RunConfig {
            steps: self.steps,
            batch_size: self.batch,
            learning_rate: self.lr,
            momentum: self.momentum,
            seed,
            ..RunConfig::default()
        }
    }

    pub fn ansatz(&self, spec: &RunSpec) -> Result<AnsatzConfig> {
        AnsatzConfig::new(self.layers, spec.channel, spec.probability)
    }
}

/// Splits the data with the run's seed, then trains.
pub fn execute_run(ds: &Dataset, spec: &RunSpec, cfg: &SweepConfig) -> Result<RunRecord> {
    let data = prepare(ds, cfg.split_ratio, spec.seed)?;
    train(&data.train, &data.val, &cfg.ansatz(spec)?, &cfg.run_config(spec.seed))
}

/// Runs every job on a pool of `cfg.workers` threads. Records come back in
/// `cfg.runs()` order whatever the scheduling.
pub fn run_sweep(ds: &Dataset, cfg: &SweepConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let runs = cfg.runs();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
    pool.install(|| runs.par_iter().map(|spec| execute_run(ds, spec, cfg)).collect())
}

/// Paths produced by [`write_sweep_outputs`].
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutputs {
    pub run_files: Vec<PathBuf>,
    pub results: PathBuf,
    pub summary: PathBuf,
    pub charts: Vec<PathBuf>,
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_run_file(dir: &Path, record: &RunRecord) -> Result<PathBuf> {
    create_dir(dir)?;
    let path = dir.join(run_file_name(record.channel, record.probability, record.seed));
    write_results_file(&path, &[record])?;
    Ok(path)
}

pub fn chart_file_name(channel: ChannelKind, prob: f64) -> String {
    format!("curves_{channel}_{}.svg", format_prob(prob))
}

/// Reads `results.csv` and derives the summary from it alone.
pub fn summarize_results_file(path: &Path) -> Result<LearnabilitySummary> {
    let rows = read_results_file(path)?;
    Ok(summarize_outcomes(&outcomes_from_rows(&rows, FINAL_WINDOW)))
}

/// Writes per-run CSVs, `results.csv`, one chart per configuration and
/// `summary.csv` (computed back from `results.csv`).
pub fn write_sweep_outputs(dir: &Path, records: &[RunRecord]) -> Result<SweepOutputs> {
    create_dir(dir)?;
    let run_files = records
        .iter()
        .map(|r| write_run_file(dir, r))
        .collect::<Result<Vec<_>>>()?;

    let results = dir.join(RESULTS_FILE);
    let all: Vec<&RunRecord> = records.iter().collect();
    write_results_file(&results, &all)?;

    let mut groups: Vec<(ChannelKind, f64, Vec<&RunRecord>)> = Vec::new();
    for r in records {
        match groups
            .iter_mut()
            .find(|(c, p, _)| *c == r.channel && *p == r.probability)
        {
            Some((_, _, v)) => v.push(r),
            None => groups.push((r.channel, r.probability, vec![r])),
        }
    }
    let mut charts = Vec::new();
    for (channel, prob, group) in &groups {
        let path = dir.join(chart_file_name(*channel, *prob));
        let title = format!("{channel} p={}", format_prob(*prob));
        write_text(&path, &emit_group_svg(&title, group))?;
        charts.push(path);
    }

    let summary_path = dir.join(SUMMARY_FILE);
    let summary = summarize_results_file(&results)?;
    write_summary_file(&summary_path, &summary)?;

    Ok(SweepOutputs {
        run_files,
        results,
        summary: summary_path,
        charts,
    })
}
