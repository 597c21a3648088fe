//! CSV schema for run histories and the learnability summary.
//!
//! Run rows: `run_id,channel,prob,seed,step,cost,train_acc,val_acc`, every
//! float with six decimals.

use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use crate::channels::ChannelKind;
use crate::error::{Error, Result};
use crate::training::RunRecord;

use super::summary::{LearnabilitySummary, RunOutcome};

pub const RESULTS_HEADER: [&str; 8] = [
    "run_id",
    "channel",
    "prob",
    "seed",
    "step",
    "cost",
    "train_acc",
    "val_acc",
];
pub const SUMMARY_HEADER: [&str; 5] = ["channel", "prob", "n_seeds", "mean_final_val_acc", "trainable"];

/// Probability as used in identifiers: at least one decimal, no trailing
/// zeros beyond that (`0.1`, `1.0`, `0.25`).
pub fn format_prob(p: f64) -> String {
    let s = format!("{p:.6}");
    let trimmed = s.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_string()
    }
}

pub fn run_id(channel: ChannelKind, prob: f64, seed: u64) -> String {
    format!("{channel}_{}_{seed}", format_prob(prob))
}

pub fn run_file_name(channel: ChannelKind, prob: f64, seed: u64) -> String {
    format!("run_{}.csv", run_id(channel, prob, seed))
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn write_rows<W: Write>(wtr: &mut csv::Writer<W>, record: &RunRecord) -> Result<()> {
    let id = run_id(record.channel, record.probability, record.seed);
    for s in &record.steps {
        wtr.write_record([
            id.clone(),
            record.channel.to_string(),
            f6(record.probability),
            record.seed.to_string(),
            s.step.to_string(),
            f6(s.cost),
            f6(s.train_accuracy),
            f6(s.val_accuracy),
        ])?;
    }
    Ok(())
}

/// Writes the header and all rows of `records`, in order.
pub fn write_results<W: Write>(out: W, records: &[&RunRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(RESULTS_HEADER)?;
    for r in records {
        write_rows(&mut wtr, r)?;
    }
    wtr.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn write_results_file(path: &Path, records: &[&RunRecord]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_results(std::io::BufWriter::new(file), records)
}

/// One parsed row of a results file.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ResultRow {
    pub run_id: String,
    pub channel: ChannelKind,
    pub prob: f64,
    pub seed: u64,
    pub step: usize,
    pub cost: f64,
    pub train_acc: f64,
    pub val_acc: f64,
}

pub fn read_results<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

pub fn read_results_file(path: &Path) -> Result<Vec<ResultRow>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_results(std::io::BufReader::new(file))
}

/// Collapses result rows into one outcome per run, keeping the mean
/// validation accuracy of each run's last `window` steps.
pub fn outcomes_from_rows(rows: &[ResultRow], window: usize) -> Vec<RunOutcome> {
    let mut runs: Vec<(&str, Vec<&ResultRow>)> = Vec::new();
    for row in rows {
        match runs.iter_mut().find(|(id, _)| *id == row.run_id) {
            Some((_, v)) => v.push(row),
            None => runs.push((&row.run_id, vec![row])),
        }
    }
    runs.into_iter()
        .map(|(_, mut v)| {
            v.sort_by_key(|r| r.step);
            let n = v.len().min(window).max(1);
            let tail = &v[v.len().saturating_sub(n)..];
            RunOutcome {
                channel: v[0].channel,
                probability: v[0].prob,
                seed: v[0].seed,
                final_val_accuracy: tail.iter().map(|r| r.val_acc).sum::<f64>() / tail.len() as f64,
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(out: W, summary: &LearnabilitySummary) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(SUMMARY_HEADER)?;
    for c in summary.cells() {
        wtr.write_record([
            c.channel.to_string(),
            f6(c.probability),
            c.n_seeds.to_string(),
            f6(c.mean_final_val_acc),
            c.trainable.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn write_summary_file(path: &Path, summary: &LearnabilitySummary) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_summary(std::io::BufWriter::new(file), summary)
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct SummaryRow {
    pub channel: ChannelKind,
    pub prob: f64,
    pub n_seeds: usize,
    pub mean_final_val_acc: f64,
    pub trainable: bool,
}

pub fn read_summary_file(path: &Path) -> Result<Vec<SummaryRow>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(std::io::BufReader::new(file));
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}
