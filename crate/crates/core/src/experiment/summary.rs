//! Per-configuration learnability verdicts.

use std::fmt::Write;

use crate::channels::ChannelKind;
use crate::training::RunRecord;

use super::report::format_prob;

/// A cell is trainable when its seed-mean final validation accuracy reaches this.
pub const TRAINABLE_THRESHOLD: f64 = 0.80;
/// Number of trailing steps averaged into a run's final validation accuracy.
pub const FINAL_WINDOW: usize = 10;

/// One run reduced to the number the summary needs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOutcome {
    pub channel: ChannelKind,
    pub probability: f64,
    pub seed: u64,
    pub final_val_accuracy: f64,
}

impl RunOutcome {
    pub fn from_record(record: &RunRecord) -> Option<Self> {
        Some(RunOutcome {
            channel: record.channel,
            probability: record.probability,
            seed: record.seed,
            final_val_accuracy: record.final_val_accuracy(FINAL_WINDOW)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryCell {
    pub channel: ChannelKind,
    pub probability: f64,
    pub n_seeds: usize,
    pub mean_final_val_acc: f64,
    pub trainable: bool,
}

/// Cells ordered by channel (in `ChannelKind::ALL` order) then probability.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LearnabilitySummary {
    cells: Vec<SummaryCell>,
}

fn same_prob(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

fn channel_rank(kind: ChannelKind) -> usize {
    ChannelKind::ALL.iter().position(|&k| k == kind).unwrap_or(usize::MAX)
}

impl LearnabilitySummary {
    pub fn cells(&self) -> &[SummaryCell] {
        &self.cells
    }

    pub fn cell(&self, channel: ChannelKind, probability: f64) -> Option<&SummaryCell> {
        self.cells
            .iter()
            .find(|c| c.channel == channel && same_prob(c.probability, probability))
    }

    pub fn is_trainable(&self, channel: ChannelKind, probability: f64) -> Option<bool> {
        self.cell(channel, probability).map(|c| c.trainable)
    }

    /// Requested pairs that have no cell.
    pub fn missing(&self, channels: &[ChannelKind], probabilities: &[f64]) -> Vec<(ChannelKind, f64)> {
        channels
            .iter()
            .flat_map(|&c| probabilities.iter().map(move |&p| (c, p)))
            .filter(|&(c, p)| self.cell(c, p).is_none())
            .collect()
    }

    /// Text grid: one row per channel, one column per probability.
    pub fn render_table(&self) -> String {
        let mut probs: Vec<f64> = Vec::new();
        for c in &self.cells {
            if !probs.iter().any(|&p| same_prob(p, c.probability)) {
                probs.push(c.probability);
            }
        }
        probs.sort_by(f64::total_cmp);
        let mut channels: Vec<ChannelKind> = Vec::new();
        for c in &self.cells {
            if !channels.contains(&c.channel) {
                channels.push(c.channel);
            }
        }

        let mut out = format!("{:<18}", "channel");
        for &p in &probs {
            let _ = write!(out, "{:>6}", format_prob(p));
        }
        out.push('\n');
        for &ch in &channels {
            let _ = write!(out, "{:<18}", ch.as_str());
            for &p in &probs {
                let mark = match self.is_trainable(ch, p) {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "-",
                };
                let _ = write!(out, "{mark:>6}");
            }
            out.push('\n');
        }
        out
    }
}

/// Groups outcomes by (channel, probability) and applies the threshold.
pub fn summarize_outcomes(outcomes: &[RunOutcome]) -> LearnabilitySummary {
    let mut groups: Vec<(ChannelKind, f64, Vec<f64>)> = Vec::new();
    for o in outcomes {
        match groups
            .iter_mut()
            .find(|(c, p, _)| *c == o.channel && same_prob(*p, o.probability))
        {
            Some((_, _, v)) => v.push(o.final_val_accuracy),
            None => groups.push((o.channel, o.probability, vec![o.final_val_accuracy])),
        }
    }
    let mut cells: Vec<SummaryCell> = groups
        .into_iter()
        .map(|(channel, probability, accs)| {
            let mean = accs.iter().sum::<f64>() / accs.len() as f64;
            SummaryCell {
                channel,
                probability,
                n_seeds: accs.len(),
                mean_final_val_acc: mean,
                trainable: mean >= TRAINABLE_THRESHOLD,
            }
        })
        .collect();
    cells.sort_by(|a, b| {
        channel_rank(a.channel)
            .cmp(&channel_rank(b.channel))
            .then(a.probability.total_cmp(&b.probability))
    });
    LearnabilitySummary { cells }
}

/// Records with no steps carry no verdict and are skipped.
pub fn summarize(records: &[RunRecord]) -> LearnabilitySummary {
    let outcomes: Vec<RunOutcome> = records.iter().filter_map(RunOutcome::from_record).collect();
    summarize_outcomes(&outcomes)
}
