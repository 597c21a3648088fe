//! A reduced sweep: two channels at three strengths, two seeds, shortened
//! training. Writes the full set of outputs and prints the learnability grid.
//!
//! Usage: `cargo run --release --example sweep -- [out_dir]`

use std::path::PathBuf;

use hyqnn::experiment::{run_sweep, summarize_results_file, write_sweep_outputs, SweepConfig};
use hyqnn::{load_iris_binary, ChannelKind, IrisSource};

fn main() -> hyqnn::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("sweep_out"), PathBuf::from);
    let cfg = SweepConfig {
        channels: vec![ChannelKind::BitFlip, ChannelKind::AmplitudeDamping],
        probabilities: vec![0.1, 0.5, 1.0],
        seeds: vec![1, 2],
        steps: 40,
        out_dir: out.clone(),
        ..SweepConfig::default()
    };
    let ds = load_iris_binary(IrisSource::Embedded)?;
    let records = run_sweep(&ds, &cfg)?;
    let outputs = write_sweep_outputs(&out, &records)?;
    print!("{}", summarize_results_file(&outputs.results)?.render_table());
    println!(
        "{} runs, {} charts in {}",
        outputs.run_files.len(),
        outputs.charts.len(),
        out.display()
    );
    Ok(())
}
