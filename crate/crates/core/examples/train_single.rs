//! Trains one configuration on the bundled Iris data and prints the curve.
//!
//! Usage: `cargo run --release --example train_single -- [channel] [prob] [seed]`

use hyqnn::experiment::{execute_run, RunSpec, SweepConfig, FINAL_WINDOW};
use hyqnn::{load_iris_binary, ChannelKind, IrisSource};

fn main() -> hyqnn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let channel: ChannelKind = args.first().map_or(Ok(ChannelKind::NoiseFree), |s| s.parse())?;
    let probability = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let seed = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);

    let ds = load_iris_binary(IrisSource::Embedded)?;
    let spec = RunSpec {
        channel,
        probability,
        seed,
    };
    let record = execute_run(&ds, &spec, &SweepConfig::default())?;
    for s in record.steps.iter().filter(|s| s.step % 10 == 0 || s.step == 1) {
        println!(
            "step {:3}  cost {:.4}  train {:.3}  val {:.3}",
            s.step, s.cost, s.train_accuracy, s.val_accuracy
        );
    }
    println!(
        "{channel} p={probability} seed={seed}: final validation accuracy {:.3}",
        record.final_val_accuracy(FINAL_WINDOW).unwrap_or(f64::NAN)
    );
    Ok(())
}
