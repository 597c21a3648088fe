use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyqnn::experiment::{
    default_probabilities, execute_run, run_sweep, summarize_results_file, write_run_file, write_summary_file,
    write_sweep_outputs, RunSpec, SweepConfig, RESULTS_FILE, SUMMARY_FILE,
};
use hyqnn::{load_iris_binary, ChannelKind, Dataset, IrisSource};

#[derive(Parser)]
#[command(
    name = "hyqnn",
    version,
    about = "Noisy two-qubit classifier training and noise sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one configuration and write its per-step CSV.
    Run(RunArgs),
    /// Train the channel x probability x seed grid plus noise-free baselines.
    Sweep(SweepArgs),
    /// Recompute summary.csv from an existing results.csv.
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, default_value_t = 5)]
    batch: usize,
    #[arg(long, default_value_t = 5)]
    layers: usize,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long, default_value_t = 0.9)]
    momentum: f64,
    /// Iris CSV; the bundled copy is used when omitted.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_channel)]
    channel: ChannelKind,
    /// Required for noisy channels; ignored for `none`.
    #[arg(long, value_parser = parse_prob)]
    prob: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated; defaults to all five noise channels.
    #[arg(long, value_parser = parse_channel, value_delimiter = ',')]
    channels: Vec<ChannelKind>,
    /// Comma-separated; defaults to 0.1,0.2,...,1.0.
    #[arg(long, value_parser = parse_prob, value_delimiter = ',')]
    probs: Vec<f64>,
    /// Comma-separated; defaults to 1,2,3,4,5.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Directory holding results.csv; summary.csv is written next to it.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn parse_channel(s: &str) -> Result<ChannelKind, String> {
    s.parse().map_err(|e: hyqnn::Error| e.to_string())
}

fn parse_prob(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("probability {p} is outside [0, 1]"))
    }
}

fn load(data: &Option<PathBuf>) -> hyqnn::Result<Dataset> {
    match data {
        Some(path) => load_iris_binary(IrisSource::Path(path)),
        None => load_iris_binary(IrisSource::Embedded),
    }
}

fn sweep_config(common: &Common) -> SweepConfig {
    SweepConfig {
        steps: common.steps,
        batch: common.batch,
        layers: common.layers,
        lr: common.lr,
        momentum: common.momentum,
        out_dir: common.out.clone(),
        ..SweepConfig::default()
    }
}

fn cmd_run(args: RunArgs) -> hyqnn::Result<()> {
    let probability = match (args.channel.is_noisy(), args.prob) {
        (false, _) => 0.0,
        (true, Some(p)) => p,
        (true, None) => {
            return Err(hyqnn::Error::InvalidConfig(format!(
                "--prob is required for channel {}",
                args.channel
            )))
        }
    };
    let cfg = SweepConfig {
        seeds: vec![args.seed],
        ..sweep_config(&args.common)
    };
    cfg.validate()?;
    let ds = load(&args.common.data)?;
    let spec = RunSpec {
        channel: args.channel,
        probability,
        seed: args.seed,
    };
    let record = execute_run(&ds, &spec, &cfg)?;
    let path = write_run_file(&cfg.out_dir, &record)?;
    if let Some(acc) = record.final_val_accuracy(hyqnn::experiment::FINAL_WINDOW) {
        println!("final validation accuracy {acc:.4}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> hyqnn::Result<()> {
    let mut cfg = sweep_config(&args.common);
    if !args.channels.is_empty() {
        cfg.channels = args.channels;
    }
    cfg.probabilities = if args.probs.is_empty() {
        default_probabilities()
    } else {
        args.probs
    };
    if !args.seeds.is_empty() {
        cfg.seeds = args.seeds;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    let ds = load(&args.common.data)?;
    eprintln!("running {} configurations on {} workers", cfg.runs().len(), cfg.workers);
    let records = run_sweep(&ds, &cfg)?;
    let outputs = write_sweep_outputs(&cfg.out_dir, &records)?;
    let summary = summarize_results_file(&outputs.results)?;
    print!("{}", summary.render_table());
    println!(
        "wrote {} run files, {} and {}",
        outputs.run_files.len(),
        RESULTS_FILE,
        SUMMARY_FILE
    );
    Ok(())
}

fn cmd_summarize(args: SummarizeArgs) -> hyqnn::Result<()> {
    let summary = summarize_results_file(&args.out.join(RESULTS_FILE))?;
    write_summary_file(&args.out.join(SUMMARY_FILE), &summary)?;
    print!("{}", summary.render_table());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Summarize(a) => cmd_summarize(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
