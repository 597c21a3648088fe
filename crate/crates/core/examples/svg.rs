//! Renders the seed-averaged accuracy curves of one configuration to SVG.
//!
//! Usage: `cargo run --release --example svg -- [file.svg]`

use hyqnn::experiment::{emit_group_svg, execute_run, RunSpec, SweepConfig};
use hyqnn::{load_iris_binary, ChannelKind, IrisSource};

fn main() -> hyqnn::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "phase-damping_0.2.svg".into());
    let ds = load_iris_binary(IrisSource::Embedded)?;
    let cfg = SweepConfig::default();
    let records = (1..=3)
        .map(|seed| {
            let spec = RunSpec {
                channel: ChannelKind::PhaseDamping,
                probability: 0.2,
                seed,
            };
            execute_run(&ds, &spec, &cfg)
        })
        .collect::<hyqnn::Result<Vec<_>>>()?;
    let group: Vec<_> = records.iter().collect();
    let svg = emit_group_svg("phase-damping p=0.2", &group);
    std::fs::write(&path, svg).map_err(|e| hyqnn::Error::Io {
        path: path.clone().into(),
        source: e,
    })?;
    println!("wrote {path}");
    Ok(())
}
