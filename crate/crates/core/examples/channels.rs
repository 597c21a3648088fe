//! Builds every noise channel at a few strengths, checks completeness and
//! shows what each one does to the |+> state.

use hyqnn::channels::{build_channel, verify_completeness, ChannelKind};
use hyqnn::ComplexMatrix;

fn main() -> hyqnn::Result<()> {
    let plus = ComplexMatrix::from_real(&[0.5, 0.5, 0.5, 0.5])?;
    for kind in ChannelKind::NOISY {
        for p in [0.1, 0.5, 1.0] {
            let ch = build_channel(kind, p)?;
            let out = ch.apply_single(&plus)?;
            println!(
                "{kind:<18} p={p:.1}  ops={}  complete={}  <Z>={:+.3}  coherence={:.3}",
                ch.kraus_ops().len(),
                verify_completeness(&ch, 1e-12),
                (out[(0, 0)] - out[(1, 1)]).re,
                out[(0, 1)].norm(),
            );
        }
    }
    Ok(())
}
