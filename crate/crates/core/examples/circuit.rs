//! Builds the layered classifier circuit for one input, evolves the density
//! matrix and reads out <Z> on qubit 0 with and without noise.

use hyqnn::circuit::{build_hyqnn_circuit, AnsatzConfig};
use hyqnn::simulator::{evolve, run_checked};
use hyqnn::{ChannelKind, ParameterTensor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyqnn::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let params = ParameterTensor::random_uniform(5, &mut rng);
    let features = [0.8, 2.1];

    let clean = AnsatzConfig::noise_free(5);
    let circuit = build_hyqnn_circuit(features, &params, &clean)?;
    println!(
        "noise-free circuit: {} ops, <Z0> = {:+.6}",
        circuit.len(),
        run_checked(&circuit)?
    );

    for kind in ChannelKind::NOISY {
        let cfg = AnsatzConfig::new(5, kind, 0.3)?;
        let circuit = build_hyqnn_circuit(features, &params, &cfg)?;
        let rho = evolve(&circuit)?;
        let purity = rho.matrix().matmul(rho.matrix())?.trace().re;
        println!(
            "{kind:<18} p=0.3: {} ops, <Z0> = {:+.6}, purity {:.4}",
            circuit.len(),
            run_checked(&circuit)?,
            purity
        );
    }
    Ok(())
}
