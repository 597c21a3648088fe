//! Parameter-shift gradient of the model output next to a central finite
//! difference, for a noisy circuit.

use hyqnn::circuit::AnsatzConfig;
use hyqnn::training::{model_output, parameter_shift_grad, ParameterTensor};
use hyqnn::ChannelKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyqnn::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let params = ParameterTensor::random_uniform(5, &mut rng);
    let cfg = AnsatzConfig::new(5, ChannelKind::AmplitudeDamping, 0.4)?;
    let x = [1.2, 0.4];

    let grad = parameter_shift_grad(x, &params, &cfg)?;
    let h = 1e-5;
    let mut worst = 0.0f64;
    for (i, g) in grad.iter().enumerate() {
        let shifted = |d: f64| -> hyqnn::Result<f64> {
            let mut v = params.as_slice().to_vec();
            v[i] += d;
            model_output(x, &ParameterTensor::from_flat(5, v)?, &cfg)
        };
        let fd = (shifted(h)? - shifted(-h)?) / (2.0 * h);
        worst = worst.max((g - fd).abs());
        if i < 6 {
            println!("param {i:2}: shift {g:+.8}  finite diff {fd:+.8}");
        }
    }
    println!("{} parameters, largest difference {worst:.2e}", grad.len());
    Ok(())
}
