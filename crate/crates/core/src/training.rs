//! Parameter-shift gradients, square loss, Nesterov momentum and the
//! mini-batch training loop.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::channels::ChannelKind;
use crate::circuit::{build_hyqnn_circuit, AnsatzConfig, N_QUBITS};
use crate::data::Sample;
use crate::error::{Error, Result};
use crate::simulator;

/// Trainable rotation angles, indexed `[layer][qubit][angle]` and stored flat.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterTensor {
    n_layers: usize,
    values: Vec<f64>,
}

impl ParameterTensor {
    pub const ANGLES: usize = 3;
    pub const PER_LAYER: usize = N_QUBITS * Self::ANGLES;

    pub fn zeros(n_layers: usize) -> Self {
        Self {
            n_layers,
            values: vec![0.0; n_layers * Self::PER_LAYER],
        }
    }

    pub fn from_flat(n_layers: usize, values: Vec<f64>) -> Result<Self> {
        let expected = n_layers * Self::PER_LAYER;
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("parameters must be finite".into()));
        }
        Ok(Self { n_layers, values })
    }

    /// I.i.d. `N(0, std²)` angles.
    pub fn random_normal<R: Rng + ?Sized>(n_layers: usize, std: f64, rng: &mut R) -> Result<Self> {
        let normal = Normal::new(0.0, std).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let values = (0..n_layers * Self::PER_LAYER).map(|_| normal.sample(rng)).collect();
        Ok(Self { n_layers, values })
    }

    /// I.i.d. uniform angles in `[-π, π)`.
    pub fn random_uniform<R: Rng + ?Sized>(n_layers: usize, rng: &mut R) -> Self {
        let values = (0..n_layers * Self::PER_LAYER)
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        Self { n_layers, values }
    }

    pub fn n_layers(&self) -> usize {
        self.n_layers
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn flat_index(layer: usize, qubit: usize, angle: usize) -> usize {
        layer * Self::PER_LAYER + qubit * Self::ANGLES + angle
    }

    pub fn get(&self, layer: usize, qubit: usize, angle: usize) -> f64 {
        self.values[Self::flat_index(layer, qubit, angle)]
    }

    /// `[phi, theta, omega]` of the rotation on `qubit` in `layer`.
    pub fn rot(&self, layer: usize, qubit: usize) -> [f64; 3] {
        let i = Self::flat_index(layer, qubit, 0);
        [self.values[i], self.values[i + 1], self.values[i + 2]]
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            n_layers: self.n_layers,
            values,
        }
    }
}

/// `h(x)`: the qubit-0 Pauli-Z expectation of the encoded ansatz.
pub fn model_output(features: [f64; 2], params: &ParameterTensor, cfg: &AnsatzConfig) -> Result<f64> {
    simulator::run(&build_hyqnn_circuit(features, params, cfg)?)
}

pub fn square_loss(label: f64, h: f64) -> f64 {
    (label - h) * (label - h)
}

/// Mean square loss over `(label, h)` pairs; zero for an empty batch.
pub fn batch_cost(pairs: &[(f64, f64)]) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    pairs.iter().map(|&(y, h)| square_loss(y, h)).sum::<f64>() / pairs.len() as f64
}

/// Class label from the model output; ties go to +1.
pub fn predict(h: f64) -> f64 {
    if h >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Two-term parameter-shift rule with shift π/2:
/// `∂f/∂θᵢ = [f(θᵢ + π/2) − f(θᵢ − π/2)] / 2`.
///
/// Exact for any `f` in which each parameter enters through a single
/// half-angle rotation gate.
pub fn parameter_shift<F>(mut f: F, params: &[f64]) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut shifted = params.to_vec();
    let mut grad = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        shifted[i] = params[i] + FRAC_PI_2;
        let plus = f(&shifted)?;
        shifted[i] = params[i] - FRAC_PI_2;
        let minus = f(&shifted)?;
        shifted[i] = params[i];
        grad.push(0.5 * (plus - minus));
    }
    Ok(grad)
}

/// Gradient of `h(x)` with respect to every ansatz parameter, flat order.
pub fn parameter_shift_grad(features: [f64; 2], params: &ParameterTensor, cfg: &AnsatzConfig) -> Result<Vec<f64>> {
    parameter_shift(
        |v| model_output(features, &params.with_values(v.to_vec()), cfg),
        params.as_slice(),
    )
}

/// Gradient of the mean square loss over `batch`:
/// mean of `−2(y − h)·∇h`.
pub fn cost_gradient(batch: &[Sample], params: &ParameterTensor, cfg: &AnsatzConfig) -> Result<Vec<f64>> {
    let mut total = vec![0.0; params.len()];
    if batch.is_empty() {
        return Ok(total);
    }
    for s in batch {
        let h = model_output(s.angles, params, cfg)?;
        let weight = -2.0 * (s.label - h);
        if weight == 0.0 {
            continue;
        }
        let g = parameter_shift_grad(s.angles, params, cfg)?;
        total.iter_mut().zip(g).for_each(|(t, gi)| *t += weight * gi);
    }
    let n = batch.len() as f64;
    total.iter_mut().for_each(|t| *t /= n);
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerState {
    pub velocity: Vec<f64>,
    pub learning_rate: f64,
    pub momentum: f64,
}

impl OptimizerState {
    pub fn new(n_params: usize, learning_rate: f64, momentum: f64) -> Result<Self> {
        if !(learning_rate > 0.0 && learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "learning rate {learning_rate} must be positive"
            )));
        }
        if !(0.0..1.0).contains(&momentum) {
            return Err(Error::InvalidConfig(format!("momentum {momentum} must lie in [0, 1)")));
        }
        Ok(Self {
            velocity: vec![0.0; n_params],
            learning_rate,
            momentum,
        })
    }
}

/// One Nesterov update with the gradient taken at the look-ahead point:
///
/// ```text
/// v' = μ·v + η·∇f(θ − μ·v)
/// θ' = θ − v'
/// ```
pub fn nesterov_step<G>(params: &[f64], state: &OptimizerState, mut grad_fn: G) -> Result<(Vec<f64>, OptimizerState)>
where
    G: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    if params.len() != state.velocity.len() {
        return Err(Error::ShapeMismatch {
            expected: state.velocity.len(),
            actual: params.len(),
        });
    }
    let mu = state.momentum;
    let lookahead: Vec<f64> = params.iter().zip(&state.velocity).map(|(p, v)| p - mu * v).collect();
    let grad = grad_fn(&lookahead)?;
    if grad.len() != params.len() {
        return Err(Error::ShapeMismatch {
            expected: params.len(),
            actual: grad.len(),
        });
    }
    let velocity: Vec<f64> = state
        .velocity
        .iter()
        .zip(&grad)
        .map(|(v, g)| mu * v + state.learning_rate * g)
        .collect();
    let next = params.iter().zip(&velocity).map(|(p, v)| p - v).collect();
    Ok((
        next,
        OptimizerState {
            velocity,
            learning_rate: state.learning_rate,
            momentum: mu,
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub steps: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub init_std: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            steps: 100,
            batch_size: 5,
            learning_rate: 0.01,
            momentum: 0.9,
            init_std: 0.1,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub cost: f64,
    pub train_accuracy: f64,
    pub val_accuracy: f64,
}

/// History of one training run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub channel: ChannelKind,
    pub probability: f64,
    pub seed: u64,
    pub steps: Vec<StepRecord>,
    pub initial_params: ParameterTensor,
    pub final_params: ParameterTensor,
}

impl RunRecord {
    /// Mean validation accuracy over the last `window` recorded steps.
    pub fn final_val_accuracy(&self, window: usize) -> Option<f64> {
        let n = self.steps.len().min(window);
        if n == 0 {
            return None;
        }
        let tail = &self.steps[self.steps.len() - n..];
        Some(tail.iter().map(|s| s.val_accuracy).sum::<f64>() / n as f64)
    }
}

/// Evaluates `h` on every sample.
pub fn outputs(samples: &[Sample], params: &ParameterTensor, cfg: &AnsatzConfig) -> Result<Vec<f64>> {
    samples.iter().map(|s| model_output(s.angles, params, cfg)).collect()
}

fn accuracy(samples: &[Sample], hs: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let hits = samples.iter().zip(hs).filter(|(s, &h)| predict(h) == s.label).count();
    hits as f64 / samples.len() as f64
}

/// Fraction of `samples` classified correctly.
pub fn evaluate_accuracy(samples: &[Sample], params: &ParameterTensor, cfg: &AnsatzConfig) -> Result<f64> {
    Ok(accuracy(samples, &outputs(samples, params, cfg)?))
}

/// Trains the ansatz with mini-batch Nesterov momentum.
///
/// Each step draws `batch_size` training samples uniformly with replacement,
/// takes one optimizer step, then records the batch cost and full-split
/// accuracies at the updated parameters. All randomness comes from a
/// ChaCha8 stream seeded with `run.seed`.
pub fn train(train_set: &[Sample], val_set: &[Sample], cfg: &AnsatzConfig, run: &RunConfig) -> Result<RunRecord> {
    if train_set.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if run.batch_size == 0 {
        return Err(Error::InvalidConfig("batch size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);

    let initial = ParameterTensor::random_normal(cfg.n_layers, run.init_std, &mut rng)?;
    let mut state = OptimizerState::new(initial.len(), run.learning_rate, run.momentum)?;
    let mut params = initial.clone();
    let mut history = Vec::with_capacity(run.steps);

    for step in 1..=run.steps {
        let idx: Vec<usize> = (0..run.batch_size)
            .map(|_| rng.random_range(0..train_set.len()))
            .collect();
        let batch: Vec<Sample> = idx.iter().map(|&i| train_set[i]).collect();

        let (next, next_state) = nesterov_step(params.as_slice(), &state, |v| {
            cost_gradient(&batch, &params.with_values(v.to_vec()), cfg)
        })?;
        params = params.with_values(next);
        state = next_state;

        let train_h = outputs(train_set, &params, cfg)?;
        let val_h = outputs(val_set, &params, cfg)?;
        let pairs: Vec<(f64, f64)> = idx.iter().map(|&i| (train_set[i].label, train_h[i])).collect();
        history.push(StepRecord {
            step,
            cost: batch_cost(&pairs),
            train_accuracy: accuracy(train_set, &train_h),
            val_accuracy: accuracy(val_set, &val_h),
        });
    }

    Ok(RunRecord {
        channel: cfg.channel,
        probability: cfg.probability,
        seed: run.seed,
        steps: history,
        initial_params: initial,
        final_params: params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, GateOp};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn sample(x: [f64; 2], y: f64) -> Sample {
        Sample { angles: x, label: y }
    }

    #[test]
    fn model_output_examples() {
        let zero = ParameterTensor::zeros(5);
        let clean = AnsatzConfig::noise_free(5);
        assert!((model_output([0.0, 0.0], &zero, &clean).unwrap() - 1.0).abs() < 1e-12);
        assert!((model_output([PI, 0.0], &zero, &clean).unwrap() + 1.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = ParameterTensor::random_uniform(5, &mut rng);
        let depol = AnsatzConfig::new(5, ChannelKind::Depolarizing, 0.75).unwrap();
        assert!(model_output([0.7, 2.1], &params, &depol).unwrap().abs() < 1e-12);
    }

    #[test]
    fn loss_examples() {
        assert_eq!(square_loss(1.0, 1.0), 0.0);
        assert_eq!(square_loss(-1.0, 1.0), 4.0);
        assert!((batch_cost(&[(1.0, 0.5), (-1.0, -0.5)]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn predict_examples() {
        assert_eq!(predict(0.3), 1.0);
        assert_eq!(predict(-0.9), -1.0);
        assert_eq!(predict(0.0), 1.0);
    }

    #[test]
    fn shift_rule_on_single_rx() {
        let f = |v: &[f64]| simulator::run(&Circuit::new(vec![GateOp::Rx { angle: v[0], target: 0 }])?);
        let g = parameter_shift(f, &[PI / 3.0]).unwrap();
        assert!((g[0] + (PI / 3.0).sin()).abs() < 1e-12);
        assert!((g[0] + 0.86603).abs() < 1e-5);
        let g0 = parameter_shift(f, &[0.0]).unwrap();
        assert!(g0[0].abs() < 1e-15);
    }

    #[test]
    fn shift_rule_vanishes_at_depolarizing_fixed_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let params = ParameterTensor::random_uniform(5, &mut rng);
        let cfg = AnsatzConfig::new(5, ChannelKind::Depolarizing, 0.75).unwrap();
        let g = parameter_shift_grad([1.0, 0.4], &params, &cfg).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-12));
    }

    /// Central finite differences, step `h`.
    fn finite_difference<F: FnMut(&[f64]) -> f64>(mut f: F, x: &[f64], h: f64) -> Vec<f64> {
        let mut v = x.to_vec();
        (0..x.len())
            .map(|i| {
                v[i] = x[i] + h;
                let plus = f(&v);
                v[i] = x[i] - h;
                let minus = f(&v);
                v[i] = x[i];
                (plus - minus) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn cost_gradient_zero_when_fitted() {
        let params = ParameterTensor::zeros(5);
        let cfg = AnsatzConfig::noise_free(5);
        let batch = [sample([0.0, 0.3], 1.0), sample([PI, 1.0], -1.0)];
        let g = cost_gradient(&batch, &params, &cfg).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn cost_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let params = ParameterTensor::random_uniform(5, &mut rng);
        let cfg = AnsatzConfig::new(5, ChannelKind::AmplitudeDamping, 0.3).unwrap();
        let s = sample([0.9, 2.2], -1.0);
        let g = cost_gradient(&[s], &params, &cfg).unwrap();
        let fd = finite_difference(
            |v| {
                square_loss(
                    s.label,
                    model_output(s.angles, &params.with_values(v.to_vec()), &cfg).unwrap(),
                )
            },
            params.as_slice(),
            1e-5,
        );
        for (a, b) in g.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn cost_gradient_is_mean_of_singles() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let params = ParameterTensor::random_uniform(5, &mut rng);
        let cfg = AnsatzConfig::new(5, ChannelKind::BitFlip, 0.2).unwrap();
        let a = sample([0.2, 0.4], 1.0);
        let b = sample([2.5, 1.4], -1.0);
        let both = cost_gradient(&[a, b], &params, &cfg).unwrap();
        let ga = cost_gradient(&[a], &params, &cfg).unwrap();
        let gb = cost_gradient(&[b], &params, &cfg).unwrap();
        for i in 0..both.len() {
            assert!((both[i] - 0.5 * (ga[i] + gb[i])).abs() < 1e-14);
        }
    }

    #[test]
    fn nesterov_without_momentum_is_plain_descent() {
        let state = OptimizerState::new(2, 0.1, 0.0).unwrap();
        let (p, _) = nesterov_step(&[1.0, -2.0], &state, |_| Ok(vec![0.5, -1.0])).unwrap();
        assert!((p[0] - 0.95).abs() < 1e-15 && (p[1] + 1.9).abs() < 1e-15);
    }

    #[test]
    fn nesterov_zero_gradient_is_fixed_point() {
        let state = OptimizerState::new(3, 0.01, 0.9).unwrap();
        let (p, s) = nesterov_step(&[0.1, 0.2, 0.3], &state, |v| Ok(vec![0.0; v.len()])).unwrap();
        assert_eq!(p, vec![0.1, 0.2, 0.3]);
        assert_eq!(s.velocity, vec![0.0; 3]);
    }

    #[test]
    fn nesterov_quadratic_bowl_first_step() {
        let state = OptimizerState::new(1, 0.01, 0.9).unwrap();
        let (p, s) = nesterov_step(&[1.0], &state, |v| Ok(vec![2.0 * v[0]])).unwrap();
        assert!((p[0] - 0.98).abs() < 1e-15);
        assert!((s.velocity[0] - 0.02).abs() < 1e-15);
        // second step uses the look-ahead 0.98 - 0.9·0.02
        let (p2, _) = nesterov_step(&p, &s, |v| Ok(vec![2.0 * v[0]])).unwrap();
        let look = 0.98 - 0.9 * 0.02;
        assert!((p2[0] - (0.98 - (0.9 * 0.02 + 0.01 * 2.0 * look))).abs() < 1e-15);
    }

    #[test]
    fn optimizer_rejects_bad_hyperparameters() {
        assert!(OptimizerState::new(1, 0.0, 0.9).is_err());
        assert!(OptimizerState::new(1, 0.01, 1.0).is_err());
    }

    fn toy_sets() -> (Vec<Sample>, Vec<Sample>) {
        let train = vec![
            sample([0.1, 0.2], -1.0),
            sample([0.3, 0.1], -1.0),
            sample([2.8, 2.9], 1.0),
            sample([2.5, 3.0], 1.0),
        ];
        let val = vec![sample([0.2, 0.2], -1.0), sample([2.7, 2.6], 1.0)];
        (train, val)
    }

    #[test]
    fn zero_steps_returns_initial_parameters() {
        let (tr, va) = toy_sets();
        let run = RunConfig {
            steps: 0,
            seed: 4,
            ..RunConfig::default()
        };
        let rec = train(&tr, &va, &AnsatzConfig::noise_free(5), &run).unwrap();
        assert!(rec.steps.is_empty());
        assert_eq!(rec.initial_params, rec.final_params);
        assert_eq!(rec.final_val_accuracy(10), None);
    }

    #[test]
    fn training_is_reproducible() {
        let (tr, va) = toy_sets();
        let cfg = AnsatzConfig::new(2, ChannelKind::PhaseDamping, 0.3).unwrap();
        let run = RunConfig {
            steps: 4,
            seed: 17,
            ..RunConfig::default()
        };
        let a = train(&tr, &va, &cfg, &run).unwrap();
        let b = train(&tr, &va, &cfg, &run).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.steps.len(), 4);
        for s in &a.steps {
            assert!(s.cost >= 0.0);
            assert!((0.0..=1.0).contains(&s.train_accuracy));
            assert!((0.0..=1.0).contains(&s.val_accuracy));
        }
    }

    #[test]
    fn empty_training_set_rejected() {
        let cfg = AnsatzConfig::noise_free(1);
        assert!(matches!(
            train(&[], &[], &cfg, &RunConfig::default()),
            Err(Error::EmptyTrainingSet)
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn shift_rule_matches_finite_differences(
            vals in prop::collection::vec(-PI..PI, 30),
            x0 in 0.0f64..PI, x1 in 0.0f64..PI,
            k in 0usize..6,
            pi in 0usize..3,
        ) {
            let p = [0.0, 0.5, 1.0][pi];
            let params = ParameterTensor::from_flat(5, vals).unwrap();
            let cfg = AnsatzConfig::new(5, ChannelKind::ALL[k], p).unwrap();
            let g = parameter_shift_grad([x0, x1], &params, &cfg).unwrap();
            let fd = finite_difference(
                |v| model_output([x0, x1], &params.with_values(v.to_vec()), &cfg).unwrap(),
                params.as_slice(),
                1e-5,
            );
            for (a, b) in g.iter().zip(&fd) {
                prop_assert!((a - b).abs() < 1e-6);
            }
        }

        #[test]
        fn dephasing_noise_is_invisible_with_zero_rotations(
            x0 in 0.0f64..PI, x1 in 0.0f64..PI, p in 0.0f64..=1.0,
        ) {
            let params = ParameterTensor::zeros(1);
            let clean = model_output([x0, x1], &params, &AnsatzConfig::noise_free(1)).unwrap();
            for kind in [ChannelKind::PhaseFlip, ChannelKind::PhaseDamping] {
                let cfg = AnsatzConfig::new(1, kind, p).unwrap();
                prop_assert!((model_output([x0, x1], &params, &cfg).unwrap() - clean).abs() < 1e-12);
            }
        }
    }
}
