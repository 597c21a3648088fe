//! Noisy hybrid quantum neural network study.
//!
//! A two-qubit density-matrix simulator with single-qubit Kraus noise, the
//! layered variational classifier built on it, parameter-shift training with
//! Nesterov momentum, and a sweep driver that measures how each noise model
//! affects learnability on the binary Iris task.
//!
//! ```
//! use hyqnn::{AnsatzConfig, ChannelKind, ParameterTensor, model_output};
//!
//! let cfg = AnsatzConfig::new(5, ChannelKind::Depolarizing, 0.75).unwrap();
//! let h = model_output([0.3, 1.2], &ParameterTensor::zeros(5), &cfg).unwrap();
//! assert!(h.abs() < 1e-12);
//! ```

pub mod channels;
pub mod circuit;
pub mod data;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod simulator;
pub mod training;

pub use channels::{apply_channel, build_channel, verify_completeness, ChannelKind, KrausChannel};
pub use circuit::{build_hyqnn_circuit, AnsatzConfig, Circuit, GateOp};
pub use data::{load_iris_binary, prepare, Dataset, IrisSource, PreparedData, PreprocessStats, Sample};
pub use error::{Error, Result};
pub use experiment::{
    execute_run, run_sweep, summarize, write_sweep_outputs, LearnabilitySummary, RunSpec, SweepConfig,
};
pub use linalg::{Complex, ComplexMatrix};
pub use simulator::{expectation_z0, run, run_checked, DensityMatrix};
pub use training::{
    cost_gradient, model_output, nesterov_step, parameter_shift_grad, predict, train, OptimizerState, ParameterTensor,
    RunConfig, RunRecord, StepRecord,
};
