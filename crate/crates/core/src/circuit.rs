//! Gate definitions and the layered noisy ansatz.
//!
//! All rotations use the half-angle convention `R_P(θ) = exp(-iθP/2)`, so each
//! trainable angle sits in a gate whose generator has eigenvalues ±1/2.

use crate::channels::{check_probability, ChannelKind};
use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix, ONE};
use crate::training::ParameterTensor;

pub const N_QUBITS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateOp {
    Rx {
        angle: f64,
        target: usize,
    },
    Ry {
        angle: f64,
        target: usize,
    },
    Rz {
        angle: f64,
        target: usize,
    },
    /// `RZ(omega)·RY(theta)·RZ(phi)`.
    Rot {
        phi: f64,
        theta: f64,
        omega: f64,
        target: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    Channel {
        kind: ChannelKind,
        probability: f64,
        target: usize,
    },
}

impl GateOp {
    fn validate(&self) -> Result<()> {
        let check = |q: usize| {
            if q < N_QUBITS {
                Ok(())
            } else {
                Err(Error::InvalidQubit(q))
            }
        };
        match *self {
            GateOp::Rx { target, .. }
            | GateOp::Ry { target, .. }
            | GateOp::Rz { target, .. }
            | GateOp::Rot { target, .. } => check(target),
            GateOp::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::SameControlTarget(control));
                }
                Ok(())
            }
            GateOp::Channel {
                probability, target, ..
            } => {
                check_probability(probability)?;
                check(target)
            }
        }
    }

    pub fn is_channel(&self) -> bool {
        matches!(self, GateOp::Channel { .. })
    }

    /// The gate's own matrix: 2×2 for single-qubit gates, 4×4 for CNOT.
    /// `None` for channels.
    pub fn local_matrix(&self) -> Option<ComplexMatrix> {
        Some(match *self {
            GateOp::Rx { angle, .. } => rx_matrix(angle),
            GateOp::Ry { angle, .. } => ry_matrix(angle),
            GateOp::Rz { angle, .. } => rz_matrix(angle),
            GateOp::Rot { phi, theta, omega, .. } => rot_matrix(phi, theta, omega),
            GateOp::Cnot { control, .. } => {
                if control == 0 {
                    cnot_matrix()
                } else {
                    reversed_cnot_matrix()
                }
            }
            GateOp::Channel { .. } => return None,
        })
    }
}

pub fn rx_matrix(theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let ms = Complex::new(0.0, -s);
    ComplexMatrix::from_rows(&[Complex::new(c, 0.0), ms, ms, Complex::new(c, 0.0)]).unwrap()
}

pub fn ry_matrix(theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_real(&[c, -s, s, c]).unwrap()
}

pub fn rz_matrix(theta: f64) -> ComplexMatrix {
    let half = theta / 2.0;
    ComplexMatrix::diag(&[Complex::from_polar(1.0, -half), Complex::from_polar(1.0, half)]).unwrap()
}

/// General single-qubit rotation as ZYZ Euler angles.
pub fn rot_matrix(phi: f64, theta: f64, omega: f64) -> ComplexMatrix {
    rz_matrix(omega) * ry_matrix(theta) * rz_matrix(phi)
}

/// CNOT with qubit 0 (most significant) as control.
pub fn cnot_matrix() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4).unwrap();
    for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(r, c)] = ONE;
    }
    m
}

fn reversed_cnot_matrix() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4).unwrap();
    for (r, c) in [(0, 0), (1, 3), (2, 2), (3, 1)] {
        m[(r, c)] = ONE;
    }
    m
}

/// Ordered instruction list on the two-qubit register.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(ops: Vec<GateOp>) -> Result<Self> {
        ops.iter().try_for_each(GateOp::validate)?;
        Ok(Self { ops })
    }

    pub fn n_qubits(&self) -> usize {
        N_QUBITS
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzConfig {
    pub n_layers: usize,
    pub channel: ChannelKind,
    pub probability: f64,
}

impl AnsatzConfig {
    pub fn new(n_layers: usize, channel: ChannelKind, probability: f64) -> Result<Self> {
        if n_layers == 0 {
            return Err(Error::InvalidConfig("ansatz needs at least one layer".into()));
        }
        check_probability(probability)?;
        Ok(Self {
            n_layers,
            channel,
            probability,
        })
    }

    pub fn noise_free(n_layers: usize) -> Self {
        Self {
            n_layers,
            channel: ChannelKind::NoiseFree,
            probability: 0.0,
        }
    }
}

impl Default for AnsatzConfig {
    fn default() -> Self {
        Self::noise_free(5)
    }
}

/// Emits the encoded, layered ansatz for one input sample.
///
/// Encoding: `RX(features[q])` on each qubit. Each layer: a `Rot` per qubit,
/// noise on both qubits, `CNOT(0→1)`, noise on both qubits again. No noise is
/// emitted for [`ChannelKind::NoiseFree`].
pub fn build_hyqnn_circuit(features: [f64; 2], params: &ParameterTensor, cfg: &AnsatzConfig) -> Result<Circuit> {
    if params.n_layers() != cfg.n_layers {
        return Err(Error::ShapeMismatch {
            expected: cfg.n_layers * ParameterTensor::PER_LAYER,
            actual: params.len(),
        });
    }
    check_probability(cfg.probability)?;
    let noisy = cfg.channel.is_noisy();
    let per_layer = if noisy { 7 } else { 3 };
    let mut ops = Vec::with_capacity(2 + cfg.n_layers * per_layer);

    for (q, &x) in features.iter().enumerate() {
        ops.push(GateOp::Rx { angle: x, target: q });
    }
    let noise = |ops: &mut Vec<GateOp>| {
        if noisy {
            for q in 0..N_QUBITS {
                ops.push(GateOp::Channel {
                    kind: cfg.channel,
                    probability: cfg.probability,
                    target: q,
                });
            }
        }
    };
    for layer in 0..cfg.n_layers {
        for q in 0..N_QUBITS {
            let [phi, theta, omega] = params.rot(layer, q);
            ops.push(GateOp::Rot {
                phi,
                theta,
                omega,
                target: q,
            });
        }
        noise(&mut ops);
        ops.push(GateOp::Cnot { control: 0, target: 1 });
        noise(&mut ops);
    }
    Ok(Circuit { ops })
}
