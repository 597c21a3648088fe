//! Single-qubit Kraus noise channels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::consts::{identity2, pauli_x, pauli_y, pauli_z};
use crate::linalg::ComplexMatrix;
use crate::simulator::{embed_single, DensityMatrix};

/// The noise models under study, plus the noise-free benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    #[serde(rename = "none")]
    NoiseFree,
    PhaseFlip,
    BitFlip,
    PhaseDamping,
    AmplitudeDamping,
    Depolarizing,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        ChannelKind::NoiseFree,
        ChannelKind::PhaseFlip,
        ChannelKind::BitFlip,
        ChannelKind::PhaseDamping,
        ChannelKind::AmplitudeDamping,
        ChannelKind::Depolarizing,
    ];

    /// The five noisy kinds, in table order.
    pub const NOISY: [ChannelKind; 5] = [
        ChannelKind::PhaseFlip,
        ChannelKind::BitFlip,
        ChannelKind::PhaseDamping,
        ChannelKind::AmplitudeDamping,
        ChannelKind::Depolarizing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::NoiseFree => "none",
            ChannelKind::PhaseFlip => "phase-flip",
            ChannelKind::BitFlip => "bit-flip",
            ChannelKind::PhaseDamping => "phase-damping",
            ChannelKind::AmplitudeDamping => "amplitude-damping",
            ChannelKind::Depolarizing => "depolarizing",
        }
    }

    pub fn is_noisy(self) -> bool {
        self != ChannelKind::NoiseFree
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownChannel(s.to_string()))
    }
}

/// Kraus representation of one noise model at one strength.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    kind: ChannelKind,
    probability: f64,
    kraus_ops: Vec<ComplexMatrix>,
}

pub fn check_probability(p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// Builds the Kraus set for `kind` at strength `p` (the flip probability, or
/// the damping parameter γ for the damping channels).
///
/// Operators that vanish at the endpoints are kept so every channel of a kind
/// has the same number of operators.
pub fn build_channel(kind: ChannelKind, p: f64) -> Result<KrausChannel> {
    let p = check_probability(p)?;
    let id = identity2();
    let keep = (1.0 - p).sqrt();
    let kraus_ops = match kind {
        ChannelKind::NoiseFree => vec![id],
        ChannelKind::PhaseFlip => vec![id.scale_real(keep), pauli_z().scale_real(p.sqrt())],
        ChannelKind::BitFlip => vec![id.scale_real(keep), pauli_x().scale_real(p.sqrt())],
        ChannelKind::PhaseDamping => vec![
            ComplexMatrix::diag_real(&[1.0, keep])?,
            ComplexMatrix::from_real(&[0.0, 0.0, 0.0, p.sqrt()])?,
        ],
        ChannelKind::AmplitudeDamping => vec![
            ComplexMatrix::diag_real(&[1.0, keep])?,
            ComplexMatrix::from_real(&[0.0, p.sqrt(), 0.0, 0.0])?,
        ],
        ChannelKind::Depolarizing => {
            let w = (p / 3.0).sqrt();
            vec![
                id.scale_real(keep),
                pauli_x().scale_real(w),
                pauli_y().scale_real(w),
                pauli_z().scale_real(w),
            ]
        }
    };
    Ok(KrausChannel {
        kind,
        probability: p,
        kraus_ops,
    })
}

impl KrausChannel {
    /// A channel from arbitrary operators. No completeness check is made;
    /// call [`verify_completeness`] when that matters.
    pub fn from_ops(kind: ChannelKind, probability: f64, kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        check_probability(probability)?;
        if let Some(bad) = kraus_ops.iter().find(|k| k.dim() != 2) {
            return Err(Error::DimensionMismatch {
                left: 2,
                right: bad.dim(),
            });
        }
        Ok(Self {
            kind,
            probability,
            kraus_ops,
        })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    /// `Σ K†K`.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        self.kraus_ops
            .iter()
            .map(|k| k.dagger().mul_unchecked(k))
            .fold(ComplexMatrix::zeros(2).unwrap(), |acc, m| acc + m)
    }

    /// Applies the channel to a bare single-qubit density matrix.
    pub fn apply_single(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                left: 2,
                right: rho.dim(),
            });
        }
        Ok(kraus_sum(&self.kraus_ops, rho))
    }
}

pub fn verify_completeness(ch: &KrausChannel, tol: f64) -> bool {
    ch.completeness_sum().approx_eq(&identity2(), tol)
}

pub(crate) fn kraus_sum(ops: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(rho.dim()).unwrap();
    for k in ops {
        acc = acc + k.mul_unchecked(rho).mul_unchecked(&k.dagger());
    }
    acc
}

/// `ρ → Σ_i K_i ρ K_i†` with each Kraus operator lifted onto qubit `target`.
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel, target: usize) -> Result<DensityMatrix> {
    let lifted = ch
        .kraus_ops
        .iter()
        .map(|k| embed_single(k, target))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityMatrix::from_matrix_unchecked(kraus_sum(&lifted, rho.matrix())))
}

/// Weight `Tr(K†K)` of each operator.
pub fn operator_weights(ch: &KrausChannel) -> Vec<f64> {
    ch.kraus_ops
        .iter()
        .map(|k| k.dagger().mul_unchecked(k).trace().re)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};
    use crate::simulator::reduced_qubit;
    use proptest::prelude::*;

    fn grid() -> impl Iterator<Item = f64> {
        (0..=10).map(|i| i as f64 / 10.0)
    }

    #[test]
    fn kind_strings_round_trip() {
        for k in ChannelKind::ALL {
            assert_eq!(k.as_str().parse::<ChannelKind>().unwrap(), k);
        }
        assert_eq!("Phase-Flip".parse::<ChannelKind>().unwrap(), ChannelKind::PhaseFlip);
        assert!("thermal".parse::<ChannelKind>().is_err());
    }

    #[test]
    fn phase_flip_at_zero_keeps_zero_operator() {
        let ch = build_channel(ChannelKind::PhaseFlip, 0.0).unwrap();
        assert_eq!(ch.kraus_ops().len(), 2);
        assert_eq!(ch.kraus_ops()[0], identity2());
        assert_eq!(ch.kraus_ops()[1], ComplexMatrix::zeros(2).unwrap());
        assert!(verify_completeness(&ch, 1e-12));
    }

    #[test]
    fn bit_flip_at_one() {
        let ch = build_channel(ChannelKind::BitFlip, 1.0).unwrap();
        assert_eq!(ch.kraus_ops()[0], ComplexMatrix::zeros(2).unwrap());
        assert_eq!(ch.kraus_ops()[1], pauli_x());
    }

    #[test]
    fn depolarizing_operator_weights() {
        let ch = build_channel(ChannelKind::Depolarizing, 0.6).unwrap();
        let w = operator_weights(&ch);
        let expected = [0.8, 0.4, 0.4, 0.4];
        assert_eq!(w.len(), 4);
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn out_of_range_probability_rejected() {
        for p in [-0.1, 1.0001, f64::NAN] {
            assert!(matches!(
                build_channel(ChannelKind::Depolarizing, p),
                Err(Error::InvalidProbability(_))
            ));
        }
    }

    #[test]
    fn completeness_examples() {
        assert!(verify_completeness(
            &build_channel(ChannelKind::PhaseDamping, 0.5).unwrap(),
            1e-12
        ));
        assert!(verify_completeness(
            &build_channel(ChannelKind::AmplitudeDamping, 1.0).unwrap(),
            1e-12
        ));
        let doubled = KrausChannel::from_ops(ChannelKind::NoiseFree, 0.0, vec![identity2(), identity2()]).unwrap();
        assert!(!verify_completeness(&doubled, 1e-12));
    }

    #[test]
    fn completeness_over_the_grid() {
        for kind in ChannelKind::ALL {
            for p in grid() {
                let ch = build_channel(kind, p).unwrap();
                assert!(verify_completeness(&ch, 1e-12), "{kind} p={p}");
            }
        }
    }

    fn ket0() -> DensityMatrix {
        DensityMatrix::init_state()
    }

    fn ket10() -> DensityMatrix {
        DensityMatrix::from_matrix(ComplexMatrix::diag_real(&[0.0, 0.0, 1.0, 0.0]).unwrap()).unwrap()
    }

    #[test]
    fn depolarizing_three_quarters_fully_mixes_target() {
        let ch = build_channel(ChannelKind::Depolarizing, 0.75).unwrap();
        let out = apply_channel(&ket0(), &ch, 0).unwrap();
        let q0 = reduced_qubit(&out, 0).unwrap();
        assert!(q0.approx_eq(&identity2().scale_real(0.5), 1e-12));

        // same fixed point on a bare one-qubit state
        let single = ch
            .apply_single(&ComplexMatrix::projector(&[ONE, ZERO]).unwrap())
            .unwrap();
        assert!(single.approx_eq(&identity2().scale_real(0.5), 1e-12));
    }

    #[test]
    fn amplitude_damping_decays_excited_state() {
        let ch = build_channel(ChannelKind::AmplitudeDamping, 0.4).unwrap();
        let out = apply_channel(&ket10(), &ch, 0).unwrap();
        let q0 = reduced_qubit(&out, 0).unwrap();
        assert!(q0.approx_eq(&ComplexMatrix::diag_real(&[0.4, 0.6]).unwrap(), 1e-12));
        // qubit 1 untouched
        let q1 = reduced_qubit(&out, 1).unwrap();
        assert!(q1.approx_eq(&ComplexMatrix::diag_real(&[1.0, 0.0]).unwrap(), 1e-12));
    }

    #[test]
    fn phase_flip_leaves_diagonal_states_alone() {
        let rho = DensityMatrix::from_matrix(ComplexMatrix::diag_real(&[0.1, 0.2, 0.3, 0.4]).unwrap()).unwrap();
        for p in grid() {
            let ch = build_channel(ChannelKind::PhaseFlip, p).unwrap();
            for t in 0..2 {
                let out = apply_channel(&rho, &ch, t).unwrap();
                assert!(out.matrix().approx_eq(rho.matrix(), 1e-15));
            }
        }
    }

    #[test]
    fn invalid_target_rejected() {
        let ch = build_channel(ChannelKind::BitFlip, 0.3).unwrap();
        assert!(matches!(apply_channel(&ket0(), &ch, 2), Err(Error::InvalidQubit(2))));
    }

    proptest! {
        #[test]
        fn depolarizing_matches_closed_form(
            rho in crate::simulator::tests::arb_density(),
            p in 0.0f64..=1.0,
            target in 0usize..2,
        ) {
            let ch = build_channel(ChannelKind::Depolarizing, p).unwrap();
            let out = apply_channel(&rho, &ch, target).unwrap();
            let got = reduced_qubit(&out, target).unwrap();
            let r = reduced_qubit(&rho, target).unwrap();
            let expected = r.scale_real(1.0 - 4.0 * p / 3.0) + identity2().scale_real(2.0 * p / 3.0);
            prop_assert!(got.approx_eq(&expected, 1e-12));
        }

        #[test]
        fn dephasing_channels_keep_populations(
            rho in crate::simulator::tests::arb_density(),
            p in 0.0f64..=1.0,
            target in 0usize..2,
        ) {
            for kind in [ChannelKind::PhaseFlip, ChannelKind::PhaseDamping] {
                let out = apply_channel(&rho, &build_channel(kind, p).unwrap(), target).unwrap();
                for i in 0..4 {
                    prop_assert!((out.matrix()[(i, i)] - rho.matrix()[(i, i)]).norm() < 1e-12);
                }
            }
        }
    }
}
