//! Exact density-matrix evolution of a two-qubit [`Circuit`].

use crate::channels::{apply_channel, build_channel};
use crate::circuit::{Circuit, GateOp, N_QUBITS};
use crate::error::{Error, Result};
use crate::linalg::consts::{identity2, pauli_z};
use crate::linalg::ComplexMatrix;

/// Tolerance for the trace, Hermiticity and positivity invariants.
pub const STATE_TOL: f64 = 1e-10;

/// Imaginary residue of `Tr(ρ Z₀)` above which something upstream is broken.
const IMAG_LIMIT: f64 = 1e-8;

/// Two-qubit density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// `|00⟩⟨00|`.
    pub fn init_state() -> Self {
        DensityMatrix(ComplexMatrix::diag_real(&[1.0, 0.0, 0.0, 0.0]).unwrap())
    }

    /// Wraps a 4×4 matrix after checking the state invariants.
    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch {
                left: 4,
                right: m.dim(),
            });
        }
        let rho = DensityMatrix(m);
        rho.validate(STATE_TOL)
            .map_err(|reason| Error::InvalidState { index: 0, reason })?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        DensityMatrix(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Checks unit trace, Hermiticity and positive semidefiniteness.
    pub fn validate(&self, tol: f64) -> std::result::Result<(), String> {
        let m = &self.0;
        if !m.is_finite() {
            return Err("non-finite entry".into());
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(format!("trace {tr}"));
        }
        if !m.is_hermitian(tol) {
            return Err("not Hermitian".into());
        }
        let min = m.min_eigenvalue(tol).map_err(|e| e.to_string())?;
        if min < -tol {
            return Err(format!("negative eigenvalue {min:e}"));
        }
        Ok(())
    }
}

/// Lifts a 2×2 operator onto qubit `target` of the register.
pub fn embed_single(op: &ComplexMatrix, target: usize) -> Result<ComplexMatrix> {
    match target {
        0 => op.kron(&identity2()),
        1 => identity2().kron(op),
        q => Err(Error::InvalidQubit(q)),
    }
}

/// Reduced single-qubit state of `qubit` (partial trace over the other).
pub fn reduced_qubit(rho: &DensityMatrix, qubit: usize) -> Result<ComplexMatrix> {
    if qubit >= N_QUBITS {
        return Err(Error::InvalidQubit(qubit));
    }
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(2)?;
    for a in 0..2 {
        for b in 0..2 {
            out[(a, b)] = (0..2)
                .map(|k| {
                    let (r, c) = if qubit == 0 {
                        (2 * a + k, 2 * b + k)
                    } else {
                        (2 * k + a, 2 * k + b)
                    };
                    m[(r, c)]
                })
                .sum();
        }
    }
    Ok(out)
}

/// Full-register matrix of a unitary instruction.
pub fn full_unitary(op: &GateOp) -> Result<ComplexMatrix> {
    match *op {
        GateOp::Channel { kind, .. } => Err(Error::NotUnitary(kind)),
        GateOp::Cnot { .. } => Ok(op.local_matrix().expect("unitary op")),
        GateOp::Rx { target, .. }
        | GateOp::Ry { target, .. }
        | GateOp::Rz { target, .. }
        | GateOp::Rot { target, .. } => embed_single(&op.local_matrix().expect("unitary op"), target),
    }
}

/// `ρ → UρU†`. Fails for channel instructions.
pub fn apply_unitary(rho: &DensityMatrix, op: &GateOp) -> Result<DensityMatrix> {
    let u = full_unitary(op)?;
    Ok(DensityMatrix(u.mul_unchecked(rho.matrix()).mul_unchecked(&u.dagger())))
}

/// Applies any instruction, unitary or channel.
pub fn apply_op(rho: &DensityMatrix, op: &GateOp) -> Result<DensityMatrix> {
    match *op {
        GateOp::Channel {
            kind,
            probability,
            target,
        } => apply_channel(rho, &build_channel(kind, probability)?, target),
        _ => apply_unitary(rho, op),
    }
}

/// `Tr(ρ·(Z⊗I))`.
pub fn expectation_z0(rho: &DensityMatrix) -> Result<f64> {
    let z0 = pauli_z().kron(&identity2())?;
    let v = z0.mul_unchecked(rho.matrix()).trace();
    if v.im.abs() > IMAG_LIMIT {
        return Err(Error::ImaginaryExpectation(v.im));
    }
    Ok(v.re.clamp(-1.0, 1.0))
}

pub fn evolve(circuit: &Circuit) -> Result<DensityMatrix> {
    circuit
        .ops()
        .iter()
        .try_fold(DensityMatrix::init_state(), |rho, op| apply_op(&rho, op))
}

/// Runs `circuit` from `|00⟩` and returns `⟨Z₀⟩`.
pub fn run(circuit: &Circuit) -> Result<f64> {
    expectation_z0(&evolve(circuit)?)
}

/// Like [`run`], but validates the state invariants after every instruction.
pub fn run_checked(circuit: &Circuit) -> Result<f64> {
    let mut rho = DensityMatrix::init_state();
    for (index, op) in circuit.ops().iter().enumerate() {
        rho = apply_op(&rho, op)?;
        rho.validate(STATE_TOL)
            .map_err(|reason| Error::InvalidState { index, reason })?;
    }
    expectation_z0(&rho)
}
