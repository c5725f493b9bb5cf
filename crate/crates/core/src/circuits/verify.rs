use super::gate::{circuit_to_matrix, Circuit};
use crate::error::{Error, Result};
use crate::quantum::{phase_invariant_distance, DenseOperator};

pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub distance: f64,
    pub pass: bool,
}

/// Compares the circuit's unitary with `target`, ignoring global phase.
pub fn verify_circuit(circuit: &Circuit, target: &DenseOperator) -> Result<VerifyReport> {
    let dim = 1usize << circuit.n_qubits();
    if target.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: target.dim(),
        });
    }
    let distance = phase_invariant_distance(&circuit_to_matrix(circuit)?, target)?;
    Ok(VerifyReport {
        distance,
        pass: distance <= VERIFY_TOL,
    })
}
