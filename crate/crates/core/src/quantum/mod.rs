//! Dense complex linear algebra for small qubit registers.
//!
//! Qubit 0 is the most significant bit of a basis index, so the basis state
//! `|q0 q1 ... q(n-1)>` has index `q0 * 2^(n-1) + ... + q(n-1)`.

mod measurement;
mod operator;
mod spectral;
mod state;

pub use measurement::{measurement_probabilities, sample_measurement, OutcomeSampler, Povm};
pub use operator::{phase_invariant_distance, tensor_product, DenseOperator};
pub use spectral::{eig_hermitian, evolve_hermitian, Spectrum};
pub use state::StateVector;

pub use nalgebra::Complex;

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Normalization tolerance for freshly constructed states.
pub const NORM_TOL: f64 = 1e-10;
/// Hermiticity tolerance for operators tagged Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Unitarity tolerance after products of operators.
pub const UNITARY_TOL: f64 = 1e-9;
/// Completeness and positivity tolerance for POVMs.
pub const POVM_TOL: f64 = 1e-9;

/// Number of qubits for a power-of-two dimension.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    (dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

/// Bit value of `qubit` in basis index `index` on an `n_qubits` register.
#[inline]
pub fn bit(index: usize, qubit: usize, n_qubits: usize) -> usize {
    (index >> (n_qubits - 1 - qubit)) & 1
}

/// Mask selecting `qubit` on an `n_qubits` register.
#[inline]
pub fn qubit_mask(qubit: usize, n_qubits: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}
