use super::PayoffTable;
use crate::quantum::DenseOperator;

/// Diagonal `H_p` with entry `(x, x) = -F(x)`.
pub fn problem_hamiltonian(table: &PayoffTable) -> DenseOperator {
    let diag: Vec<f64> = table.values().iter().map(|&v| -v).collect();
    DenseOperator::from_real_diagonal(&diag)
}

/// Diagonal `W` of Hamming weights; its ground state is `|0...0>`.
pub fn hamming_hamiltonian(n_qubits: usize) -> DenseOperator {
    let diag: Vec<f64> = (0..1usize << n_qubits)
        .map(|x| x.count_ones() as f64)
        .collect();
    DenseOperator::from_real_diagonal(&diag)
}

/// One term `c_T · Π_{k∈T} Z_k` of a diagonal Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliZTerm {
    /// Qubit indices, ascending. Empty for the constant term.
    pub qubits: Vec<usize>,
    pub coefficient: f64,
}

/// Expands `H_p` over products of Pauli-Z operators.
///
/// The coefficients are the Walsh-Hadamard transform of the diagonal `-F`,
/// scaled by `2^-N`. Terms are ordered by weight, then lexicographically.
pub fn pauli_z_expansion(table: &PayoffTable) -> Vec<PauliZTerm> {
    let n = table.n_qubits();
    let mut coeffs: Vec<f64> = table.values().iter().map(|&v| -v).collect();
    let mut half = 1;
    while half < coeffs.len() {
        for block in (0..coeffs.len()).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (coeffs[i], coeffs[i + half]);
                coeffs[i] = a + b;
                coeffs[i + half] = a - b;
            }
        }
        half *= 2;
    }
    let scale = 1.0 / coeffs.len() as f64;
    let magnitude = table.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let cutoff = 1e-14 * magnitude;

    let mut terms: Vec<PauliZTerm> = coeffs
        .iter()
        .enumerate()
        .map(|(mask, &c)| PauliZTerm {
            qubits: (0..n).filter(|&q| mask >> (n - 1 - q) & 1 == 1).collect(),
            coefficient: c * scale,
        })
        .filter(|t| t.coefficient.abs() > cutoff)
        .collect();
    terms.sort_by(|a, b| {
        a.qubits
            .len()
            .cmp(&b.qubits.len())
            .then(a.qubits.cmp(&b.qubits))
    });
    terms
}

/// Diagonal of `Σ_T c_T Π_{k∈T} Z_k` on `n_qubits` qubits.
pub fn expansion_diagonal(terms: &[PauliZTerm], n_qubits: usize) -> Vec<f64> {
    (0..1usize << n_qubits)
        .map(|x| {
            terms
                .iter()
                .map(|t| {
                    let parity = t
                        .qubits
                        .iter()
                        .map(|&q| x >> (n_qubits - 1 - q) & 1)
                        .sum::<usize>();
                    if parity % 2 == 0 {
                        t.coefficient
                    } else {
                        -t.coefficient
                    }
                })
                .sum()
        })
        .collect()
}
