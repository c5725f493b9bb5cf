use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{DenseOperator, C64};
use crate::error::Result;

/// Eigendecomposition `H = Q Λ Q†` with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: DMatrix<C64>,
}

impl Spectrum {
    /// `λ1 - λ0`, or `None` for one-dimensional operators.
    pub fn ground_gap(&self) -> Option<f64> {
        (self.eigenvalues.len() >= 2).then(|| self.eigenvalues[1] - self.eigenvalues[0])
    }

    pub fn reconstruct(&self) -> DenseOperator {
        let lambda = DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| C64::new(l, 0.0)),
        );
        let q = &self.eigenvectors;
        DenseOperator::new(q * DMatrix::from_diagonal(&lambda) * q.adjoint())
            .expect("spectral reconstruction is square")
    }
}

pub fn eig_hermitian(h: &DenseOperator) -> Result<Spectrum> {
    h.require_hermitian()?;
    let n = h.dim();
    if let Some(diag) = h.real_diagonal() {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
        let mut vectors = DMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            vectors[(i, col)] = C64::new(1.0, 0.0);
        }
        return Ok(Spectrum {
            eigenvalues: order.iter().map(|&i| diag[i]).collect(),
            eigenvectors: vectors,
        });
    }

    // Symmetrize away rounding asymmetry before handing off to the solver.
    let sym = (h.entries() + h.entries().adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// `exp(-i H t)` by spectral decomposition.
pub fn evolve_hermitian(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    h.require_hermitian()?;
    if let Some(diag) = h.real_diagonal() {
        let phases: Vec<C64> = diag.iter().map(|&e| C64::from_polar(1.0, -e * t)).collect();
        return Ok(DenseOperator::from_diagonal(&phases));
    }
    let spec = eig_hermitian(h)?;
    let phases = DVector::from_iterator(
        spec.eigenvalues.len(),
        spec.eigenvalues
            .iter()
            .map(|&e| C64::from_polar(1.0, -e * t)),
    );
    let q = &spec.eigenvectors;
    DenseOperator::new(q * DMatrix::from_diagonal(&phases) * q.adjoint())
}
