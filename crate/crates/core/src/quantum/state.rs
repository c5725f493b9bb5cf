use nalgebra::DVector;

use super::{qubits_for_dim, C64, NORM_TOL};
use crate::error::{Error, Result};

/// Normalized amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
    n_qubits: usize,
}

impl StateVector {
    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    /// Wraps an amplitude vector that is already normalized.
    pub fn from_amplitudes(amplitudes: impl Into<DVector<C64>>) -> Result<Self> {
        let amplitudes = amplitudes.into();
        let n_qubits =
            qubits_for_dim(amplitudes.len()).ok_or(Error::NotPowerOfTwo(amplitudes.len()))?;
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: impl Into<DVector<C64>>) -> Result<Self> {
        let amplitudes = amplitudes.into();
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        Self::from_amplitudes(amplitudes.unscale(norm))
    }

    /// Uniform superposition over the listed basis indices.
    pub fn uniform_over(n_qubits: usize, indices: &[usize]) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let mut amplitudes = DVector::zeros(dim);
        for &i in indices {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            amplitudes[i] += C64::new(1.0, 0.0);
        }
        Self::normalized(amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `|<index|psi>|^2`.
    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    /// Elementwise `|amplitude|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Tensor product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            n_qubits: self.n_qubits + other.n_qubits,
        }
    }

    /// Probability mass outside the span of the listed basis states.
    pub fn leakage_outside(&self, indices: &[usize]) -> f64 {
        let inside: f64 = indices.iter().map(|&i| self.probability(i)).sum();
        (self.norm_sqr() - inside).max(0.0)
    }

    /// Index of the largest-probability basis state among `indices`.
    pub fn argmax_over(&self, indices: &[usize]) -> Option<usize> {
        indices.iter().copied().max_by(|&a, &b| {
            self.probability(a)
                .partial_cmp(&self.probability(b))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }

    pub(crate) fn from_raw(amplitudes: DVector<C64>, n_qubits: usize) -> Self {
        Self {
            amplitudes,
            n_qubits,
        }
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut DVector<C64> {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_state_is_normalized() {
        let s = StateVector::basis(3, 5).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.probability(5), 1.0);
        assert!(StateVector::basis(2, 4).is_err());
    }

    #[test]
    fn rejects_unnormalized_and_odd_lengths() {
        let v = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(
            StateVector::from_amplitudes(v.clone()),
            Err(Error::NotNormalized { .. })
        ));
        assert!(StateVector::normalized(v).is_ok());
        let odd = DVector::from_vec(vec![C64::new(1.0, 0.0); 3]);
        assert!(matches!(
            StateVector::normalized(odd),
            Err(Error::NotPowerOfTwo(3))
        ));
    }

    #[test]
    fn leakage_and_argmax() {
        let s = StateVector::uniform_over(2, &[0, 3]).unwrap();
        assert!(s.leakage_outside(&[0, 3]) < 1e-15);
        assert!((s.leakage_outside(&[0]) - 0.5).abs() < 1e-15);
        let t = StateVector::normalized(DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 2.0),
            C64::new(0.0, 0.0),
        ]))
        .unwrap();
        assert_eq!(t.argmax_over(&[0, 2]), Some(2));
    }
}
