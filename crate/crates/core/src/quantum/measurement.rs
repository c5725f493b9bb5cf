use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{eig_hermitian, DenseOperator, StateVector, POVM_TOL};
use crate::error::{Error, Result};

/// Positive operator-valued measure: PSD elements summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<DenseOperator>,
}

impl Povm {
    pub fn new(elements: Vec<DenseOperator>) -> Result<Self> {
        validate_povm(&elements)?;
        Ok(Self { elements })
    }

    /// Projective measurement in the computational basis.
    pub fn computational_basis(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|i| {
                let mut d = vec![0.0; dim];
                d[i] = 1.0;
                DenseOperator::from_real_diagonal(&d)
            })
            .collect();
        Self { elements }
    }

    /// The one-outcome measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            elements: vec![DenseOperator::identity(dim)],
        }
    }

    pub fn elements(&self) -> &[DenseOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements.first().map_or(0, DenseOperator::dim)
    }
}

fn validate_povm(elements: &[DenseOperator]) -> Result<()> {
    let Some(first) = elements.first() else {
        return Err(Error::InvalidArgument("POVM has no elements".into()));
    };
    let dim = first.dim();
    let mut sum = DenseOperator::zeros(dim);
    for (index, e) in elements.iter().enumerate() {
        if e.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: e.dim(),
            });
        }
        let deviation = e.hermiticity_deviation();
        if deviation > POVM_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let sym = DenseOperator::new((e.entries() + e.entries().adjoint()).scale(0.5))?;
        let min_eigenvalue = eig_hermitian(&sym)?.eigenvalues[0];
        if min_eigenvalue < -POVM_TOL {
            return Err(Error::NotPositive {
                index,
                min_eigenvalue,
            });
        }
        sum = sum.add(e)?;
    }
    let deviation = sum.max_abs_diff(&DenseOperator::identity(dim))?;
    if deviation > POVM_TOL {
        return Err(Error::IncompletePovm { deviation });
    }
    Ok(())
}

/// Outcome probabilities `<psi|Π_j|psi>`.
pub fn measurement_probabilities(
    state: &StateVector,
    elements: &[DenseOperator],
) -> Result<Vec<f64>> {
    validate_povm(elements)?;
    elements
        .iter()
        .map(|e| Ok(e.expectation(state)?.re))
        .collect()
}

/// Draws one outcome index according to [`measurement_probabilities`].
pub fn sample_measurement<R: Rng + ?Sized>(
    state: &StateVector,
    elements: &[DenseOperator],
    rng: &mut R,
) -> Result<usize> {
    let probs = measurement_probabilities(state, elements)?;
    Ok(OutcomeSampler::from_probabilities(&probs)?.sample(rng))
}

/// Precomputed outcome distribution for repeated sampling.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    dist: WeightedIndex<f64>,
}

impl OutcomeSampler {
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        let weights: Vec<f64> = probs.iter().map(|&p| p.max(0.0)).collect();
        let dist = WeightedIndex::new(&weights)
            .map_err(|e| Error::InvalidArgument(format!("outcome distribution: {e}")))?;
        Ok(Self { dist })
    }

    pub fn new(state: &StateVector, povm: &Povm) -> Result<Self> {
        Self::from_probabilities(&measurement_probabilities(state, povm.elements())?)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.dist.sample(rng)
    }
}
