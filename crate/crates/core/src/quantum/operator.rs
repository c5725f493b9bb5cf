use std::f64::consts::TAU;
use std::ops::Mul;

use nalgebra::{DMatrix, DVector};

use super::{qubits_for_dim, StateVector, C64, HERMITIAN_TOL, UNITARY_TOL};
use crate::error::{Error, Result};

/// Square complex matrix acting on a register (or a subspace of one).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    entries: DMatrix<C64>,
}

impl DenseOperator {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        Ok(Self { entries })
    }

    /// Builds from row-major real entries.
    pub fn from_real_rows(dim: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: rows.len(),
            });
        }
        Ok(Self {
            entries: DMatrix::from_row_iterator(dim, dim, rows.iter().map(|&x| C64::new(x, 0.0))),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self {
            entries: DMatrix::from_diagonal(&d),
        }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self {
            entries: DMatrix::from_diagonal(&DVector::from_column_slice(diag)),
        }
    }

    /// `|psi><psi|`.
    pub fn projector(state: &StateVector) -> Self {
        let a = state.amplitudes();
        Self {
            entries: a * a.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Qubit count when the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        qubits_for_dim(self.dim())
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.scale(factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: &self.entries - &other.entries,
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: &self.entries * &other.entries,
        })
    }

    /// `self · other · self†`.
    pub fn conjugate(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: &self.entries * &other.entries * self.entries.adjoint(),
        })
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check_dim(state.dim())?;
        Ok(StateVector::from_raw(
            &self.entries * state.amplitudes(),
            state.n_qubits(),
        ))
    }

    /// Column `index`, i.e. the image of basis state `|index>`.
    pub fn column(&self, index: usize) -> Result<StateVector> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index,
                dim: self.dim(),
            });
        }
        StateVector::from_amplitudes(self.entries.column(index).into_owned())
    }

    /// `<bra|self|ket>`.
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        self.check_dim(state.dim())?;
        Ok(state
            .amplitudes()
            .dotc(&(&self.entries * state.amplitudes())))
    }

    /// Submatrix on the listed basis indices (projection onto their span).
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.dim()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dim: self.dim(),
            });
        }
        let k = indices.len();
        Ok(Self {
            entries: DMatrix::from_fn(k, k, |r, c| self.entries[(indices[r], indices[c])]),
        })
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// Maximum entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other.dim())?;
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.entries[(r, c)] - self.entries[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.entries.adjoint() * &self.entries;
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((prod[(r, c)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    pub fn require_unitary(&self) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(())
    }

    /// Real diagonal if the operator is diagonal with real entries.
    pub fn real_diagonal(&self) -> Option<Vec<f64>> {
        let n = self.dim();
        for r in 0..n {
            for c in 0..n {
                let v = self.entries[(r, c)];
                if (r != c && v.norm() != 0.0) || (r == c && v.im != 0.0) {
                    return None;
                }
            }
        }
        Some((0..n).map(|i| self.entries[(i, i)].re).collect())
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other,
            });
        }
        Ok(())
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    /// Panics on dimension mismatch; use [`DenseOperator::matmul`] for a fallible product.
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        self.matmul(rhs).expect("operator dimensions must agree")
    }
}

/// Kronecker product `a ⊗ b`; `a` acts on the leading qubits.
pub fn tensor_product(a: &DenseOperator, b: &DenseOperator) -> DenseOperator {
    DenseOperator {
        entries: a.entries.kronecker(&b.entries),
    }
}

/// `min_φ max_ij |U_ij - e^{iφ} V_ij|`: zero iff the operators agree up to a global phase.
pub fn phase_invariant_distance(u: &DenseOperator, v: &DenseOperator) -> Result<f64> {
    u.check_dim(v.dim())?;
    let pairs: Vec<(C64, C64)> = u
        .entries
        .iter()
        .copied()
        .zip(v.entries.iter().copied())
        .collect();
    let cost = |phi: f64| {
        let phase = C64::from_polar(1.0, phi);
        pairs
            .iter()
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    };

    // Least-squares phase is exact whenever the operators differ only by a phase.
    let overlap: C64 = pairs.iter().map(|(a, b)| b.conj() * a).sum();
    let mut best = if overlap.norm() > 0.0 {
        let phi = overlap.arg();
        (cost(phi), phi)
    } else {
        (cost(0.0), 0.0)
    };

    const GRID: usize = 720;
    let step = TAU / GRID as f64;
    let mut samples: Vec<(f64, f64)> = (0..GRID)
        .map(|k| {
            let phi = k as f64 * step;
            (cost(phi), phi)
        })
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    for &(_, centre) in samples.iter().take(4) {
        let refined = golden_section(&cost, centre - step, centre + step);
        if refined.0 < best.0 {
            best = refined;
        }
    }
    let refined = golden_section(&cost, best.1 - step, best.1 + step);
    Ok(best.0.min(refined.0))
}

fn golden_section(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..100 {
        if (hi - lo).abs() < 1e-15 {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (f1, x1)
    } else {
        (f2, x2)
    }
}
