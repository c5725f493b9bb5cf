use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::quantum::{eig_hermitian, DenseOperator, Povm, StateVector, C64};

const CHECK_TOL: f64 = 1e-8;

/// Knobs for the pairwise-rotation search.
#[derive(Debug, Clone, Copy)]
pub struct PovmSearch {
    /// Starting bases: the computational basis, then Haar-random ones.
    pub restarts: usize,
    pub seed: u64,
    /// A sweep ends the search once every pairwise stationarity residual is below this.
    pub tolerance: f64,
    pub max_sweeps: usize,
}

impl Default for PovmSearch {
    fn default() -> Self {
        Self {
            restarts: 20,
            seed: 0,
            tolerance: 1e-12,
            max_sweeps: 10_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PovmSolution {
    pub povm: Povm,
    pub error_probability: f64,
}

fn validate(states: &[StateVector], priors: &[f64]) -> Result<usize> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidArgument("no states to discriminate".into()))?;
    let dim = first.dim();
    if let Some(s) = states.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: s.dim(),
        });
    }
    if priors.len() != states.len() {
        return Err(Error::InvalidArgument(format!(
            "{} priors for {} states",
            priors.len(),
            states.len()
        )));
    }
    let total: f64 = priors.iter().sum();
    if priors.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "priors must be non-negative and sum to 1 (sum {total})"
        )));
    }
    if states.len() > dim {
        return Err(Error::InvalidArgument(format!(
            "{} states in a {dim}-dimensional space",
            states.len()
        )));
    }
    Ok(dim)
}

/// `1 - Σ p_i <ψ_i|Π_i|ψ_i>`.
pub fn error_probability(
    elements: &[DenseOperator],
    states: &[StateVector],
    priors: &[f64],
) -> Result<f64> {
    validate(states, priors)?;
    if elements.len() != states.len() {
        return Err(Error::InvalidArgument(format!(
            "{} outcomes for {} states",
            elements.len(),
            states.len()
        )));
    }
    let mut correct = 0.0;
    for ((e, s), p) in elements.iter().zip(states).zip(priors) {
        correct += p * e.expectation(s)?.re;
    }
    Ok(1.0 - correct)
}

fn haar_basis(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..dim {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let col = q.column(k) * phase;
            q.set_column(k, &col);
        }
    }
    q
}

/// Top eigenvector of the 2×2 Hermitian `[[a, z], [z̄, c]]`.
fn top_eigenvector(a: f64, z: C64, c: f64) -> (C64, C64) {
    let lambda = 0.5 * (a + c) + (0.25 * (a - c).powi(2) + z.norm_sqr()).sqrt();
    let v1 = (z, C64::new(lambda - a, 0.0));
    let v2 = (C64::new(lambda - c, 0.0), z.conj());
    let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
    let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
    let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
    let n = n.sqrt();
    (v.0 / n, v.1 / n)
}

/// Runs pairwise sweeps on `basis` (columns), returning the final error probability.
fn sweep_to_stationarity(
    basis: &mut DMatrix<C64>,
    states: &[DVector<C64>],
    priors: &[f64],
    search: &PovmSearch,
) -> f64 {
    let dim = basis.nrows();
    let n = states.len();
    let weight = |k: usize| if k < n { priors[k] } else { 0.0 };
    let component = |basis: &DMatrix<C64>, k: usize, owner: usize| -> C64 {
        if owner < n {
            basis.column(k).dotc(&states[owner])
        } else {
            C64::new(0.0, 0.0)
        }
    };
    for _ in 0..search.max_sweeps {
        let mut residual = 0.0f64;
        for j in 0..dim {
            for k in j + 1..dim {
                let (pj, pk) = (weight(j), weight(k));
                if pj == 0.0 && pk == 0.0 {
                    continue;
                }
                let aj = (component(basis, j, j), component(basis, k, j));
                let ak = (component(basis, j, k), component(basis, k, k));
                // p_j a_j a_j† - p_k a_k a_k†
                let m00 = pj * aj.0.norm_sqr() - pk * ak.0.norm_sqr();
                let m11 = pj * aj.1.norm_sqr() - pk * ak.1.norm_sqr();
                let m01 = aj.0 * aj.1.conj() * pj - ak.0 * ak.1.conj() * pk;
                residual = residual.max(m01.norm());
                if m01.norm() <= f64::EPSILON * (m00.abs() + m11.abs()) {
                    continue;
                }
                let v = top_eigenvector(m00, m01, m11);
                let w = (-v.1.conj(), v.0.conj());
                let (uj, uk) = (basis.column(j).clone_owned(), basis.column(k).clone_owned());
                basis.set_column(j, &(&uj * v.0 + &uk * v.1));
                basis.set_column(k, &(&uj * w.0 + &uk * w.1));
            }
        }
        if residual <= search.tolerance {
            break;
        }
    }
    1.0 - (0..n)
        .map(|j| priors[j] * basis.column(j).dotc(&states[j]).norm_sqr())
        .sum::<f64>()
}

/// Minimum-error measurement by greedy pairwise basis rotations.
///
/// Each pass rotates every pair of measurement vectors within their plane to
/// the best possible position, which drives `Γ = Σ p_i Π_i |ψ_i><ψ_i|`
/// towards Hermiticity. The best of several starting bases is kept. Vectors
/// beyond the number of states are merged into the last outcome.
pub fn min_error_povm_with(
    states: &[StateVector],
    priors: &[f64],
    search: &PovmSearch,
) -> Result<PovmSolution> {
    let dim = validate(states, priors)?;
    let vecs: Vec<DVector<C64>> = states.iter().map(|s| s.amplitudes().clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut best: Option<(f64, DMatrix<C64>)> = None;
    for r in 0..search.restarts.max(1) {
        let mut basis = if r == 0 {
            DMatrix::identity(dim, dim)
        } else {
            haar_basis(dim, &mut rng)
        };
        let pe = sweep_to_stationarity(&mut basis, &vecs, priors, search);
        if best.as_ref().is_none_or(|(b, _)| pe < *b) {
            best = Some((pe, basis));
        }
    }
    let (_, basis) = best.expect("at least one restart");
    let n = states.len();
    let projector = |k: usize| {
        let u = basis.column(k);
        DenseOperator::new(u * u.adjoint()).expect("square")
    };
    let mut elements: Vec<DenseOperator> = (0..n).map(projector).collect();
    for k in n..dim {
        elements[n - 1] = elements[n - 1].add(&projector(k))?;
    }
    let error_probability = error_probability(&elements, states, priors)?;
    Ok(PovmSolution {
        povm: Povm::new(elements)?,
        error_probability,
    })
}

pub fn min_error_povm(states: &[StateVector], priors: &[f64]) -> Result<PovmSolution> {
    min_error_povm_with(states, priors, &PovmSearch::default())
}

/// Necessary and sufficient minimum-error conditions: `Γ` Hermitian and
/// `Γ - p_j |ψ_j><ψ_j| ⪰ 0` for every `j`, both within `1e-8`.
pub fn povm_optimality_check(povm: &Povm, states: &[StateVector], priors: &[f64]) -> bool {
    let Ok(dim) = validate(states, priors) else {
        return false;
    };
    if povm.len() != states.len() || povm.dim() != dim {
        return false;
    }
    let rho: Vec<DenseOperator> = states.iter().map(DenseOperator::projector).collect();
    let mut gamma = DenseOperator::zeros(dim);
    for ((e, r), p) in povm.elements().iter().zip(&rho).zip(priors) {
        gamma = gamma.add(&(e * r).scale(*p)).expect("dimensions validated");
    }
    if gamma.hermiticity_deviation() > CHECK_TOL {
        return false;
    }
    let sym = gamma.add(&gamma.adjoint()).expect("square").scale(0.5);
    rho.iter().zip(priors).all(|(r, p)| {
        let diff = sym.sub(&r.scale(*p)).expect("dimensions validated");
        eig_hermitian(&diff).is_ok_and(|sp| sp.eigenvalues[0] >= -CHECK_TOL)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::bidding_operator;
    use rand::Rng;

    fn toy_states() -> Vec<StateVector> {
        ["01", "10", "11"]
            .iter()
            .map(|b| bidding_operator(&b.parse().unwrap()).column(0).unwrap())
            .collect()
    }

    fn helstrom(p1: f64, p2: f64, a: &StateVector, b: &StateVector) -> f64 {
        let overlap = a.inner(b).unwrap().norm_sqr();
        0.5 * (1.0 - (1.0 - 4.0 * p1 * p2 * overlap).sqrt())
    }

    #[test]
    fn orthogonal_states_are_perfectly_distinguished() {
        let s = [
            StateVector::basis(1, 0).unwrap(),
            StateVector::basis(1, 1).unwrap(),
        ];
        let sol = min_error_povm(&s, &[0.5, 0.5]).unwrap();
        assert!(sol.error_probability.abs() < 1e-12);
        assert!(povm_optimality_check(&sol.povm, &s, &[0.5, 0.5]));
    }

    #[test]
    fn toy_states_optimum() {
        let s = toy_states();
        let priors = [1.0 / 3.0; 3];
        let sol = min_error_povm(&s, &priors).unwrap();
        assert!((sol.error_probability - 0.1112).abs() <= 1e-3);
        // square-root measurement on geometrically uniform states is optimal: 1/9
        assert!((sol.error_probability - 1.0 / 9.0).abs() < 1e-10);
        assert!(povm_optimality_check(&sol.povm, &s, &priors));
    }

    #[test]
    fn pairs_match_helstrom() {
        let s = toy_states();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            for p in [0.5, 0.3] {
                let pair = [s[i].clone(), s[j].clone()];
                let sol = min_error_povm(&pair, &[p, 1.0 - p]).unwrap();
                let want = helstrom(p, 1.0 - p, &pair[0], &pair[1]);
                assert!((sol.error_probability - want).abs() < 1e-6, "{i}{j} {p}");
                assert!(povm_optimality_check(&sol.povm, &pair, &[p, 1.0 - p]));
            }
        }
        let pair = [s[1].clone(), s[2].clone()];
        let sol = min_error_povm(&pair, &[0.5, 0.5]).unwrap();
        assert!((sol.error_probability - (1.0 - 3f64.sqrt() / 2.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn basis_measurement_is_not_optimal() {
        let s = toy_states();
        let e = |k: usize| DenseOperator::projector(&StateVector::basis(2, k).unwrap());
        let povm = Povm::new(vec![e(0).add(&e(1)).unwrap(), e(2), e(3)]).unwrap();
        let priors = [1.0 / 3.0; 3];
        assert!(error_probability(povm.elements(), &s, &priors).unwrap() > 0.1122);
        assert!(!povm_optimality_check(&povm, &s, &priors));
    }

    #[test]
    fn single_state_any_povm_is_optimal() {
        let s = [toy_states()[0].clone()];
        assert!(povm_optimality_check(&Povm::trivial(4), &s, &[1.0]));
        let sol = min_error_povm(&s, &[1.0]).unwrap();
        assert!(sol.error_probability.abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = toy_states();
        assert!(min_error_povm(&s, &[0.5, 0.5, 0.5]).is_err());
        assert!(min_error_povm(&s, &[0.5, 0.5]).is_err());
        let qubit: Vec<StateVector> = (0..3).map(|_| StateVector::basis(1, 0).unwrap()).collect();
        assert!(min_error_povm(&qubit, &[1.0 / 3.0; 3]).is_err());
    }

    #[test]
    fn never_worse_than_random_projective_bases() {
        let s = toy_states();
        let priors = [1.0 / 3.0; 3];
        let best = min_error_povm(&s, &priors).unwrap().error_probability;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut floor = f64::INFINITY;
        for _ in 0..10_000 {
            let b = haar_basis(4, &mut rng);
            let assign: usize = rng.random_range(0..3);
            let correct: f64 = (0..4)
                .map(|k| {
                    let owner = if k < 3 { k } else { assign };
                    priors[owner] * b.column(k).dotc(s[owner].amplitudes()).norm_sqr()
                })
                .sum();
            floor = floor.min(1.0 - correct);
        }
        assert!(best <= floor + 1e-12, "{best} vs {floor}");
    }

    #[test]
    fn haar_basis_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = DenseOperator::new(haar_basis(5, &mut rng)).unwrap();
        assert!(q.is_unitary(1e-12));
    }
}
