use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::protocol::{
    initial_superposition, plausible_allocations, run_search, AdiabaticSchedule, BidSpec,
    PayoffTable, SearchOperators, Trajectory, Variant,
};
use crate::quantum::{qubit_mask, tensor_product, DenseOperator, C64};

/// Per-bidder lock angles and the real symmetric operators they define.
#[derive(Debug, Clone)]
pub struct LockingPair {
    pub alphas: Vec<f64>,
    pub thetas: Vec<f64>,
    pub operators: Vec<DenseOperator>,
}

impl LockingPair {
    /// `V_1 ⊗ V_2 ⊗ ...`.
    pub fn joint(&self) -> DenseOperator {
        let mut it = self.operators.iter();
        let first = it.next().expect("at least one bidder").clone();
        it.fold(first, |acc, v| tensor_product(&acc, v))
    }

    /// Locked bidding state `V† U |0...0>` of bidder `i`, i.e. `α|0...0> - β|b>`.
    pub fn locked_amplitudes(&self, i: usize) -> (f64, f64) {
        let (s, c) = self.thetas[i].sin_cos();
        ((c + s) / 2f64.sqrt(), (c - s) / 2f64.sqrt())
    }
}

/// `θ = arcsin(α) - π/4`.
pub fn lock_angle(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "lock amplitude {alpha} outside (0, 1]"
        )));
    }
    Ok(alpha.asin() - FRAC_PI_4)
}

/// Lock operator for one bidder: on each pair `(x, x⊕b)` with the bid's
/// leading set qubit clear in `x`, the block `[[cos θ, sin θ], [sin θ, -cos θ]]`.
pub fn lock_operator(theta: f64, bid: &BidSpec) -> DenseOperator {
    let p = bid.width();
    let dim = 1usize << p;
    let lead = qubit_mask(bid.set_qubits()[0], p);
    let (s, c) = theta.sin_cos();
    let mut m = DMatrix::zeros(dim, dim);
    for x in (0..dim).filter(|x| x & lead == 0) {
        let y = x ^ bid.value();
        m[(x, x)] = C64::new(c, 0.0);
        m[(x, y)] = C64::new(s, 0.0);
        m[(y, x)] = C64::new(s, 0.0);
        m[(y, y)] = C64::new(-c, 0.0);
    }
    DenseOperator::new(m).expect("square by construction")
}

pub fn locking_operators(alphas: &[f64], bids: &[BidSpec]) -> Result<LockingPair> {
    if alphas.len() != bids.len() || bids.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "{} lock amplitudes for {} bidders",
            alphas.len(),
            bids.len()
        )));
    }
    let thetas = alphas
        .iter()
        .map(|&a| lock_angle(a))
        .collect::<Result<Vec<_>>>()?;
    let operators = thetas
        .iter()
        .zip(bids)
        .map(|(&t, b)| lock_operator(t, b))
        .collect();
    Ok(LockingPair {
        alphas: alphas.to_vec(),
        thetas,
        operators,
    })
}

/// LOCKED-variant search with `V = ⊗V_i` conjugating the problem Hamiltonian.
///
/// Success is measured on the winning basis state, the outcome the auctioneer reads.
pub fn run_locked_auction(
    bids: &[BidSpec],
    table: &PayoffTable,
    schedule: &AdiabaticSchedule,
    locking: &LockingPair,
) -> Result<Trajectory> {
    if locking.operators.len() != bids.len() {
        return Err(Error::InvalidArgument(format!(
            "{} lock operators for {} bidders",
            locking.operators.len(),
            bids.len()
        )));
    }
    let ops = SearchOperators::honest(bids, table)?.with_lock(locking.joint())?;
    let subspace = plausible_allocations(bids);
    let winner = table.winner(&subspace)?;
    let schedule = schedule.with_variant(Variant::Locked);
    run_search(
        initial_superposition(bids)?,
        &ops,
        &schedule,
        winner,
        subspace,
    )
}
