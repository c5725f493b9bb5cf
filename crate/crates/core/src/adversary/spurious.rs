use nalgebra::DMatrix;

use crate::circuits::{build_collusion_circuit, circuit_to_matrix};
use crate::error::{Error, Result};
use crate::protocol::{
    bidding_operator, hamming_hamiltonian, initial_superposition, plausible_allocations,
    problem_hamiltonian, run_search, AdiabaticSchedule, AuctionConfig, BidSpec, PayoffTable,
    SearchOperators, Trajectory,
};
use crate::quantum::{tensor_product, DenseOperator, C64};

/// Amplitudes `(√(2/3), √(1/3))` on `|0..0>` and `|b1>` after the first collusion stage.
pub const COLLUSION_KEEP: (f64, f64) = (0.816_496_580_927_726, 0.577_350_269_189_625_7);

/// Corrupt payoff: the sum of every bidder's dollar value, so the state where
/// all bidders reveal their price has the highest payoff.
pub fn spurious_table(config: &AuctionConfig) -> Result<PayoffTable> {
    if config.items != 1 {
        return Err(Error::InvalidArgument(
            "spurious table is defined for a single item".into(),
        ));
    }
    PayoffTable::from_fn(config.total_qubits(), |x| {
        (0..config.bidders)
            .map(|k| config.register_value(x, k) as f64)
            .sum()
    })
}

/// The allocation in which every register holds its bidder's price state.
pub fn revealing_state(bids: &[BidSpec]) -> usize {
    bids.iter().fold(0, |acc, b| (acc << b.width()) | b.value())
}

/// Honest bidders facing the spurious Hamiltonian; success is the revealing state.
pub fn run_spurious_attack(bids: &[BidSpec], schedule: &AdiabaticSchedule) -> Result<Trajectory> {
    let width = bids
        .first()
        .map(BidSpec::width)
        .ok_or_else(|| Error::InvalidArgument("no bidders".into()))?;
    if bids.iter().any(|b| b.width() != width) {
        return Err(Error::InvalidArgument("bids must share a width".into()));
    }
    let table = spurious_table(&AuctionConfig::new(bids.len(), width, 1)?)?;
    let ops = SearchOperators::honest(bids, &table)?;
    run_search(
        initial_superposition(bids)?,
        &ops,
        schedule,
        revealing_state(bids),
        plausible_allocations(bids),
    )
}

/// The three allocations kept by the collusion circuit.
pub fn collusion_subspace(bid1: &BidSpec, bid2: &BidSpec) -> Vec<usize> {
    let mut s = vec![0, bid2.value(), bid1.value() << bid2.width()];
    s.sort_unstable();
    s
}

/// Search with the joint collusion circuit in place of `U_1 ⊗ U_2`.
///
/// The target is the best of the three kept allocations under `table`.
pub fn run_collusion_defense(
    bids: &[BidSpec],
    table: &PayoffTable,
    schedule: &AdiabaticSchedule,
) -> Result<Trajectory> {
    let [b1, b2] = bids else {
        return Err(Error::InvalidArgument(format!(
            "collusion needs exactly two bidders, got {}",
            bids.len()
        )));
    };
    let u = circuit_to_matrix(&build_collusion_circuit(b1, b2, COLLUSION_KEEP)?)?;
    let n = b1.width() + b2.width();
    if table.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            actual: table.values().len(),
        });
    }
    let initial = u.column(0)?;
    let ops = SearchOperators::new(u, &hamming_hamiltonian(n), &problem_hamiltonian(table))?;
    let subspace = collusion_subspace(b1, b2);
    let winner = table.winner(&subspace)?;
    run_search(initial, &ops, schedule, winner, subspace)
}

/// Dense joint collusion unitary, assembled from block matrices.
///
/// Stage 1 is `(R U_1) ⊗ |0><0| + I ⊗ (I - |0><0|)`, with `R` the two-level
/// reflection on `{|0..0>, |b1>}` sending `(|0..0>+|b1>)/√2` to `a|0..0> + c|b1>`.
/// Stage 2 is `|0><0| ⊗ U_2 + (I - |0><0|) ⊗ I`.
pub fn collusion_operator(
    bid1: &BidSpec,
    bid2: &BidSpec,
    keep: (f64, f64),
) -> Result<DenseOperator> {
    let (a, c) = keep;
    if ((a * a + c * c) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "keep amplitudes ({a}, {c}) are not a unit vector"
        )));
    }
    let (d1, d2) = (1usize << bid1.width(), 1usize << bid2.width());
    // columns: (|0>+|b>)/√2 -> (a, c), (|0>-|b>)/√2 -> (c, -a)
    let (diag, off) = ((a - c) / 2f64.sqrt(), (a + c) / 2f64.sqrt());
    let mut r = DMatrix::<C64>::identity(d1, d1);
    let b = bid1.value();
    r[(0, 0)] = C64::new(diag, 0.0);
    r[(0, b)] = C64::new(off, 0.0);
    r[(b, 0)] = C64::new(off, 0.0);
    r[(b, b)] = C64::new(-diag, 0.0);
    let a1 = DenseOperator::new(r)?.matmul(&bidding_operator(bid1))?;
    let zero = |d: usize| {
        let mut diag = vec![0.0; d];
        diag[0] = 1.0;
        DenseOperator::from_real_diagonal(&diag)
    };
    let rest = |d: usize| DenseOperator::identity(d).sub(&zero(d)).expect("same size");
    let stage1 = tensor_product(&a1, &zero(d2))
        .add(&tensor_product(&DenseOperator::identity(d1), &rest(d2)))?;
    let stage2 = tensor_product(&zero(d1), &bidding_operator(bid2))
        .add(&tensor_product(&rest(d1), &DenseOperator::identity(d2)))?;
    stage2.matmul(&stage1)
}
