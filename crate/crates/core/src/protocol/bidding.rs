use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use super::BidSpec;
use crate::error::{Error, Result};
use crate::quantum::{qubit_mask, tensor_product, DenseOperator, StateVector, C64};

/// Hadamard-like bidding operator `U` with `U|0...0> = (|0...0> + |b>)/√2`.
///
/// Equal to the circuit "Hadamard on the lowest-index set qubit of `b`, then
/// CNOT from it onto every other set qubit". For an input `|x>` with control
/// bit `a`, the image is `(|x with control cleared> + (-1)^a |x with control
/// set, fanned out>)/√2`.
pub fn bidding_operator(bid: &BidSpec) -> DenseOperator {
    let p = bid.width();
    let dim = 1usize << p;
    let control = qubit_mask(bid.set_qubits()[0], p);
    let fan = bid.value() & !control;
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        let sign = if x & control != 0 { -1.0 } else { 1.0 };
        m[(x & !control, x)] += C64::new(FRAC_1_SQRT_2, 0.0);
        m[((x | control) ^ fan, x)] += C64::new(sign * FRAC_1_SQRT_2, 0.0);
    }
    DenseOperator::new(m).expect("square by construction")
}

/// `U_1 ⊗ ... ⊗ U_m`, bidder 1 on the leading qubits.
pub fn joint_bidding_operator(bidders: &[BidSpec]) -> Result<DenseOperator> {
    let (first, rest) = bidders
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("at least one bidder is required".into()))?;
    Ok(rest.iter().fold(bidding_operator(first), |acc, b| {
        tensor_product(&acc, &bidding_operator(b))
    }))
}

/// `(⊗_j U_j)|0...0>`: uniform over every plausible allocation.
pub fn initial_superposition(bidders: &[BidSpec]) -> Result<StateVector> {
    joint_bidding_operator(bidders)?.column(0)
}

/// Allocations in which each register holds either `|0...0>` or its bidder's price state.
pub fn plausible_allocations(bidders: &[BidSpec]) -> Vec<usize> {
    let mut out = vec![0usize];
    for b in bidders {
        out = out
            .iter()
            .flat_map(|&prefix| {
                let shifted = prefix << b.width();
                [shifted, shifted | b.value()]
            })
            .collect();
    }
    out.sort_unstable();
    out
}

pub fn total_qubits(bidders: &[BidSpec]) -> usize {
    bidders.iter().map(BidSpec::width).sum()
}
