//! Corrupt-auctioneer attacks and the bidders' countermeasures.

mod learning;
mod locking;
mod povm;
mod spurious;

pub use learning::{
    candidate_povm, candidate_states, closed_form_curve, probe_attack_basis, probe_attack_povm,
    probe_attack_povm_majority, transmitted_state, CurveMode, LearningCurve, MonteCarlo,
};
pub use locking::{lock_angle, lock_operator, locking_operators, run_locked_auction, LockingPair};
pub use povm::{
    error_probability, min_error_povm, min_error_povm_with, povm_optimality_check, PovmSearch,
    PovmSolution,
};
pub use spurious::{
    collusion_operator, collusion_subspace, revealing_state, run_collusion_defense,
    run_spurious_attack, spurious_table, COLLUSION_KEEP,
};
