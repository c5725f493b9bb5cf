//! Auction encoding and the discrete adiabatic search.

mod auction;
mod bidding;
mod gap;
mod hamiltonian;
mod search;

pub use auction::{build_first_price_table, parse_bids, AuctionConfig, BidSpec, PayoffTable};
pub use bidding::{
    bidding_operator, initial_superposition, joint_bidding_operator, plausible_allocations,
    total_qubits,
};
pub use gap::{eigenvalue_tracks, tracks_for, GapRow, GapTracks};
pub use hamiltonian::{
    expansion_diagonal, hamming_hamiltonian, pauli_z_expansion, problem_hamiltonian, PauliZTerm,
};
pub use search::{
    adiabatic_step, run_adiabatic, run_search, AdiabaticSchedule, SearchOperators, StepRecord,
    Trajectory, Variant,
};
