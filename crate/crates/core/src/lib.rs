//! Dense state-vector simulation of auctions run by distributed adiabatic search.
//!
//! The crate is organized bottom-up:
//!
//! * [`quantum`]: complex matrices, state vectors, spectral exponentials and
//!   generalized measurements.
//! * [`protocol`]: payoff tables, Hamiltonians, bidding operators and the
//!   discrete adiabatic search in its exact, zeroth-order, first-order and
//!   locked forms.
//! * [`circuits`]: a gate-level representation of every protocol unitary,
//!   with builders and a verifier against the dense constructions.
//! * [`adversary`]: a corrupt auctioneer's probe-and-measure and spurious
//!   Hamiltonian attacks, and the bidders' locking and collusion defenses.

pub mod adversary;
pub mod circuits;
pub mod error;
pub mod protocol;
pub mod quantum;

pub use error::{Error, Result};
