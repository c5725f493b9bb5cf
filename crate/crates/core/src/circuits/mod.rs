//! Gate-level circuits for the protocol unitaries.
//!
//! Gates use the register's qubit numbering (qubit 0 most significant).
//! `PHASE(q, θ)` is `diag(1, e^{-iθ})` and `ROT(q, θ)` is the real reflection
//! `[[cos θ, sin θ], [sin θ, -cos θ]]`.

mod builders;
mod gate;
mod text;
mod verify;

pub use builders::{
    build_bidder_circuit, build_collusion_circuit, build_d_circuit, build_p_circuit,
    build_zz_exponential, collusion_rotation_angle, zeroth_iteration_circuit,
};
pub use gate::{circuit_to_matrix, Circuit, Gate};
pub use text::{parse_circuit, to_text};
pub use verify::{verify_circuit, VerifyReport, VERIFY_TOL};
