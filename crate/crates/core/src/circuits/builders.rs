use std::f64::consts::FRAC_PI_4;

use super::gate::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::protocol::{total_qubits, BidSpec, PauliZTerm};

/// Hadamard on the lowest-index set qubit, then CNOT fan-out to the others.
pub fn build_bidder_circuit(bid: &BidSpec) -> Circuit {
    let set = bid.set_qubits();
    let control = set[0];
    let mut gates = vec![Gate::Hadamard(control)];
    gates.extend(set[1..].iter().map(|&t| Gate::Cnot { control, target: t }));
    Circuit::from_gates(bid.width(), gates).expect("qubits come from the bid itself")
}

/// `e^{-iΔfW}` as one `PHASE(q, fΔ)` per qubit.
pub fn build_d_circuit(delta: f64, f: f64, n_qubits: usize) -> Result<Circuit> {
    if n_qubits == 0 {
        return Err(Error::InvalidArgument(
            "D circuit needs at least one qubit".into(),
        ));
    }
    Circuit::from_gates(
        n_qubits,
        (0..n_qubits)
            .map(|q| Gate::Phase {
                qubit: q,
                angle: f * delta,
            })
            .collect(),
    )
}

/// `e^{iθ Z_T}` up to global phase, via a CNOT parity ladder onto the last qubit of `T`.
pub fn build_zz_exponential(qubits: &[usize], theta: f64, n_qubits: usize) -> Result<Circuit> {
    let (&last, rest) = qubits
        .split_last()
        .ok_or_else(|| Error::InvalidArgument("empty qubit subset".into()))?;
    let ladder: Vec<Gate> = rest
        .iter()
        .map(|&c| Gate::Cnot {
            control: c,
            target: last,
        })
        .collect();
    let mut gates = ladder.clone();
    // diag(e^{iθ}, e^{-iθ}) = e^{iθ} PHASE(2θ)
    gates.push(Gate::Phase {
        qubit: last,
        angle: 2.0 * theta,
    });
    gates.extend(ladder.into_iter().rev());
    Circuit::from_gates(n_qubits, gates)
}

/// `e^{-iΔf H_p}` up to global phase; the constant term is dropped.
pub fn build_p_circuit(
    expansion: &[PauliZTerm],
    delta: f64,
    f: f64,
    n_qubits: usize,
) -> Result<Circuit> {
    let mut c = Circuit::new(n_qubits);
    for term in expansion.iter().filter(|t| !t.qubits.is_empty()) {
        c.append(&build_zz_exponential(
            &term.qubits,
            -f * delta * term.coefficient,
            n_qubits,
        )?)?;
    }
    Ok(c)
}

fn joint_bidder_circuit(bidders: &[BidSpec]) -> Result<Circuit> {
    let mut c = Circuit::new(total_qubits(bidders));
    let mut offset = 0;
    for b in bidders {
        c.append_shifted(&build_bidder_circuit(b), offset)?;
        offset += b.width();
    }
    Ok(c)
}

/// One ZEROTH-order step `U D(Δ, 1-f) U† P(Δ, f)` built from gates only.
pub fn zeroth_iteration_circuit(
    bidders: &[BidSpec],
    expansion: &[PauliZTerm],
    delta: f64,
    f: f64,
) -> Result<Circuit> {
    let n = total_qubits(bidders);
    let u = joint_bidder_circuit(bidders)?;
    let mut c = build_p_circuit(expansion, delta, f, n)?;
    c.append(&u.inverse())?;
    c.append(&build_d_circuit(delta, 1.0 - f, n)?)?;
    c.append(&u)?;
    Ok(c)
}

/// `ROT` angle taking `(|0> + |1>)/√2` to `a|0> + c|1>`.
pub fn collusion_rotation_angle(keep: (f64, f64)) -> f64 {
    FRAC_PI_4 + keep.1.atan2(keep.0)
}

/// Joint bidding circuit that never prepares the state where both bidders reveal.
///
/// Stage 1 runs only while bidder 2's register is all zero: the bidder-1
/// circuit, then a rotation in the `{|0..0>, |b1>}` plane giving
/// `a|0..0> + c|b1>`. Stage 2 applies the bidder-2 circuit only while bidder
/// 1's register is all zero, so `|0..0>` maps to
/// `(a/√2)(|0..0, 0..0> + |0..0, b2>) + c|b1, 0..0>`.
pub fn build_collusion_circuit(
    bid1: &BidSpec,
    bid2: &BidSpec,
    keep: (f64, f64),
) -> Result<Circuit> {
    let (a, c) = keep;
    if !(a.is_finite() && c.is_finite()) || ((a * a + c * c) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "keep amplitudes ({a}, {c}) are not a unit vector"
        )));
    }
    let (p1, p2) = (bid1.width(), bid2.width());
    let n = p1 + p2;
    let reg1: Vec<usize> = (0..p1).collect();
    let reg2: Vec<usize> = (p1..n).collect();

    let set1 = bid1.set_qubits();
    let imin = set1[0];
    let fan: Vec<Gate> = set1[1..]
        .iter()
        .map(|&t| Gate::Cnot {
            control: imin,
            target: t,
        })
        .collect();
    let rot = Gate::Rotation {
        qubit: imin,
        angle: collusion_rotation_angle(keep),
    };
    let others: Vec<usize> = reg1.iter().copied().filter(|&q| q != imin).collect();

    let mut stage1 = build_bidder_circuit(bid1).into_gates();
    stage1.extend(fan.iter().cloned());
    stage1.push(if others.is_empty() {
        rot
    } else {
        Gate::ZeroControlled {
            controls: others,
            body: vec![rot],
        }
    });
    stage1.extend(fan.into_iter().rev());

    let stage2 = build_bidder_circuit(bid2).embedded(p1, n)?.into_gates();

    Circuit::from_gates(
        n,
        vec![
            Gate::ZeroControlled {
                controls: reg2,
                body: stage1,
            },
            Gate::ZeroControlled {
                controls: reg1,
                body: stage2,
            },
        ],
    )
}
