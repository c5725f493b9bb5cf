use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quantum::{qubit_mask, DenseOperator, StateVector, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Hadamard(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    /// `diag(1, e^{-iθ})`.
    Phase {
        qubit: usize,
        angle: f64,
    },
    /// `[[cos θ, sin θ], [sin θ, -cos θ]]`.
    Rotation {
        qubit: usize,
        angle: f64,
    },
    /// Applies `body` on the subspace where every control qubit is `|0>`.
    ZeroControlled {
        controls: Vec<usize>,
        body: Vec<Gate>,
    },
}

impl Gate {
    /// Every qubit the gate reads or writes.
    pub fn qubits(&self) -> BTreeSet<usize> {
        match self {
            Gate::Hadamard(q) | Gate::Phase { qubit: q, .. } | Gate::Rotation { qubit: q, .. } => {
                BTreeSet::from([*q])
            }
            Gate::Cnot { control, target } => BTreeSet::from([*control, *target]),
            Gate::ZeroControlled { controls, body } => {
                let mut all: BTreeSet<usize> = controls.iter().copied().collect();
                for g in body {
                    all.extend(g.qubits());
                }
                all
            }
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let in_range = |q: usize| {
            if q < n_qubits {
                Ok(())
            } else {
                Err(Error::MalformedGate(format!(
                    "qubit {q} outside a {n_qubits}-qubit circuit"
                )))
            }
        };
        match self {
            Gate::Hadamard(q) | Gate::Phase { qubit: q, .. } | Gate::Rotation { qubit: q, .. } => {
                in_range(*q)?;
                if let Gate::Phase { angle, .. } | Gate::Rotation { angle, .. } = self {
                    if !angle.is_finite() {
                        return Err(Error::MalformedGate(format!("non-finite angle {angle}")));
                    }
                }
                Ok(())
            }
            Gate::Cnot { control, target } => {
                in_range(*control)?;
                in_range(*target)?;
                if control == target {
                    return Err(Error::MalformedGate(format!(
                        "CNOT control and target are both qubit {control}"
                    )));
                }
                Ok(())
            }
            Gate::ZeroControlled { controls, body } => {
                let set: BTreeSet<usize> = controls.iter().copied().collect();
                if set.len() != controls.len() {
                    return Err(Error::MalformedGate("repeated control qubit".into()));
                }
                for &c in controls {
                    in_range(c)?;
                }
                for g in body {
                    g.validate(n_qubits)?;
                    if let Some(q) = g.qubits().intersection(&set).next() {
                        return Err(Error::MalformedGate(format!(
                            "controlled body touches control qubit {q}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    fn inverse(&self) -> Gate {
        match self {
            Gate::Phase { qubit, angle } => Gate::Phase {
                qubit: *qubit,
                angle: -angle,
            },
            Gate::ZeroControlled { controls, body } => Gate::ZeroControlled {
                controls: controls.clone(),
                body: body.iter().rev().map(Gate::inverse).collect(),
            },
            // Hadamard, CNOT and the reflection are involutions.
            other => other.clone(),
        }
    }

    fn shifted(&self, offset: usize) -> Gate {
        match self {
            Gate::Hadamard(q) => Gate::Hadamard(q + offset),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: control + offset,
                target: target + offset,
            },
            Gate::Phase { qubit, angle } => Gate::Phase {
                qubit: qubit + offset,
                angle: *angle,
            },
            Gate::Rotation { qubit, angle } => Gate::Rotation {
                qubit: qubit + offset,
                angle: *angle,
            },
            Gate::ZeroControlled { controls, body } => Gate::ZeroControlled {
                controls: controls.iter().map(|c| c + offset).collect(),
                body: body.iter().map(|g| g.shifted(offset)).collect(),
            },
        }
    }

    fn apply(&self, amps: &mut DVector<C64>, n: usize) {
        match self {
            Gate::Hadamard(q) => {
                let m = qubit_mask(*q, n);
                for i in (0..amps.len()).filter(|i| i & m == 0) {
                    let (a, b) = (amps[i], amps[i | m]);
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[i | m] = (a - b) * FRAC_1_SQRT_2;
                }
            }
            Gate::Cnot { control, target } => {
                let (mc, mt) = (qubit_mask(*control, n), qubit_mask(*target, n));
                for i in (0..amps.len()).filter(|i| i & mc != 0 && i & mt == 0) {
                    amps.swap_rows(i, i | mt);
                }
            }
            Gate::Phase { qubit, angle } => {
                let m = qubit_mask(*qubit, n);
                let phase = C64::from_polar(1.0, -angle);
                for i in (0..amps.len()).filter(|i| i & m != 0) {
                    amps[i] *= phase;
                }
            }
            Gate::Rotation { qubit, angle } => {
                let m = qubit_mask(*qubit, n);
                let (s, c) = angle.sin_cos();
                for i in (0..amps.len()).filter(|i| i & m == 0) {
                    let (a, b) = (amps[i], amps[i | m]);
                    amps[i] = a * c + b * s;
                    amps[i | m] = a * s - b * c;
                }
            }
            Gate::ZeroControlled { controls, body } => {
                let cmask = controls.iter().fold(0, |acc, &q| acc | qubit_mask(q, n));
                let mut inner = amps.clone();
                for g in body {
                    g.apply(&mut inner, n);
                }
                for i in (0..amps.len()).filter(|i| i & cmask == 0) {
                    amps[i] = inner[i];
                }
            }
        }
    }
}

/// Ordered gate list on a fixed-width register; the first gate acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`'s gates, shifted up by `offset` qubits.
    pub fn append_shifted(&mut self, other: &Circuit, offset: usize) -> Result<()> {
        for g in &other.gates {
            self.push(g.shifted(offset))?;
        }
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        self.append_shifted(other, 0)
    }

    /// Same gates placed `offset` qubits higher on a `width`-qubit register.
    pub fn embedded(&self, offset: usize, width: usize) -> Result<Circuit> {
        let mut c = Circuit::new(width);
        c.append_shifted(self, offset)?;
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.n_qubits,
                actual: state.dim(),
            });
        }
        let mut amps = state.amplitudes().clone();
        for g in &self.gates {
            g.apply(&mut amps, self.n_qubits);
        }
        StateVector::from_amplitudes(amps)
    }
}

/// Unitary implemented by `circuit`, column `j` being the image of `|j>`.
pub fn circuit_to_matrix(circuit: &Circuit) -> Result<DenseOperator> {
    for g in circuit.gates() {
        g.validate(circuit.n_qubits())?;
    }
    let n = circuit.n_qubits();
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut col = DVector::zeros(dim);
        col[j] = C64::new(1.0, 0.0);
        for g in circuit.gates() {
            g.apply(&mut col, n);
        }
        m.set_column(j, &col);
    }
    DenseOperator::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::bidding_operator;

    #[test]
    fn empty_circuit_is_identity() {
        let m = circuit_to_matrix(&Circuit::new(2)).unwrap();
        assert_eq!(m, DenseOperator::identity(4));
    }

    #[test]
    fn hadamard_cnot_is_u3() {
        let c = Circuit::from_gates(
            2,
            vec![
                Gate::Hadamard(0),
                Gate::Cnot {
                    control: 0,
                    target: 1,
                },
            ],
        )
        .unwrap();
        let u3 = bidding_operator(&"11".parse().unwrap());
        assert!(circuit_to_matrix(&c).unwrap().max_abs_diff(&u3).unwrap() <= 1e-12);
    }

    #[test]
    fn hadamard_on_leading_qubit_is_u2() {
        let c = Circuit::from_gates(2, vec![Gate::Hadamard(0)]).unwrap();
        let m = circuit_to_matrix(&c).unwrap();
        let u2 = bidding_operator(&"10".parse().unwrap());
        assert!(m.max_abs_diff(&u2).unwrap() <= 1e-12);
        assert!((m.get(2, 0).re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn malformed_gates_rejected() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::Hadamard(2)).is_err());
        assert!(c
            .push(Gate::Cnot {
                control: 1,
                target: 1
            })
            .is_err());
        assert!(c
            .push(Gate::ZeroControlled {
                controls: vec![0],
                body: vec![Gate::Hadamard(0)]
            })
            .is_err());
        assert!(c
            .push(Gate::Phase {
                qubit: 0,
                angle: f64::NAN
            })
            .is_err());
    }

    #[test]
    fn zero_control_is_identity_when_control_set() {
        let c = Circuit::from_gates(
            3,
            vec![Gate::ZeroControlled {
                controls: vec![0, 1],
                body: vec![
                    Gate::Hadamard(2),
                    Gate::Phase {
                        qubit: 2,
                        angle: 0.4,
                    },
                ],
            }],
        )
        .unwrap();
        let m = circuit_to_matrix(&c).unwrap();
        assert!(m.is_unitary(1e-12));
        for x in 0..8usize {
            if x & 0b110 != 0 {
                for r in 0..8 {
                    let expected = if r == x { 1.0 } else { 0.0 };
                    assert!((m.get(r, x) - C64::new(expected, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn inverse_undoes_circuit() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::Hadamard(1),
                Gate::Rotation {
                    qubit: 0,
                    angle: 0.9,
                },
                Gate::Cnot {
                    control: 1,
                    target: 2,
                },
                Gate::Phase {
                    qubit: 2,
                    angle: 1.3,
                },
                Gate::ZeroControlled {
                    controls: vec![0],
                    body: vec![
                        Gate::Phase {
                            qubit: 1,
                            angle: -0.2,
                        },
                        Gate::Hadamard(2),
                    ],
                },
            ],
        )
        .unwrap();
        let m = circuit_to_matrix(&c).unwrap();
        let inv = circuit_to_matrix(&c.inverse()).unwrap();
        assert!(
            (&inv * &m)
                .max_abs_diff(&DenseOperator::identity(8))
                .unwrap()
                < 1e-12
        );
    }
}
