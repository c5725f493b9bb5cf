//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! QUBITS 4
//! H q0
//! CNOT q0 q1
//! PHASE q2 0.125
//! ROT q0 0.3344
//! CTRL0 [q2 q3] {
//!   H q0
//! }
//! ```
//!
//! Without a `QUBITS` line the width is one more than the highest qubit used.

use std::fmt::Write as _;

use super::gate::{Circuit, Gate};
use crate::error::{Error, Result};

pub fn to_text(circuit: &Circuit) -> String {
    let mut out = format!("QUBITS {}\n", circuit.n_qubits());
    write_gates(&mut out, circuit.gates(), 0);
    out
}

fn write_gates(out: &mut String, gates: &[Gate], depth: usize) {
    let pad = "  ".repeat(depth);
    for g in gates {
        match g {
            Gate::Hadamard(q) => writeln!(out, "{pad}H q{q}"),
            Gate::Cnot { control, target } => writeln!(out, "{pad}CNOT q{control} q{target}"),
            Gate::Phase { qubit, angle } => writeln!(out, "{pad}PHASE q{qubit} {angle}"),
            Gate::Rotation { qubit, angle } => writeln!(out, "{pad}ROT q{qubit} {angle}"),
            Gate::ZeroControlled { controls, body } => {
                let list: Vec<String> = controls.iter().map(|c| format!("q{c}")).collect();
                writeln!(out, "{pad}CTRL0 [{}] {{", list.join(" ")).unwrap();
                write_gates(out, body, depth + 1);
                writeln!(out, "{pad}}}")
            }
        }
        .unwrap();
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Open,
    Close,
    LBracket,
    RBracket,
    Newline,
}

fn tokenize(text: &str) -> Vec<(Tok, usize)> {
    let mut toks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let spaced = body
            .replace('{', " { ")
            .replace('}', " } ")
            .replace('[', " [ ")
            .replace(']', " ] ");
        for w in spaced.split_whitespace() {
            let t = match w {
                "{" => Tok::Open,
                "}" => Tok::Close,
                "[" => Tok::LBracket,
                "]" => Tok::RBracket,
                _ => Tok::Word(w.to_string()),
            };
            toks.push((t, line));
        }
        toks.push((Tok::Newline, line));
    }
    toks
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    max_qubit: Option<usize>,
}

impl Parser {
    fn err(&self, message: impl Into<String>) -> Error {
        let line = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map_or(0, |t| t.1);
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn skip_newlines(&mut self) {
        while self.peek() == Some(&Tok::Newline) {
            self.pos += 1;
        }
    }

    fn word(&mut self, what: &str) -> Result<String> {
        match self.next() {
            Some(Tok::Word(w)) => Ok(w),
            _ => {
                self.pos -= 1;
                Err(self.err(format!("expected {what}")))
            }
        }
    }

    fn qubit(&mut self) -> Result<usize> {
        let w = self.word("qubit")?;
        let q = w
            .strip_prefix('q')
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| {
                self.pos -= 1;
                self.err(format!("bad qubit `{w}`"))
            })?;
        self.max_qubit = Some(self.max_qubit.map_or(q, |m| m.max(q)));
        Ok(q)
    }

    fn angle(&mut self) -> Result<f64> {
        let w = self.word("angle")?;
        match w.parse::<f64>() {
            Ok(a) if a.is_finite() => Ok(a),
            _ => {
                self.pos -= 1;
                Err(self.err(format!("bad angle `{w}`")))
            }
        }
    }

    fn end_of_gate(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::Newline) | Some(Tok::Close) | None => Ok(()),
            _ => Err(self.err("unexpected trailing token")),
        }
    }

    /// Gates until `}` (nested) or end of input (top level).
    fn gates(&mut self, nested: bool) -> Result<Vec<Gate>> {
        let mut out = Vec::new();
        loop {
            self.skip_newlines();
            match self.peek() {
                None if nested => return Err(self.err("unterminated CTRL0 block")),
                None => return Ok(out),
                Some(Tok::Close) if nested => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some(Tok::Close) => return Err(self.err("unmatched `}`")),
                _ => {}
            }
            let kw = self.word("gate")?;
            let gate = match kw.as_str() {
                "H" => Gate::Hadamard(self.qubit()?),
                "CNOT" => Gate::Cnot {
                    control: self.qubit()?,
                    target: self.qubit()?,
                },
                "PHASE" => Gate::Phase {
                    qubit: self.qubit()?,
                    angle: self.angle()?,
                },
                "ROT" => Gate::Rotation {
                    qubit: self.qubit()?,
                    angle: self.angle()?,
                },
                "CTRL0" => {
                    if self.next() != Some(Tok::LBracket) {
                        self.pos -= 1;
                        return Err(self.err("expected `[` after CTRL0"));
                    }
                    let mut controls = Vec::new();
                    while self.peek() != Some(&Tok::RBracket) {
                        controls.push(self.qubit()?);
                    }
                    self.pos += 1;
                    if self.next() != Some(Tok::Open) {
                        self.pos -= 1;
                        return Err(self.err("expected `{` after control list"));
                    }
                    let body = self.gates(true)?;
                    Gate::ZeroControlled { controls, body }
                }
                "QUBITS" => {
                    self.pos -= 1;
                    return Err(self.err("QUBITS must be the first statement"));
                }
                other => {
                    self.pos -= 1;
                    return Err(self.err(format!("unknown gate `{other}`")));
                }
            };
            self.end_of_gate()?;
            out.push(gate);
        }
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut p = Parser {
        toks: tokenize(text),
        pos: 0,
        max_qubit: None,
    };
    p.skip_newlines();
    let declared = if p.peek() == Some(&Tok::Word("QUBITS".into())) {
        p.pos += 1;
        let w = p.word("qubit count")?;
        let n = w.parse::<usize>().map_err(|_| {
            p.pos -= 1;
            p.err(format!("bad qubit count `{w}`"))
        })?;
        p.end_of_gate()?;
        Some(n)
    } else {
        None
    };
    let gates = p.gates(false)?;
    let n = declared.unwrap_or_else(|| p.max_qubit.map_or(0, |m| m + 1));
    Circuit::from_gates(n, gates).map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })
}
