//! Flat `key = value` scenario files.
//!
//! Blank lines and `#` comments are ignored. Unknown keys are rejected.
//! Command-line `--set key=value` overrides are applied on top of the file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use qauction::protocol::{parse_bids, AdiabaticSchedule, BidSpec, Variant};

use crate::error::CliError;

pub const KEYS: &[&str] = &[
    "bids",
    "steps",
    "delta",
    "variant",
    "payoff",
    "attack",
    "defense",
    "seed",
    "trials",
    "rounds",
    "restrict",
    "povm_states",
    "priors",
    "parallel",
    "output",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayoffKind {
    FirstPrice,
    Spurious,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attack {
    None,
    ProbeBasis,
    ProbePovm,
    Spurious,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Defense {
    None,
    Lock(f64, f64),
    Collude,
}

/// A state handed to the POVM solver.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// `b:<bits>`: the bidding state `(|0..0> + |bits>)/√2`.
    Bidding(BidSpec),
    /// `e:<bits>`: the computational basis state `|bits>`.
    Basis { width: usize, index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Fixed(f64),
    Auto,
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub bids: Vec<BidSpec>,
    pub steps: usize,
    pub delta: StepSize,
    pub variant: Variant,
    pub payoff: PayoffKind,
    pub attack: Attack,
    pub defense: Defense,
    pub seed: u64,
    pub trials: usize,
    pub rounds: usize,
    pub restrict: bool,
    pub povm_states: Vec<StateSpec>,
    pub priors: Option<Vec<f64>>,
    pub parallel: bool,
    pub output: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            bids: parse_bids("10,11").expect("valid default"),
            steps: 20,
            delta: StepSize::Fixed(1.5),
            variant: Variant::Zeroth,
            payoff: PayoffKind::FirstPrice,
            attack: Attack::None,
            defense: Defense::None,
            seed: 0,
            trials: 100_000,
            rounds: 20,
            restrict: true,
            povm_states: ["01", "10", "11"]
                .iter()
                .map(|b| StateSpec::Bidding(b.parse().expect("valid default")))
                .collect(),
            priors: None,
            parallel: false,
            output: None,
        }
    }
}

impl ScenarioConfig {
    pub fn schedule(&self) -> Result<AdiabaticSchedule, CliError> {
        let s = match self.delta {
            StepSize::Fixed(d) => AdiabaticSchedule::new(self.steps, d, self.variant),
            StepSize::Auto => AdiabaticSchedule::auto(self.steps, self.variant),
        };
        s.map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads `text` (if any), then applies `overrides`, validating every value.
    pub fn load(text: Option<&str>, overrides: &[String]) -> Result<Self, CliError> {
        let mut entries = match text {
            Some(t) => parse_entries(t)?,
            None => BTreeMap::new(),
        };
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("override {o:?} is not key=value")))?;
            let k = k.trim();
            check_key(k)?;
            entries.insert(k.to_string(), v.trim().to_string());
        }
        let mut cfg = Self::default();
        for (k, v) in &entries {
            cfg.apply(k, v)
                .map_err(|m| CliError::Config(format!("{k}: {m}")))?;
        }
        cfg.schedule()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "bids" => {
                self.bids = parse_bids(value).map_err(|e| e.to_string())?;
                if self.bids.is_empty() {
                    return Err("at least one bid is required".into());
                }
            }
            "steps" => self.steps = parse_num(value)?,
            "delta" => {
                self.delta = if value.eq_ignore_ascii_case("auto") {
                    StepSize::Auto
                } else {
                    StepSize::Fixed(parse_num(value)?)
                }
            }
            "variant" => {
                self.variant = value.parse().map_err(|e: qauction::Error| e.to_string())?
            }
            "payoff" => {
                self.payoff = match value {
                    "first_price" => PayoffKind::FirstPrice,
                    "spurious" => PayoffKind::Spurious,
                    _ => return Err(format!("expected first_price or spurious, got {value:?}")),
                }
            }
            "attack" => {
                self.attack = match value {
                    "none" => Attack::None,
                    "probe_basis" => Attack::ProbeBasis,
                    "probe_povm" => Attack::ProbePovm,
                    "spurious" => Attack::Spurious,
                    _ => return Err(format!("unknown attack {value:?}")),
                }
            }
            "defense" => self.defense = parse_defense(value)?,
            "seed" => self.seed = parse_num(value)?,
            "trials" => {
                self.trials = parse_num(value)?;
                if self.trials == 0 {
                    return Err("must be positive".into());
                }
            }
            "rounds" => {
                self.rounds = parse_num(value)?;
                if self.rounds == 0 {
                    return Err("must be positive".into());
                }
            }
            "restrict" => self.restrict = parse_bool(value)?,
            "parallel" => self.parallel = parse_bool(value)?,
            "povm_states" => {
                self.povm_states = value
                    .split(',')
                    .map(|s| parse_state(s.trim()))
                    .collect::<Result<_, _>>()?
            }
            "priors" => {
                self.priors = Some(
                    value
                        .split(',')
                        .map(|p| parse_num(p.trim()))
                        .collect::<Result<_, _>>()?,
                )
            }
            "output" => self.output = Some(PathBuf::from(value)),
            _ => unreachable!("keys are checked before applying"),
        }
        Ok(())
    }
}

fn check_key(k: &str) -> Result<(), CliError> {
    if KEYS.contains(&k) {
        Ok(())
    } else {
        Err(CliError::Config(format!("unknown key {k:?}")))
    }
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim();
        check_key(k).map_err(|e| CliError::Config(format!("line {}: {e}", i + 1)))?;
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(CliError::Config(format!(
                "line {}: duplicate key {k:?}",
                i + 1
            )));
        }
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse()
        .map_err(|_| format!("cannot parse {v:?} as a number"))
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got {v:?}")),
    }
}

fn parse_defense(v: &str) -> Result<Defense, String> {
    match v {
        "none" => return Ok(Defense::None),
        "collude" => return Ok(Defense::Collude),
        _ => {}
    }
    let inner = v
        .strip_prefix("lock(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("expected none, collude or lock(a1,a2), got {v:?}"))?;
    let parts: Vec<f64> = inner
        .split(',')
        .map(|p| parse_num(p.trim()))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [a1, a2] if [*a1, *a2].iter().all(|a| *a > 0.0 && *a <= 1.0) => Ok(Defense::Lock(*a1, *a2)),
        [_, _] => Err("lock amplitudes must lie in (0, 1]".into()),
        _ => Err(format!("lock takes two amplitudes, got {}", parts.len())),
    }
}

fn parse_state(s: &str) -> Result<StateSpec, String> {
    let (kind, bits) = s
        .split_once(':')
        .ok_or_else(|| format!("state {s:?} should be b:<bits> or e:<bits>"))?;
    match kind {
        "b" => bits
            .parse()
            .map(StateSpec::Bidding)
            .map_err(|e: qauction::Error| e.to_string()),
        "e" if !bits.is_empty() && bits.chars().all(|c| c == '0' || c == '1') => {
            Ok(StateSpec::Basis {
                width: bits.len(),
                index: usize::from_str_radix(bits, 2).map_err(|e| e.to_string())?,
            })
        }
        _ => Err(format!("state {s:?} should be b:<bits> or e:<bits>")),
    }
}
