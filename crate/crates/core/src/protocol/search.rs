use std::fmt;
use std::str::FromStr;

use super::{
    hamming_hamiltonian, initial_superposition, joint_bidding_operator, plausible_allocations,
    problem_hamiltonian, BidSpec, PayoffTable,
};
use crate::error::{Error, Result};
use crate::quantum::{evolve_hermitian, DenseOperator, StateVector, C64};

/// Integrator used for each discrete adiabatic step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `exp(-iΔ[(1-f) U W U† + f V H_p V†])`.
    Exact,
    /// `U D(Δ,1-f) U† P(Δ,f)`.
    Zeroth,
    /// Symmetric split `U D(Δ/2,1-f) U† P(Δ,f) U D(Δ/2,1-f) U†`.
    First,
    /// `U D(Δ,1-f) U† V P(Δ,f) V†`.
    Locked,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Exact,
        Variant::Zeroth,
        Variant::First,
        Variant::Locked,
    ];
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Variant::Exact),
            "zeroth" => Ok(Variant::Zeroth),
            "first" => Ok(Variant::First),
            "locked" => Ok(Variant::Locked),
            other => Err(Error::InvalidArgument(format!("unknown variant {other:?}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Exact => "exact",
            Variant::Zeroth => "zeroth",
            Variant::First => "first",
            Variant::Locked => "locked",
        })
    }
}

/// `S` steps of size `Δ`; step `s` uses `f = s/S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticSchedule {
    steps: usize,
    step_size: f64,
    variant: Variant,
}

impl AdiabaticSchedule {
    pub fn new(steps: usize, step_size: f64, variant: Variant) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument(
                "schedule needs at least one step".into(),
            ));
        }
        if !(step_size.is_finite() && step_size >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "step size must be finite and non-negative, got {step_size}"
            )));
        }
        Ok(Self {
            steps,
            step_size,
            variant,
        })
    }

    /// `Δ = 1/√S`, which sends `T = SΔ` to infinity as `S` grows.
    pub fn auto(steps: usize, variant: Variant) -> Result<Self> {
        Self::new(steps, 1.0 / (steps as f64).sqrt(), variant)
    }

    /// `S = 20, Δ = 1.5`.
    pub fn short(variant: Variant) -> Self {
        Self::new(20, 1.5, variant).expect("valid preset")
    }

    /// `S = 40, Δ = 1`.
    pub fn long(variant: Variant) -> Self {
        Self::new(40, 1.0, variant).expect("valid preset")
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        Self { variant, ..self }
    }

    pub fn total_time(&self) -> f64 {
        self.steps as f64 * self.step_size
    }

    pub fn fraction(&self, s: usize) -> f64 {
        s as f64 / self.steps as f64
    }
}

/// Operators driving the search: bidding unitary `U`, diagonal `W` and `H_p`,
/// and an optional lock `V` conjugating the problem factor.
#[derive(Debug, Clone)]
pub struct SearchOperators {
    bidding: DenseOperator,
    bidding_adjoint: DenseOperator,
    mixer: Vec<f64>,
    problem: Vec<f64>,
    lock: Option<(DenseOperator, DenseOperator)>,
}

impl SearchOperators {
    pub fn new(
        bidding: DenseOperator,
        mixer: &DenseOperator,
        problem: &DenseOperator,
    ) -> Result<Self> {
        bidding.require_unitary()?;
        let dim = bidding.dim();
        for op in [mixer, problem] {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: op.dim(),
                });
            }
        }
        let mixer = mixer
            .real_diagonal()
            .ok_or_else(|| Error::InvalidArgument("mixer W must be real diagonal".into()))?;
        let problem = problem
            .real_diagonal()
            .ok_or_else(|| Error::InvalidArgument("problem H_p must be real diagonal".into()))?;
        Ok(Self {
            bidding_adjoint: bidding.adjoint(),
            bidding,
            mixer,
            problem,
            lock: None,
        })
    }

    /// Standard honest operators: `U = ⊗U_j`, Hamming-weight `W`, `H_p = -diag(F)`.
    pub fn honest(bidders: &[BidSpec], table: &PayoffTable) -> Result<Self> {
        let u = joint_bidding_operator(bidders)?;
        if u.dim() != table.values().len() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                actual: table.values().len(),
            });
        }
        Self::new(
            u,
            &hamming_hamiltonian(table.n_qubits()),
            &problem_hamiltonian(table),
        )
    }

    pub fn with_lock(mut self, lock: DenseOperator) -> Result<Self> {
        lock.require_unitary()?;
        if lock.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: lock.dim(),
            });
        }
        self.lock = Some((lock.adjoint(), lock));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.bidding.dim()
    }

    pub fn bidding(&self) -> &DenseOperator {
        &self.bidding
    }

    pub fn lock(&self) -> Option<&DenseOperator> {
        self.lock.as_ref().map(|(_, v)| v)
    }

    /// Beginning Hamiltonian `U W U†`.
    pub fn beginning_hamiltonian(&self) -> DenseOperator {
        self.bidding
            .conjugate(&DenseOperator::from_real_diagonal(&self.mixer))
            .expect("dimensions checked at construction")
    }

    /// Final Hamiltonian `V H_p V†` (`H_p` when unlocked).
    pub fn final_hamiltonian(&self) -> DenseOperator {
        let hp = DenseOperator::from_real_diagonal(&self.problem);
        match &self.lock {
            Some((_, v)) => v
                .conjugate(&hp)
                .expect("dimensions checked at construction"),
            None => hp,
        }
    }

    /// `H(f) = (1-f) U W U† + f V H_p V†`.
    pub fn interpolated(&self, f: f64) -> DenseOperator {
        self.beginning_hamiltonian()
            .scale(1.0 - f)
            .add(&self.final_hamiltonian().scale(f))
            .expect("dimensions checked at construction")
    }

    fn apply_mixer(&self, psi: &mut StateVector, time: f64) {
        let mut tmp = self.bidding_adjoint.entries() * psi.amplitudes();
        for (a, &w) in tmp.iter_mut().zip(&self.mixer) {
            *a *= C64::from_polar(1.0, -time * w);
        }
        *psi.amplitudes_mut() = self.bidding.entries() * tmp;
    }

    fn apply_problem(&self, psi: &mut StateVector, time: f64) {
        if let Some((v_adj, _)) = &self.lock {
            *psi.amplitudes_mut() = v_adj.entries() * psi.amplitudes();
        }
        for (a, &h) in psi.amplitudes_mut().iter_mut().zip(&self.problem) {
            *a *= C64::from_polar(1.0, -time * h);
        }
        if let Some((_, v)) = &self.lock {
            *psi.amplitudes_mut() = v.entries() * psi.amplitudes();
        }
    }
}

/// Advances `state` by step `s` (`1 ≤ s ≤ S`) of the schedule.
///
/// The lock, when present, conjugates the problem factor in every variant;
/// without one `Locked` coincides with `Zeroth`.
pub fn adiabatic_step(
    state: &StateVector,
    s: usize,
    schedule: &AdiabaticSchedule,
    ops: &SearchOperators,
) -> Result<StateVector> {
    if state.dim() != ops.dim() {
        return Err(Error::DimensionMismatch {
            expected: ops.dim(),
            actual: state.dim(),
        });
    }
    if s == 0 || s > schedule.steps() {
        return Err(Error::InvalidArgument(format!(
            "step {s} outside 1..={}",
            schedule.steps()
        )));
    }
    let f = schedule.fraction(s);
    let delta = schedule.step_size();
    let mut psi = state.clone();
    match schedule.variant() {
        Variant::Exact => {
            let u = evolve_hermitian(&ops.interpolated(f), delta)?;
            psi = u.apply(&psi)?;
        }
        Variant::Zeroth | Variant::Locked => {
            ops.apply_problem(&mut psi, delta * f);
            ops.apply_mixer(&mut psi, delta * (1.0 - f));
        }
        Variant::First => {
            ops.apply_mixer(&mut psi, 0.5 * delta * (1.0 - f));
            ops.apply_problem(&mut psi, delta * f);
            ops.apply_mixer(&mut psi, 0.5 * delta * (1.0 - f));
        }
    }
    Ok(psi)
}

/// One point on a search trajectory.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub s: usize,
    pub f: f64,
    pub state: StateVector,
    /// `|<x*|Ψ_s>|^2`.
    pub success_probability: f64,
    /// Probability mass outside the plausible-allocation span.
    pub subspace_leakage: f64,
}

/// Records for `s = 0..=S`, starting from the initial superposition.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<StepRecord>,
    pub target: usize,
    pub subspace: Vec<usize>,
}

impl Trajectory {
    pub fn final_record(&self) -> &StepRecord {
        self.records.last().expect("trajectory always holds s = 0")
    }

    pub fn final_success(&self) -> f64 {
        self.final_record().success_probability
    }

    pub fn success_curve(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.success_probability).collect()
    }

    pub fn max_leakage(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.subspace_leakage)
            .fold(0.0, f64::max)
    }

    /// Most probable subspace allocation in the final state.
    pub fn final_argmax(&self) -> usize {
        self.final_record()
            .state
            .argmax_over(&self.subspace)
            .expect("subspace is non-empty")
    }

    pub fn final_state(&self) -> &StateVector {
        &self.final_record().state
    }
}

/// Folds the schedule over `initial`, tracking `target` and leakage out of `subspace`.
pub fn run_search(
    initial: StateVector,
    ops: &SearchOperators,
    schedule: &AdiabaticSchedule,
    target: usize,
    subspace: Vec<usize>,
) -> Result<Trajectory> {
    if target >= initial.dim() {
        return Err(Error::IndexOutOfRange {
            index: target,
            dim: initial.dim(),
        });
    }
    let record = |s: usize, state: StateVector| StepRecord {
        s,
        f: schedule.fraction(s),
        success_probability: state.probability(target),
        subspace_leakage: state.leakage_outside(&subspace),
        state,
    };
    let mut records = Vec::with_capacity(schedule.steps() + 1);
    records.push(record(0, initial));
    for s in 1..=schedule.steps() {
        let next = adiabatic_step(&records[s - 1].state, s, schedule, ops)?;
        records.push(record(s, next));
    }
    Ok(Trajectory {
        records,
        target,
        subspace,
    })
}

/// Honest auction: start from `⊗U_j|0>` and search for the best plausible allocation.
pub fn run_adiabatic(
    bidders: &[BidSpec],
    table: &PayoffTable,
    schedule: &AdiabaticSchedule,
) -> Result<Trajectory> {
    let ops = SearchOperators::honest(bidders, table)?;
    let subspace = plausible_allocations(bidders);
    let winner = table.winner(&subspace)?;
    run_search(
        initial_superposition(bidders)?,
        &ops,
        schedule,
        winner,
        subspace,
    )
}
