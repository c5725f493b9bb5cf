use qauction::adversary::{
    candidate_povm, collusion_operator, collusion_subspace, locking_operators, min_error_povm,
    povm_optimality_check, probe_attack_basis, probe_attack_povm, probe_attack_povm_majority,
    revealing_state, spurious_table, LearningCurve, MonteCarlo, COLLUSION_KEEP,
};
use qauction::circuits::{
    build_bidder_circuit, build_collusion_circuit, build_d_circuit, build_p_circuit,
    circuit_to_matrix, parse_circuit, to_text, verify_circuit, Circuit, VERIFY_TOL,
};
use qauction::protocol::{
    bidding_operator, build_first_price_table, hamming_hamiltonian, initial_superposition,
    pauli_z_expansion, plausible_allocations, problem_hamiltonian, run_search, total_qubits,
    tracks_for, AdiabaticSchedule, AuctionConfig, BidSpec, PayoffTable, SearchOperators,
    Trajectory, Variant,
};
use qauction::quantum::{evolve_hermitian, measurement_probabilities, DenseOperator, StateVector};

use crate::config::{Attack, Defense, PayoffKind, ScenarioConfig, StateSpec};
use crate::csv::{fmt_num, Table};
use crate::error::CliError;

fn config_err(e: qauction::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn bits(x: usize, width: usize) -> String {
    format!("{x:0width$b}")
}

fn shared_width(bids: &[BidSpec]) -> Result<usize, CliError> {
    let w = bids[0].width();
    if bids.iter().any(|b| b.width() != w) {
        return Err(CliError::Config("all bids must have the same width".into()));
    }
    Ok(w)
}

fn payoff_table(cfg: &ScenarioConfig, kind: PayoffKind) -> Result<PayoffTable, CliError> {
    let width = shared_width(&cfg.bids)?;
    let shape = AuctionConfig::new(cfg.bids.len(), width, 1).map_err(config_err)?;
    match kind {
        PayoffKind::FirstPrice => build_first_price_table(&shape),
        PayoffKind::Spurious => spurious_table(&shape),
    }
    .map_err(config_err)
}

/// Operators, start state and tracked subspace for the configured defense.
struct Setup {
    ops: SearchOperators,
    initial: StateVector,
    subspace: Vec<usize>,
}

fn setup(cfg: &ScenarioConfig, table: &PayoffTable) -> Result<Setup, CliError> {
    let bids = &cfg.bids;
    match cfg.defense {
        Defense::None => Ok(Setup {
            ops: SearchOperators::honest(bids, table)?,
            initial: initial_superposition(bids)?,
            subspace: plausible_allocations(bids),
        }),
        Defense::Lock(a1, a2) => {
            if bids.len() != 2 {
                return Err(CliError::Config(
                    "lock(a1,a2) needs exactly two bids".into(),
                ));
            }
            let lock = locking_operators(&[a1, a2], bids).map_err(config_err)?;
            Ok(Setup {
                ops: SearchOperators::honest(bids, table)?.with_lock(lock.joint())?,
                initial: initial_superposition(bids)?,
                subspace: plausible_allocations(bids),
            })
        }
        Defense::Collude => {
            let [b1, b2] = bids.as_slice() else {
                return Err(CliError::Config("collude needs exactly two bids".into()));
            };
            let u = circuit_to_matrix(&build_collusion_circuit(b1, b2, COLLUSION_KEEP)?)?;
            let n = total_qubits(bids);
            Ok(Setup {
                initial: u.column(0)?,
                ops: SearchOperators::new(u, &hamming_hamiltonian(n), &problem_hamiltonian(table))?,
                subspace: collusion_subspace(b1, b2),
            })
        }
    }
}

fn run(setup: &Setup, schedule: &AdiabaticSchedule, target: usize) -> Result<Trajectory, CliError> {
    Ok(run_search(
        setup.initial.clone(),
        &setup.ops,
        schedule,
        target,
        setup.subspace.clone(),
    )?)
}

/// `s,f,success_prob,leakage` for one run.
pub fn converge(cfg: &ScenarioConfig) -> Result<String, CliError> {
    let table = payoff_table(cfg, cfg.payoff)?;
    let schedule = cfg.schedule()?;
    let setup = setup(cfg, &table)?;
    let target = table.winner(&setup.subspace)?;
    let traj = run(&setup, &schedule, target)?;
    let mut t = Table::new(&["s", "f", "success_prob", "leakage"]);
    for r in &traj.records {
        t.row(&[
            r.s.to_string(),
            fmt_num(r.f),
            fmt_num(r.success_probability),
            fmt_num(r.subspace_leakage),
        ]);
    }
    let n = total_qubits(&cfg.bids);
    t.note("target", bits(target, n));
    t.note("final_argmax", bits(traj.final_argmax(), n));
    t.note("variant", schedule.variant());
    t.note("delta", fmt_num(schedule.step_size()));
    Ok(t.render())
}

/// `s,f,exact,zeroth,first` on one schedule.
pub fn variants(cfg: &ScenarioConfig) -> Result<String, CliError> {
    let table = payoff_table(cfg, cfg.payoff)?;
    let schedule = cfg.schedule()?;
    let setup = setup(cfg, &table)?;
    let target = table.winner(&setup.subspace)?;
    let curves = [Variant::Exact, Variant::Zeroth, Variant::First]
        .iter()
        .map(|&v| Ok(run(&setup, &schedule.with_variant(v), target)?.success_curve()))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut t = Table::new(&["s", "f", "exact", "zeroth", "first"]);
    for s in 0..=schedule.steps() {
        let mut row = vec![s.to_string(), fmt_num(schedule.fraction(s))];
        row.extend(curves.iter().map(|c| fmt_num(c[s])));
        t.row(&row);
    }
    t.note("target", bits(target, total_qubits(&cfg.bids)));
    t.note("delta", fmt_num(schedule.step_size()));
    Ok(t.render())
}

/// `s,f,lambda0..,gap` plus `# g_min=`.
pub fn gap(cfg: &ScenarioConfig) -> Result<String, CliError> {
    let table = payoff_table(cfg, cfg.payoff)?;
    let schedule = cfg.schedule()?;
    let setup = setup(cfg, &table)?;
    let tracks = tracks_for(
        &setup.ops,
        &schedule,
        cfg.restrict.then_some(setup.subspace.as_slice()),
    )?;
    let levels = tracks.rows[0].eigenvalues.len();
    let mut header = vec!["s".to_string(), "f".to_string()];
    header.extend((0..levels).map(|k| format!("lambda{k}")));
    header.push("gap".into());
    let mut t = Table::new(&header);
    for r in &tracks.rows {
        let mut row = vec![r.s.to_string(), fmt_num(r.f)];
        row.extend(r.eigenvalues.iter().map(|&e| fmt_num(e)));
        row.push(fmt_num(r.gap()));
        t.row(&row);
    }
    t.note("g_min", fmt_num(tracks.g_min));
    Ok(t.render())
}

fn monte_carlo(cfg: &ScenarioConfig) -> MonteCarlo {
    MonteCarlo {
        trials: cfg.trials,
        seed: cfg.seed,
        parallel: cfg.parallel,
    }
}

/// Closed-form and plurality-vote POVM curves for the given per-bidder lock.
fn povm_curves(
    cfg: &ScenarioConfig,
    alphas: Option<[f64; 2]>,
    mc: &MonteCarlo,
) -> Result<(LearningCurve, LearningCurve, Vec<f64>), CliError> {
    let width = shared_width(&cfg.bids)?;
    let mut errors = Vec::new();
    let mut probs = Vec::new();
    let mut truth = Vec::new();
    for (i, b) in cfg.bids.iter().enumerate() {
        let alpha = alphas.map(|a| a[i]);
        let sol = candidate_povm(width, alpha)?;
        let own = qauction::adversary::transmitted_state(b, alpha)?;
        probs.push(measurement_probabilities(&own, sol.povm.elements())?);
        truth.push(b.value() - 1);
        errors.push(sol.error_probability);
    }
    let closed = probe_attack_povm(&errors, cfg.rounds)?;
    let sampled = probe_attack_povm_majority(&probs, &truth, cfg.rounds, mc)?;
    Ok((closed, sampled, errors))
}

/// Learning curves, or the spurious-Hamiltonian convergence when `attack=spurious`.
pub fn attack(cfg: &ScenarioConfig) -> Result<String, CliError> {
    if cfg.attack == Attack::Spurious {
        return spurious_attack(cfg);
    }
    if cfg.defense == Defense::Collude {
        return Err(CliError::Config(
            "collude only applies to attack=spurious".into(),
        ));
    }
    let mc = monte_carlo(cfg);
    let bids = &cfg.bids;
    let mut columns: Vec<(&str, LearningCurve)> = vec![
        (
            "basis_closed",
            probe_attack_basis(bids, None, cfg.rounds, None)?,
        ),
        (
            "basis_mc",
            probe_attack_basis(bids, None, cfg.rounds, Some(&mc))?,
        ),
    ];
    let (pc, pm, pe) = povm_curves(cfg, None, &mc)?;
    columns.push(("povm_closed", pc));
    columns.push(("povm_mc", pm));
    let mut notes = vec![("povm_pe", fmt_num(pe[0]))];
    if let Defense::Lock(a1, a2) = cfg.defense {
        if bids.len() != 2 {
            return Err(CliError::Config(
                "lock(a1,a2) needs exactly two bids".into(),
            ));
        }
        let alphas = [a1, a2];
        columns.push((
            "locked_basis_closed",
            probe_attack_basis(bids, Some(&alphas), cfg.rounds, None)?,
        ));
        columns.push((
            "locked_basis_mc",
            probe_attack_basis(bids, Some(&alphas), cfg.rounds, Some(&mc))?,
        ));
        let (lc, lm, lpe) = povm_curves(cfg, Some(alphas), &mc)?;
        columns.push(("locked_povm_closed", lc));
        columns.push(("locked_povm_mc", lm));
        notes.push((
            "locked_povm_pe",
            lpe.iter()
                .map(|&p| fmt_num(p))
                .collect::<Vec<_>>()
                .join(";"),
        ));
    }
    let mut header = vec!["N"];
    header.extend(columns.iter().map(|(h, _)| *h));
    let mut t = Table::new(&header);
    for n in 1..=cfg.rounds {
        let mut row = vec![n.to_string()];
        row.extend(
            columns
                .iter()
                .map(|(_, c)| fmt_num(c.at(n).expect("length rounds"))),
        );
        t.row(&row);
    }
    for (k, v) in notes {
        t.note(k, v);
    }
    t.note("trials", cfg.trials);
    t.note("seed", cfg.seed);
    Ok(t.render())
}

fn spurious_attack(cfg: &ScenarioConfig) -> Result<String, CliError> {
    let table = payoff_table(cfg, PayoffKind::Spurious)?;
    let honest = payoff_table(cfg, PayoffKind::FirstPrice)?;
    let schedule = cfg.schedule()?;
    let setup = setup(cfg, &table)?;
    let revealing = revealing_state(&cfg.bids);
    let winner = honest.winner(&plausible_allocations(&cfg.bids))?;
    let target = table.winner(&setup.subspace)?;
    let traj = run(&setup, &schedule, target)?;
    let mut t = Table::new(&["s", "f", "revealing_prob", "winner_prob", "leakage"]);
    let mut max_reveal = 0.0f64;
    for r in &traj.records {
        let reveal = r.state.probability(revealing);
        max_reveal = max_reveal.max(reveal.sqrt());
        t.row(&[
            r.s.to_string(),
            fmt_num(r.f),
            fmt_num(reveal),
            fmt_num(r.state.probability(winner)),
            fmt_num(r.subspace_leakage),
        ]);
    }
    let n = total_qubits(&cfg.bids);
    t.note("revealing_state", bits(revealing, n));
    t.note("winner_state", bits(winner, n));
    t.note("final_argmax", bits(traj.final_argmax(), n));
    t.note("max_revealing_amplitude", fmt_num(max_reveal));
    Ok(t.render())
}

fn povm_state(spec: &StateSpec) -> Result<StateVector, CliError> {
    match spec {
        StateSpec::Bidding(b) => Ok(bidding_operator(b).column(0)?),
        StateSpec::Basis { width, index } => StateVector::basis(*width, *index).map_err(config_err),
    }
}

/// Minimum-error measurement report: element entries, `P_e`, optimality verdict.
pub fn povm(cfg: &ScenarioConfig) -> Result<String, CliError> {
    let states = cfg
        .povm_states
        .iter()
        .map(povm_state)
        .collect::<Result<Vec<_>, _>>()?;
    if states.iter().any(|s| s.dim() != states[0].dim()) {
        return Err(CliError::Config("povm_states must share a width".into()));
    }
    let priors = cfg
        .priors
        .clone()
        .unwrap_or_else(|| vec![1.0 / states.len() as f64; states.len()]);
    if priors.len() != states.len() {
        return Err(CliError::Config(format!(
            "{} priors for {} states",
            priors.len(),
            states.len()
        )));
    }
    let sol = min_error_povm(&states, &priors).map_err(config_err)?;
    let optimal = povm_optimality_check(&sol.povm, &states, &priors);
    let mut t = Table::new(&["element", "row", "col", "re", "im"]);
    for (k, e) in sol.povm.elements().iter().enumerate() {
        for r in 0..e.dim() {
            for c in 0..e.dim() {
                let z = e.get(r, c);
                t.row(&[
                    k.to_string(),
                    r.to_string(),
                    c.to_string(),
                    fmt_num(z.re),
                    fmt_num(z.im),
                ]);
            }
        }
    }
    t.note("p_e", fmt_num(sol.error_probability));
    t.note("optimal", optimal);
    Ok(t.render())
}

/// Named protocol unitary for circuit checks.
#[derive(Debug, Clone, PartialEq)]
pub enum CircuitTarget {
    Bidder(BidSpec),
    D { delta: f64, f: f64 },
    P { delta: f64, f: f64 },
    Collusion(BidSpec, BidSpec),
}

impl std::str::FromStr for CircuitTarget {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || {
            CliError::Config(format!(
            "target {s:?} should be bidder:<bits>, D:<delta>,<f>, P:<delta>,<f> or collusion:<bits>,<bits>"
        ))
        };
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let args = args.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = args
            .split(',')
            .map(|p| p.trim().trim_matches('"'))
            .collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(bad)
        };
        let bid = |p: &str| p.parse::<BidSpec>().map_err(config_err);
        match (kind.trim(), parts.as_slice()) {
            ("bidder", [b]) => Ok(CircuitTarget::Bidder(bid(b)?)),
            ("D", [d, f]) => Ok(CircuitTarget::D {
                delta: num(d)?,
                f: num(f)?,
            }),
            ("P", [d, f]) => Ok(CircuitTarget::P {
                delta: num(d)?,
                f: num(f)?,
            }),
            ("collusion", [b1, b2]) => Ok(CircuitTarget::Collusion(bid(b1)?, bid(b2)?)),
            _ => Err(bad()),
        }
    }
}

impl CircuitTarget {
    /// Width of the target; `D` takes its width from `fallback`.
    fn width(&self, cfg: &ScenarioConfig, fallback: usize) -> usize {
        match self {
            CircuitTarget::Bidder(b) => b.width(),
            CircuitTarget::D { .. } => fallback,
            CircuitTarget::P { .. } => total_qubits(&cfg.bids),
            CircuitTarget::Collusion(b1, b2) => b1.width() + b2.width(),
        }
    }

    /// Dense reference unitary.
    fn dense(&self, cfg: &ScenarioConfig, n: usize) -> Result<DenseOperator, CliError> {
        Ok(match self {
            CircuitTarget::Bidder(b) => bidding_operator(b),
            CircuitTarget::D { delta, f } => evolve_hermitian(&hamming_hamiltonian(n), delta * f)?,
            CircuitTarget::P { delta, f } => evolve_hermitian(
                &problem_hamiltonian(&payoff_table(cfg, cfg.payoff)?),
                delta * f,
            )?,
            CircuitTarget::Collusion(b1, b2) => collusion_operator(b1, b2, COLLUSION_KEEP)?,
        })
    }

    /// Gate-level construction.
    fn circuit(&self, cfg: &ScenarioConfig, n: usize) -> Result<Circuit, CliError> {
        Ok(match self {
            CircuitTarget::Bidder(b) => build_bidder_circuit(b),
            CircuitTarget::D { delta, f } => build_d_circuit(*delta, *f, n).map_err(config_err)?,
            CircuitTarget::P { delta, f } => {
                let terms = pauli_z_expansion(&payoff_table(cfg, cfg.payoff)?);
                build_p_circuit(&terms, *delta, *f, n)?
            }
            CircuitTarget::Collusion(b1, b2) => build_collusion_circuit(b1, b2, COLLUSION_KEEP)?,
        })
    }
}

/// Parses `text`, compares it with the target and reports `distance` and `pass`.
pub fn circuit_verify(cfg: &ScenarioConfig, text: &str, target: &str) -> Result<String, CliError> {
    let target_spec: CircuitTarget = target.parse()?;
    let mut circuit = parse_circuit(text).map_err(config_err)?;
    let n = target_spec.width(cfg, circuit.n_qubits().max(1));
    if circuit.n_qubits() > n {
        return Err(CliError::Config(format!(
            "circuit has {} qubits but target {target} needs {n}",
            circuit.n_qubits()
        )));
    }
    // A narrower circuit (an empty one in particular) idles on the remaining qubits.
    if circuit.n_qubits() < n {
        circuit = circuit.embedded(0, n)?;
    }
    let dense = target_spec.dense(cfg, n)?;
    let report = verify_circuit(&circuit, &dense)?;
    let text = format!(
        "target={target}\ndistance={}\npass={}\n",
        fmt_num(report.distance),
        report.pass
    );
    if report.pass {
        Ok(text)
    } else {
        Err(CliError::VerificationFailed {
            distance: report.distance,
            tolerance: VERIFY_TOL,
            report: text,
        })
    }
}

/// Text form of the generated circuit for `target`.
pub fn circuit_emit(cfg: &ScenarioConfig, target: &str) -> Result<String, CliError> {
    let spec: CircuitTarget = target.parse()?;
    let n = spec.width(cfg, total_qubits(&cfg.bids));
    Ok(format!("# {target}\n{}", to_text(&spec.circuit(cfg, n)?)))
}
