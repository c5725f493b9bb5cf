use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use qauction::adversary::{
    closed_form_curve, locking_operators, min_error_povm, povm_optimality_check,
    probe_attack_basis, MonteCarlo,
};
use qauction::circuits::{build_bidder_circuit, build_p_circuit, circuit_to_matrix, Circuit, Gate};
use qauction::protocol::{
    bidding_operator, build_first_price_table, expansion_diagonal, hamming_hamiltonian,
    initial_superposition, joint_bidding_operator, pauli_z_expansion, plausible_allocations,
    problem_hamiltonian, run_search, AdiabaticSchedule, AuctionConfig, BidSpec, PayoffTable,
    SearchOperators, Variant,
};
use qauction::quantum::{
    eig_hermitian, evolve_hermitian, measurement_probabilities, phase_invariant_distance,
    tensor_product, DenseOperator, Povm, StateVector, C64,
};

fn hermitian(n_qubits: usize) -> impl Strategy<Value = DenseOperator> {
    let dim = 1usize << n_qubits;
    prop::collection::vec(-2.0f64..2.0, 2 * dim * dim).prop_map(move |v| {
        let a = DMatrix::from_fn(dim, dim, |r, c| {
            let k = 2 * (r * dim + c);
            C64::new(v[k], v[k + 1])
        });
        DenseOperator::new((&a + a.adjoint()) * C64::new(0.5, 0.0)).unwrap()
    })
}

fn state(n_qubits: usize) -> impl Strategy<Value = StateVector> {
    let dim = 1usize << n_qubits;
    prop::collection::vec(-1.0f64..1.0, 2 * dim)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let amps = DVector::from_fn(dim, |i, _| C64::new(v[2 * i], v[2 * i + 1]));
            StateVector::normalized(amps).unwrap()
        })
}

fn bid(width: usize) -> impl Strategy<Value = BidSpec> {
    (1usize..1 << width).prop_map(move |v| BidSpec::new(width, v).unwrap())
}

fn bid_pair() -> impl Strategy<Value = Vec<BidSpec>> {
    (1usize..=3).prop_flat_map(|w| prop::collection::vec(bid(w), 2))
}

fn table(n_qubits: usize) -> impl Strategy<Value = PayoffTable> {
    prop::collection::vec(0u8..8, 1 << n_qubits).prop_map(move |v| {
        PayoffTable::new(n_qubits, v.into_iter().map(f64::from).collect()).unwrap()
    })
}

fn leaf_gate(lo: usize, n: usize) -> impl Strategy<Value = Gate> {
    let angle = -PI..PI;
    prop_oneof![
        (lo..n).prop_map(Gate::Hadamard),
        (lo..n, lo..n)
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(control, target)| Gate::Cnot { control, target }),
        (lo..n, angle.clone()).prop_map(|(qubit, angle)| Gate::Phase { qubit, angle }),
        (lo..n, angle).prop_map(|(qubit, angle)| Gate::Rotation { qubit, angle }),
    ]
}

/// Gates on 4 qubits; controlled blocks use qubits 0-1 as controls and 2-3 as targets.
fn gate() -> impl Strategy<Value = Gate> {
    prop_oneof![
        3 => leaf_gate(0, 4),
        1 => (prop::sample::subsequence(vec![0usize, 1], 1..=2), prop::collection::vec(leaf_gate(2, 4), 0..4))
            .prop_map(|(controls, body)| Gate::ZeroControlled { controls, body }),
    ]
}

fn unitarity(u: &DenseOperator) -> f64 {
    u.unitarity_deviation()
}

fn min_eigenvalue(h: &DenseOperator) -> f64 {
    eig_hermitian(h).unwrap().eigenvalues[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evolution_group_property(h in (1usize..=3).prop_flat_map(hermitian), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let lhs = evolve_hermitian(&h, s).unwrap().matmul(&evolve_hermitian(&h, t).unwrap()).unwrap();
        let rhs = evolve_hermitian(&h, s + t).unwrap();
        prop_assert!(phase_invariant_distance(&lhs, &rhs).unwrap() <= 1e-8);
    }

    #[test]
    fn evolution_preserves_norm(
        (h, psi) in (1usize..=3).prop_flat_map(|n| (hermitian(n), state(n))),
        t in -5.0f64..5.0,
    ) {
        let u = evolve_hermitian(&h, t).unwrap();
        prop_assert!(unitarity(&u) <= 1e-9);
        prop_assert!((u.apply(&psi).unwrap().norm_sqr() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn spectrum_sorted_reconstructs_and_is_conjugation_invariant(
        (h, g) in (1usize..=3).prop_flat_map(|n| (hermitian(n), hermitian(n))),
    ) {
        let spec = eig_hermitian(&h).unwrap();
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(spec.reconstruct().max_abs_diff(&h).unwrap() <= 1e-9);
        let u = evolve_hermitian(&g, 0.7).unwrap();
        let conj = eig_hermitian(&u.conjugate(&h).unwrap()).unwrap();
        for (a, b) in spec.eigenvalues.iter().zip(&conj.eigenvalues) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn basis_probabilities_are_squared_amplitudes(psi in (1usize..=4).prop_flat_map(state)) {
        let povm = Povm::computational_basis(psi.dim());
        let probs = measurement_probabilities(&psi, povm.elements()).unwrap();
        for (i, p) in probs.iter().enumerate() {
            prop_assert!((p - psi.amplitude(i).norm_sqr()).abs() <= 1e-12);
        }
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn tensor_of_unitaries_is_unitary(a in hermitian(1), b in hermitian(2)) {
        let ua = evolve_hermitian(&a, 1.0).unwrap();
        let ub = evolve_hermitian(&b, -0.4).unwrap();
        let t = tensor_product(&ua, &ub);
        prop_assert_eq!(t.dim(), 8);
        prop_assert!(unitarity(&t) <= 1e-9);
    }

    #[test]
    fn pauli_expansion_is_exact(t in (1usize..=5).prop_flat_map(table)) {
        let diag = expansion_diagonal(&pauli_z_expansion(&t), t.n_qubits());
        for (d, f) in diag.iter().zip(t.values()) {
            prop_assert!((d + f).abs() <= 1e-12);
        }
    }

    #[test]
    fn first_price_tables_pay_only_single_bidders(bidders in 1usize..=3, width in 1usize..=3) {
        let cfg = AuctionConfig::new(bidders, width, 1).unwrap();
        let t = build_first_price_table(&cfg).unwrap();
        for (x, &f) in t.values().iter().enumerate() {
            prop_assert!(f >= 0.0);
            let regs: Vec<usize> = (0..bidders).map(|k| cfg.register_value(x, k)).collect();
            let nonzero: Vec<usize> = regs.iter().copied().filter(|&v| v != 0).collect();
            let want = if nonzero.len() == 1 { nonzero[0] as f64 } else { 0.0 };
            prop_assert_eq!(f, want);
        }
    }

    #[test]
    fn zero_bids_are_rejected(width in 1usize..=8) {
        prop_assert!(BidSpec::new(width, 0).is_err());
    }

    #[test]
    fn every_variant_keeps_norm_and_records_in_range(
        bids in bid_pair(),
        steps in 1usize..=12,
        delta in 0.05f64..2.0,
        values in prop::collection::vec(0u8..6, 64),
    ) {
        let n = bids[0].width() * 2;
        let table = PayoffTable::new(n, values[..1 << n].iter().map(|&v| f64::from(v)).collect()).unwrap();
        let ops = SearchOperators::honest(&bids, &table).unwrap();
        let subspace = plausible_allocations(&bids);
        for v in [Variant::Exact, Variant::Zeroth, Variant::First] {
            let sched = AdiabaticSchedule::new(steps, delta, v).unwrap();
            let traj = run_search(initial_superposition(&bids).unwrap(), &ops, &sched, 0, subspace.clone()).unwrap();
            prop_assert_eq!(traj.records.len(), steps + 1);
            for r in &traj.records {
                prop_assert!((r.state.norm_sqr() - 1.0).abs() <= 1e-9);
                prop_assert!((0.0..=1.0).contains(&r.success_probability));
                prop_assert!(r.subspace_leakage >= 0.0);
                if r.s > 0 {
                    prop_assert!(r.f > 0.0 && r.f <= 1.0);
                    prop_assert_eq!(r.f, r.s as f64 / steps as f64);
                }
            }
        }
    }

    #[test]
    fn bidding_span_is_preserved_by_one_iteration(
        bids in bid_pair(),
        phases in prop::collection::vec(-PI..PI, 64),
        delta in 0.0f64..3.0,
        f in 0.0f64..1.0,
    ) {
        let n = bids[0].width() * 2;
        let u = joint_bidding_operator(&bids).unwrap();
        let d = evolve_hermitian(&hamming_hamiltonian(n), delta * (1.0 - f)).unwrap();
        let p = DenseOperator::from_diagonal(
            &phases[..1 << n].iter().map(|&a| C64::from_polar(1.0, a)).collect::<Vec<_>>(),
        );
        let step = u.matmul(&d).unwrap().matmul(&u.adjoint()).unwrap().matmul(&p).unwrap();
        let span = plausible_allocations(&bids);
        for &x in &span {
            let out = step.apply(&StateVector::basis(n, x).unwrap()).unwrap();
            prop_assert!(out.leakage_outside(&span) <= 1e-9);
        }
    }

    #[test]
    fn random_circuits_extract_to_unitaries(gates in prop::collection::vec(gate(), 0..16)) {
        let c = Circuit::from_gates(4, gates).unwrap();
        prop_assert!(unitarity(&circuit_to_matrix(&c).unwrap()) <= 1e-9);
    }

    #[test]
    fn zero_control_is_identity_when_any_control_is_set(
        body in prop::collection::vec(leaf_gate(2, 4), 0..6),
        controls in prop::sample::subsequence(vec![0usize, 1], 1..=2),
    ) {
        let m = circuit_to_matrix(
            &Circuit::from_gates(4, vec![Gate::ZeroControlled { controls: controls.clone(), body }]).unwrap(),
        ).unwrap();
        for x in 0..16usize {
            if controls.iter().any(|&q| x >> (3 - q) & 1 == 1) {
                for y in 0..16 {
                    let want = if x == y { 1.0 } else { 0.0 };
                    prop_assert!((m.get(y, x) - C64::new(want, 0.0)).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn bidder_circuits_equal_dense_operators(b in (1usize..=6).prop_flat_map(bid)) {
        let m = circuit_to_matrix(&build_bidder_circuit(&b)).unwrap();
        prop_assert!(m.max_abs_diff(&bidding_operator(&b)).unwrap() <= 1e-12);
    }

    #[test]
    fn p_circuit_is_exact(t in (1usize..=4).prop_flat_map(table), delta in 0.0f64..2.0, f in 0.0f64..1.0) {
        let n = t.n_qubits();
        let c = build_p_circuit(&pauli_z_expansion(&t), delta, f, n).unwrap();
        let dense = evolve_hermitian(&problem_hamiltonian(&t), delta * f).unwrap();
        prop_assert!(phase_invariant_distance(&circuit_to_matrix(&c).unwrap(), &dense).unwrap() <= 1e-9);
    }

    #[test]
    fn locks_are_hermitian_unitary_and_recover_alpha(
        a1 in 0.01f64..=1.0,
        a2 in 0.01f64..=1.0,
        bids in (1usize..4, 1usize..4),
    ) {
        let bids = [BidSpec::new(2, bids.0).unwrap(), BidSpec::new(2, bids.1).unwrap()];
        let pair = locking_operators(&[a1, a2], &bids).unwrap();
        for (i, v) in pair.operators.iter().enumerate() {
            prop_assert!(v.max_abs_diff(&v.adjoint()).unwrap() <= 1e-10);
            prop_assert!(unitarity(v) <= 1e-10);
            let th = pair.thetas[i];
            prop_assert!(((th.cos() + th.sin()) / 2f64.sqrt() - pair.alphas[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn learning_curves_are_monotone_and_bounded(
        a1 in 0.05f64..=1.0,
        a2 in 0.05f64..=1.0,
        failures in prop::collection::vec(0.0f64..=1.0, 1..4),
        seed in any::<u64>(),
    ) {
        let bids = [BidSpec::new(2, 3).unwrap(), BidSpec::new(2, 2).unwrap()];
        let mc = MonteCarlo::new(500, seed);
        let curves = [
            closed_form_curve(&failures, 12).unwrap(),
            probe_attack_basis(&bids, Some(&[a1, a2]), 12, None).unwrap(),
            probe_attack_basis(&bids, Some(&[a1, a2]), 12, Some(&mc)).unwrap(),
        ];
        for c in &curves {
            prop_assert_eq!(c.len(), 12);
            prop_assert!(c.values.iter().all(|v| (0.0..=1.0).contains(v)));
            prop_assert!(c.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solved_povms_are_valid_and_optimal(
        (states, weights) in (1usize..=2).prop_flat_map(|n| {
            (2usize..=3.min(1 << n)).prop_flat_map(move |k| (prop::collection::vec(state(n), k), prop::collection::vec(0.1f64..1.0, k)))
        }),
    ) {
        let total: f64 = weights.iter().sum();
        let priors: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let sol = min_error_povm(&states, &priors).unwrap();
        let dim = states[0].dim();
        let mut sum = DenseOperator::zeros(dim);
        for e in sol.povm.elements() {
            prop_assert!(min_eigenvalue(e) >= -1e-9);
            sum = sum.add(e).unwrap();
        }
        prop_assert!(sum.max_abs_diff(&DenseOperator::identity(dim)).unwrap() <= 1e-9);
        prop_assert!(povm_optimality_check(&sol.povm, &states, &priors));
        prop_assert!((0.0..=1.0).contains(&sol.error_probability));
    }
}
