//! End-to-end runs of the two-bidder, two-qubit auction.

use qauction::adversary::{
    locking_operators, revealing_state, run_collusion_defense, run_locked_auction,
    run_spurious_attack, spurious_table,
};
use qauction::protocol::{
    build_first_price_table, parse_bids, run_adiabatic, AdiabaticSchedule, AuctionConfig,
    PayoffTable, Variant,
};

fn toy_table() -> PayoffTable {
    build_first_price_table(&AuctionConfig::new(2, 2, 1).unwrap()).unwrap()
}

fn distinct_pairs() -> Vec<String> {
    let mut out = Vec::new();
    for a in 1..=3usize {
        for b in 1..=3usize {
            if a != b {
                out.push(format!("{a:02b},{b:02b}"));
            }
        }
    }
    out
}

#[test]
fn first_order_long_schedule_finds_every_winner() {
    let table = toy_table();
    for pair in distinct_pairs() {
        let bids = parse_bids(&pair).unwrap();
        let traj = run_adiabatic(&bids, &table, &AdiabaticSchedule::long(Variant::First)).unwrap();
        assert_eq!(traj.final_argmax(), traj.target, "{pair}");
        assert!(traj.max_leakage() <= 1e-9);
    }
}

#[test]
fn zeroth_short_schedule_tracks_exact_oracle() {
    let table = toy_table();
    for pair in ["10,11", "01,10", "01,11"] {
        let bids = parse_bids(pair).unwrap();
        let zeroth =
            run_adiabatic(&bids, &table, &AdiabaticSchedule::short(Variant::Zeroth)).unwrap();
        let exact =
            run_adiabatic(&bids, &table, &AdiabaticSchedule::short(Variant::Exact)).unwrap();
        assert!(
            zeroth.final_success() >= 0.9,
            "{pair}: {}",
            zeroth.final_success()
        );
        assert!(exact.final_success() >= 0.9);
        assert_eq!(zeroth.final_argmax(), exact.final_argmax());
        assert!((zeroth.records[0].success_probability - 0.25).abs() < 1e-12);
    }
}

#[test]
fn locked_runs_stay_in_the_bidding_span() {
    let table = toy_table();
    let bids = parse_bids("11,10").unwrap();
    for a1 in [0.6, 0.7, 0.8, 0.9] {
        for a2 in [0.6, 0.7, 0.8, 0.9] {
            let lock = locking_operators(&[a1, a2], &bids).unwrap();
            let traj = run_locked_auction(
                &bids,
                &table,
                &AdiabaticSchedule::short(Variant::Locked),
                &lock,
            )
            .unwrap();
            assert!(traj.max_leakage() <= 1e-9, "({a1}, {a2})");
        }
    }
}

#[test]
fn spurious_attack_and_collusion_defense() {
    let bids = parse_bids("10,11").unwrap();
    let schedule = AdiabaticSchedule::short(Variant::Zeroth);
    let attack = run_spurious_attack(&bids, &schedule).unwrap();
    assert_eq!(attack.target, 0b1011);
    assert!(attack.final_success() >= 0.9);
    assert!((attack.records[0].success_probability - 0.25).abs() < 1e-12);

    let table = spurious_table(&AuctionConfig::new(2, 2, 1).unwrap()).unwrap();
    let defended = run_collusion_defense(&bids, &table, &schedule).unwrap();
    let reveal = revealing_state(&bids);
    assert_eq!(defended.subspace.len(), 3);
    for r in &defended.records {
        assert!(r.state.amplitude(reveal).norm() <= 1e-9);
        assert!(r.subspace_leakage <= 1e-9);
    }
    for &x in &defended.subspace {
        assert!((defended.records[0].state.probability(x) - 1.0 / 3.0).abs() < 1e-12);
    }
    assert_eq!(defended.final_argmax(), 0b0011);
}
