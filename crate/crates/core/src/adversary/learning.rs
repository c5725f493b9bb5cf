use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::locking::{lock_angle, lock_operator};
use super::povm::{min_error_povm, PovmSolution};
use crate::error::{Error, Result};
use crate::protocol::{bidding_operator, BidSpec};
use crate::quantum::{OutcomeSampler, StateVector};

/// Trials per independently seeded RNG stream.
const CHUNK: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMode {
    ClosedForm,
    MonteCarlo,
}

/// Probability that the auctioneer knows every bid after `N = 1..=len` rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurve {
    pub mode: CurveMode,
    /// `values[N - 1]`.
    pub values: Vec<f64>,
    pub trials: Option<usize>,
}

impl LearningCurve {
    pub fn at(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Binomial standard error at round `n`.
    pub fn std_error(&self, n: usize) -> Option<f64> {
        let p = self.at(n)?;
        self.trials.map(|t| (p * (1.0 - p) / t as f64).sqrt())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MonteCarlo {
    pub trials: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl MonteCarlo {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            parallel: false,
        }
    }

    /// Sums `run(rng, trials_in_chunk)` over fixed-size chunks, each on its own
    /// stream, so the total is independent of scheduling.
    fn tally<F>(&self, len: usize, run: F) -> Vec<u64>
    where
        F: Fn(&mut ChaCha8Rng, usize) -> Vec<u64> + Sync,
    {
        let chunks = self.trials.div_ceil(CHUNK);
        let one = |c: usize| {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(c as u64);
            run(&mut rng, CHUNK.min(self.trials - c * CHUNK))
        };
        let add = |mut a: Vec<u64>, b: Vec<u64>| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        };
        if self.parallel {
            (0..chunks)
                .into_par_iter()
                .map(one)
                .reduce(|| vec![0; len], add)
        } else {
            (0..chunks).map(one).fold(vec![0; len], add)
        }
    }
}

fn check_rounds(rounds: usize) -> Result<()> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("learning curve needs N ≥ 1".into()));
    }
    Ok(())
}

/// Bidding state as the auctioneer receives it: `U|0>` or `V† U|0>` under a lock.
pub fn transmitted_state(bid: &BidSpec, alpha: Option<f64>) -> Result<StateVector> {
    let plain = bidding_operator(bid).column(0)?;
    match alpha {
        None => Ok(plain),
        Some(a) => lock_operator(lock_angle(a)?, bid).adjoint().apply(&plain),
    }
}

/// `Π_i (1 - q_i^N)` for per-round failure probabilities `q_i`.
pub fn closed_form_curve(failures: &[f64], rounds: usize) -> Result<LearningCurve> {
    check_rounds(rounds)?;
    if let Some(q) = failures.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(Error::InvalidArgument(format!(
            "probability {q} outside [0, 1]"
        )));
    }
    let values = (1..=rounds)
        .map(|n| failures.iter().map(|q| 1.0 - q.powi(n as i32)).product())
        .collect();
    Ok(LearningCurve {
        mode: CurveMode::ClosedForm,
        values,
        trials: None,
    })
}

/// Symbol-by-symbol computational-basis probing of fresh bidding states.
///
/// A bidder is exposed after the first outcome other than `|0...0>`.
pub fn probe_attack_basis(
    bids: &[BidSpec],
    alphas: Option<&[f64]>,
    rounds: usize,
    monte_carlo: Option<&MonteCarlo>,
) -> Result<LearningCurve> {
    check_rounds(rounds)?;
    if let Some(a) = alphas {
        if a.len() != bids.len() {
            return Err(Error::InvalidArgument(format!(
                "{} lock amplitudes for {} bidders",
                a.len(),
                bids.len()
            )));
        }
    }
    let states = bids
        .iter()
        .enumerate()
        .map(|(i, b)| transmitted_state(b, alphas.map(|a| a[i])))
        .collect::<Result<Vec<_>>>()?;
    let Some(mc) = monte_carlo else {
        // |<0|U|0>|^2 = 1/2 unlocked, α^2 locked
        let stay: Vec<f64> = (0..bids.len())
            .map(|i| alphas.map_or(0.5, |a| a[i] * a[i]))
            .collect();
        return closed_form_curve(&stay, rounds);
    };
    let samplers = states
        .iter()
        .map(|s| OutcomeSampler::from_probabilities(&s.probabilities()))
        .collect::<Result<Vec<_>>>()?;
    // Sharing trials across N keeps the estimate monotone.
    let counts = mc.tally(rounds, |rng, trials| {
        let mut hits = vec![0u64; rounds];
        for _ in 0..trials {
            let mut last = 0;
            for s in &samplers {
                let first = (1..=rounds)
                    .find(|_| s.sample(rng) != 0)
                    .unwrap_or(rounds + 1);
                last = last.max(first);
            }
            if last <= rounds {
                hits[last - 1..].iter_mut().for_each(|h| *h += 1);
            }
        }
        hits
    });
    Ok(monte_carlo_curve(counts, mc.trials))
}

fn monte_carlo_curve(counts: Vec<u64>, trials: usize) -> LearningCurve {
    LearningCurve {
        mode: CurveMode::MonteCarlo,
        values: counts.iter().map(|&c| c as f64 / trials as f64).collect(),
        trials: Some(trials),
    }
}

/// Every nonzero bid of `width` qubits, as transmitted under the optional lock.
pub fn candidate_states(width: usize, alpha: Option<f64>) -> Result<Vec<StateVector>> {
    (1..1usize << width)
        .map(|v| transmitted_state(&BidSpec::new(width, v)?, alpha))
        .collect()
}

/// Minimum-error measurement over every candidate bid, equal priors.
pub fn candidate_povm(width: usize, alpha: Option<f64>) -> Result<PovmSolution> {
    let states = candidate_states(width, alpha)?;
    let priors = vec![1.0 / states.len() as f64; states.len()];
    min_error_povm(&states, &priors)
}

/// `Π_i (1 - P_e,i^N)`; with one shared `P_e` this is `(1 - P_e^N)^m`.
pub fn probe_attack_povm(error_probabilities: &[f64], rounds: usize) -> Result<LearningCurve> {
    closed_form_curve(error_probabilities, rounds)
}

/// Monte Carlo of a concrete decision rule: after `N` rounds each bidder's
/// guess is the most frequent outcome, ties broken uniformly at random.
///
/// `outcome_probs[i]` is bidder `i`'s outcome distribution and `truth[i]` the
/// outcome naming the real bid. Unlike the closed form this need not be
/// monotone in `N`, since even counts can tie.
pub fn probe_attack_povm_majority(
    outcome_probs: &[Vec<f64>],
    truth: &[usize],
    rounds: usize,
    mc: &MonteCarlo,
) -> Result<LearningCurve> {
    check_rounds(rounds)?;
    if outcome_probs.len() != truth.len() {
        return Err(Error::InvalidArgument("one true outcome per bidder".into()));
    }
    let samplers = outcome_probs
        .iter()
        .map(|p| OutcomeSampler::from_probabilities(p))
        .collect::<Result<Vec<_>>>()?;
    for (p, &t) in outcome_probs.iter().zip(truth) {
        if t >= p.len() {
            return Err(Error::IndexOutOfRange {
                index: t,
                dim: p.len(),
            });
        }
    }
    let counts = mc.tally(rounds, |rng, trials| {
        let mut hits = vec![0u64; rounds];
        let mut tallies: Vec<Vec<u32>> = outcome_probs.iter().map(|p| vec![0; p.len()]).collect();
        for _ in 0..trials {
            tallies.iter_mut().for_each(|t| t.fill(0));
            for hit in hits.iter_mut() {
                let mut all = true;
                for ((s, t), &want) in samplers.iter().zip(tallies.iter_mut()).zip(truth) {
                    t[s.sample(rng)] += 1;
                    all &= plurality_guess(t, rng) == want;
                }
                if all {
                    *hit += 1;
                }
            }
        }
        hits
    });
    Ok(monte_carlo_curve(counts, mc.trials))
}

fn plurality_guess<R: Rng>(tally: &[u32], rng: &mut R) -> usize {
    let top = *tally.iter().max().expect("non-empty outcome set");
    let leaders: Vec<usize> = (0..tally.len()).filter(|&k| tally[k] == top).collect();
    if leaders.len() == 1 {
        leaders[0]
    } else {
        leaders[rng.random_range(0..leaders.len())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::measurement_probabilities;

    fn bid(s: &str) -> BidSpec {
        s.parse().unwrap()
    }

    fn toy() -> Vec<BidSpec> {
        vec![bid("10"), bid("11")]
    }

    #[test]
    fn unprotected_basis_curve() {
        let c = probe_attack_basis(&toy(), None, 20, None).unwrap();
        assert_eq!(c.at(1), Some(0.25));
        assert_eq!(c.at(4), Some(0.87890625));
        for n in 1..=20 {
            let want = (1.0 - 0.5f64.powi(n as i32)).powi(2);
            assert!((c.at(n).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn locked_basis_curve() {
        let c = probe_attack_basis(&[bid("11"), bid("10")], Some(&[0.9, 0.7]), 20, None).unwrap();
        assert!((c.at(1).unwrap() - 0.0969).abs() < 1e-12);
        let direct: Vec<f64> = [("11", 0.9), ("10", 0.7)]
            .iter()
            .map(|(b, a)| transmitted_state(&bid(b), Some(*a)).unwrap().probability(0))
            .collect();
        assert!((direct[0] - 0.81).abs() < 1e-12 && (direct[1] - 0.49).abs() < 1e-12);
        let open = probe_attack_basis(&toy(), None, 20, None).unwrap();
        assert!(c.values.iter().zip(&open.values).all(|(l, o)| l < o));
    }

    #[test]
    fn zero_rounds_rejected() {
        assert!(probe_attack_basis(&toy(), None, 0, None).is_err());
        assert!(probe_attack_povm(&[0.1], 0).is_err());
    }

    #[test]
    fn monte_carlo_within_three_sigma() {
        let mc = MonteCarlo::new(100_000, 3);
        for alphas in [None, Some(&[0.9, 0.7][..])] {
            let closed = probe_attack_basis(&toy(), alphas, 12, None).unwrap();
            let est = probe_attack_basis(&toy(), alphas, 12, Some(&mc)).unwrap();
            for n in 1..=12 {
                let p = closed.at(n).unwrap();
                let sigma = (p * (1.0 - p) / 1e5).sqrt().max(1e-12);
                assert!(
                    (est.at(n).unwrap() - p).abs() <= 3.0 * sigma + 1e-12,
                    "n={n}"
                );
            }
            assert!(est.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let seq = MonteCarlo::new(35_000, 11);
        let par = MonteCarlo {
            parallel: true,
            ..seq
        };
        let a = probe_attack_basis(&toy(), None, 8, Some(&seq)).unwrap();
        let b = probe_attack_basis(&toy(), None, 8, Some(&par)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn povm_closed_form() {
        let c = probe_attack_povm(&[0.1112, 0.1112], 4).unwrap();
        assert!((c.at(1).unwrap() - 0.79).abs() < 1e-3);
        assert!(c.at(4).unwrap() > 0.999);
        let perfect = probe_attack_povm(&[0.0, 0.0], 5).unwrap();
        assert!(perfect.values.iter().all(|&v| v == 1.0));
    }

    /// Exact plurality-vote success by enumerating outcome counts.
    fn majority_exact(q: &[f64], truth: usize, n: usize) -> f64 {
        fn rec(
            q: &[f64],
            k: usize,
            left: usize,
            counts: &mut Vec<usize>,
            acc: &mut Vec<(Vec<usize>, f64)>,
            w: f64,
        ) {
            if k == q.len() - 1 {
                counts.push(left);
                acc.push((counts.clone(), w * q[k].powi(left as i32)));
                counts.pop();
                return;
            }
            for c in 0..=left {
                counts.push(c);
                rec(q, k + 1, left - c, counts, acc, w * q[k].powi(c as i32));
                counts.pop();
            }
        }
        let mut acc = Vec::new();
        rec(q, 0, n, &mut Vec::new(), &mut acc, 1.0);
        let fact = |m: usize| (1..=m).map(|x| x as f64).product::<f64>();
        acc.iter()
            .map(|(c, w)| {
                let multinom = fact(n) / c.iter().map(|&x| fact(x)).product::<f64>();
                let top = *c.iter().max().unwrap();
                let ties = c.iter().filter(|&&x| x == top).count();
                let win = if c[truth] == top {
                    1.0 / ties as f64
                } else {
                    0.0
                };
                multinom * w * win
            })
            .sum()
    }

    #[test]
    fn majority_vote_matches_enumeration() {
        let sol = candidate_povm(2, None).unwrap();
        let states = candidate_states(2, None).unwrap();
        let probs: Vec<Vec<f64>> = [1usize, 2]
            .iter()
            .map(|&i| measurement_probabilities(&states[i], sol.povm.elements()).unwrap())
            .collect();
        let truth = [1, 2];
        let mc = MonteCarlo::new(100_000, 5);
        let est = probe_attack_povm_majority(&probs, &truth, 6, &mc).unwrap();
        for n in 1..=6 {
            let p = majority_exact(&probs[0], 1, n) * majority_exact(&probs[1], 2, n);
            let sigma = (p * (1.0 - p) / 1e5).sqrt();
            assert!(
                (est.at(n).unwrap() - p).abs() <= 3.0 * sigma + 1e-12,
                "n={n}"
            );
        }
        assert!((est.at(1).unwrap() - (8.0f64 / 9.0).powi(2)).abs() < 0.01);
    }

    #[test]
    fn locked_candidates_are_harder_to_tell_apart() {
        let open = candidate_povm(2, None).unwrap().error_probability;
        let locked = candidate_povm(2, Some(0.9)).unwrap().error_probability;
        assert!(locked > open);
    }
}
