//! Beta-Bernoulli beliefs and the Thompson Sampling policies of both players.
//!
//! Each round an agent draws parameters from its posteriors, evaluates the
//! expected reward of every strategy at the drawn values and plays a
//! maximizer. Exact ties are split uniformly at random.
//!
//! The signaler tracks `θ_A`, the probability of its own need, and `θ_B`, the
//! probability that a signal is answered. The responder tracks `θ_C`, the
//! probability that a signal it answered was backed by a need.

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{GameParams, ResponderStrategy, SignalerStrategy};

/// Posterior `Beta(alpha, beta)` over a Bernoulli parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaBelief {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for BetaBelief {
    /// `Beta(2, 2)`.
    fn default() -> Self {
        BetaBelief { alpha: 2.0, beta: 2.0 }
    }
}

impl BetaBelief {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let b = BetaBelief { alpha, beta };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be finite and positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Total pseudo-count `alpha + beta`.
    pub fn count(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        Beta::new(self.alpha, self.beta)
            .expect("belief invariants guarantee valid shape parameters")
            .sample(rng)
    }

    /// Conjugate update with one Bernoulli observation.
    #[must_use]
    pub fn update(self, success: bool) -> Self {
        if success {
            BetaBelief {
                alpha: self.alpha + 1.0,
                ..self
            }
        } else {
            BetaBelief {
                beta: self.beta + 1.0,
                ..self
            }
        }
    }
}

/// Two expected rewards tie when they agree to within `1e-12` relative
/// (absolute below magnitude 1).
pub fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * 1f64.max(a.abs()).max(b.abs())
}

/// Indices whose value ties with the maximum.
pub fn tied_maxima(values: &[f64]) -> Vec<usize> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..values.len()).filter(|&i| ties(values[i], max)).collect()
}

/// Index of a maximum, chosen uniformly among ties. Consumes randomness only
/// when there is more than one candidate.
pub fn argmax_split_ties<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> usize {
    let best = tied_maxima(values);
    match best.len() {
        1 => best[0],
        n => best[rng.random_range(0..n)],
    }
}

/// The signaler's expected reward for each strategy at the given need and
/// response probabilities.
pub fn signaler_expected_rewards(theta_a: f64, theta_b: f64, p: &GameParams) -> [f64; 4] {
    let met = p.reward * theta_a * theta_b - p.unmet_cost * theta_a * (1.0 - theta_b);
    [
        -p.unmet_cost * theta_a,
        met - p.comm_cost,
        met - p.comm_cost * theta_a,
        -p.unmet_cost * theta_a - p.comm_cost * (1.0 - theta_a),
    ]
}

/// The responder's expected reward for ignoring and for responding.
pub fn responder_expected_rewards(theta_c: f64, p: &GameParams) -> [f64; 2] {
    [0.0, p.reward * theta_c - p.trip_cost]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalerAgent {
    pub belief_need: BetaBelief,
    pub belief_response: BetaBelief,
    pub prior_need: BetaBelief,
    pub prior_response: BetaBelief,
}

impl Default for SignalerAgent {
    fn default() -> Self {
        SignalerAgent::new(BetaBelief::default(), BetaBelief::default())
    }
}

impl SignalerAgent {
    pub fn new(prior_need: BetaBelief, prior_response: BetaBelief) -> Self {
        SignalerAgent {
            belief_need: prior_need,
            belief_response: prior_response,
            prior_need,
            prior_response,
        }
    }

    /// One Thompson Sampling decision: draws `θ_A` then `θ_B`, then plays a
    /// maximizer of the expected rewards.
    pub fn select<R: Rng + ?Sized>(&self, p: &GameParams, rng: &mut R) -> SignalerStrategy {
        let theta_a = self.belief_need.sample(rng);
        let theta_b = self.belief_response.sample(rng);
        Self::best_response(theta_a, theta_b, p, rng)
    }

    /// The greedy choice at fixed parameter values.
    pub fn best_response<R: Rng + ?Sized>(theta_a: f64, theta_b: f64, p: &GameParams, rng: &mut R) -> SignalerStrategy {
        let values = signaler_expected_rewards(theta_a, theta_b, p);
        SignalerStrategy::ALL[argmax_split_ties(&values, rng)]
    }

    /// Updates `θ_A` with the need every round and `θ_B` with the response
    /// whenever a signal went out.
    pub fn observe(&mut self, need: bool, signaled: bool, responded: bool) -> Result<()> {
        if responded && !signaled {
            return Err(Error::Contract("signaler observed a response to no signal".into()));
        }
        self.belief_need = self.belief_need.update(need);
        if signaled {
            self.belief_response = self.belief_response.update(responded);
        }
        Ok(())
    }

    pub fn reset(&mut self) {
        self.belief_need = self.prior_need;
        self.belief_response = self.prior_response;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponderAgent {
    pub belief_need_given_signal: BetaBelief,
    pub prior: BetaBelief,
}

impl Default for ResponderAgent {
    fn default() -> Self {
        ResponderAgent::new(BetaBelief::default())
    }
}

impl ResponderAgent {
    pub fn new(prior: BetaBelief) -> Self {
        ResponderAgent {
            belief_need_given_signal: prior,
            prior,
        }
    }

    pub fn select<R: Rng + ?Sized>(&self, p: &GameParams, rng: &mut R) -> ResponderStrategy {
        let theta_c = self.belief_need_given_signal.sample(rng);
        Self::best_response(theta_c, p, rng)
    }

    pub fn best_response<R: Rng + ?Sized>(theta_c: f64, p: &GameParams, rng: &mut R) -> ResponderStrategy {
        let values = responder_expected_rewards(theta_c, p);
        ResponderStrategy::ALL[argmax_split_ties(&values, rng)]
    }

    /// The need is only visible after answering a signal; every other round
    /// leaves the belief untouched.
    pub fn observe(&mut self, signaled: bool, responded: bool, need_observed: bool) -> Result<()> {
        if responded && !signaled {
            return Err(Error::Contract("responder cannot respond without a signal".into()));
        }
        if responded {
            self.belief_need_given_signal = self.belief_need_given_signal.update(need_observed);
        }
        Ok(())
    }

    pub fn reset(&mut self) {
        self.belief_need_given_signal = self.prior;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use ResponderStrategy::*;
    use SignalerStrategy::*;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn moments(b: BetaBelief, n: usize, seed: u64) -> (f64, f64) {
        let mut r = rng(seed);
        let xs: Vec<f64> = (0..n).map(|_| b.sample(&mut r)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        (mean, var)
    }

    #[test]
    fn uniform_prior_sample_mean() {
        let (mean, _) = moments(BetaBelief::new(1.0, 1.0).unwrap(), 100_000, 1);
        assert!((mean - 0.5).abs() <= 0.005, "{mean}");
    }

    #[test]
    fn beta_two_two_moments() {
        // variance αβ/((α+β)²(α+β+1)) = 4/80
        let (mean, var) = moments(BetaBelief::default(), 100_000, 2);
        assert!((mean - 0.5).abs() <= 0.005, "{mean}");
        assert!((var - 0.05).abs() <= 0.002, "{var}");
    }

    #[test]
    fn concentrated_belief_samples_near_one() {
        // CDF of Beta(1000, 1) is x^1000, so P(X > 0.99) = 1 - 0.99^1000.
        let oracle = 1.0 - 0.99f64.powi(1000);
        assert!(oracle >= 0.99);
        let b = BetaBelief::new(1000.0, 1.0).unwrap();
        let mut r = rng(3);
        let n = 10_000;
        let above = (0..n).filter(|_| b.sample(&mut r) > 0.99).count();
        assert!(above as f64 / n as f64 >= 0.99, "{above}");
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let b = BetaBelief::new(3.0, 7.0).unwrap();
        let a: Vec<f64> = (0..5).scan(rng(9), |r, _| Some(b.sample(r))).collect();
        let c: Vec<f64> = (0..5).scan(rng(9), |r, _| Some(b.sample(r))).collect();
        assert_eq!(a, c);
    }

    #[test]
    fn conjugate_updates() {
        let b = BetaBelief::default();
        assert_eq!(b.update(true), BetaBelief::new(3.0, 2.0).unwrap());
        assert_eq!(b.update(false), BetaBelief::new(2.0, 3.0).unwrap());
        let mut c = b;
        for i in 0..10 {
            c = c.update(i < 8);
        }
        assert_eq!(c, BetaBelief::new(10.0, 4.0).unwrap());
        assert!((c.mean() - 10.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_beliefs_rejected() {
        assert!(BetaBelief::new(0.0, 1.0).is_err());
        assert!(BetaBelief::new(1.0, -2.0).is_err());
        assert!(BetaBelief::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn signaler_reward_examples() {
        let p = GameParams::default();
        let v = signaler_expected_rewards(0.8, 1.0, &p);
        for (got, want) in v.iter().zip([-0.4, 0.3, 0.4, -0.5]) {
            assert!((got - want).abs() < 1e-12, "{v:?}");
        }
        let v = signaler_expected_rewards(0.0, 0.37, &p);
        assert_eq!(v, [0.0, -p.comm_cost, 0.0, -p.comm_cost]);

        let free = GameParams {
            comm_cost: 0.0,
            ..p
        };
        for (a, b) in [(0.1, 0.9), (0.77, 0.02), (1.0, 0.5)] {
            let v = signaler_expected_rewards(a, b, &free);
            assert_eq!(v[1], v[2]);
        }
    }

    #[test]
    fn responder_reward_examples() {
        let p = GameParams::default();
        let v = responder_expected_rewards(0.8, &p);
        assert_eq!(v[0], 0.0);
        assert!(v[1].abs() < 1e-15);
        assert!(ties(v[0], v[1]));
        let hi = GameParams {
            trip_cost: 2.0,
            ..p
        };
        assert_eq!(responder_expected_rewards(1.0, &hi), [0.0, -1.0]);
        assert_eq!(responder_expected_rewards(0.0, &p), [0.0, -0.8]);
    }

    #[test]
    fn consistent_with_expected_payoffs() {
        use crate::game::expected_payoffs;
        let p = GameParams::default();
        let v = signaler_expected_rewards(p.need_prob, 1.0, &p);
        let s2r1 = expected_payoffs(&p, SignalWhenNeed, Respond).signaler;
        let s1r1 = expected_payoffs(&p, AlwaysSignal, Respond).signaler;
        let s0 = expected_payoffs(&p, NeverSignal, Ignore).signaler;
        assert!((v[2] - s2r1).abs() <= 1e-12);
        assert!((v[1] - s1r1).abs() <= 1e-12);
        assert!((v[0] - s0).abs() <= 1e-12);
        // θ_B = 0 reproduces the ignoring column.
        let v = signaler_expected_rewards(p.need_prob, 0.0, &p);
        for s in SignalerStrategy::ALL {
            let e = expected_payoffs(&p, s, Ignore).signaler;
            assert!((v[s.index()] - e).abs() <= 1e-12, "{s}");
        }
    }

    #[test]
    fn confident_signaler_signals_on_need() {
        let p = GameParams::default();
        let sure = BetaBelief::new(1e6, 1.0).unwrap();
        let agent = SignalerAgent::new(sure, sure);
        let mut r = rng(4);
        for _ in 0..100 {
            assert_eq!(agent.select(&p, &mut r), SignalWhenNeed);
        }
    }

    #[test]
    fn hopeless_signaler_stays_silent() {
        let p = GameParams::default();
        let agent = SignalerAgent::new(BetaBelief::new(8e5, 2e5).unwrap(), BetaBelief::new(1.0, 1e6).unwrap());
        let mut r = rng(5);
        for _ in 0..100 {
            assert_eq!(agent.select(&p, &mut r), NeverSignal);
        }
    }

    #[test]
    fn free_signaling_splits_evenly() {
        let p = GameParams {
            comm_cost: 0.0,
            ..GameParams::default()
        };
        let mut r = rng(6);
        let n = 10_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            counts[SignalerAgent::best_response(0.8, 0.6, &p, &mut r).index()] += 1;
        }
        assert_eq!(counts[0] + counts[3], 0);
        let share = counts[1] as f64 / n as f64;
        assert!((share - 0.5).abs() <= 0.02, "{counts:?}");
    }

    #[test]
    fn responder_selection() {
        let p = GameParams::default();
        let mut r = rng(7);
        let keen = ResponderAgent::new(BetaBelief::new(1e6, 1.0).unwrap());
        let wary = ResponderAgent::new(BetaBelief::new(1.0, 1e6).unwrap());
        for _ in 0..100 {
            assert_eq!(keen.select(&p, &mut r), Respond);
            assert_eq!(wary.select(&p, &mut r), Ignore);
        }
    }

    #[test]
    fn responder_tie_splits_evenly() {
        let p = GameParams::default();
        let theta = p.trip_cost / p.reward;
        let mut r = rng(8);
        let n = 10_000;
        let responded = (0..n)
            .filter(|_| ResponderAgent::best_response(theta, &p, &mut r) == Respond)
            .count();
        let share = responded as f64 / n as f64;
        assert!((share - 0.5).abs() <= 0.02, "{share}");
    }

    #[test]
    fn no_tie_consumes_no_randomness() {
        let mut a = rng(10);
        let mut b = rng(10);
        argmax_split_ties(&[0.0, 1.0, 0.5], &mut a);
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }

    #[test]
    fn signaler_observation_semantics() {
        let mut a = SignalerAgent::default();
        a.observe(true, false, false).unwrap();
        assert_eq!(a.belief_need, BetaBelief::new(3.0, 2.0).unwrap());
        assert_eq!(a.belief_response, BetaBelief::default());

        let mut a = SignalerAgent::default();
        a.observe(false, true, true).unwrap();
        assert_eq!(a.belief_need, BetaBelief::new(2.0, 3.0).unwrap());
        assert_eq!(a.belief_response, BetaBelief::new(3.0, 2.0).unwrap());

        let mut a = SignalerAgent::default();
        a.observe(true, true, false).unwrap();
        assert_eq!(a.belief_need, BetaBelief::new(3.0, 2.0).unwrap());
        assert_eq!(a.belief_response, BetaBelief::new(2.0, 3.0).unwrap());

        assert!(a.observe(true, false, true).is_err());
    }

    #[test]
    fn responder_observation_semantics() {
        let mut a = ResponderAgent::default();
        a.observe(true, true, true).unwrap();
        assert_eq!(a.belief_need_given_signal, BetaBelief::new(3.0, 2.0).unwrap());

        let mut a = ResponderAgent::default();
        a.observe(true, true, false).unwrap();
        assert_eq!(a.belief_need_given_signal, BetaBelief::new(2.0, 3.0).unwrap());

        for need in [true, false] {
            let mut a = ResponderAgent::default();
            a.observe(true, false, need).unwrap();
            a.observe(false, false, need).unwrap();
            assert_eq!(a, ResponderAgent::default());
        }
        assert!(ResponderAgent::default().observe(false, true, true).is_err());
    }

    #[test]
    fn reset_restores_priors() {
        let prior = BetaBelief::default();
        let mut s = SignalerAgent {
            belief_need: BetaBelief::new(812.0, 190.0).unwrap(),
            belief_response: BetaBelief::new(500.0, 30.0).unwrap(),
            ..SignalerAgent::default()
        };
        s.reset();
        assert_eq!(s, SignalerAgent::default());

        let mut r = ResponderAgent::new(prior);
        r.belief_need_given_signal = BetaBelief::new(41.0, 900.0).unwrap();
        r.reset();
        assert_eq!(r.belief_need_given_signal, prior);

        let mut fresh = SignalerAgent::new(BetaBelief::new(1.0, 3.0).unwrap(), prior);
        let before = fresh.clone();
        fresh.reset();
        assert_eq!(fresh, before);
    }

    #[test]
    fn posterior_concentrates() {
        for q in [0.1, 0.5, 0.8] {
            let mut within = 0;
            for seed in 0..20u64 {
                let mut r = rng(seed * 31 + 7);
                let mut b = BetaBelief::default();
                for _ in 0..20_000 {
                    b = b.update(r.random::<f64>() < q);
                }
                if (b.mean() - q).abs() <= 0.02 {
                    within += 1;
                }
            }
            assert!(within >= 19, "q={q}: {within}/20");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::Rng;

        proptest! {
            #[test]
            fn update_order_is_irrelevant(mut obs in proptest::collection::vec(any::<bool>(), 0..200), seed in any::<u64>()) {
                let fold = |xs: &[bool]| xs.iter().fold(BetaBelief::default(), |b, &x| b.update(x));
                let a = fold(&obs);
                let mut r = rng(seed);
                for i in (1..obs.len()).rev() {
                    obs.swap(i, r.random_range(0..=i));
                }
                prop_assert_eq!(a, fold(&obs));
            }

            #[test]
            fn argmax_invariant_under_scaling(
                r in 0.01..5.0f64, um in 0.01..5.0f64, t in 0.01..5.0f64, com in 0.01..5.0f64,
                ta in 0.0..=1.0f64, tb in 0.0..=1.0f64, tc in 0.0..=1.0f64, k in 0.1..10.0f64,
            ) {
                let p = GameParams { reward: r, unmet_cost: um, trip_cost: t, comm_cost: com, need_prob: 0.5 };
                let q = p.scaled(k);
                prop_assert_eq!(
                    tied_maxima(&signaler_expected_rewards(ta, tb, &p)),
                    tied_maxima(&signaler_expected_rewards(ta, tb, &q))
                );
                prop_assert_eq!(
                    tied_maxima(&responder_expected_rewards(tc, &p)),
                    tied_maxima(&responder_expected_rewards(tc, &q))
                );
            }
        }
    }
}
