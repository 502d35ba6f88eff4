use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::schedule::Schedule;
use super::summary::{summarize, RunSummary};
use crate::agents::{BetaBelief, ResponderAgent, SignalerAgent};
use crate::error::{Error, Result};
use crate::game::{realized_rewards, GameParams, ResponderStrategy, SignalerStrategy};

/// The two signaler priors, over need and over response.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalerPriors {
    pub need: BetaBelief,
    pub response: BetaBelief,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Number of rounds `T`.
    pub horizon: u64,
    pub schedule: Schedule,
    pub signaler_priors: SignalerPriors,
    pub responder_prior: BetaBelief,
    /// Restore every belief to its prior at the first round of each new segment.
    pub reset_on_change: bool,
    pub seed: u64,
    /// Keep every `trace_every`-th round when writing traces.
    pub trace_every: u64,
}

impl SimConfig {
    /// Default priors, no reset, full tracing.
    pub fn new(horizon: u64, schedule: Schedule, seed: u64) -> Self {
        SimConfig {
            horizon,
            schedule,
            signaler_priors: SignalerPriors::default(),
            responder_prior: BetaBelief::default(),
            reset_on_change: false,
            seed,
            trace_every: 1,
        }
    }

    pub fn constant(params: GameParams, horizon: u64, seed: u64) -> Self {
        SimConfig::new(horizon, Schedule::constant(params), seed)
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if self.horizon == 0 {
            return Err(Error::invalid("horizon", "must be at least 1"));
        }
        let last = self.schedule.segments().last().map_or(1, |s| s.start);
        if self.horizon < last {
            return Err(Error::invalid(
                "horizon",
                format!("{} ends before the last segment starts at {last}", self.horizon),
            ));
        }
        if self.trace_every == 0 {
            return Err(Error::invalid("trace_every", "must be at least 1"));
        }
        self.signaler_priors
            .need
            .validate()
            .map_err(|e| e.within("signaler_priors.need"))?;
        self.signaler_priors
            .response
            .validate()
            .map_err(|e| e.within("signaler_priors.response"))?;
        self.responder_prior.validate().map_err(|e| e.within("responder_prior"))?;
        Ok(())
    }

    /// A copy of this config with the seed of batch member `index`.
    pub fn for_run(&self, index: u64) -> SimConfig {
        SimConfig {
            seed: run_seed(self.seed, index),
            ..self.clone()
        }
    }
}

/// Seed of the `index`-th run of a batch: `base + index` (wrapping).
///
/// The generator is built with `ChaCha8Rng::seed_from_u64`, which expands the
/// 64-bit seed through a PCG32 stream into a full 256-bit key, so adjacent
/// integers give unrelated streams. Run 0 reuses the base seed.
pub fn run_seed(base: u64, index: u64) -> u64 {
    base.wrapping_add(index)
}

/// One round of play. Belief columns hold the state the agents decided with,
/// before this round's observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub t: u64,
    pub segment_id: usize,
    pub need: bool,
    pub signaled: bool,
    pub responded: bool,
    pub s_strategy: SignalerStrategy,
    pub r_strategy: ResponderStrategy,
    pub signaler_reward: f64,
    pub responder_reward: f64,
    pub alpha_a: f64,
    pub beta_a: f64,
    pub alpha_b: f64,
    pub beta_b: f64,
    pub alpha_c: f64,
    pub beta_c: f64,
}

impl RoundRecord {
    pub fn pair(&self) -> crate::equilibrium::StrategyPair {
        crate::equilibrium::StrategyPair::new(self.s_strategy, self.r_strategy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub seed: u64,
    pub records: Vec<RoundRecord>,
    /// Agent state after the final round's observations.
    pub signaler: SignalerAgent,
    pub responder: ResponderAgent,
}

/// Plays `config.horizon` rounds.
///
/// Per round: segment lookup (and reset on a new segment when enabled), the
/// need draw, the signaler's two posterior draws, the responder's draw, then
/// observations. Tie-break draws are taken only when a tie occurs.
pub fn run(config: &SimConfig) -> Result<Trace> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut signaler = SignalerAgent::new(config.signaler_priors.need, config.signaler_priors.response);
    let mut responder = ResponderAgent::new(config.responder_prior);
    let mut records = Vec::with_capacity(config.horizon as usize);
    let mut segment = 0;

    for t in 1..=config.horizon {
        let (seg, params) = config.schedule.active_params(t)?;
        if seg != segment {
            if segment != 0 && config.reset_on_change {
                signaler.reset();
                responder.reset();
            }
            segment = seg;
        }
        let snapshot = (
            signaler.belief_need,
            signaler.belief_response,
            responder.belief_need_given_signal,
        );

        let need = rng.random_bool(params.need_prob);
        let s_strategy = signaler.select(&params, &mut rng);
        let signaled = s_strategy.signal_emitted(need);
        let r_strategy = responder.select(&params, &mut rng);
        let responded = r_strategy.responds(signaled);
        let pay = realized_rewards(&params, need, signaled, responded)?;
        signaler.observe(need, signaled, responded)?;
        responder.observe(signaled, responded, need)?;

        records.push(RoundRecord {
            t,
            segment_id: seg,
            need,
            signaled,
            responded,
            s_strategy,
            r_strategy,
            signaler_reward: pay.signaler,
            responder_reward: pay.responder,
            alpha_a: snapshot.0.alpha,
            beta_a: snapshot.0.beta,
            alpha_b: snapshot.1.alpha,
            beta_b: snapshot.1.beta,
            alpha_c: snapshot.2.alpha,
            beta_c: snapshot.2.beta,
        });
    }

    Ok(Trace {
        seed: config.seed,
        records,
        signaler,
        responder,
    })
}

/// Runs `n_seeds` independent copies in parallel, in seed order.
pub fn run_batch_traces(config: &SimConfig, n_seeds: u64) -> Result<Vec<Trace>> {
    if n_seeds == 0 {
        return Err(Error::invalid("n_seeds", "must be at least 1"));
    }
    config.validate()?;
    (0..n_seeds)
        .into_par_iter()
        .map(|i| run(&config.for_run(i)))
        .collect()
}

pub fn run_batch(config: &SimConfig, n_seeds: u64, window: usize) -> Result<Vec<RunSummary>> {
    run_batch_traces(config, n_seeds)?
        .iter()
        .map(|trace| summarize(trace, window))
        .collect()
}
