//! Strategies, the cost/reward model and the expected payoff matrix.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five scalars defining one payoff environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameParams {
    /// Reward paid to both agents when a need is signaled and answered.
    pub reward: f64,
    /// Cost to the signaler of a need left unmet.
    pub unmet_cost: f64,
    /// Cost to the responder of each response (the trip penalty).
    pub trip_cost: f64,
    /// Cost to the signaler of each emitted signal.
    pub comm_cost: f64,
    /// Probability that the signaler has a need in a given round.
    pub need_prob: f64,
}

impl Default for GameParams {
    /// `R = 1, ρ_t = 0.8, ρ_com = 0.5, ρ_um = 0.5, p_n = 0.8`.
    fn default() -> Self {
        GameParams {
            reward: 1.0,
            unmet_cost: 0.5,
            trip_cost: 0.8,
            comm_cost: 0.5,
            need_prob: 0.8,
        }
    }
}

impl GameParams {
    pub fn new(reward: f64, unmet_cost: f64, trip_cost: f64, comm_cost: f64, need_prob: f64) -> Result<Self> {
        let p = GameParams {
            reward,
            unmet_cost,
            trip_cost,
            comm_cost,
            need_prob,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks that every cost is finite and nonnegative and `need_prob` lies in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("reward", self.reward),
            ("unmet_cost", self.unmet_cost),
            ("trip_cost", self.trip_cost),
            ("comm_cost", self.comm_cost),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(name, format!("must be a finite nonnegative number, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.need_prob) {
            return Err(Error::invalid(
                "need_prob",
                format!("must lie in [0, 1], got {}", self.need_prob),
            ));
        }
        Ok(())
    }

    /// Parses `R,um,t,com,pn`.
    pub fn parse_csv(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad number {v:?} in params: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match values[..] {
            [r, um, t, com, pn] => GameParams::new(r, um, t, com, pn),
            _ => Err(Error::Parse(format!(
                "expected 5 comma-separated values R,um,t,com,pn, got {}",
                values.len()
            ))),
        }
    }

    /// All four costs and the reward multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        GameParams {
            reward: self.reward * k,
            unmet_cost: self.unmet_cost * k,
            trip_cost: self.trip_cost * k,
            comm_cost: self.comm_cost * k,
            need_prob: self.need_prob,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SignalerStrategy {
    /// s0
    #[serde(rename = "s0")]
    NeverSignal,
    /// s1
    #[serde(rename = "s1")]
    AlwaysSignal,
    /// s2
    #[serde(rename = "s2")]
    SignalWhenNeed,
    /// s3
    #[serde(rename = "s3")]
    SignalWhenNoNeed,
}

impl SignalerStrategy {
    pub const ALL: [SignalerStrategy; 4] = [
        SignalerStrategy::NeverSignal,
        SignalerStrategy::AlwaysSignal,
        SignalerStrategy::SignalWhenNeed,
        SignalerStrategy::SignalWhenNoNeed,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn label(self) -> &'static str {
        ["s0", "s1", "s2", "s3"][self.index()]
    }

    /// Whether this policy emits a signal given the current need.
    pub fn signal_emitted(self, need: bool) -> bool {
        match self {
            SignalerStrategy::NeverSignal => false,
            SignalerStrategy::AlwaysSignal => true,
            SignalerStrategy::SignalWhenNeed => need,
            SignalerStrategy::SignalWhenNoNeed => !need,
        }
    }

    /// Probability of emitting a signal when need occurs with probability `need_prob`.
    pub fn signal_rate(self, need_prob: f64) -> f64 {
        match self {
            SignalerStrategy::NeverSignal => 0.0,
            SignalerStrategy::AlwaysSignal => 1.0,
            SignalerStrategy::SignalWhenNeed => need_prob,
            SignalerStrategy::SignalWhenNoNeed => 1.0 - need_prob,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ResponderStrategy {
    /// r0
    #[serde(rename = "r0")]
    Ignore,
    /// r1
    #[serde(rename = "r1")]
    Respond,
}

impl ResponderStrategy {
    pub const ALL: [ResponderStrategy; 2] = [ResponderStrategy::Ignore, ResponderStrategy::Respond];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn label(self) -> &'static str {
        ["r0", "r1"][self.index()]
    }

    /// Whether a response happens this round.
    pub fn responds(self, signaled: bool) -> bool {
        self == ResponderStrategy::Respond && signaled
    }
}

impl fmt::Display for SignalerStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl fmt::Display for ResponderStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SignalerStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "s0" => Ok(SignalerStrategy::NeverSignal),
            "s1" => Ok(SignalerStrategy::AlwaysSignal),
            "s2" => Ok(SignalerStrategy::SignalWhenNeed),
            "s3" => Ok(SignalerStrategy::SignalWhenNoNeed),
            other => Err(Error::Parse(format!("unknown signaler strategy {other:?}"))),
        }
    }
}

impl FromStr for ResponderStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "r0" => Ok(ResponderStrategy::Ignore),
            "r1" => Ok(ResponderStrategy::Respond),
            other => Err(Error::Parse(format!("unknown responder strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PayoffPair {
    pub signaler: f64,
    pub responder: f64,
}

impl PayoffPair {
    pub fn new(signaler: f64, responder: f64) -> Self {
        PayoffPair { signaler, responder }
    }
}

/// Payoffs for one realized round.
///
/// A response without a signal is rejected.
pub fn realized_rewards(p: &GameParams, need: bool, signaled: bool, responded: bool) -> Result<PayoffPair> {
    if responded && !signaled {
        return Err(Error::Contract("a response requires a signal".into()));
    }
    let met = need && signaled && responded;
    let reward = if met { p.reward } else { 0.0 };
    let mut signaler = reward;
    if need && !met {
        signaler -= p.unmet_cost;
    }
    if signaled {
        signaler -= p.comm_cost;
    }
    let mut responder = reward;
    if responded {
        responder -= p.trip_cost;
    }
    Ok(PayoffPair::new(signaler, responder))
}

/// Expected payoffs of a strategy pair over need ~ Bernoulli(`need_prob`).
pub fn expected_payoffs(p: &GameParams, s: SignalerStrategy, r: ResponderStrategy) -> PayoffPair {
    use ResponderStrategy::*;
    use SignalerStrategy::*;

    let pn = p.need_prob;
    match (s, r) {
        (NeverSignal, _) => PayoffPair::new(-pn * p.unmet_cost, 0.0),
        (AlwaysSignal, Ignore) => PayoffPair::new(-p.comm_cost - pn * p.unmet_cost, 0.0),
        (AlwaysSignal, Respond) => PayoffPair::new(-p.comm_cost + pn * p.reward, pn * p.reward - p.trip_cost),
        (SignalWhenNeed, Ignore) => PayoffPair::new(-pn * p.comm_cost - pn * p.unmet_cost, 0.0),
        (SignalWhenNeed, Respond) => {
            PayoffPair::new(-pn * p.comm_cost + pn * p.reward, pn * p.reward - pn * p.trip_cost)
        }
        (SignalWhenNoNeed, Ignore) => PayoffPair::new(-(1.0 - pn) * p.comm_cost - pn * p.unmet_cost, 0.0),
        (SignalWhenNoNeed, Respond) => PayoffPair::new(
            -(1.0 - pn) * p.comm_cost - pn * p.unmet_cost,
            -(1.0 - pn) * p.trip_cost,
        ),
    }
}

/// The 4×2 expected payoff matrix, rows indexed by signaler strategy.
pub type PayoffMatrix = [[PayoffPair; 2]; 4];

pub fn payoff_matrix(p: &GameParams) -> PayoffMatrix {
    let mut m = [[PayoffPair::default(); 2]; 4];
    for s in SignalerStrategy::ALL {
        for r in ResponderStrategy::ALL {
            m[s.index()][r.index()] = expected_payoffs(p, s, r);
        }
    }
    m
}
