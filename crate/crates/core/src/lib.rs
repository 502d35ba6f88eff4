//! Simulation and analysis toolkit for the two-player signaler-responder game.
//!
//! A signaler with a random need chooses among four signaling policies and a
//! responder chooses whether to answer signals. The crate provides
//!
//! - the cost/reward model and the closed-form expected payoff matrix ([`game`]),
//! - pure Nash equilibrium finders, brute force and closed form ([`equilibrium`]),
//! - Beta-Bernoulli Thompson Sampling agents for both players ([`agents`]),
//! - a seeded repeated-play engine with piecewise-constant parameter
//!   schedules and oracle-driven belief reset ([`sim`]),
//! - JSON configuration, CSV trace and JSON summary formats plus the command
//!   line front end ([`io`], [`cli`]).

pub mod agents;
pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod io;
pub mod sim;

pub use agents::{BetaBelief, ResponderAgent, SignalerAgent};
pub use equilibrium::{EquilibriumReport, StrategyPair};
pub use error::{Error, Result};
pub use game::{GameParams, PayoffPair, ResponderStrategy, SignalerStrategy};
pub use sim::{RoundRecord, RunSummary, Schedule, SimConfig, Trace};
