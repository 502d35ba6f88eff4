//! Pure Nash equilibria of the 4×2 signaler-responder game.
//!
//! Two independent routes are provided: an exhaustive best-response check over
//! the eight strategy pairs, and the closed-form parameter conditions. Both use
//! the weak definition (no unilateral deviation strictly improves a payoff).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::game::{payoff_matrix, GameParams, PayoffMatrix, ResponderStrategy, SignalerStrategy};

/// Default slack for the brute-force best-response comparison.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrategyPair {
    pub s: SignalerStrategy,
    pub r: ResponderStrategy,
}

impl StrategyPair {
    pub fn new(s: SignalerStrategy, r: ResponderStrategy) -> Self {
        StrategyPair { s, r }
    }

    /// All eight pairs in row-major order.
    pub fn all() -> impl Iterator<Item = StrategyPair> {
        SignalerStrategy::ALL
            .into_iter()
            .flat_map(|s| ResponderStrategy::ALL.into_iter().map(move |r| StrategyPair::new(s, r)))
    }

    /// Row-major index in `0..8`.
    pub fn index(self) -> usize {
        self.s.index() * 2 + self.r.index()
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Some(StrategyPair::new(SignalerStrategy::from_index(i / 2)?, ResponderStrategy::from_index(i % 2)?))
    }
}

impl fmt::Display for StrategyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.r)
    }
}

pub type PairSet = BTreeSet<StrategyPair>;

/// Formats a set as `{(s0,r0), (s2,r1)}`.
pub fn format_set(set: &PairSet) -> String {
    let items: Vec<String> = set.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn is_weak_nash(m: &PayoffMatrix, pair: StrategyPair, tol: f64) -> bool {
    let here = m[pair.s.index()][pair.r.index()];
    let signaler_ok = SignalerStrategy::ALL
        .iter()
        .all(|s| m[s.index()][pair.r.index()].signaler <= here.signaler + tol);
    let responder_ok = ResponderStrategy::ALL
        .iter()
        .all(|r| m[pair.s.index()][r.index()].responder <= here.responder + tol);
    signaler_ok && responder_ok
}

/// Every pair from which no unilateral deviation gains more than `tol`.
pub fn pure_nash_brute_force(p: &GameParams, tol: f64) -> PairSet {
    let m = payoff_matrix(p);
    StrategyPair::all().filter(|&pair| is_weak_nash(&m, pair, tol)).collect()
}

/// The parameter conditions under which each pair is a pure equilibrium.
///
/// Equalities against zero (`comm_cost == 0`) are exact comparisons.
pub fn pure_nash_closed_form(p: &GameParams) -> PairSet {
    use ResponderStrategy::*;
    use SignalerStrategy::*;

    let GameParams {
        reward: r,
        unmet_cost: um,
        trip_cost: t,
        comm_cost: com,
        need_prob: pn,
    } = *p;
    let free_signal = com == 0.0;

    let rows = [
        (NeverSignal, Ignore, true),
        (NeverSignal, Respond, com >= r + um),
        (AlwaysSignal, Ignore, free_signal && pn * r - t <= 0.0),
        (AlwaysSignal, Respond, free_signal && pn * r - t >= 0.0),
        (SignalWhenNeed, Ignore, free_signal && pn * r - pn * t <= 0.0),
        (SignalWhenNeed, Respond, r >= com - um && r >= t),
        (SignalWhenNoNeed, Ignore, free_signal),
        (SignalWhenNoNeed, Respond, false),
    ];
    rows.into_iter()
        .filter(|&(_, _, holds)| holds)
        .map(|(s, r, _)| StrategyPair::new(s, r))
        .collect()
}

/// Signed distances of every closed-form condition from its binding point.
///
/// A parameter vector is generic when all of these are bounded away from zero.
pub fn closed_form_margins(p: &GameParams) -> [f64; 6] {
    let GameParams {
        reward: r,
        unmet_cost: um,
        trip_cost: t,
        comm_cost: com,
        need_prob: pn,
    } = *p;
    [com, com - (r + um), pn * r - t, pn * r - pn * t, r - (com - um), r - t]
}

/// One equilibrium and whether it is only weakly stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumEntry {
    pub pair: StrategyPair,
    /// Deviations that leave the deviator's payoff unchanged (within tolerance).
    pub neutral_deviations: Vec<StrategyPair>,
}

impl EquilibriumEntry {
    pub fn is_weak(&self) -> bool {
        !self.neutral_deviations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub params: GameParams,
    pub pure_equilibria: PairSet,
    pub entries: Vec<EquilibriumEntry>,
    pub closed_form: PairSet,
    pub matrix: PayoffMatrix,
    pub tolerance: f64,
}

impl EquilibriumReport {
    pub fn agrees(&self) -> bool {
        self.pure_equilibria == self.closed_form
    }

    /// Pairs found by exactly one of the two finders.
    pub fn disagreements(&self) -> PairSet {
        self.pure_equilibria
            .symmetric_difference(&self.closed_form)
            .copied()
            .collect()
    }
}

pub fn equilibrium_report(p: &GameParams) -> EquilibriumReport {
    equilibrium_report_with_tolerance(p, DEFAULT_TOLERANCE)
}

pub fn equilibrium_report_with_tolerance(p: &GameParams, tol: f64) -> EquilibriumReport {
    let matrix = payoff_matrix(p);
    let pure_equilibria = pure_nash_brute_force(p, tol);
    let entries = pure_equilibria
        .iter()
        .map(|&pair| {
            let here = matrix[pair.s.index()][pair.r.index()];
            let mut neutral = Vec::new();
            for s in SignalerStrategy::ALL.into_iter().filter(|&s| s != pair.s) {
                if (matrix[s.index()][pair.r.index()].signaler - here.signaler).abs() <= tol {
                    neutral.push(StrategyPair::new(s, pair.r));
                }
            }
            for r in ResponderStrategy::ALL.into_iter().filter(|&r| r != pair.r) {
                if (matrix[pair.s.index()][r.index()].responder - here.responder).abs() <= tol {
                    neutral.push(StrategyPair::new(pair.s, r));
                }
            }
            EquilibriumEntry {
                pair,
                neutral_deviations: neutral,
            }
        })
        .collect();
    EquilibriumReport {
        params: *p,
        pure_equilibria,
        entries,
        closed_form: pure_nash_closed_form(p),
        matrix,
        tolerance: tol,
    }
}
