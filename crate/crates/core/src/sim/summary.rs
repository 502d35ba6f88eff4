//! Strategy-frequency statistics over traces.

use serde::{Deserialize, Serialize};

use super::engine::{RoundRecord, Trace};
use crate::equilibrium::StrategyPair;
use crate::error::{Error, Result};

/// Default window length for frequency tables.
pub const DEFAULT_WINDOW: usize = 500;

/// Share of a trailing window a pair must hold to count as dominant.
pub const DOMINANCE_THRESHOLD: f64 = 0.9;

/// Empirical strategy distribution over a run of consecutive records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frequencies {
    pub start_t: u64,
    pub end_t: u64,
    /// Shares of s0..s3.
    pub signaler: [f64; 4],
    /// Shares of r0..r1.
    pub responder: [f64; 2],
    /// Shares of the eight pairs in row-major order (s0r0, s0r1, s1r0, ...).
    pub pairs: [f64; 8],
}

impl Frequencies {
    /// Frequencies of a nonempty slice of records.
    pub fn of(records: &[RoundRecord]) -> Option<Self> {
        let (first, last) = (records.first()?, records.last()?);
        let mut s = [0usize; 4];
        let mut r = [0usize; 2];
        let mut pairs = [0usize; 8];
        for rec in records {
            s[rec.s_strategy.index()] += 1;
            r[rec.r_strategy.index()] += 1;
            pairs[rec.pair().index()] += 1;
        }
        let n = records.len() as f64;
        Some(Frequencies {
            start_t: first.t,
            end_t: last.t,
            signaler: s.map(|c| c as f64 / n),
            responder: r.map(|c| c as f64 / n),
            pairs: pairs.map(|c| c as f64 / n),
        })
    }

    /// The most frequent pair (lowest index on ties) and its share.
    pub fn dominant(&self) -> (StrategyPair, f64) {
        let (i, f) = self
            .pairs
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, f)| if f > best.1 { (i, f) } else { best });
        (StrategyPair::from_index(i).expect("index < 8"), f)
    }

    /// Combined share of the given pairs.
    pub fn share_of(&self, target: &[StrategyPair]) -> f64 {
        target.iter().map(|p| self.pairs[p.index()]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentSummary {
    pub segment_id: usize,
    pub start_t: u64,
    pub end_t: u64,
    /// Rounds from the segment start until a full trailing window inside the
    /// segment is held by one pair at `DOMINANCE_THRESHOLD`; `None` if never.
    pub time_to_dominance: Option<u64>,
    /// Dominant pair over the segment's last window.
    pub final_dominant_pair: StrategyPair,
    pub final_dominant_frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub window: usize,
    pub rounds: u64,
    /// Consecutive windows of `window` rounds; the last may be shorter.
    pub windows: Vec<Frequencies>,
    /// The trailing `window` rounds.
    pub final_window: Frequencies,
    pub dominant_pair: StrategyPair,
    pub dominant_frequency: f64,
    pub cumulative_signaler_reward: f64,
    pub cumulative_responder_reward: f64,
    pub segments: Vec<SegmentSummary>,
}

/// Frequencies over the last `n` records (all of them if fewer).
pub fn trailing(records: &[RoundRecord], n: usize) -> Option<Frequencies> {
    Frequencies::of(&records[records.len().saturating_sub(n)..])
}

/// Rounds until the first full window of `window` consecutive records in
/// which `holds(pair_counts)` is true. The count is measured from the first
/// record of the slice, so the smallest possible answer is `window`.
fn first_sustained(records: &[RoundRecord], window: usize, holds: impl Fn(&[usize; 8]) -> bool) -> Option<u64> {
    if window == 0 || records.len() < window {
        return None;
    }
    let mut counts = [0usize; 8];
    for (k, rec) in records.iter().enumerate() {
        counts[rec.pair().index()] += 1;
        if k >= window {
            counts[records[k - window].pair().index()] -= 1;
        }
        if k + 1 >= window && holds(&counts) {
            return Some(k as u64 + 1);
        }
    }
    None
}

/// Rounds until some single pair holds `threshold` of a full trailing window.
pub fn time_to_dominance(records: &[RoundRecord], window: usize, threshold: f64) -> Option<u64> {
    let need = threshold * window as f64;
    first_sustained(records, window, |c| c.iter().any(|&n| n as f64 >= need))
}

/// Rounds until the pairs in `target` jointly hold `threshold` of a full
/// trailing window. A mixed outcome is expressed as a multi-pair target.
pub fn time_to_target(records: &[RoundRecord], target: &[StrategyPair], window: usize, threshold: f64) -> Option<u64> {
    let need = threshold * window as f64;
    first_sustained(records, window, |c| {
        target.iter().map(|p| c[p.index()]).sum::<usize>() as f64 >= need
    })
}

/// Records of each segment, in order. Relies on `segment_id` changing at
/// boundaries only.
pub fn segments(records: &[RoundRecord]) -> Vec<&[RoundRecord]> {
    records
        .chunk_by(|a, b| a.segment_id == b.segment_id)
        .collect()
}

pub fn summarize(trace: &Trace, window: usize) -> Result<RunSummary> {
    if window == 0 {
        return Err(Error::invalid("window", "must be at least 1"));
    }
    let records = &trace.records;
    let final_window = trailing(records, window).ok_or_else(|| Error::invalid("trace", "is empty"))?;
    let windows = records
        .chunks(window)
        .filter_map(Frequencies::of)
        .collect();
    let (dominant_pair, dominant_frequency) = final_window.dominant();
    let segs = segments(records)
        .into_iter()
        .map(|seg| {
            let last = trailing(seg, window).expect("segments are nonempty");
            let (pair, freq) = last.dominant();
            SegmentSummary {
                segment_id: seg[0].segment_id,
                start_t: seg[0].t,
                end_t: seg[seg.len() - 1].t,
                time_to_dominance: time_to_dominance(seg, window, DOMINANCE_THRESHOLD),
                final_dominant_pair: pair,
                final_dominant_frequency: freq,
            }
        })
        .collect();
    Ok(RunSummary {
        seed: trace.seed,
        window,
        rounds: records.len() as u64,
        windows,
        final_window,
        dominant_pair,
        dominant_frequency,
        cumulative_signaler_reward: records.iter().map(|r| r.signaler_reward).sum(),
        cumulative_responder_reward: records.iter().map(|r| r.responder_reward).sum(),
        segments: segs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{ResponderAgent, SignalerAgent};
    use crate::game::{ResponderStrategy, SignalerStrategy};
    use ResponderStrategy::*;
    use SignalerStrategy::*;

    fn rec(t: u64, seg: usize, s: SignalerStrategy, r: ResponderStrategy) -> RoundRecord {
        RoundRecord {
            t,
            segment_id: seg,
            need: false,
            signaled: false,
            responded: false,
            s_strategy: s,
            r_strategy: r,
            signaler_reward: 0.5,
            responder_reward: -0.25,
            alpha_a: 2.0,
            beta_a: 2.0,
            alpha_b: 2.0,
            beta_b: 2.0,
            alpha_c: 2.0,
            beta_c: 2.0,
        }
    }

    fn trace(records: Vec<RoundRecord>) -> Trace {
        Trace {
            seed: 0,
            records,
            signaler: SignalerAgent::default(),
            responder: ResponderAgent::default(),
        }
    }

    #[test]
    fn constant_strategy() {
        let t = trace((1..=1000).map(|t| rec(t, 1, SignalWhenNeed, Respond)).collect());
        let s = summarize(&t, 300).unwrap();
        assert_eq!(s.windows.len(), 4);
        assert_eq!(s.windows[3].start_t, 901);
        for w in &s.windows {
            assert_eq!(w.signaler, [0.0, 0.0, 1.0, 0.0]);
        }
        assert_eq!(s.dominant_pair, StrategyPair::new(SignalWhenNeed, Respond));
        assert_eq!(s.dominant_frequency, 1.0);
        assert_eq!(s.segments[0].time_to_dominance, Some(300));
        assert!((s.cumulative_signaler_reward - 500.0).abs() < 1e-9);
        assert!((s.cumulative_responder_reward + 250.0).abs() < 1e-9);
    }

    #[test]
    fn alternating_strategies_split_evenly() {
        let t = trace(
            (1..=1000)
                .map(|t| rec(t, 1, if t % 2 == 0 { AlwaysSignal } else { SignalWhenNeed }, Ignore))
                .collect(),
        );
        let s = summarize(&t, 100).unwrap();
        for w in &s.windows {
            assert_eq!(w.signaler[1], 0.5);
            assert_eq!(w.signaler[2], 0.5);
            assert_eq!(w.responder, [1.0, 0.0]);
        }
        assert_eq!(s.segments[0].time_to_dominance, None);
        let target = [StrategyPair::new(AlwaysSignal, Ignore), StrategyPair::new(SignalWhenNeed, Ignore)];
        assert_eq!(time_to_target(&t.records, &target, 100, 0.9), Some(100));
    }

    #[test]
    fn rows_sum_to_one() {
        let picks = [NeverSignal, AlwaysSignal, SignalWhenNeed, SignalWhenNoNeed];
        let t = trace(
            (1..=777)
                .map(|t| rec(t, 1, picks[(t * 7 % 4) as usize], ResponderStrategy::ALL[(t % 3 == 0) as usize]))
                .collect(),
        );
        let s = summarize(&t, 50).unwrap();
        for w in s.windows.iter().chain([&s.final_window]) {
            assert!((w.signaler.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((w.responder.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((w.pairs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dominance_time_counts_from_segment_start() {
        let mut records: Vec<RoundRecord> = (1..=100).map(|t| rec(t, 1, NeverSignal, Ignore)).collect();
        // 30 noisy rounds then steady play.
        records.extend((101..=130).map(|t| rec(t, 2, AlwaysSignal, Respond)));
        records.extend((131..=300).map(|t| rec(t, 2, SignalWhenNeed, Respond)));
        let s = summarize(&trace(records), 50).unwrap();
        assert_eq!(s.segments.len(), 2);
        assert_eq!(s.segments[0].time_to_dominance, Some(50));
        // The first window with >= 45 of 50 s2r1 rounds ends at segment round 75.
        assert_eq!(s.segments[1].time_to_dominance, Some(75));
        assert_eq!(s.segments[1].start_t, 101);
        assert_eq!(s.segments[1].end_t, 300);
        assert_eq!(s.segments[1].final_dominant_pair, StrategyPair::new(SignalWhenNeed, Respond));
    }

    #[test]
    fn short_segments_never_dominate() {
        let records: Vec<RoundRecord> = (1..=10).map(|t| rec(t, 1, NeverSignal, Ignore)).collect();
        assert_eq!(time_to_dominance(&records, 50, 0.9), None);
        assert!(summarize(&trace(records), 0).is_err());
        assert!(summarize(&trace(vec![]), 10).is_err());
    }
}
