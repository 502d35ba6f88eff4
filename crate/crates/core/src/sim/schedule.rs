use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::GameParams;

/// Parameters that take effect from iteration `start` (1-based) onward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub start: u64,
    pub params: GameParams,
}

/// Piecewise-constant assignment of game parameters to iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule {
    segments: Vec<Segment>,
}

impl Schedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let s = Schedule { segments };
        s.validate()?;
        Ok(s)
    }

    /// A single segment covering every iteration.
    pub fn constant(params: GameParams) -> Self {
        Schedule {
            segments: vec![Segment { start: 1, params }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let first = self
            .segments
            .first()
            .ok_or_else(|| Error::invalid("schedule", "needs at least one segment"))?;
        if first.start != 1 {
            return Err(Error::invalid("schedule[0].start", "first segment must start at iteration 1"));
        }
        for (i, seg) in self.segments.iter().enumerate() {
            seg.params
                .validate()
                .map_err(|e| e.within(&format!("schedule[{i}].params")))?;
            if i > 0 && seg.start <= self.segments[i - 1].start {
                return Err(Error::invalid(
                    format!("schedule[{i}].start"),
                    "segment starts must be strictly increasing",
                ));
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// The 1-based id and parameters of the segment in force at iteration `t`.
    ///
    /// Segments are half-open: a boundary iteration belongs to the new segment.
    pub fn active_params(&self, t: u64) -> Result<(usize, GameParams)> {
        let idx = self.segments.partition_point(|s| s.start <= t);
        if idx == 0 {
            return Err(Error::Contract(format!("iteration {t} precedes the first segment")));
        }
        Ok((idx, self.segments[idx - 1].params))
    }

    /// First iteration of segment `id` (1-based).
    pub fn segment_start(&self, id: usize) -> Option<u64> {
        self.segments.get(id.checked_sub(1)?).map(|s| s.start)
    }

    /// Last iteration of segment `id` under horizon `horizon`.
    pub fn segment_end(&self, id: usize, horizon: u64) -> Option<u64> {
        self.segment_start(id)?;
        Some(self.segments.get(id).map_or(horizon, |next| next.start - 1))
    }

    /// The time-varying schedule used to study adaptation: four segments of
    /// 10000 iterations. The first two carry identical default parameters,
    /// the third raises the unmet-need cost to 0.8 and the fourth makes
    /// signaling free while raising the trip cost to 2.
    pub fn four_phase() -> Self {
        let d = GameParams::default();
        Schedule {
            segments: vec![
                Segment { start: 1, params: d },
                Segment { start: 10_001, params: d },
                Segment {
                    start: 20_001,
                    params: GameParams { unmet_cost: 0.8, ..d },
                },
                Segment {
                    start: 30_001,
                    params: GameParams {
                        trip_cost: 2.0,
                        comm_cost: 0.0,
                        ..d
                    },
                },
            ],
        }
    }
}
