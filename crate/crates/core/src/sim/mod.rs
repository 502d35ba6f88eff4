//! Repeated play between the two learning agents.

mod engine;
mod schedule;
mod summary;

pub use engine::{run, run_batch, run_batch_traces, run_seed, RoundRecord, SignalerPriors, SimConfig, Trace};
pub use schedule::{Schedule, Segment};
pub use summary::{
    segments, summarize, time_to_dominance, time_to_target, trailing, Frequencies, RunSummary, SegmentSummary,
    DEFAULT_WINDOW, DOMINANCE_THRESHOLD,
};
