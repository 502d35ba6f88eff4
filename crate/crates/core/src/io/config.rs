//! JSON experiment configs and sweep specs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agents::BetaBelief;
use crate::error::{Error, Result};
use crate::game::GameParams;
use crate::sim::{Schedule, SignalerPriors, SimConfig, DEFAULT_WINDOW};

fn default_one() -> u64 {
    1
}

fn default_window() -> usize {
    DEFAULT_WINDOW
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Everything needed to reproduce one `simulate` invocation.
///
/// ```json
/// {
///   "scenario": "default",
///   "horizon": 20000,
///   "schedule": [{"start": 1, "params": {"reward": 1.0, "unmet_cost": 0.5,
///                 "trip_cost": 0.8, "comm_cost": 0.5, "need_prob": 0.8}}],
///   "seed": 1
/// }
/// ```
///
/// Optional fields: `signaler_priors` (`{"need": {"alpha", "beta"}, "response": {..}}`),
/// `responder_prior`, `reset_on_change` (false), `trace_every` (1),
/// `n_seeds` (1), `window` (500), `out_dir` (`out`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub horizon: u64,
    pub schedule: Schedule,
    #[serde(default)]
    pub signaler_priors: SignalerPriors,
    #[serde(default)]
    pub responder_prior: BetaBelief,
    #[serde(default)]
    pub reset_on_change: bool,
    pub seed: u64,
    #[serde(default = "default_one")]
    pub trace_every: u64,
    #[serde(default = "default_one")]
    pub n_seeds: u64,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(scenario: impl Into<String>, sim: SimConfig) -> Self {
        ExperimentConfig {
            scenario: scenario.into(),
            horizon: sim.horizon,
            schedule: sim.schedule,
            signaler_priors: sim.signaler_priors,
            responder_prior: sim.responder_prior,
            reset_on_change: sim.reset_on_change,
            seed: sim.seed,
            trace_every: sim.trace_every,
            n_seeds: 1,
            window: DEFAULT_WINDOW,
            out_dir: default_out_dir(),
        }
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            horizon: self.horizon,
            schedule: self.schedule.clone(),
            signaler_priors: self.signaler_priors,
            responder_prior: self.responder_prior,
            reset_on_change: self.reset_on_change,
            seed: self.seed,
            trace_every: self.trace_every,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.sim_config().validate()?;
        if self.n_seeds == 0 {
            return Err(Error::invalid("n_seeds", "must be at least 1"));
        }
        if self.window == 0 {
            return Err(Error::invalid("window", "must be at least 1"));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Simulation settings used by `sweep --simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSimulation {
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    #[serde(default = "default_one")]
    pub seed: u64,
    #[serde(default = "default_one")]
    pub n_seeds: u64,
    /// Rounds at the end of each run over which the dominant pair is measured.
    #[serde(default = "default_final_window")]
    pub final_window: usize,
}

fn default_horizon() -> u64 {
    20_000
}

fn default_final_window() -> usize {
    2_000
}

impl Default for SweepSimulation {
    fn default() -> Self {
        SweepSimulation {
            horizon: default_horizon(),
            seed: 1,
            n_seeds: 1,
            final_window: default_final_window(),
        }
    }
}

/// Value lists per parameter; the grid is their cross product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamGrid {
    pub reward: Vec<f64>,
    pub unmet_cost: Vec<f64>,
    pub trip_cost: Vec<f64>,
    pub comm_cost: Vec<f64>,
    pub need_prob: Vec<f64>,
}

/// A parameter sweep: a cross-product `grid`, explicit `points`, or both
/// (grid points first).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub grid: Option<ParamGrid>,
    #[serde(default)]
    pub points: Vec<GameParams>,
    #[serde(default)]
    pub simulation: SweepSimulation,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_none() && self.points.is_empty() {
            return Err(Error::invalid("grid", "a sweep needs a grid or at least one point"));
        }
        if let Some(g) = &self.grid {
            for (name, values) in [
                ("reward", &g.reward),
                ("unmet_cost", &g.unmet_cost),
                ("trip_cost", &g.trip_cost),
                ("comm_cost", &g.comm_cost),
                ("need_prob", &g.need_prob),
            ] {
                if values.is_empty() {
                    return Err(Error::invalid(format!("grid.{name}"), "must list at least one value"));
                }
            }
        }
        for (i, p) in self.grid_points().iter().enumerate() {
            let label = if i < self.grid_len() {
                "grid".to_string()
            } else {
                format!("points[{}]", i - self.grid_len())
            };
            p.validate().map_err(|e| e.within(&label))?;
        }
        let sim = &self.simulation;
        if sim.horizon == 0 || sim.n_seeds == 0 || sim.final_window == 0 {
            return Err(Error::invalid("simulation", "horizon, n_seeds and final_window must be positive"));
        }
        Ok(())
    }

    fn grid_len(&self) -> usize {
        self.grid.as_ref().map_or(0, |g| {
            g.reward.len() * g.unmet_cost.len() * g.trip_cost.len() * g.comm_cost.len() * g.need_prob.len()
        })
    }

    /// The grid in row-major order (reward outermost, need_prob innermost),
    /// followed by the explicit points.
    pub fn grid_points(&self) -> Vec<GameParams> {
        let mut out = Vec::new();
        if let Some(g) = &self.grid {
            for &reward in &g.reward {
                for &unmet_cost in &g.unmet_cost {
                    for &trip_cost in &g.trip_cost {
                        for &comm_cost in &g.comm_cost {
                            for &need_prob in &g.need_prob {
                                out.push(GameParams {
                                    reward,
                                    unmet_cost,
                                    trip_cost,
                                    comm_cost,
                                    need_prob,
                                });
                            }
                        }
                    }
                }
            }
        }
        out.extend(self.points.iter().copied());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "scenario": "default",
        "horizon": 100,
        "schedule": [{"start": 1, "params": {"reward": 1.0, "unmet_cost": 0.5, "trip_cost": 0.8, "comm_cost": 0.5, "need_prob": 0.8}}],
        "seed": 7
    }"#;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.window, 500);
        assert_eq!(c.n_seeds, 1);
        assert_eq!(c.trace_every, 1);
        assert!(!c.reset_on_change);
        assert_eq!(c.responder_prior, BetaBelief::default());
        assert_eq!(c.schedule.segments()[0].params, GameParams::default());
    }

    #[test]
    fn invalid_need_prob_names_the_field() {
        let text = MINIMAL.replace("\"need_prob\": 0.8", "\"need_prob\": 1.5");
        let err = ExperimentConfig::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("need_prob"), "{err}");
    }

    #[test]
    fn schema_violations_are_reported() {
        let err = ExperimentConfig::from_json(&MINIMAL.replace("\"seed\": 7", "\"seed\": 7, \"speed\": 1")).unwrap_err();
        assert!(err.to_string().contains("speed"), "{err}");
        let err = ExperimentConfig::from_json(&MINIMAL.replace("\"horizon\": 100,", "")).unwrap_err();
        assert!(err.to_string().contains("horizon"), "{err}");
        let err = ExperimentConfig::from_json(&MINIMAL.replace("\"seed\": 7", "\"seed\": 7, \"n_seeds\": 0")).unwrap_err();
        assert!(err.to_string().contains("n_seeds"), "{err}");
    }

    #[test]
    fn sweep_grid_order() {
        let spec = SweepSpec::from_json(
            r#"{"grid": {"reward": [1], "unmet_cost": [0.5], "trip_cost": [0.5, 2.0], "comm_cost": [0, 0.5], "need_prob": [0.8]},
                "points": [{"reward": 1, "unmet_cost": 0.5, "trip_cost": 0.8, "comm_cost": 0.5, "need_prob": 0.1}]}"#,
        )
        .unwrap();
        let pts = spec.grid_points();
        assert_eq!(pts.len(), 5);
        assert_eq!((pts[0].trip_cost, pts[0].comm_cost), (0.5, 0.0));
        assert_eq!((pts[1].trip_cost, pts[1].comm_cost), (0.5, 0.5));
        assert_eq!((pts[2].trip_cost, pts[2].comm_cost), (2.0, 0.0));
        assert_eq!(pts[4].need_prob, 0.1);
    }

    #[test]
    fn invalid_sweeps() {
        assert!(SweepSpec::from_json("{}").is_err());
        let err = SweepSpec::from_json(
            r#"{"grid": {"reward": [], "unmet_cost": [0.5], "trip_cost": [0.5], "comm_cost": [0], "need_prob": [0.8]}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("grid.reward"), "{err}");
        let err = SweepSpec::from_json(
            r#"{"points": [{"reward": 1, "unmet_cost": 0.5, "trip_cost": 0.8, "comm_cost": 0.5, "need_prob": 3}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("points[0].need_prob"), "{err}");
    }

    mod props {
        use super::*;
        use crate::sim::Segment;
        use proptest::prelude::*;

        fn params() -> impl Strategy<Value = GameParams> {
            (0.0..5.0f64, 0.0..5.0f64, 0.0..5.0f64, 0.0..5.0f64, 0.0..=1.0f64).prop_map(|(r, um, t, com, pn)| {
                GameParams {
                    reward: r,
                    unmet_cost: um,
                    trip_cost: t,
                    comm_cost: com,
                    need_prob: pn,
                }
            })
        }

        proptest! {
            #[test]
            fn config_round_trips(
                a in params(), b in params(), gap in 1u64..10_000, seed in any::<u64>(),
                reset in any::<bool>(), window in 1usize..5000, n in 1u64..50, every in 1u64..20,
                alpha in 0.1..50.0f64, beta in 0.1..50.0f64,
            ) {
                let schedule = Schedule::new(vec![Segment { start: 1, params: a }, Segment { start: 1 + gap, params: b }]).unwrap();
                let mut sim = SimConfig::new(gap + 10, schedule, seed);
                sim.reset_on_change = reset;
                sim.trace_every = every;
                sim.responder_prior = BetaBelief::new(alpha, beta).unwrap();
                sim.signaler_priors.response = BetaBelief::new(beta, alpha).unwrap();
                let mut cfg = ExperimentConfig::new("prop", sim);
                cfg.window = window;
                cfg.n_seeds = n;
                let back = ExperimentConfig::from_json(&cfg.to_json().unwrap()).unwrap();
                prop_assert_eq!(back, cfg);
            }
        }
    }
}
