//! Python bindings for `sigresp`.
//!
//! Strategies cross the boundary as their labels (`"s0"`..`"s3"`, `"r0"`,
//! `"r1"`) and strategy pairs as `(signaler, responder)` tuples.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sigresp::equilibrium::{self, DEFAULT_TOLERANCE};
use sigresp::game::{self, PayoffPair};
use sigresp::io::config::ExperimentConfig;
use sigresp::io::trace::write_trace;
use sigresp::sim::{self, Schedule};

fn py_err(e: sigresp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn signaler(label: &str) -> PyResult<sigresp::SignalerStrategy> {
    label.parse().map_err(py_err)
}

fn responder(label: &str) -> PyResult<sigresp::ResponderStrategy> {
    label.parse().map_err(py_err)
}

fn tuple(p: PayoffPair) -> (f64, f64) {
    (p.signaler, p.responder)
}

fn pairs(set: &equilibrium::PairSet) -> Vec<(String, String)> {
    set.iter().map(|p| (p.s.label().to_string(), p.r.label().to_string())).collect()
}

#[pyclass(name = "GameParams", module = "sigresp_py", from_py_object)]
#[derive(Clone, Copy)]
struct PyGameParams {
    inner: sigresp::GameParams,
}

#[pymethods]
impl PyGameParams {
    #[new]
    #[pyo3(signature = (reward=1.0, unmet_cost=0.5, trip_cost=0.8, comm_cost=0.5, need_prob=0.8))]
    fn new(reward: f64, unmet_cost: f64, trip_cost: f64, comm_cost: f64, need_prob: f64) -> PyResult<Self> {
        let inner = sigresp::GameParams::new(reward, unmet_cost, trip_cost, comm_cost, need_prob).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn reward(&self) -> f64 {
        self.inner.reward
    }
    #[getter]
    fn unmet_cost(&self) -> f64 {
        self.inner.unmet_cost
    }
    #[getter]
    fn trip_cost(&self) -> f64 {
        self.inner.trip_cost
    }
    #[getter]
    fn comm_cost(&self) -> f64 {
        self.inner.comm_cost
    }
    #[getter]
    fn need_prob(&self) -> f64 {
        self.inner.need_prob
    }

    /// Expected (signaler, responder) payoffs of a strategy pair.
    fn expected_payoffs(&self, s: &str, r: &str) -> PyResult<(f64, f64)> {
        Ok(tuple(game::expected_payoffs(&self.inner, signaler(s)?, responder(r)?)))
    }

    /// Realized payoffs of one round.
    fn realized_rewards(&self, need: bool, signaled: bool, responded: bool) -> PyResult<(f64, f64)> {
        game::realized_rewards(&self.inner, need, signaled, responded)
            .map(tuple)
            .map_err(py_err)
    }

    /// 4x2 nested list of payoff tuples, rows s0..s3, columns r0..r1.
    fn payoff_matrix(&self) -> Vec<Vec<(f64, f64)>> {
        game::payoff_matrix(&self.inner)
            .iter()
            .map(|row| row.iter().copied().map(tuple).collect())
            .collect()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "GameParams(reward={}, unmet_cost={}, trip_cost={}, comm_cost={}, need_prob={})",
            p.reward, p.unmet_cost, p.trip_cost, p.comm_cost, p.need_prob
        )
    }
}

#[pyfunction]
#[pyo3(signature = (params, tolerance=DEFAULT_TOLERANCE))]
fn pure_nash_brute_force(params: PyGameParams, tolerance: f64) -> Vec<(String, String)> {
    pairs(&equilibrium::pure_nash_brute_force(&params.inner, tolerance))
}

#[pyfunction]
fn pure_nash_closed_form(params: PyGameParams) -> Vec<(String, String)> {
    pairs(&equilibrium::pure_nash_closed_form(&params.inner))
}

#[pyclass(name = "BetaBelief", module = "sigresp_py", from_py_object)]
#[derive(Clone, Copy)]
struct PyBetaBelief {
    inner: sigresp::BetaBelief,
}

#[pymethods]
impl PyBetaBelief {
    #[new]
    #[pyo3(signature = (alpha=2.0, beta=2.0))]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(Self {
            inner: sigresp::BetaBelief::new(alpha, beta).map_err(py_err)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    /// Returns the posterior after one Bernoulli observation.
    fn update(&self, success: bool) -> Self {
        Self {
            inner: self.inner.update(success),
        }
    }

    /// `n` independent draws from a generator seeded with `seed`.
    fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.inner.sample(&mut rng)).collect()
    }

    fn __repr__(&self) -> String {
        format!("BetaBelief(alpha={}, beta={})", self.inner.alpha, self.inner.beta)
    }
}

/// Signaler strategy that maximises expected reward at fixed beliefs.
#[pyfunction]
#[pyo3(signature = (theta_a, theta_b, params, seed=0))]
fn signaler_best_response(theta_a: f64, theta_b: f64, params: PyGameParams, seed: u64) -> &'static str {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sigresp::SignalerAgent::best_response(theta_a, theta_b, &params.inner, &mut rng).label()
}

#[pyfunction]
#[pyo3(signature = (theta_c, params, seed=0))]
fn responder_best_response(theta_c: f64, params: PyGameParams, seed: u64) -> &'static str {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sigresp::ResponderAgent::best_response(theta_c, &params.inner, &mut rng).label()
}

#[pyfunction]
fn signaler_expected_rewards(theta_a: f64, theta_b: f64, params: PyGameParams) -> [f64; 4] {
    sigresp::agents::signaler_expected_rewards(theta_a, theta_b, &params.inner)
}

#[pyfunction]
fn responder_expected_rewards(theta_c: f64, params: PyGameParams) -> [f64; 2] {
    sigresp::agents::responder_expected_rewards(theta_c, &params.inner)
}

/// One simulated run.
#[pyclass(name = "Trace", module = "sigresp_py")]
struct PyTrace {
    inner: sigresp::Trace,
}

#[pymethods]
impl PyTrace {
    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn __len__(&self) -> usize {
        self.inner.records.len()
    }

    /// One numeric trace column by its CSV name; flags come back as 0/1.
    fn column(&self, name: &str) -> PyResult<Vec<f64>> {
        let recs = &self.inner.records;
        let pick: fn(&sigresp::RoundRecord) -> f64 = match name {
            "t" => |r| r.t as f64,
            "segment_id" => |r| r.segment_id as f64,
            "need" => |r| f64::from(u8::from(r.need)),
            "signaled" => |r| f64::from(u8::from(r.signaled)),
            "responded" => |r| f64::from(u8::from(r.responded)),
            "signaler_reward" => |r| r.signaler_reward,
            "responder_reward" => |r| r.responder_reward,
            "alpha_A" => |r| r.alpha_a,
            "beta_A" => |r| r.beta_a,
            "alpha_B" => |r| r.alpha_b,
            "beta_B" => |r| r.beta_b,
            "alpha_C" => |r| r.alpha_c,
            "beta_C" => |r| r.beta_c,
            other => return Err(PyValueError::new_err(format!("unknown numeric column {other:?}"))),
        };
        Ok(recs.iter().map(pick).collect())
    }

    /// Strategy labels per round as `(signaler, responder)`.
    fn strategies(&self) -> Vec<(&'static str, &'static str)> {
        self.inner
            .records
            .iter()
            .map(|r| (r.s_strategy.label(), r.r_strategy.label()))
            .collect()
    }

    /// Final posterior means `(theta_A, theta_B, theta_C)`.
    fn final_means(&self) -> (f64, f64, f64) {
        (
            self.inner.signaler.belief_need.mean(),
            self.inner.signaler.belief_response.mean(),
            self.inner.responder.belief_need_given_signal.mean(),
        )
    }

    /// Summary statistics as a JSON string.
    #[pyo3(signature = (window=sim::DEFAULT_WINDOW))]
    fn summary_json(&self, window: usize) -> PyResult<String> {
        let s = sim::summarize(&self.inner, window).map_err(py_err)?;
        serde_json::to_string(&s).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// The trace in the CLI's CSV format.
    #[pyo3(signature = (every=1))]
    fn to_csv(&self, every: u64) -> PyResult<String> {
        let mut buf = Vec::new();
        write_trace(&mut buf, &self.inner.records, every).map_err(py_err)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Runs a constant-parameter simulation.
#[pyfunction]
#[pyo3(signature = (params, horizon, seed))]
fn simulate(py: Python<'_>, params: PyGameParams, horizon: u64, seed: u64) -> PyResult<PyTrace> {
    let cfg = sim::SimConfig::new(horizon, Schedule::constant(params.inner), seed);
    let trace = py.detach(|| sim::run(&cfg)).map_err(py_err)?;
    Ok(PyTrace { inner: trace })
}

/// Runs every seed of an experiment config given as JSON text.
#[pyfunction]
fn simulate_config(py: Python<'_>, config_json: &str) -> PyResult<Vec<PyTrace>> {
    let cfg = ExperimentConfig::from_json(config_json).map_err(py_err)?;
    let traces = py
        .detach(|| sim::run_batch_traces(&cfg.sim_config(), cfg.n_seeds))
        .map_err(py_err)?;
    Ok(traces.into_iter().map(|inner| PyTrace { inner }).collect())
}

#[pymodule]
fn sigresp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGameParams>()?;
    m.add_class::<PyBetaBelief>()?;
    m.add_class::<PyTrace>()?;
    m.add_function(wrap_pyfunction!(pure_nash_brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(pure_nash_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(signaler_best_response, m)?)?;
    m.add_function(wrap_pyfunction!(responder_best_response, m)?)?;
    m.add_function(wrap_pyfunction!(signaler_expected_rewards, m)?)?;
    m.add_function(wrap_pyfunction!(responder_expected_rewards, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_config, m)?)?;
    Ok(())
}
