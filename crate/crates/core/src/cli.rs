//! Command-line front end: `simulate`, `equilibria` and `sweep`.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on invalid input.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::equilibrium::{equilibrium_report, format_set, EquilibriumReport, StrategyPair};
use crate::error::Error;
use crate::game::{GameParams, ResponderStrategy, SignalerStrategy};
use crate::io::config::{ExperimentConfig, SweepSpec};
use crate::io::trace::{format_g9, write_summary_file, write_trace_file, SummaryFile};
use crate::sim::{run_batch_traces, summarize, trailing, RunSummary, SimConfig};

#[derive(Debug, Parser)]
#[command(name = "sigresp", version, about = "Signaler-responder game simulator and equilibrium analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the learning agents and write traces plus a summary.
    Simulate {
        /// Experiment config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `out_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of seeds (overrides `n_seeds`).
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Print the payoff matrix and the pure Nash equilibria.
    Equilibria {
        /// Experiment config; every schedule segment is analysed.
        #[arg(long, conflicts_with = "params", required_unless_present = "params")]
        config: Option<PathBuf>,
        /// Inline parameters `R,um,t,com,pn`.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
    },
    /// Tabulate equilibria (and optionally simulated outcomes) over a grid.
    Sweep {
        /// Sweep spec (JSON) with a parameter `grid` and/or explicit `points`.
        #[arg(long)]
        spec: PathBuf,
        /// Also run the learning agents at every point.
        #[arg(long)]
        simulate: bool,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match &e {
            Error::Io(_) | Error::Csv(_) => CliError::Io(e.to_string()),
            Error::Json(j) if j.is_io() => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out: dir, seeds } => simulate(&config, dir, seeds, out).map(|_| ()),
        Command::Equilibria { config, params } => equilibria(config.as_deref(), params.as_deref(), out),
        Command::Sweep { spec, simulate, out: table } => sweep(&spec, simulate, table.as_deref(), out),
    }
}

/// Runs the configured batch, writing `trace_<seed>.csv` per seed and
/// `summary.json` into the output directory.
pub fn simulate(
    config_path: &Path,
    dir: Option<PathBuf>,
    seeds: Option<u64>,
    out: &mut dyn Write,
) -> Result<Vec<RunSummary>, CliError> {
    let mut cfg = ExperimentConfig::load(config_path)?;
    if let Some(dir) = dir {
        cfg.out_dir = dir;
    }
    if let Some(n) = seeds {
        cfg.n_seeds = n;
    }
    cfg.validate()?;

    let traces = run_batch_traces(&cfg.sim_config(), cfg.n_seeds)?;
    fs::create_dir_all(&cfg.out_dir)?;
    let mut summaries = Vec::with_capacity(traces.len());
    for trace in &traces {
        let path = cfg.out_dir.join(format!("trace_{}.csv", trace.seed));
        write_trace_file(&path, &trace.records, cfg.trace_every)?;
        let s = summarize(trace, cfg.window)?;
        writeln!(
            out,
            "seed {}: final window dominant {} ({:.3}), cumulative rewards {} / {}",
            s.seed,
            s.dominant_pair,
            s.dominant_frequency,
            format_g9(s.cumulative_signaler_reward),
            format_g9(s.cumulative_responder_reward)
        )?;
        summaries.push(s);
    }
    write_summary_file(
        &cfg.out_dir.join("summary.json"),
        &SummaryFile {
            scenario: &cfg.scenario,
            config: &cfg,
            runs: &summaries,
        },
    )?;
    writeln!(out, "wrote {} trace(s) and summary.json to {}", traces.len(), cfg.out_dir.display())?;
    Ok(summaries)
}

/// Human-readable payoff matrix and equilibrium sets.
pub fn render_report(report: &EquilibriumReport) -> String {
    let p = &report.params;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "params: R={} um={} t={} com={} pn={}",
        p.reward, p.unmet_cost, p.trip_cost, p.comm_cost, p.need_prob
    );
    let _ = writeln!(s, "payoff matrix (signaler, responder):");
    let _ = writeln!(s, "      {:<24}{:<24}", "r0", "r1");
    for sig in SignalerStrategy::ALL {
        let row = &report.matrix[sig.index()];
        let cell = |r: ResponderStrategy| {
            let c = row[r.index()];
            format!("({}, {})", format_g9(c.signaler), format_g9(c.responder))
        };
        let _ = writeln!(
            s,
            "  {sig}  {:<24}{:<24}",
            cell(ResponderStrategy::Ignore),
            cell(ResponderStrategy::Respond)
        );
    }
    let _ = writeln!(s, "pure NE (brute force): {}", format_set(&report.pure_equilibria));
    let _ = writeln!(s, "pure NE (closed form): {}", format_set(&report.closed_form));
    let weak: Vec<String> = report
        .entries
        .iter()
        .filter(|e| e.is_weak())
        .map(|e| {
            let devs: Vec<String> = e.neutral_deviations.iter().map(StrategyPair::to_string).collect();
            format!("{} (neutral: {})", e.pair, devs.join(" "))
        })
        .collect();
    if !weak.is_empty() {
        let _ = writeln!(s, "weak equilibria: {}", weak.join("; "));
    }
    if report.agrees() {
        let _ = writeln!(s, "finders agree");
    } else {
        let _ = writeln!(s, "DISAGREEMENT: {}", format_set(&report.disagreements()));
    }
    s
}

pub fn equilibria(config: Option<&Path>, params: Option<&str>, out: &mut dyn Write) -> Result<(), CliError> {
    let list: Vec<GameParams> = match (config, params) {
        (_, Some(inline)) => vec![GameParams::parse_csv(inline)?],
        (Some(path), None) => {
            let cfg = ExperimentConfig::load(path)?;
            cfg.schedule.segments().iter().map(|s| s.params).collect()
        }
        (None, None) => return Err(CliError::Validation("either --config or --params is required".into())),
    };
    for (i, p) in list.iter().enumerate() {
        if list.len() > 1 {
            writeln!(out, "segment {}", i + 1)?;
        }
        out.write_all(render_report(&equilibrium_report(p)).as_bytes())?;
    }
    Ok(())
}

/// Columns of the sweep table.
pub const SWEEP_COLUMNS: [&str; 8] = [
    "reward",
    "unmet_cost",
    "trip_cost",
    "comm_cost",
    "need_prob",
    "ne_brute_force",
    "ne_closed_form",
    "agree",
];

/// Mean final-window pair frequencies across a batch and the most frequent pair.
pub fn simulated_outcome(params: GameParams, spec: &SweepSpec) -> Result<(StrategyPair, f64), Error> {
    let sim = &spec.simulation;
    let cfg = SimConfig::constant(params, sim.horizon, sim.seed);
    let traces = run_batch_traces(&cfg, sim.n_seeds)?;
    let mut pooled = [0.0f64; 8];
    for t in &traces {
        let f = trailing(&t.records, sim.final_window).expect("horizon is positive");
        for (acc, v) in pooled.iter_mut().zip(f.pairs) {
            *acc += v / traces.len() as f64;
        }
    }
    let (i, f) = pooled
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, f)| if f > best.1 { (i, f) } else { best });
    Ok((StrategyPair::from_index(i).expect("index < 8"), f))
}

pub fn sweep(spec_path: &Path, simulate: bool, table: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = SweepSpec::load(spec_path)?;
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let mut header: Vec<&str> = SWEEP_COLUMNS.to_vec();
        if simulate {
            header.extend(["dominant_pair", "dominant_frequency"]);
        }
        w.write_record(&header).map_err(Error::from)?;
        for p in spec.grid_points() {
            let report = equilibrium_report(&p);
            let mut row = vec![
                format_g9(p.reward),
                format_g9(p.unmet_cost),
                format_g9(p.trip_cost),
                format_g9(p.comm_cost),
                format_g9(p.need_prob),
                format_set(&report.pure_equilibria),
                format_set(&report.closed_form),
                (if report.agrees() { "1" } else { "0" }).to_string(),
            ];
            if simulate {
                let (pair, freq) = simulated_outcome(p, &spec)?;
                row.push(pair.to_string());
                row.push(format!("{freq:.4}"));
            }
            w.write_record(&row).map_err(Error::from)?;
        }
        w.flush()?;
    }
    match table {
        Some(path) => fs::write(path, &buf)?,
        None => out.write_all(&buf)?,
    }
    Ok(())
}
