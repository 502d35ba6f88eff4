//! Trace CSV and summary JSON files.
//!
//! Trace columns, in order:
//! `t, segment_id, need, s_strategy, r_strategy, signaled, responded,
//! signaler_reward, responder_reward, alpha_A, beta_A, alpha_B, beta_B, alpha_C, beta_C`.
//! Strategies are written as `s0..s3` / `r0..r1`, booleans as `0`/`1` and
//! reals with 9 significant digits (C `%.9g`).

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::config::ExperimentConfig;
use crate::sim::{RoundRecord, RunSummary};

pub const TRACE_COLUMNS: [&str; 15] = [
    "t",
    "segment_id",
    "need",
    "s_strategy",
    "r_strategy",
    "signaled",
    "responded",
    "signaler_reward",
    "responder_reward",
    "alpha_A",
    "beta_A",
    "alpha_B",
    "beta_B",
    "alpha_C",
    "beta_C",
];

/// Formats `v` like C's `%.9g`.
pub fn format_g9(v: f64) -> String {
    const PRECISION: i32 = 9;
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        trim_fraction(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Writes every `every`-th record (those with `(t - 1) % every == 0`).
pub fn write_trace<W: Write>(out: W, records: &[RoundRecord], every: u64) -> Result<()> {
    if every == 0 {
        return Err(Error::invalid("trace_every", "must be at least 1"));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_COLUMNS)?;
    for r in records.iter().filter(|r| (r.t - 1) % every == 0) {
        w.write_record([
            r.t.to_string(),
            r.segment_id.to_string(),
            flag(r.need).into(),
            r.s_strategy.label().into(),
            r.r_strategy.label().into(),
            flag(r.signaled).into(),
            flag(r.responded).into(),
            format_g9(r.signaler_reward),
            format_g9(r.responder_reward),
            format_g9(r.alpha_a),
            format_g9(r.beta_a),
            format_g9(r.alpha_b),
            format_g9(r.beta_b),
            format_g9(r.alpha_c),
            format_g9(r.beta_c),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_file(path: &Path, records: &[RoundRecord], every: u64) -> Result<()> {
    write_trace(File::create(path)?, records, every)
}

fn parse_field<T: std::str::FromStr>(row: usize, col: &str, s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.trim()
        .parse()
        .map_err(|e| Error::Parse(format!("row {row}: column {col}: {e} ({s:?})")))
}

fn parse_flag(row: usize, col: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::Parse(format!("row {row}: column {col}: expected 0 or 1, got {other:?}"))),
    }
}

/// Reads a trace written by [`write_trace`]. Row numbers in errors count the
/// header as row 1.
pub fn read_trace<R: Read>(input: R) -> Result<Vec<RoundRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != TRACE_COLUMNS {
        return Err(Error::Parse(format!("row 1: unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 2;
        let row = row.map_err(|e| Error::Parse(format!("row {row_no}: {e}")))?;
        if row.len() != TRACE_COLUMNS.len() {
            return Err(Error::Parse(format!(
                "row {row_no}: expected {} fields, got {}",
                TRACE_COLUMNS.len(),
                row.len()
            )));
        }
        let f = |k: usize| (TRACE_COLUMNS[k], &row[k]);
        let real = |k: usize| -> Result<f64> {
            let (c, s) = f(k);
            parse_field(row_no, c, s)
        };
        let rec = RoundRecord {
            t: parse_field(row_no, "t", &row[0])?,
            segment_id: parse_field(row_no, "segment_id", &row[1])?,
            need: parse_flag(row_no, "need", &row[2])?,
            s_strategy: parse_field(row_no, "s_strategy", &row[3])?,
            r_strategy: parse_field(row_no, "r_strategy", &row[4])?,
            signaled: parse_flag(row_no, "signaled", &row[5])?,
            responded: parse_flag(row_no, "responded", &row[6])?,
            signaler_reward: real(7)?,
            responder_reward: real(8)?,
            alpha_a: real(9)?,
            beta_a: real(10)?,
            alpha_b: real(11)?,
            beta_b: real(12)?,
            alpha_c: real(13)?,
            beta_c: real(14)?,
        };
        if rec.responded && !rec.signaled {
            return Err(Error::Parse(format!("row {row_no}: response recorded without a signal")));
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn read_trace_file(path: &Path) -> Result<Vec<RoundRecord>> {
    read_trace(File::open(path)?)
}

/// Contents of `summary.json`.
#[derive(Debug, Serialize)]
pub struct SummaryFile<'a> {
    pub scenario: &'a str,
    pub config: &'a ExperimentConfig,
    /// One entry per seed, in seed order.
    pub runs: &'a [RunSummary],
}

pub fn write_summary_file(path: &Path, summary: &SummaryFile<'_>) -> Result<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, summary)?;
    f.write_all(b"\n")?;
    Ok(())
}
