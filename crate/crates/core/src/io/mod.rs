//! Configuration files, trace CSV and summary JSON.

pub mod config;
pub mod trace;
