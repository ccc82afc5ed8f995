use std::io::{self, Write};

use dimwit_core::optimizer::ProfileSummary;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Top-level JSON document written by every command.
///
/// Floats are written in their shortest round-trip form, so reading the
/// document back yields the same bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config: Value,
    pub payload: Value,
    pub timing_ms: f64,
}

impl ReportEnvelope {
    pub fn new(
        command: &str,
        seed: Option<u64>,
        config: Value,
        payload: Value,
        timing_ms: f64,
    ) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            seed,
            config,
            payload,
            timing_ms,
        }
    }

    pub fn write_to(&self, out: &mut dyn Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }
}

/// `n,value,converged` rows under a header line.
pub fn write_profile_csv(out: &mut dyn Write, profile: &[ProfileSummary]) -> io::Result<()> {
    writeln!(out, "n,value,converged")?;
    for p in profile {
        writeln!(out, "{},{},{}", p.n, p.value, p.converged)?;
    }
    Ok(())
}

/// One compact JSON object per line.
pub fn write_jsonl<T: Serialize>(out: &mut dyn Write, items: &[T]) -> io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut *out, item)?;
        writeln!(out)?;
    }
    Ok(())
}
