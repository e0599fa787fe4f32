//! Scenario checks, fuzz and oracle campaigns, and SVG figures on top of
//! `carousel-core`.

pub mod campaign;
pub mod check;
pub mod scenario;
pub mod svg;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use campaign::{run_fuzz, run_oracle_check, FuzzKind, FuzzReport, OracleReport};
pub use check::{run_repro3d, run_scenario, run_sweep, Report};
pub use scenario::{Kind, Scenario};
pub use svg::render_svg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cannot render scenario kind {0}")]
    UnsupportedKind(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Outcome of a check; maps onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Refuted,
}

impl Verdict {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            Verdict::Verified
        } else {
            Verdict::Refuted
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Refuted => 1,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

/// Worker count from `CAROUSEL_THREADS`; `None` means run sequentially.
pub fn thread_count() -> Option<usize> {
    std::env::var("CAROUSEL_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 1)
}
