//! The versioned CSV schema shared by all commands.
//!
//! The main file holds only seed-deterministic columns, so equal configs
//! produce byte-identical output; wall-clock measurements go to a separate
//! `.timing.csv` sidecar next to it.

use std::io::Write;
use std::path::{Path, PathBuf};

pub const CSV_SCHEMA_VERSION: &str = "katz-bench csv v1";
pub const TIMING_SCHEMA_VERSION: &str = "katz-bench timing v1";

pub const MAIN_HEADER: &str =
    "trial,step,method,target_kind,target_id,L,spmv_count,rel_err,isim,tc_drop,tc_bound,converged_by";
pub const TIMING_HEADER: &str = "trial,step,method,time_ns";

/// One row per (trial, step, method). Aggregate rows use `trial = -1`.
#[derive(Debug, Clone)]
pub struct Record {
    pub trial: i64,
    pub step: i64,
    pub method: String,
    pub target_kind: String,
    pub target_id: String,
    /// Iterations or truncation length; fractional in aggregate rows.
    pub l: f64,
    pub spmv: f64,
    pub rel_err: Option<f64>,
    pub isim: Option<f64>,
    pub tc_drop: Option<f64>,
    pub tc_bound: Option<f64>,
    pub converged_by: String,
    /// Nanoseconds around the numerical call; sidecar only.
    pub time_ns: u128,
}

impl Record {
    pub fn new(trial: i64, step: i64, method: &str) -> Record {
        Record {
            trial,
            step,
            method: method.to_string(),
            target_kind: String::new(),
            target_id: String::new(),
            l: 0.0,
            spmv: 0.0,
            rel_err: None,
            isim: None,
            tc_drop: None,
            tc_bound: None,
            converged_by: String::new(),
            time_ns: 0,
        }
    }
}

fn fmt_count(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

pub fn main_csv_text(records: &[Record]) -> String {
    let mut out = format!("# {CSV_SCHEMA_VERSION}\n{MAIN_HEADER}\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.trial,
            r.step,
            r.method,
            r.target_kind,
            r.target_id,
            fmt_count(r.l),
            fmt_count(r.spmv),
            fmt_opt(r.rel_err),
            fmt_opt(r.isim),
            fmt_opt(r.tc_drop),
            fmt_opt(r.tc_bound),
            r.converged_by,
        ));
    }
    out
}

pub fn timing_csv_text(records: &[Record]) -> String {
    let mut out = format!("# {TIMING_SCHEMA_VERSION}\n{TIMING_HEADER}\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.trial, r.step, r.method, r.time_ns
        ));
    }
    out
}

/// Sidecar path: `results.csv` -> `results.timing.csv`.
pub fn timing_path(main: &Path) -> PathBuf {
    let stem = main
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    main.with_file_name(format!("{stem}.timing.csv"))
}

pub fn write_outputs(main_path: &Path, records: &[Record]) -> std::io::Result<()> {
    let mut f = std::fs::File::create(main_path)?;
    f.write_all(main_csv_text(records).as_bytes())?;
    let mut t = std::fs::File::create(timing_path(main_path))?;
    t.write_all(timing_csv_text(records).as_bytes())?;
    Ok(())
}
