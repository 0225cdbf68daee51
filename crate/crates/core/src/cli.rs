//! Command implementations behind the `tumor-hs` binary. Each command
//! runs from a parsed [`ConfigFile`] and writes its artifacts below an
//! output directory:
//!
//! ```text
//! <out>/series.csv          t,dt,mass,mass_bound,max_n,max_p,front,min_dndt
//! <out>/snapshots.csv       index,t,file
//! <out>/snapshots/*.csv     x,n,p,sigma
//! <out>/metadata.json       resolved config, version, wall time, diagnostics
//! ```
//!
//! `sweep` and `compare` write one such directory per member plus a
//! summary table; `wave` adds `wave.json`; `check` writes `report.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{ConfigFile, Format};
use crate::diagnostics::{lemma_bounds_report_with, DiagnosticsReport};
use crate::error::{Error, Result};
use crate::experiments::{k_sweep, nu_compare, wave_study, SweepRow, WaveStudy};
use crate::io::{
    write_index, write_json, write_rows, write_series, write_snapshot, write_sweep_summary,
    IndexRow,
};
use crate::solver::{run, AdmissibilityReport, RunResult};

/// Environment variable holding the default output root.
pub const OUT_ENV: &str = "TUMOR_HS_OUT";
pub const DEFAULT_OUT_ROOT: &str = "out";

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub version: String,
    pub wall_time_secs: f64,
    pub config: ConfigFile,
    pub diagnostics: DiagnosticsReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub monotone_admissible: bool,
    pub bounds_pass: bool,
    pub admissibility: AdmissibilityReport,
    pub diagnostics: DiagnosticsReport,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.monotone_admissible && self.bounds_pass
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareRow {
    pub nu: f64,
    pub front: f64,
    pub speed: Option<f64>,
    pub stderr: Option<f64>,
}

/// Output directory: `--out`, else `output.directory`, else
/// `$TUMOR_HS_OUT/<config stem>` (default root `out`).
pub fn resolve_out_dir(cli_out: Option<&Path>, config: &ConfigFile, config_path: &Path) -> PathBuf {
    if let Some(out) = cli_out {
        return out.to_path_buf();
    }
    if let Some(dir) = &config.output.directory {
        return dir.clone();
    }
    let root =
        std::env::var_os(OUT_ENV).map_or_else(|| PathBuf::from(DEFAULT_OUT_ROOT), PathBuf::from);
    let stem = config_path
        .file_stem()
        .map_or_else(|| "run".into(), |s| s.to_os_string());
    root.join(stem)
}

/// Writes the per-run artifacts of `result` into `dir`.
pub fn write_run(
    dir: &Path,
    command: &str,
    config: &ConfigFile,
    result: &RunResult,
    report: &DiagnosticsReport,
    wall_time_secs: f64,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    if config.output.wants(Format::Csv) {
        let snap_dir = dir.join("snapshots");
        fs::create_dir_all(&snap_dir)?;
        let mut index = Vec::with_capacity(result.snapshots.len());
        for (i, snap) in result.snapshots.iter().enumerate() {
            let file = format!("snapshots/snapshot_{i:04}.csv");
            write_snapshot(&dir.join(&file), snap)?;
            index.push(IndexRow {
                index: i,
                t: snap.t,
                file,
            });
        }
        write_index(&dir.join("snapshots.csv"), &index)?;
        write_series(&dir.join("series.csv"), &result.series)?;
    }
    if config.output.wants(Format::Json) {
        let meta = Metadata {
            command: command.to_string(),
            version: VERSION.to_string(),
            wall_time_secs,
            config: config.clone(),
            diagnostics: report.clone(),
        };
        write_json(&dir.join("metadata.json"), &meta)?;
    }
    Ok(())
}

fn run_and_report(config: &ConfigFile) -> Result<(RunResult, DiagnosticsReport, f64)> {
    let run_config = config.to_run_config()?;
    let started = Instant::now();
    let result = run(&run_config)?;
    let wall = started.elapsed().as_secs_f64();
    let report =
        lemma_bounds_report_with(&result, &run_config.params, &config.diagnostics_options());
    Ok((result, report, wall))
}

pub fn cmd_run(config: &ConfigFile, out: &Path) -> Result<DiagnosticsReport> {
    let (result, report, wall) = run_and_report(config)?;
    write_run(out, "run", config, &result, &report, wall)?;
    Ok(report)
}

pub fn cmd_check(config: &ConfigFile, out: &Path) -> Result<CheckReport> {
    let (result, report, wall) = run_and_report(config)?;
    write_run(out, "check", config, &result, &report, wall)?;
    let check = CheckReport {
        monotone_admissible: result.initial_admissibility.admissible,
        bounds_pass: report.bounds_pass(),
        admissibility: result.initial_admissibility,
        diagnostics: report,
    };
    write_json(&out.join("report.json"), &check)?;
    Ok(check)
}

pub fn cmd_wave(config: &ConfigFile, out: &Path) -> Result<WaveStudy> {
    let run_config = config.to_run_config()?;
    if run_config.grid.geometry != crate::grid::Geometry::Line {
        return Err(Error::Config {
            path: "grid.geometry".into(),
            message: "the wave study needs a line grid".into(),
        });
    }
    let started = Instant::now();
    let result = run(&run_config)?;
    let wall = started.elapsed().as_secs_f64();
    let report =
        lemma_bounds_report_with(&result, &run_config.params, &config.diagnostics_options());
    write_run(out, "wave", config, &result, &report, wall)?;
    let study = wave_study(&run_config, &result)?;
    write_json(&out.join("wave.json"), &study)?;
    Ok(study)
}

fn member_dir(out: &Path, prefix: &str, value: f64, seen: &mut Vec<String>) -> PathBuf {
    let mut name = format!("{prefix}_{value}");
    if seen.contains(&name) {
        name = format!("{name}_{}", seen.len());
    }
    seen.push(name.clone());
    out.join(name)
}

pub fn cmd_sweep(config: &ConfigFile, ks: &[f64], out: &Path) -> Result<Vec<SweepRow>> {
    let base = config.to_run_config()?;
    let sweep = k_sweep(&base, ks)?;
    fs::create_dir_all(out)?;
    let mut seen = Vec::new();
    for (row, result) in sweep.rows.iter().zip(&sweep.runs) {
        let mut member = config.clone();
        member.model.k = row.k;
        let params = base.params.with_k(row.k)?;
        let report = lemma_bounds_report_with(result, &params, &member.diagnostics_options());
        let dir = member_dir(out, "k", row.k, &mut seen);
        write_run(&dir, "sweep", &member, result, &report, row.runtime_secs)?;
    }
    write_sweep_summary(&out.join("sweep_summary.csv"), &sweep.rows)?;
    if config.output.wants(Format::Json) {
        write_json(&out.join("sweep.json"), &sweep.rows)?;
    }
    Ok(sweep.rows)
}

pub fn cmd_compare(config: &ConfigFile, nus: &[f64], out: &Path) -> Result<Vec<CompareRow>> {
    let base = config.to_run_config()?;
    let started = Instant::now();
    let rows = nu_compare(&base, nus)?;
    let wall = started.elapsed().as_secs_f64() / rows.len() as f64;
    fs::create_dir_all(out)?;
    let mut seen = Vec::new();
    let mut table = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut member = config.clone();
        member.model.nu = row.nu;
        let params = base.params.with_nu(row.nu)?;
        let report = lemma_bounds_report_with(&row.result, &params, &member.diagnostics_options());
        let dir = member_dir(out, "nu", row.nu, &mut seen);
        write_run(&dir, "compare", &member, &row.result, &report, wall)?;
        write_snapshot(&dir.join("final.csv"), &row.final_profile)?;
        table.push(CompareRow {
            nu: row.nu,
            front: row.front,
            speed: row.speed.map(|s| s.speed),
            stderr: row.speed.map(|s| s.stderr),
        });
    }
    write_rows(&out.join("compare.csv"), &table)?;
    Ok(table)
}

/// Machine-readable error payload printed on failure.
pub fn error_json(error: &Error) -> serde_json::Value {
    let mut body = serde_json::json!({
        "kind": error.kind(),
        "message": error.to_string(),
    });
    if let Error::Config { path, .. } = error {
        body["path"] = serde_json::Value::String(path.clone());
    }
    serde_json::json!({ "error": body })
}
