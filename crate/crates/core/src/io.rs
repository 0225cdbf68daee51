//! CSV and JSON artifacts: snapshots (`x,n,p,sigma`), time series,
//! sweep summaries, a snapshot index and metadata documents.
//!
//! Floats are written in shortest round-trip form, so every file reads
//! back bit-exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::experiments::SweepRow;
use crate::solver::{SeriesRow, Snapshot};

pub const SNAPSHOT_HEADER: &str = "x,n,p,sigma";
pub const SERIES_HEADER: &str = "t,dt,mass,mass_bound,max_n,max_p,front,min_dndt";
pub const SWEEP_HEADER: &str = "k,graph_residual,compl_residual,sigma_l2,dist_prev_n,dist_prev_p";
pub const INDEX_HEADER: &str = "index,t,file";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub x: f64,
    pub n: f64,
    pub p: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummaryRow {
    pub k: f64,
    pub graph_residual: f64,
    pub compl_residual: f64,
    pub sigma_l2: f64,
    pub dist_prev_n: Option<f64>,
    pub dist_prev_p: Option<f64>,
}

impl From<&SweepRow> for SweepSummaryRow {
    fn from(r: &SweepRow) -> Self {
        SweepSummaryRow {
            k: r.k,
            graph_residual: r.graph_residual,
            compl_residual: r.compl_residual,
            sigma_l2: r.sigma_l2,
            dist_prev_n: r.dist_prev_n,
            dist_prev_p: r.dist_prev_p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexRow {
    pub index: usize,
    pub t: f64,
    /// Path relative to the index file.
    pub file: String,
}

pub fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()?;
    Ok(rows)
}

pub fn snapshot_rows(snapshot: &Snapshot) -> impl Iterator<Item = SnapshotRow> + '_ {
    snapshot
        .grid
        .centers()
        .iter()
        .enumerate()
        .map(|(i, &x)| SnapshotRow {
            x,
            n: snapshot.n[i],
            p: snapshot.p[i],
            sigma: snapshot.sigma[i],
        })
}

pub fn write_snapshot(path: &Path, snapshot: &Snapshot) -> Result<()> {
    write_rows(path, snapshot_rows(snapshot))
}

pub fn read_snapshot(path: &Path) -> Result<Vec<SnapshotRow>> {
    read_rows(path)
}

pub fn write_series(path: &Path, series: &[SeriesRow]) -> Result<()> {
    write_rows(path, series)
}

pub fn read_series(path: &Path) -> Result<Vec<SeriesRow>> {
    read_rows(path)
}

pub fn write_sweep_summary(path: &Path, rows: &[SweepRow]) -> Result<()> {
    write_rows(path, rows.iter().map(SweepSummaryRow::from))
}

pub fn read_sweep_summary(path: &Path) -> Result<Vec<SweepSummaryRow>> {
    read_rows(path)
}

pub fn write_index(path: &Path, rows: &[IndexRow]) -> Result<()> {
    write_rows(path, rows)
}

pub fn read_index(path: &Path) -> Result<Vec<IndexRow>> {
    read_rows(path)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}
