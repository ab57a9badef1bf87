//! On-disk layout of an experiment directory.
//!
//! ```text
//! manifest.json                          config, fingerprint, seeds
//! runs/<problem>/<variant>/run_NNN.csv   generation,t,igd
//! runs/<problem>/<variant>/run_NNN.json  run metadata incl. wall time
//! summary.csv, grid.csv                  written by the report step
//! ```
//!
//! Every file is written to a sibling temporary path and renamed into place,
//! so a crash never leaves a truncated file under its final name.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use epimoead::epigenetics::BlockingVariant;
use epimoead::metrics::{IgdTrace, TracePoint};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const MANIFEST: &str = "manifest.json";
pub const SUMMARY: &str = "summary.csv";
pub const GRID: &str = "grid.csv";

/// Metadata stored next to each trace CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub fingerprint: String,
    pub problem: String,
    pub variant: BlockingVariant,
    pub run: u64,
    pub seed: u64,
    pub generations: u64,
    pub evals: u64,
    pub blocked_offspring: u64,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellEntry {
    pub problem: String,
    pub variant: BlockingVariant,
    pub run: u64,
    pub seed: u64,
    /// Trace CSV, relative to the experiment directory.
    pub trace: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub fingerprint: String,
    /// What the Wilcoxon test pairs: per-interval mean IGD of baseline and variant.
    pub pairing: String,
    pub config: ExperimentConfig,
    pub cells: Vec<CellEntry>,
}

pub fn trace_path(problem: &str, variant: BlockingVariant, run: u64) -> PathBuf {
    PathBuf::from("runs")
        .join(problem)
        .join(variant.label())
        .join(format!("run_{run:03}.csv"))
}

pub fn meta_path(trace: &Path) -> PathBuf {
    trace.with_extension("json")
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize, Deserialize)]
struct Row {
    generation: u64,
    t: f64,
    igd: f64,
}

pub fn trace_csv(trace: &IgdTrace) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in &trace.points {
        w.serialize(Row {
            generation: p.generation,
            t: p.time,
            igd: p.igd,
        })?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn read_trace_csv(path: &Path, problem: &str, algorithm: &str, seed: u64) -> Result<IgdTrace> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let points = r
        .deserialize::<Row>()
        .map(|row| {
            row.map(|row| TracePoint {
                generation: row.generation,
                time: row.t,
                igd: row.igd,
            })
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(IgdTrace {
        problem: problem.to_string(),
        algorithm: algorithm.to_string(),
        run_seed: seed,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let trace = IgdTrace {
            problem: "fda1".into(),
            algorithm: "e".into(),
            run_seed: 7,
            points: vec![
                TracePoint {
                    generation: 0,
                    time: 0.0,
                    igd: 0.1 + 0.2,
                },
                TracePoint {
                    generation: 1,
                    time: 0.1,
                    igd: 1e-300,
                },
                TracePoint {
                    generation: 2,
                    time: 0.9,
                    igd: 123456.789,
                },
            ],
        };
        let path = dir.path().join("runs/a/b.csv");
        write_atomic(&path, &trace_csv(&trace).unwrap()).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("generation,t,igd\n"));
        assert_eq!(read_trace_csv(&path, "fda1", "e", 7).unwrap(), trace);
        assert!(!dir.path().join("runs/a/b.csv.partial").exists());
    }

    #[test]
    fn layout() {
        let p = trace_path("jy5", BlockingVariant::Eip, 4);
        assert_eq!(p, PathBuf::from("runs/jy5/eip/run_004.csv"));
        assert_eq!(meta_path(&p), PathBuf::from("runs/jy5/eip/run_004.json"));
    }
}
