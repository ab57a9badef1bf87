//! Execution of the (problem, variant, run) grid.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use anyhow::{anyhow, Context};
use epimoead::epigenetics::BlockingVariant;
use epimoead::metrics::IgdTrace;
use epimoead::problems::Problem;
use epimoead::run::run_dynamic;
use rayon::prelude::*;

use crate::config::{run_seed, ExperimentConfig};
use crate::persist::{self, CellEntry, Manifest, RunMeta};
use crate::HarnessError;

/// One finished run, the unit every statistic is computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub fingerprint: String,
    pub problem: String,
    pub variant: BlockingVariant,
    pub run: u64,
    pub seed: u64,
    pub trace: IgdTrace,
    pub wall_time_secs: f64,
    /// Loaded from a previous invocation instead of being recomputed.
    pub resumed: bool,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub problem: Problem,
    pub variant: BlockingVariant,
    pub run: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses every available core.
    pub jobs: Option<usize>,
    /// Report each finished cell on stderr.
    pub progress: bool,
}

/// Cells in problem, variant, run order.
pub fn plan_cells(config: &ExperimentConfig) -> Result<Vec<Cell>, HarnessError> {
    let problems = config.problem_instances()?;
    let mut cells = Vec::new();
    for problem in &problems {
        for &variant in &config.variants {
            for run in 0..config.runs {
                cells.push(Cell {
                    problem: problem.clone(),
                    variant,
                    run,
                    seed: run_seed(
                        config.base_seed,
                        problem.name(),
                        variant,
                        run,
                        config.common_seeds,
                    ),
                });
            }
        }
    }
    Ok(cells)
}

fn manifest(config: &ExperimentConfig, cells: &[Cell]) -> Manifest {
    let mut config = config.clone();
    config.output = None;
    Manifest {
        fingerprint: config.fingerprint(),
        pairing: "interval-mean".into(),
        cells: cells
            .iter()
            .map(|c| CellEntry {
                problem: c.problem.name().to_string(),
                variant: c.variant,
                run: c.run,
                seed: c.seed,
                trace: persist::trace_path(c.problem.name(), c.variant, c.run),
            })
            .collect(),
        config,
    }
}

fn load_finished(out: &Path, cell: &Cell, fingerprint: &str) -> Option<RunRecord> {
    let rel = persist::trace_path(cell.problem.name(), cell.variant, cell.run);
    let meta: RunMeta = persist::read_json(&out.join(persist::meta_path(&rel))).ok()?;
    if meta.fingerprint != fingerprint || meta.seed != cell.seed {
        return None;
    }
    let trace = persist::read_trace_csv(
        &out.join(&rel),
        cell.problem.name(),
        cell.variant.label(),
        cell.seed,
    )
    .ok()?;
    if trace.points.len() as u64 != meta.generations {
        return None;
    }
    Some(RunRecord {
        fingerprint: meta.fingerprint,
        problem: meta.problem,
        variant: meta.variant,
        run: meta.run,
        seed: meta.seed,
        trace,
        wall_time_secs: meta.wall_time_secs,
        resumed: true,
    })
}

fn execute(
    config: &ExperimentConfig,
    out: &Path,
    cell: &Cell,
    fingerprint: &str,
) -> anyhow::Result<RunRecord> {
    if let Some(done) = load_finished(out, cell, fingerprint) {
        return Ok(done);
    }
    let started = Instant::now();
    let outcome = run_dynamic(&cell.problem, &config.run_settings(cell.variant), cell.seed)
        .with_context(|| {
            format!(
                "{} / {} / run {}",
                cell.problem.name(),
                cell.variant,
                cell.run
            )
        })?;
    let wall_time_secs = started.elapsed().as_secs_f64();

    let rel = persist::trace_path(cell.problem.name(), cell.variant, cell.run);
    // CSV first: a metadata file is only ever present next to a complete trace.
    persist::write_atomic(&out.join(&rel), &persist::trace_csv(&outcome.trace)?)?;
    let meta = RunMeta {
        fingerprint: fingerprint.to_string(),
        problem: cell.problem.name().to_string(),
        variant: cell.variant,
        run: cell.run,
        seed: cell.seed,
        generations: outcome.trace.points.len() as u64,
        evals: outcome.evals,
        blocked_offspring: outcome.blocked_offspring,
        wall_time_secs,
    };
    persist::write_json(&out.join(persist::meta_path(&rel)), &meta)?;
    Ok(RunRecord {
        fingerprint: meta.fingerprint,
        problem: meta.problem,
        variant: meta.variant,
        run: meta.run,
        seed: meta.seed,
        trace: outcome.trace,
        wall_time_secs,
        resumed: false,
    })
}

/// Runs (or resumes) every cell of `config`, persisting into `out`.
///
/// Cells whose trace and metadata already exist under the same configuration
/// fingerprint and seed are loaded instead of recomputed. Records are
/// returned in [`plan_cells`] order regardless of scheduling.
pub fn run_experiment(
    config: &ExperimentConfig,
    out: &Path,
    options: &RunOptions,
) -> Result<Vec<RunRecord>, HarnessError> {
    config.validate()?;
    let cells = plan_cells(config)?;
    let manifest = manifest(config, &cells);
    std::fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    persist::write_json(&out.join(persist::MANIFEST), &manifest)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.unwrap_or(0))
        .build()
        .map_err(|e| anyhow!("building worker pool: {e}"))?;
    let done = AtomicUsize::new(0);
    let total = cells.len();
    let fingerprint = &manifest.fingerprint;
    let records = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let record = execute(config, out, cell, fingerprint);
                if options.progress {
                    let k = done.fetch_add(1, Ordering::Relaxed) + 1;
                    let state = match &record {
                        Ok(r) if r.resumed => "resumed",
                        Ok(_) => "done",
                        Err(_) => "failed",
                    };
                    eprintln!(
                        "[{k}/{total}] {} {} run {} {state}",
                        cell.problem.name(),
                        cell.variant,
                        cell.run
                    );
                }
                record
            })
            .collect::<anyhow::Result<Vec<_>>>()
    })?;
    Ok(records)
}

/// Reads the manifest and every persisted run of an experiment directory.
pub fn load_experiment(dir: &Path) -> Result<(Manifest, Vec<RunRecord>), HarnessError> {
    let manifest: Manifest = persist::read_json(&dir.join(persist::MANIFEST))?;
    let mut records = Vec::with_capacity(manifest.cells.len());
    for cell in &manifest.cells {
        let csv: PathBuf = dir.join(&cell.trace);
        let meta: RunMeta = persist::read_json(&dir.join(persist::meta_path(&cell.trace)))
            .with_context(|| {
                format!(
                    "run {} of {} / {} is missing",
                    cell.run, cell.problem, cell.variant
                )
            })?;
        let trace = persist::read_trace_csv(&csv, &cell.problem, cell.variant.label(), cell.seed)?;
        records.push(RunRecord {
            fingerprint: meta.fingerprint,
            problem: cell.problem.clone(),
            variant: cell.variant,
            run: cell.run,
            seed: cell.seed,
            trace,
            wall_time_secs: meta.wall_time_secs,
            resumed: true,
        });
    }
    Ok((manifest, records))
}
