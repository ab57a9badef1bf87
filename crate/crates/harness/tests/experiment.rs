use std::fs;
use std::path::Path;
use std::process::Command;

use epimoead::epigenetics::BlockingVariant;
use epimoead::metrics::{IgdTrace, TracePoint};
use epimoead_harness::config::{ExperimentConfig, Preset};
use epimoead_harness::persist;
use epimoead_harness::report::{render_interval_grid, render_summary};
use epimoead_harness::runner::{load_experiment, run_experiment, RunOptions, RunRecord};
use epimoead_harness::HarnessError;

fn tiny() -> ExperimentConfig {
    ExperimentConfig::from_toml_str(
        r#"
problems = ["fda1"]
variants = ["baseline", "eip"]
runs = 3
population = 20
neighborhood = 5
dimension = 5
generations = 30
reference_points = 100
"#,
        Preset::Desk,
    )
    .unwrap()
}

fn quiet(jobs: usize) -> RunOptions {
    RunOptions {
        jobs: Some(jobs),
        progress: false,
    }
}

fn csv_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    for v in ["baseline", "eip"] {
        for r in 0..3 {
            let rel = format!("runs/fda1/{v}/run_{r:03}.csv");
            out.push((rel.clone(), fs::read(dir.join(&rel)).unwrap()));
        }
    }
    out
}

#[test]
fn cartesian_cells_and_reproducible_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let records = run_experiment(&tiny(), a.path(), &quiet(1)).unwrap();
    assert_eq!(records.len(), 6);
    assert!(records
        .iter()
        .all(|r| r.trace.points.len() == 30 && !r.resumed));
    // Different worker counts, same bytes.
    run_experiment(&tiny(), b.path(), &quiet(4)).unwrap();
    assert_eq!(csv_bytes(a.path()), csv_bytes(b.path()));
    assert_eq!(
        fs::read(a.path().join(persist::MANIFEST)).unwrap(),
        fs::read(b.path().join(persist::MANIFEST)).unwrap()
    );
}

#[test]
fn resume_skips_finished_cells() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_experiment(&tiny(), dir.path(), &quiet(2)).unwrap();

    fs::remove_file(dir.path().join("runs/fda1/eip/run_001.json")).unwrap();
    let second = run_experiment(&tiny(), dir.path(), &quiet(2)).unwrap();
    let recomputed: Vec<_> = second.iter().filter(|r| !r.resumed).collect();
    assert_eq!(recomputed.len(), 1);
    assert_eq!(
        (recomputed[0].variant, recomputed[0].run),
        (BlockingVariant::Eip, 1)
    );
    for (x, y) in first.iter().zip(&second) {
        assert_eq!(x.trace, y.trace);
    }

    // A different configuration invalidates everything.
    let changed = ExperimentConfig {
        reinit_fraction: 0.5,
        ..tiny()
    };
    let third = run_experiment(&changed, dir.path(), &quiet(2)).unwrap();
    assert!(third.iter().all(|r| !r.resumed));

    // More runs reuse the finished ones.
    let wider = ExperimentConfig { runs: 4, ..changed };
    let fourth = run_experiment(&wider, dir.path(), &quiet(2)).unwrap();
    assert_eq!(fourth.iter().filter(|r| !r.resumed).count(), 2);

    let (manifest, loaded) = load_experiment(dir.path()).unwrap();
    assert_eq!(manifest.cells.len(), 8);
    assert_eq!(loaded.len(), 8);
}

#[test]
fn common_seeds_pair_variants() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        common_seeds: true,
        ..tiny()
    };
    let records = run_experiment(&cfg, dir.path(), &quiet(2)).unwrap();
    assert_eq!(records[0].seed, records[3].seed);
    let own = run_experiment(&tiny(), tempfile::tempdir().unwrap().path(), &quiet(2)).unwrap();
    assert_ne!(own[0].seed, own[3].seed);
}

fn record(problem: &str, variant: BlockingVariant, run: u64, values: &[f64]) -> RunRecord {
    RunRecord {
        fingerprint: String::new(),
        problem: problem.into(),
        variant,
        run,
        seed: run,
        trace: IgdTrace {
            problem: problem.into(),
            algorithm: variant.label().into(),
            run_seed: run,
            points: values
                .iter()
                .enumerate()
                .map(|(g, &igd)| TracePoint {
                    generation: g as u64,
                    time: 0.0,
                    igd,
                })
                .collect(),
        },
        wall_time_secs: 0.0,
        resumed: false,
    }
}

#[test]
fn summary_examples() {
    let base: Vec<f64> = (0..200).map(|g| 0.5 + 0.001 * g as f64).collect();
    let half: Vec<f64> = base.iter().map(|v| v / 2.0).collect();
    let records = vec![
        record("jy1", BlockingVariant::Off, 0, &base),
        record("jy1", BlockingVariant::E, 0, &base),
        record("jy1", BlockingVariant::Eip, 0, &half),
    ];
    let summary = render_summary(&records, 2).unwrap();
    let same = summary
        .rows
        .iter()
        .find(|r| r.variant == BlockingVariant::E)
        .unwrap();
    assert_eq!(same.total_pct_diff, 0.0);
    assert!(same.wilcoxon.is_none());
    let better = summary
        .rows
        .iter()
        .find(|r| r.variant == BlockingVariant::Eip)
        .unwrap();
    assert!((better.total_pct_diff - 5000.0).abs() < 1e-9);
    assert_eq!(better.intervals, 100);
    // Exact two-sided p for 100 same-signed differences is 2 / 2^100.
    assert!(better.p_value().unwrap() < 0.001);
    assert_eq!(better.positive_fraction, 1.0);

    let eip = summary
        .tally
        .iter()
        .find(|t| t.variant == BlockingVariant::Eip)
        .unwrap();
    assert_eq!(
        (eip.positive, eip.significant_positive, eip.best),
        (1, 1, 1)
    );
    assert!(summary.to_table().contains("5000.00 (<0.001)"));

    let grid = render_interval_grid(&records, "jy1", BlockingVariant::E, 2).unwrap();
    assert_eq!(grid.len(), 100);
    assert!(grid.iter().all(|c| c.pct_diff == 0.0));
}

#[test]
fn missing_baseline_is_a_report_error() {
    let records = vec![record("fda1", BlockingVariant::E, 0, &[0.1, 0.2])];
    assert!(matches!(
        render_summary(&records, 2),
        Err(HarnessError::Report(_))
    ));
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_epimoead"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "populaton = 10\n").unwrap();
    let (code, _, err) = cli(&["run", "--config", bad.to_str().unwrap(), "--dry-run"]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("populaton"));

    let (code, _, _) = cli(&[
        "report",
        "--in",
        dir.path().join("nothing").to_str().unwrap(),
    ]);
    assert_eq!(code, 2);

    let (code, out, _) = cli(&["list-problems"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 17);

    // Output path below a regular file cannot be created.
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let good = dir.path().join("good.toml");
    fs::write(&good, "problems = [\"fda1\"]\nruns = 1\ngenerations = 2\n").unwrap();
    let (code, _, _) = cli(&[
        "run",
        "--config",
        good.to_str().unwrap(),
        "--preset",
        "desk",
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn cli_run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "problems = [\"jy2\"]\nvariants = [\"baseline\", \"e\"]\nruns = 2\ngenerations = 20\npopulation = 20\nneighborhood = 5\nreference_points = 100\n",
    )
    .unwrap();
    let out = dir.path().join("res");
    let (code, table, err) = cli(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--preset",
        "desk",
        "--jobs",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(table.starts_with("problem"));
    assert!(out.join(persist::SUMMARY).exists());
    let grid = fs::read_to_string(out.join(persist::GRID)).unwrap();
    assert_eq!(grid.lines().count(), 1 + 10);

    let (code, text, _) = cli(&["report", "--in", out.to_str().unwrap(), "--problem", "JY2"]);
    assert_eq!(code, 0);
    assert!(text.contains("jy2 e:"));
}
