use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use epimoead::problems::suite_catalog;
use epimoead_harness::config::{ExperimentConfig, Preset};
use epimoead_harness::plan::ProtocolPlan;
use epimoead_harness::report::{render_interval_grid, write_reports};
use epimoead_harness::runner::{load_experiment, run_experiment, RunOptions};
use epimoead_harness::HarnessError;

#[derive(Parser)]
#[command(
    name = "epimoead",
    version,
    about = "Dynamic MOEA/D-DE experiments with epigenetic blocking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run (or resume) an experiment and write its report.
    Run {
        /// TOML file whose keys override the preset.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Preset::Paper)]
        preset: Preset,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory (overrides `output` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the protocol accounting and exit without running.
        #[arg(long)]
        dry_run: bool,
        /// Share run seeds across variants.
        #[arg(long)]
        common_seeds: bool,
    },
    /// Summarise a finished experiment directory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also print the interval grid of this problem.
        #[arg(long)]
        problem: Option<String>,
    },
    /// List the benchmark catalog.
    ListProblems,
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run {
            config,
            preset,
            jobs,
            out,
            dry_run,
            common_seeds,
        } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::load(&path, preset)?,
                None => ExperimentConfig::preset(preset),
            };
            if common_seeds {
                cfg.common_seeds = true;
            }
            if let Some(out) = out {
                cfg.output = Some(out);
            }
            if dry_run {
                print!("{}", ProtocolPlan::from_config(&cfg)?.render());
                return Ok(());
            }
            if jobs == Some(0) {
                return Err(HarnessError::Config("--jobs must be >= 1".into()));
            }
            let dir = cfg
                .output
                .clone()
                .unwrap_or_else(|| PathBuf::from("results"));
            let options = RunOptions {
                jobs,
                progress: true,
            };
            let records = run_experiment(&cfg, &dir, &options)?;
            if cfg.variants.contains(&epimoead::BlockingVariant::Off) && cfg.variants.len() > 1 {
                let summary = write_reports(&dir, &records, cfg.interval)?;
                print!("{}", summary.to_table());
            }
            eprintln!("results in {}", dir.display());
            Ok(())
        }
        Command::Report { input, problem } => {
            let (manifest, mut records) = load_experiment(&input)?;
            let summary = write_reports(&input, &records, manifest.config.interval)?;
            print!("{}", summary.to_table());
            if let Some(name) = problem {
                records.retain(|r| r.problem.eq_ignore_ascii_case(&name));
                if records.is_empty() {
                    return Err(HarnessError::Report(format!("no runs for `{name}`")));
                }
                let canonical = records[0].problem.clone();
                for &variant in &summary.variants {
                    let grid = render_interval_grid(
                        &records,
                        &canonical,
                        variant,
                        manifest.config.interval,
                    )?;
                    let cells: Vec<String> =
                        grid.iter().map(|c| format!("{:.1}", c.pct_diff)).collect();
                    let positive = grid.iter().filter(|c| c.pct_diff > 0.0).count();
                    println!(
                        "\n{canonical} {variant}: {positive}/{} intervals better than baseline",
                        grid.len()
                    );
                    println!("{}", cells.join(" "));
                }
            }
            Ok(())
        }
        Command::ListProblems => {
            println!("{:<6} {:<4} {:>4}  bounds", "name", "cat", "D");
            for p in suite_catalog() {
                let b = p.bounds();
                println!(
                    "{:<6} {:<4} {:>4}  x1 in [{}, {}], rest in [{}, {}]",
                    p.name(),
                    p.category().to_string(),
                    p.dimension(),
                    b[0].0,
                    b[0].1,
                    b[1].0,
                    b[1].1
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
