//! Protocol accounting for `run --dry-run`.

use std::fmt::Write as _;

use epimoead::run::RunSettings;
use epimoead::BlockingVariant;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolPlan {
    pub generations: u64,
    pub cycle_length: u64,
    pub cycles: u64,
    pub tau_t: u64,
    /// Problem time seen by the benchmarks in each generation.
    pub times: Vec<f64>,
    /// Distinct values of `times`, ascending.
    pub distinct_times: Vec<f64>,
    pub change_events: u64,
    pub interval: usize,
    pub intervals: usize,
    pub evals_per_run: u64,
    pub problems: Vec<(String, usize)>,
    pub variants: Vec<BlockingVariant>,
    pub runs: u64,
    pub total_runs: u64,
}

impl ProtocolPlan {
    pub fn from_config(config: &ExperimentConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let settings: RunSettings = config.run_settings(BlockingVariant::Off);
        let tm = settings.time;
        let generations = settings.generations;
        let times: Vec<f64> = (0..generations).map(|g| tm.problem_time(g)).collect();
        let mut distinct_times = times.clone();
        distinct_times.sort_by(f64::total_cmp);
        distinct_times.dedup();
        let plan = settings.budget();
        let problems: Vec<(String, usize)> = config
            .problem_instances()?
            .iter()
            .map(|p| (p.name().to_string(), p.dimension()))
            .collect();
        let total_runs = problems.len() as u64 * config.variants.len() as u64 * config.runs;
        Ok(Self {
            generations,
            cycle_length: config.cycle_length,
            cycles: generations.div_ceil(config.cycle_length),
            tau_t: tm.tau_t,
            times,
            distinct_times,
            change_events: plan.change_events(),
            interval: config.interval,
            intervals: (generations as usize).div_ceil(config.interval),
            evals_per_run: plan.total(),
            problems,
            variants: config.variants.clone(),
            runs: config.runs,
            total_runs,
        })
    }

    pub fn render(&self) -> String {
        let join = |v: &[f64]| {
            v.iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = String::new();
        let _ = writeln!(
            s,
            "generations per run:  {} ({} cycles of {})",
            self.generations, self.cycles, self.cycle_length
        );
        let _ = writeln!(
            s,
            "distinct times:       {} [{}]",
            self.distinct_times.len(),
            join(&self.distinct_times)
        );
        let _ = writeln!(s, "change events:        {}", self.change_events);
        let _ = writeln!(
            s,
            "comparison intervals: {} ({} generations each)",
            self.intervals, self.interval
        );
        let _ = writeln!(s, "evaluations per run:  {}", self.evals_per_run);
        let _ = writeln!(
            s,
            "runs:                 {} ({} problems x {} variants x {} runs)",
            self.total_runs,
            self.problems.len(),
            self.variants.len(),
            self.runs
        );
        let names: Vec<String> = self
            .problems
            .iter()
            .map(|(n, d)| format!("{n}(D={d})"))
            .collect();
        let _ = writeln!(s, "problems:             {}", names.join(" "));
        let labels: Vec<&str> = self.variants.iter().map(|v| v.label()).collect();
        let _ = writeln!(s, "variants:             {}", labels.join(" "));
        // One entry per time step, i.e. every tau_t generations.
        for c in 0..self.cycles {
            let start = (c * self.cycle_length) as usize;
            let end = ((c + 1) * self.cycle_length).min(self.generations) as usize;
            let steps: Vec<f64> = self.times[start..end]
                .iter()
                .step_by(self.tau_t as usize)
                .copied()
                .collect();
            let _ = writeln!(s, "cycle {} t by step:    {}", c + 1, join(&steps));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;

    #[test]
    fn paper_protocol() {
        let plan = ProtocolPlan::from_config(&ExperimentConfig::preset(Preset::Paper)).unwrap();
        assert_eq!(plan.generations, 200);
        assert_eq!(plan.cycles, 2);
        assert_eq!(plan.intervals, 100);
        assert_eq!(plan.total_runs, 1280);
        let expected: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).collect();
        assert_eq!(plan.distinct_times, expected);
        assert!(plan
            .render()
            .contains("distinct times:       10 [0 0.1 0.2 0.3 0.4 0.5 0.6 0.7 0.8 0.9]"));
    }
}
