//! Experiment configuration: a flat TOML document layered over a preset.

use std::path::{Path, PathBuf};

use epimoead::epigenetics::{BlockingPolicy, BlockingVariant, ScheduleSpan};
use epimoead::moead::DEParams;
use epimoead::problems::{Problem, ProblemKind, TimeModel};
use epimoead::run::RunSettings;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::HarnessError;

/// Named starting points for a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Preset {
    /// Population 500, 20 runs, default dimensions.
    #[default]
    Paper,
    /// Population 100, 10 variables, 10 runs.
    Desk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub problems: Vec<String>,
    pub variants: Vec<BlockingVariant>,
    pub population: usize,
    /// Decision variables; `None` keeps each problem's default.
    pub dimension: Option<usize>,
    pub cycles: u64,
    pub cycle_length: u64,
    /// Overrides `cycles * cycle_length` when set.
    pub generations: Option<u64>,
    pub tau_t: u64,
    pub n_t: u64,
    pub runs: u64,
    pub base_seed: u64,
    /// Generations per comparison interval.
    pub interval: usize,
    pub reinit_fraction: f64,
    pub reference_points: usize,
    pub common_seeds: bool,

    pub f: f64,
    pub cr: f64,
    pub pm: Option<f64>,
    pub eta_m: f64,
    pub delta: f64,
    pub nr: usize,
    pub neighborhood: usize,

    pub block_probability: f64,
    pub block_size: usize,
    pub max_probability: f64,
    pub probability_quantum: f64,
    pub schedule_span: ScheduleSpan,
    pub block_shields_mutation: bool,

    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let de = DEParams::default();
        let block = BlockingPolicy::new(BlockingVariant::E);
        let time = TimeModel::default();
        Self {
            problems: ProblemKind::ALL
                .iter()
                .map(|k| k.name().to_string())
                .collect(),
            variants: BlockingVariant::ALL.to_vec(),
            population: 500,
            dimension: None,
            cycles: 2,
            cycle_length: 100,
            generations: None,
            tau_t: time.tau_t,
            n_t: time.n_t,
            runs: 20,
            base_seed: 1,
            interval: 2,
            reinit_fraction: 0.2,
            reference_points: 1000,
            common_seeds: false,
            f: de.f,
            cr: de.cr,
            pm: de.pm,
            eta_m: de.eta_m,
            delta: de.delta,
            nr: de.nr,
            neighborhood: de.neighborhood,
            block_probability: block.base_probability,
            block_size: block.base_block_size,
            max_probability: block.max_probability,
            probability_quantum: block.probability_quantum,
            schedule_span: ScheduleSpan::Run,
            block_shields_mutation: false,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Paper => Self::default(),
            Preset::Desk => Self {
                population: 100,
                dimension: Some(10),
                runs: 10,
                ..Self::default()
            },
        }
    }

    /// Overlays the keys of a TOML document on `preset`. Unknown keys and
    /// ill-typed values are configuration errors.
    pub fn from_toml_str(text: &str, preset: Preset) -> Result<Self, HarnessError> {
        let overrides: toml::Table =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        let base = toml::Table::try_from(Self::preset(preset))
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        let mut merged = base;
        merged.extend(overrides);
        let config: Self = merged
            .try_into()
            .map_err(|e: toml::de::Error| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path, preset: Preset) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            HarnessError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text, preset)
    }

    pub fn total_generations(&self) -> u64 {
        self.generations.unwrap_or(self.cycles * self.cycle_length)
    }

    pub fn problem_instances(&self) -> Result<Vec<Problem>, HarnessError> {
        self.problems
            .iter()
            .map(|name| Problem::from_name(name, self.dimension).map_err(HarnessError::config))
            .collect()
    }

    pub fn time_model(&self) -> TimeModel {
        TimeModel {
            tau_t: self.tau_t,
            n_t: self.n_t,
        }
    }

    pub fn de_params(&self) -> DEParams {
        DEParams {
            f: self.f,
            cr: self.cr,
            pm: self.pm,
            eta_m: self.eta_m,
            delta: self.delta,
            nr: self.nr,
            neighborhood: self.neighborhood,
        }
    }

    pub fn policy(&self, variant: BlockingVariant) -> BlockingPolicy {
        BlockingPolicy {
            variant,
            base_probability: self.block_probability,
            base_block_size: self.block_size,
            max_probability: self.max_probability,
            probability_quantum: self.probability_quantum,
        }
    }

    pub fn run_settings(&self, variant: BlockingVariant) -> RunSettings {
        RunSettings {
            population: self.population,
            generations: self.total_generations(),
            cycle_length: self.cycle_length,
            time: self.time_model(),
            de: self.de_params(),
            policy: self.policy(variant),
            schedule_span: self.schedule_span,
            shield_mutation: self.block_shields_mutation,
            reinit_fraction: self.reinit_fraction,
            reference_points: self.reference_points,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.problems.is_empty() {
            return bad("no problems selected".into());
        }
        if self.variants.is_empty() {
            return bad("no variants selected".into());
        }
        if self.runs == 0 {
            return bad("runs must be >= 1".into());
        }
        if self.interval == 0 {
            return bad("interval must be >= 1".into());
        }
        let mut seen = std::collections::HashSet::new();
        for v in &self.variants {
            if !seen.insert(v) {
                return bad(format!("variant `{v}` listed twice"));
            }
        }
        self.problem_instances()?;
        for variant in &self.variants {
            self.run_settings(*variant)
                .validate()
                .map_err(HarnessError::config)?;
        }
        Ok(())
    }

    /// Content hash of everything that influences a single run's trace.
    ///
    /// The problem/variant selection, run count, reporting interval and
    /// output location are excluded so that widening an experiment keeps
    /// completed runs valid.
    pub fn fingerprint(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serialises");
        if let Some(map) = value.as_object_mut() {
            for key in ["output", "problems", "variants", "runs", "interval"] {
                map.remove(key);
            }
        }
        // serde_json maps are ordered by key, so this text is canonical.
        let canonical = value.to_string();
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

/// Seed of one (problem, variant, run) cell: `base_seed` XOR the first eight
/// bytes (little endian) of `sha256("problem\0variant\0run")`. With
/// `common_seeds` the variant is left out, so all variants share a run's seed.
pub fn run_seed(
    base_seed: u64,
    problem: &str,
    variant: BlockingVariant,
    run: u64,
    common: bool,
) -> u64 {
    let key = if common {
        format!("{problem}\0{run}")
    } else {
        format!("{problem}\0{}\0{run}", variant.label())
    };
    let digest = Sha256::digest(key.as_bytes());
    let mut first = [0u8; 8];
    first.copy_from_slice(&digest[..8]);
    base_seed ^ u64::from_le_bytes(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let desk = ExperimentConfig::preset(Preset::Desk);
        assert_eq!(
            (desk.population, desk.dimension, desk.runs),
            (100, Some(10), 10)
        );
        let paper = ExperimentConfig::preset(Preset::Paper);
        assert_eq!(
            (paper.population, paper.runs, paper.total_generations()),
            (500, 20, 200)
        );
        assert_eq!(paper.problems.len(), 16);
    }

    #[test]
    fn file_keys_override_preset() {
        let c = ExperimentConfig::from_toml_str("runs = 3\nproblems = [\"fda2\"]\n", Preset::Desk)
            .unwrap();
        assert_eq!(c.runs, 3);
        assert_eq!(c.population, 100);
        assert_eq!(c.problems, vec!["fda2"]);
    }

    #[test]
    fn rejects_bad_documents() {
        for doc in [
            "bogus = 1",
            "runs = 0",
            "problems = [\"jy4\"]",
            "variants = [\"x\"]",
            "population = \"many\"",
            "neighborhood = 1000",
        ] {
            assert!(
                matches!(
                    ExperimentConfig::from_toml_str(doc, Preset::Paper),
                    Err(HarnessError::Config(_))
                ),
                "{doc}"
            );
        }
    }

    #[test]
    fn fingerprint_ignores_selection() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig {
            runs: 3,
            problems: vec!["fda1".into()],
            output: Some("x".into()),
            ..a.clone()
        };
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = ExperimentConfig {
            population: 99,
            ..a.clone()
        };
        assert_ne!(a.fingerprint(), c.fingerprint());
        assert_eq!(a.fingerprint().len(), 64);
    }

    #[test]
    fn seeds() {
        let s = |v, r, c| run_seed(0, "fda1", v, r, c);
        assert_ne!(
            s(BlockingVariant::Off, 0, false),
            s(BlockingVariant::E, 0, false)
        );
        assert_eq!(
            s(BlockingVariant::Off, 0, true),
            s(BlockingVariant::E, 0, true)
        );
        assert_ne!(
            s(BlockingVariant::Off, 0, false),
            s(BlockingVariant::Off, 1, false)
        );
        assert_eq!(
            run_seed(5, "fda1", BlockingVariant::E, 2, false) ^ 5,
            s(BlockingVariant::E, 2, false)
        );
    }
}
