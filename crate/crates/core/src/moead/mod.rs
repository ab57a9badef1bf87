//! MOEA/D-DE with Tchebycheff decomposition.
//!
//! Each generation visits the subproblems in index order. For subproblem `i`
//! an offspring is produced by DE/rand/1 from a mating pool (the neighbourhood
//! with probability `delta`, the whole population otherwise), optionally
//! blocked against the incumbent of `i`, mutated, evaluated, and offered to at
//! most `nr` pool members in random order.

mod decomposition;
mod operators;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::epigenetics::{apply_block, sample_block_mask, BlockingPolicy};
use crate::error::{Error, Result};
use crate::problems::Problem;

use decomposition::tchebycheff_unchecked;
pub use decomposition::{build_neighborhoods, generate_weight_vectors, tchebycheff, WEIGHT_FLOOR};
pub use operators::{clip_to_bounds, de_variation, polynomial_mutation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DEParams {
    /// DE scaling factor.
    pub f: f64,
    /// DE crossover rate.
    pub cr: f64,
    /// Per-variable mutation probability; `None` means `1 / D`.
    pub pm: Option<f64>,
    /// Polynomial-mutation distribution index.
    pub eta_m: f64,
    /// Probability that the mating pool is the neighbourhood.
    pub delta: f64,
    /// Maximum number of incumbents one offspring may replace.
    pub nr: usize,
    /// Neighbourhood size.
    pub neighborhood: usize,
}

impl Default for DEParams {
    fn default() -> Self {
        Self {
            f: 0.5,
            cr: 1.0,
            pm: None,
            eta_m: 20.0,
            delta: 0.9,
            nr: 2,
            neighborhood: 20,
        }
    }
}

impl DEParams {
    pub fn mutation_probability(&self, dim: usize) -> f64 {
        self.pm.unwrap_or(1.0 / dim as f64)
    }

    pub fn validate(&self, population: usize) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if self.f.is_nan() || self.f <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "F must be > 0 (got {})",
                self.f
            )));
        }
        if !unit(self.cr) || !unit(self.delta) || !self.pm.is_none_or(unit) {
            return Err(Error::InvalidConfig(
                "CR, pm and delta must lie in [0, 1]".into(),
            ));
        }
        if self.nr < 1 {
            return Err(Error::InvalidConfig("nr must be >= 1".into()));
        }
        if self.eta_m.is_nan() || self.eta_m < 0.0 {
            return Err(Error::InvalidConfig("eta_m must be >= 0".into()));
        }
        if self.neighborhood < 2 || self.neighborhood > population {
            return Err(Error::InvalidConfig(format!(
                "neighbourhood size {} must lie in [2, {population}]",
                self.neighborhood
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Vec<f64>,
    pub objectives: Vec<f64>,
    /// Generation at which `objectives` were computed.
    pub eval_generation: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subproblem {
    pub weight: Vec<f64>,
    pub neighbors: Vec<usize>,
    pub incumbent: Individual,
}

/// Progress window for the EIB/EIP schedules: `evals - start` out of `budget`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleClock {
    pub start: u64,
    pub budget: u64,
}

/// Everything that shapes how offspring are produced.
#[derive(Debug, Clone, Copy)]
pub struct Variation<'a> {
    pub params: &'a DEParams,
    pub policy: &'a BlockingPolicy,
    pub clock: ScheduleClock,
    /// Blocked loci are also exempt from mutation.
    pub shield_mutation: bool,
}

/// Per-generation bookkeeping returned by [`AlgorithmState::evolve_generation`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenerationReport {
    pub offspring: usize,
    pub blocked: usize,
    pub replacements: usize,
    pub max_replacements_per_offspring: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmState {
    pub subproblems: Vec<Subproblem>,
    pub ideal_point: Vec<f64>,
    pub evals: u64,
    pub generation: u64,
}

fn random_genome<R: Rng + ?Sized>(bounds: &[(f64, f64)], rng: &mut R) -> Vec<f64> {
    bounds
        .iter()
        .map(|&(lo, hi)| lo + rng.random::<f64>() * (hi - lo))
        .collect()
}

impl AlgorithmState {
    /// Uniform random population of `population` subproblems, evaluated at `t`.
    pub fn initialize<R: Rng + ?Sized>(
        problem: &Problem,
        population: usize,
        params: &DEParams,
        t: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if population < 3 {
            return Err(Error::InvalidConfig(format!(
                "population must be >= 3 (got {population})"
            )));
        }
        params.validate(population)?;
        let weights = generate_weight_vectors(population, problem.objectives())?;
        let neighbors = build_neighborhoods(&weights, params.neighborhood)?;
        let mut subproblems = Vec::with_capacity(population);
        for (weight, neighbors) in weights.into_iter().zip(neighbors) {
            let genome = random_genome(problem.bounds(), rng);
            let objectives = problem.evaluate(&genome, t)?;
            subproblems.push(Subproblem {
                weight,
                neighbors,
                incumbent: Individual {
                    genome,
                    objectives,
                    eval_generation: 0,
                },
            });
        }
        let mut state = Self {
            subproblems,
            ideal_point: Vec::new(),
            evals: population as u64,
            generation: 0,
        };
        state.recompute_ideal_point();
        Ok(state)
    }

    pub fn population_size(&self) -> usize {
        self.subproblems.len()
    }

    pub fn objective_vectors(&self) -> Vec<Vec<f64>> {
        self.subproblems
            .iter()
            .map(|s| s.incumbent.objectives.clone())
            .collect()
    }

    pub fn genomes(&self) -> Vec<Vec<f64>> {
        self.subproblems
            .iter()
            .map(|s| s.incumbent.genome.clone())
            .collect()
    }

    fn recompute_ideal_point(&mut self) {
        let m = self.subproblems[0].incumbent.objectives.len();
        self.ideal_point = (0..m)
            .map(|j| {
                self.subproblems
                    .iter()
                    .map(|s| s.incumbent.objectives[j])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
    }

    fn update_ideal_point(&mut self, objectives: &[f64]) {
        for (z, &f) in self.ideal_point.iter_mut().zip(objectives) {
            if f < *z {
                *z = f;
            }
        }
    }

    /// One MOEA/D-DE generation at problem time `t`.
    pub fn evolve_generation<R: Rng + ?Sized>(
        &mut self,
        problem: &Problem,
        variation: &Variation<'_>,
        t: f64,
        rng: &mut R,
    ) -> Result<GenerationReport> {
        let n = self.population_size();
        let dim = problem.dimension();
        let bounds = problem.bounds();
        let params = variation.params;
        let pm = params.mutation_probability(dim);
        let everyone: Vec<usize> = (0..n).collect();
        let mut report = GenerationReport::default();

        for i in 0..n {
            let use_neighbors = rng.random::<f64>() < params.delta;
            let mut pool = if use_neighbors {
                self.subproblems[i].neighbors.clone()
            } else {
                everyone.clone()
            };
            if pool.len() < 3 {
                pool = everyone.clone();
            }

            let picks = index::sample(rng, pool.len(), 3);
            let genome_of = |k: usize| &self.subproblems[pool[picks.index(k)]].incumbent.genome;
            let parent = &self.subproblems[i].incumbent.genome;
            let crossed = de_variation(
                parent,
                genome_of(0),
                genome_of(1),
                genome_of(2),
                params,
                bounds,
                rng,
            );

            let progress = self.evals.saturating_sub(variation.clock.start);
            let blocking =
                variation
                    .policy
                    .effective_parameters(progress, variation.clock.budget, dim)?;
            let mask = sample_block_mask(blocking.probability, blocking.block_size, dim, rng);
            let blocked = apply_block(parent, &crossed, mask.as_ref())?;
            let shielded = if variation.shield_mutation {
                mask.as_ref()
            } else {
                None
            };
            let genome =
                operators::mutate_unblocked(&blocked, pm, params.eta_m, bounds, shielded, rng);

            let objectives = problem.evaluate(&genome, t)?;
            self.evals += 1;
            self.update_ideal_point(&objectives);
            report.offspring += 1;
            if mask.is_some() {
                report.blocked += 1;
            }

            // A verbatim copy of the parent carries no new material and must
            // not overwrite other incumbents.
            if genome == self.subproblems[i].incumbent.genome {
                continue;
            }

            let child = Individual {
                genome,
                objectives,
                eval_generation: self.generation,
            };
            pool.shuffle(rng);
            let mut replaced = 0;
            for &j in &pool {
                if replaced >= params.nr {
                    break;
                }
                let sub = &self.subproblems[j];
                let child_value =
                    tchebycheff_unchecked(&child.objectives, &sub.weight, &self.ideal_point);
                let current = tchebycheff_unchecked(
                    &sub.incumbent.objectives,
                    &sub.weight,
                    &self.ideal_point,
                );
                if child_value <= current {
                    self.subproblems[j].incumbent = child.clone();
                    replaced += 1;
                }
            }
            report.replacements += replaced;
            report.max_replacements_per_offspring =
                report.max_replacements_per_offspring.max(replaced);
        }
        self.generation += 1;
        Ok(report)
    }

    /// Response to a change of the problem: every incumbent is re-evaluated
    /// at `t_new`, then `round(fraction * N)` random incumbents are replaced by
    /// fresh uniform individuals. Returns the number replaced.
    pub fn reinitialize_on_change<R: Rng + ?Sized>(
        &mut self,
        problem: &Problem,
        t_new: f64,
        fraction: f64,
        rng: &mut R,
    ) -> Result<usize> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidConfig(format!(
                "re-initialisation fraction {fraction} outside [0, 1]"
            )));
        }
        let n = self.population_size();
        for sub in &mut self.subproblems {
            sub.incumbent.objectives = problem.evaluate(&sub.incumbent.genome, t_new)?;
            sub.incumbent.eval_generation = self.generation;
        }
        self.evals += n as u64;

        let fresh = reinit_count(n, fraction);
        let mut chosen = index::sample(rng, n, fresh).into_vec();
        chosen.sort_unstable();
        for i in chosen {
            let genome = random_genome(problem.bounds(), rng);
            let objectives = problem.evaluate(&genome, t_new)?;
            self.subproblems[i].incumbent = Individual {
                genome,
                objectives,
                eval_generation: self.generation,
            };
        }
        self.evals += fresh as u64;
        self.recompute_ideal_point();
        Ok(fresh)
    }
}

/// Number of incumbents replaced by [`AlgorithmState::reinitialize_on_change`].
pub fn reinit_count(population: usize, fraction: f64) -> usize {
    ((fraction * population as f64).round() as usize).min(population)
}
