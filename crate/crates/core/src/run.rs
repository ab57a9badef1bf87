//! A complete dynamic run: initialisation, the generation loop with
//! schedule-driven change handling, and a per-generation IGD trace.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::epigenetics::{BlockingPolicy, ScheduleSpan};
use crate::error::{Error, Result};
use crate::metrics::{population_igd, IgdTrace, TracePoint};
use crate::moead::{reinit_count, AlgorithmState, DEParams, ScheduleClock, Variation};
use crate::problems::{Problem, TimeModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub population: usize,
    pub generations: u64,
    /// Generations per dynamic cycle; only used by [`ScheduleSpan::Cycle`].
    pub cycle_length: u64,
    pub time: TimeModel,
    pub de: DEParams,
    pub policy: BlockingPolicy,
    pub schedule_span: ScheduleSpan,
    pub shield_mutation: bool,
    pub reinit_fraction: f64,
    /// Reference-front size per time step.
    pub reference_points: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            population: 500,
            generations: 200,
            cycle_length: 100,
            time: TimeModel::default(),
            de: DEParams::default(),
            policy: BlockingPolicy::off(),
            schedule_span: ScheduleSpan::Run,
            shield_mutation: false,
            reinit_fraction: 0.2,
            reference_points: 1000,
        }
    }
}

impl RunSettings {
    pub fn validate(&self) -> Result<()> {
        if self.population < 3 {
            return Err(Error::InvalidConfig("population must be >= 3".into()));
        }
        if self.generations == 0 || self.cycle_length == 0 {
            return Err(Error::InvalidConfig(
                "generations and cycle length must be >= 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.reinit_fraction) {
            return Err(Error::InvalidConfig(
                "reinit_fraction must lie in [0, 1]".into(),
            ));
        }
        if self.reference_points < 2 {
            return Err(Error::InvalidConfig("reference_points must be >= 2".into()));
        }
        TimeModel::new(self.time.tau_t, self.time.n_t)?;
        self.de.validate(self.population)?;
        self.policy.validate()
    }

    pub fn budget(&self) -> BudgetPlan {
        BudgetPlan {
            population: self.population as u64,
            generations: self.generations,
            tau_t: self.time.tau_t,
            reinit: reinit_count(self.population, self.reinit_fraction) as u64,
        }
    }
}

/// Evaluation counts of a run, known before it starts.
///
/// Every generation costs `N`; every change event costs `N` re-evaluations
/// plus the fresh individuals; initialisation costs `N` once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetPlan {
    pub population: u64,
    pub generations: u64,
    pub tau_t: u64,
    pub reinit: u64,
}

impl BudgetPlan {
    /// Change events strictly before `generation`.
    pub fn changes_before(&self, generation: u64) -> u64 {
        generation.saturating_sub(1) / self.tau_t
    }

    /// Evaluations spent before `generation` (and its change response) starts.
    pub fn evals_before(&self, generation: u64) -> u64 {
        if generation == 0 {
            return 0;
        }
        let n = self.population;
        n + generation * n + self.changes_before(generation) * (n + self.reinit)
    }

    /// Total evaluations of the run; the `max_evals` of the blocking schedules.
    pub fn total(&self) -> u64 {
        self.evals_before(self.generations)
    }

    pub fn change_events(&self) -> u64 {
        self.changes_before(self.generations)
    }
}

/// Result of [`run_dynamic`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub trace: IgdTrace,
    pub evals: u64,
    /// Offspring for which the blocking mechanism triggered.
    pub blocked_offspring: u64,
    pub final_state: AlgorithmState,
}

fn schedule_clock(settings: &RunSettings, plan: &BudgetPlan, generation: u64) -> ScheduleClock {
    match settings.schedule_span {
        ScheduleSpan::Run => ScheduleClock {
            start: 0,
            budget: plan.total(),
        },
        ScheduleSpan::Cycle => {
            let len = settings.cycle_length;
            let first = generation / len * len;
            let next = (first + len).min(settings.generations);
            let start = plan.evals_before(first);
            ScheduleClock {
                start,
                budget: (plan.evals_before(next) - start).max(1),
            }
        }
    }
}

/// Runs MOEA/D-DE on `problem` for `settings.generations` generations from
/// `seed`, recording the IGD of the population's non-dominated set after each
/// generation against the true front of that generation's time step.
pub fn run_dynamic(problem: &Problem, settings: &RunSettings, seed: u64) -> Result<RunOutcome> {
    settings.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tm = settings.time;
    let plan = settings.budget();
    let mut fronts: HashMap<u64, Vec<Vec<f64>>> = HashMap::new();

    let mut state = AlgorithmState::initialize(
        problem,
        settings.population,
        &settings.de,
        tm.problem_time(0),
        &mut rng,
    )?;
    let mut points = Vec::with_capacity(settings.generations as usize);
    let mut blocked = 0u64;

    for generation in 0..settings.generations {
        let t = tm.problem_time(generation);
        if tm.changes_at(generation) {
            state.reinitialize_on_change(problem, t, settings.reinit_fraction, &mut rng)?;
        }
        let variation = Variation {
            params: &settings.de,
            policy: &settings.policy,
            clock: schedule_clock(settings, &plan, generation),
            shield_mutation: settings.shield_mutation,
        };
        let report = state.evolve_generation(problem, &variation, t, &mut rng)?;
        blocked += report.blocked as u64;

        let key = tm.step_of_generation(generation) % tm.n_t;
        let reference = match fronts.get(&key) {
            Some(front) => front,
            None => {
                let front = problem.true_pareto_front(t, settings.reference_points)?;
                fronts.entry(key).or_insert(front)
            }
        };
        let igd = population_igd(&state.objective_vectors(), reference)?;
        points.push(TracePoint {
            generation,
            time: t,
            igd,
        });
    }

    debug_assert_eq!(state.evals, plan.total());
    Ok(RunOutcome {
        trace: IgdTrace {
            problem: problem.name().to_string(),
            algorithm: settings.policy.variant.label().to_string(),
            run_seed: seed,
            points,
        },
        evals: state.evals,
        blocked_offspring: blocked,
        final_state: state,
    })
}
