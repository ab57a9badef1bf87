use epimoead::epigenetics::{BlockingPolicy, BlockingVariant};
use epimoead::moead::{AlgorithmState, DEParams, ScheduleClock, Variation};
use epimoead::problems::{suite_catalog, Problem, ProblemKind};
use epimoead::run::{run_dynamic, RunSettings};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small(policy: BlockingPolicy) -> RunSettings {
    RunSettings {
        population: 30,
        generations: 40,
        de: DEParams {
            neighborhood: 8,
            ..DEParams::default()
        },
        policy,
        reference_points: 100,
        ..RunSettings::default()
    }
}

#[test]
fn zero_probability_blocking_is_the_baseline() {
    for kind in [ProblemKind::Fda1, ProblemKind::Jy3, ProblemKind::Udf4] {
        let problem = Problem::new(kind, 8).unwrap();
        let silent = BlockingPolicy {
            base_probability: 0.0,
            ..BlockingPolicy::new(BlockingVariant::E)
        };
        let base = run_dynamic(&problem, &small(BlockingPolicy::off()), 11).unwrap();
        let muted = run_dynamic(&problem, &small(silent), 11).unwrap();
        assert_eq!(
            base.final_state.genomes(),
            muted.final_state.genomes(),
            "{kind}"
        );
        assert_eq!(base.trace.points, muted.trace.points);
        assert_eq!(muted.blocked_offspring, 0);
    }
}

#[test]
fn full_shielded_block_freezes_the_population() {
    let problem = Problem::with_default_dimension(ProblemKind::Fda2);
    let dim = problem.dimension();
    let params = DEParams::default();
    let policy = BlockingPolicy {
        base_probability: 1.0,
        base_block_size: dim,
        ..BlockingPolicy::new(BlockingVariant::E)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut state = AlgorithmState::initialize(&problem, 60, &params, 0.0, &mut rng).unwrap();
    let start = state.genomes();
    let variation = Variation {
        params: &params,
        policy: &policy,
        clock: ScheduleClock {
            start: 0,
            budget: 10_000,
        },
        shield_mutation: true,
    };
    for _ in 0..10 {
        let report = state
            .evolve_generation(&problem, &variation, 0.0, &mut rng)
            .unwrap();
        assert_eq!(report.blocked, 60);
        assert_eq!(report.replacements, 0);
        assert_eq!(state.genomes(), start);
    }
    assert_eq!(state.evals, 60 * 11);
}

#[test]
fn runs_are_deterministic_per_seed() {
    let problem = Problem::new(ProblemKind::Udf2, 6).unwrap();
    let s = small(BlockingPolicy::new(BlockingVariant::Eip));
    let a = run_dynamic(&problem, &s, 5).unwrap();
    let b = run_dynamic(&problem, &s, 5).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.trace, run_dynamic(&problem, &s, 6).unwrap().trace);
}

#[test]
fn evaluation_budget_is_exact() {
    let problem = Problem::new(ProblemKind::Jy1, 5).unwrap();
    // 4 generations: no change event yet.
    let s = RunSettings {
        generations: 4,
        ..small(BlockingPolicy::off())
    };
    assert_eq!(run_dynamic(&problem, &s, 1).unwrap().evals, 30 * 5);
    // 40 generations: changes at 5, 10, ..., 35.
    let s = small(BlockingPolicy::off());
    assert_eq!(
        run_dynamic(&problem, &s, 1).unwrap().evals,
        30 * 41 + 7 * (30 + 6)
    );
}

#[test]
fn invariants_hold_on_every_problem() {
    for problem in suite_catalog() {
        let problem = Problem::new(problem.kind(), 6).unwrap();
        let params = DEParams {
            neighborhood: 6,
            ..DEParams::default()
        };
        let policy = BlockingPolicy::new(BlockingVariant::Eib);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut state = AlgorithmState::initialize(&problem, 25, &params, 0.0, &mut rng).unwrap();
        let variation = Variation {
            params: &params,
            policy: &policy,
            clock: ScheduleClock {
                start: 0,
                budget: 25 * 30,
            },
            shield_mutation: false,
        };
        for gen in 0..30u64 {
            let t = (gen / 5 % 10) as f64 / 10.0;
            if gen > 0 && gen % 5 == 0 {
                state
                    .reinitialize_on_change(&problem, t, 0.2, &mut rng)
                    .unwrap();
            }
            let report = state
                .evolve_generation(&problem, &variation, t, &mut rng)
                .unwrap();
            assert!(report.max_replacements_per_offspring <= params.nr);
            for (i, sub) in state.subproblems.iter().enumerate() {
                assert!(sub.neighbors.contains(&i) && sub.neighbors.len() == 6);
                for (z, f) in state.ideal_point.iter().zip(&sub.incumbent.objectives) {
                    assert!(z <= f, "{}", problem.name());
                }
                for (v, (lo, hi)) in sub.incumbent.genome.iter().zip(problem.bounds()) {
                    assert!(lo <= v && v <= hi, "{}", problem.name());
                }
            }
        }
    }
}
