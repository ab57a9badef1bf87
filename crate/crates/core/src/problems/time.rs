use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discrete clock of a dynamic benchmark.
///
/// The problem changes every `tau_t` generations and `n_t` steps make up one
/// unit of problem time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeModel {
    pub tau_t: u64,
    pub n_t: u64,
}

impl Default for TimeModel {
    fn default() -> Self {
        Self { tau_t: 5, n_t: 10 }
    }
}

impl TimeModel {
    pub fn new(tau_t: u64, n_t: u64) -> Result<Self> {
        if tau_t == 0 || n_t == 0 {
            return Err(Error::InvalidConfig(format!(
                "tau_t and n_t must be >= 1 (got {tau_t}, {n_t})"
            )));
        }
        Ok(Self { tau_t, n_t })
    }

    /// Index of the discrete time step that `generation` belongs to.
    pub fn step_of_generation(&self, generation: u64) -> u64 {
        generation / self.tau_t
    }

    /// `t = floor(gen / tau_t) / n_t`.
    pub fn time_of_generation(&self, generation: u64) -> f64 {
        self.step_of_generation(generation) as f64 / self.n_t as f64
    }

    /// Time actually seen by the benchmark functions at `generation`: the
    /// step index wraps after `n_t` steps, so only `n_t` distinct values exist.
    pub fn problem_time(&self, generation: u64) -> f64 {
        (self.step_of_generation(generation) % self.n_t) as f64 / self.n_t as f64
    }

    /// True when the problem changes between `generation - 1` and `generation`.
    pub fn changes_at(&self, generation: u64) -> bool {
        generation > 0
            && self.step_of_generation(generation) != self.step_of_generation(generation - 1)
    }
}

const PHASE_RESOLUTION: f64 = 1e6;

/// Wraps a raw time value onto the unit period used by every benchmark.
///
/// The result is snapped to a 1e-6 grid so that `t` and `t + k` map to the
/// same bits for any integer `k`.
pub fn phase(t: f64) -> f64 {
    let frac = t - t.floor();
    let snapped = (frac * PHASE_RESOLUTION).round() / PHASE_RESOLUTION;
    if snapped >= 1.0 {
        0.0
    } else {
        snapped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_of_generation_examples() {
        let tm = TimeModel::default();
        assert_eq!(tm.time_of_generation(0), 0.0);
        assert_eq!(tm.time_of_generation(12), 0.2);
        assert_eq!(tm.time_of_generation(100), 2.0);
        assert_eq!(
            phase(tm.time_of_generation(100)),
            phase(tm.time_of_generation(0))
        );
    }

    #[test]
    fn problem_time_matches_wrapped_clock() {
        let tm = TimeModel::default();
        for gen in 0..400 {
            assert_eq!(
                tm.problem_time(gen),
                phase(tm.time_of_generation(gen)),
                "gen {gen}"
            );
        }
    }

    #[test]
    fn phase_is_shift_invariant() {
        for k in 0..10 {
            let t = k as f64 / 10.0;
            assert_eq!(phase(t), phase(t + 2.0));
            assert_eq!(phase(t), phase(t + 1.0));
        }
    }

    #[test]
    fn change_points() {
        let tm = TimeModel::default();
        let changes: Vec<u64> = (0..20).filter(|&g| tm.changes_at(g)).collect();
        assert_eq!(changes, vec![5, 10, 15]);
        assert!(TimeModel::new(0, 10).is_err());
    }
}
