//! Dynamic bi-objective benchmark problems.
//!
//! Every problem is evaluated at the wrapped time [`phase`]`(t)`, so the whole
//! suite repeats with period 1 (and therefore period 2) in `t`. See
//! `docs/benchmarks.md` for the exact definitions.

mod fda;
mod jy;
mod time;
mod udf;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::metrics::non_dominated_indices;

pub use time::{phase, TimeModel};

/// Which part of the problem moves over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    /// Pareto set changes, Pareto front fixed.
    I,
    /// Both change.
    II,
    /// Pareto front changes, Pareto set fixed.
    III,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::I => "I",
            Category::II => "II",
            Category::III => "III",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    Fda1,
    Fda2,
    Fda3,
    Jy1,
    Jy2,
    Jy3,
    Jy5,
    Jy6,
    Jy7,
    Jy8,
    Udf1,
    Udf2,
    Udf3,
    Udf4,
    Udf5,
    Udf6,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 16] = [
        ProblemKind::Fda1,
        ProblemKind::Fda2,
        ProblemKind::Fda3,
        ProblemKind::Jy1,
        ProblemKind::Jy2,
        ProblemKind::Jy3,
        ProblemKind::Jy5,
        ProblemKind::Jy6,
        ProblemKind::Jy7,
        ProblemKind::Jy8,
        ProblemKind::Udf1,
        ProblemKind::Udf2,
        ProblemKind::Udf3,
        ProblemKind::Udf4,
        ProblemKind::Udf5,
        ProblemKind::Udf6,
    ];

    pub fn name(self) -> &'static str {
        use ProblemKind::*;
        match self {
            Fda1 => "fda1",
            Fda2 => "fda2",
            Fda3 => "fda3",
            Jy1 => "jy1",
            Jy2 => "jy2",
            Jy3 => "jy3",
            Jy5 => "jy5",
            Jy6 => "jy6",
            Jy7 => "jy7",
            Jy8 => "jy8",
            Udf1 => "udf1",
            Udf2 => "udf2",
            Udf3 => "udf3",
            Udf4 => "udf4",
            Udf5 => "udf5",
            Udf6 => "udf6",
        }
    }

    pub fn category(self) -> Category {
        use ProblemKind::*;
        match self {
            Fda1 | Jy1 | Jy6 => Category::I,
            Jy5 | Jy8 | Udf3 => Category::III,
            _ => Category::II,
        }
    }

    pub fn default_dimension(self) -> usize {
        use ProblemKind::*;
        match self {
            Jy1 | Jy2 | Jy3 | Jy5 | Jy6 | Jy7 | Jy8 => 10,
            _ => 30,
        }
    }

    fn min_dimension(self) -> usize {
        use ProblemKind::*;
        match self {
            Udf1 | Udf2 | Udf3 | Udf4 | Udf5 | Udf6 => 3,
            _ => 2,
        }
    }

    fn bounds(self, dim: usize) -> Vec<(f64, f64)> {
        use ProblemKind::*;
        let rest = match self {
            Udf1 | Udf6 => (-2.0, 2.0),
            Udf2 => (-1.0, 2.0),
            _ => (-1.0, 1.0),
        };
        let mut bounds = vec![rest; dim];
        bounds[0] = (0.0, 1.0);
        bounds
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// A benchmark instance with a fixed number of decision variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    kind: ProblemKind,
    bounds: Vec<(f64, f64)>,
}

impl Problem {
    pub fn new(kind: ProblemKind, dim: usize) -> Result<Self> {
        if dim < kind.min_dimension() {
            return Err(Error::InvalidConfig(format!(
                "{kind} needs at least {} variables (got {dim})",
                kind.min_dimension()
            )));
        }
        Ok(Self {
            kind,
            bounds: kind.bounds(dim),
        })
    }

    pub fn with_default_dimension(kind: ProblemKind) -> Self {
        Self::new(kind, kind.default_dimension()).expect("default dimensions are valid")
    }

    /// Looks a problem up by its catalog name (`"fda1"`, `"jy5"`, ...).
    pub fn from_name(name: &str, dim: Option<usize>) -> Result<Self> {
        let kind: ProblemKind = name.parse()?;
        Self::new(kind, dim.unwrap_or_else(|| kind.default_dimension()))
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn category(&self) -> Category {
        self.kind.category()
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn objectives(&self) -> usize {
        2
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Objective vector of `x` at time `t`.
    pub fn evaluate(&self, x: &[f64], t: f64) -> Result<Vec<f64>> {
        check_len(self.dimension(), x.len())?;
        for (index, (&value, &(lower, upper))) in x.iter().zip(&self.bounds).enumerate() {
            if !(lower..=upper).contains(&value) {
                return Err(Error::Domain {
                    index,
                    value,
                    lower,
                    upper,
                });
            }
        }
        Ok(self.raw(x, phase(t)).to_vec())
    }

    fn raw(&self, x: &[f64], t: f64) -> [f64; 2] {
        use ProblemKind::*;
        match self.kind {
            Fda1 => fda::fda1(x, t),
            Fda2 => fda::fda2(x, t),
            Fda3 => fda::fda3(x, t),
            Jy1 => jy::jy1(x, t),
            Jy2 => jy::jy2(x, t),
            Jy3 => jy::jy3(x, t),
            Jy5 => jy::jy5(x, t),
            Jy6 => jy::jy6(x, t),
            Jy7 => jy::jy7(x, t),
            Jy8 => jy::jy8(x, t),
            Udf1 => udf::udf1(x, t),
            Udf2 => udf::udf2(x, t),
            Udf3 => udf::udf3(x, t),
            Udf4 => udf::udf4(x, t),
            Udf5 => udf::udf5(x, t),
            Udf6 => udf::udf6(x, t),
        }
    }

    /// A Pareto-optimal genome at time `t`, parameterised by `u` in `[0, 1]`.
    ///
    /// `u` is `f1` for the FDA problems, the first (or transformed first)
    /// variable elsewhere.
    pub fn pareto_set_point(&self, u: f64, t: f64) -> Vec<f64> {
        use ProblemKind::*;
        let t = phase(t);
        let u = u.clamp(0.0, 1.0);
        let dim = self.dimension();
        let mut x = match self.kind {
            Fda1 => fda::fda1_optimum(u, t, dim),
            Fda2 => fda::fda2_optimum(u, t, dim),
            Fda3 => fda::fda3_optimum(u, t, dim),
            Jy1 | Jy2 | Jy6 | Jy7 => jy::shifted_optimum(u, jy::moving_shift(t), dim),
            Jy3 => jy::jy3_optimum(u, t, dim),
            Jy5 | Jy8 => jy::shifted_optimum(u, 0.0, dim),
            Udf1 => udf::optimum(1, u, t, dim),
            Udf2 => udf::optimum(2, u, t, dim),
            Udf3 => udf::optimum(3, u, t, dim),
            Udf4 => udf::optimum(4, u, t, dim),
            Udf5 => udf::optimum(5, u, t, dim),
            Udf6 => udf::optimum(6, u, t, dim),
        };
        for (v, &(lo, hi)) in x.iter_mut().zip(&self.bounds) {
            *v = v.clamp(lo, hi);
        }
        x
    }

    /// `n_points` mutually non-dominated samples of the true front at `t`,
    /// each paired with the genome that attains it.
    pub fn pareto_front_samples(&self, t: f64, n_points: usize) -> Result<Vec<FrontSample>> {
        if n_points < 2 {
            return Err(Error::InvalidConfig(format!(
                "a reference front needs at least 2 points (got {n_points})"
            )));
        }
        let sample = |count: usize| -> Vec<FrontSample> {
            (0..count)
                .map(|i| {
                    let u = i as f64 / (count - 1) as f64;
                    let genome = self.pareto_set_point(u, t);
                    let objectives = self.raw(&genome, phase(t)).to_vec();
                    FrontSample { genome, objectives }
                })
                .collect()
        };

        let direct = sample(n_points);
        let objs: Vec<Vec<f64>> = direct.iter().map(|s| s.objectives.clone()).collect();
        if non_dominated_indices(&objs).len() == n_points {
            return Ok(direct);
        }

        // Disconnected fronts: oversample, keep the non-dominated part and
        // thin it to `n_points` evenly spread samples.
        let dense = sample(n_points * 32);
        let objs: Vec<Vec<f64>> = dense.iter().map(|s| s.objectives.clone()).collect();
        let mut keep = non_dominated_indices(&objs);
        keep.sort_by(|&a, &b| objs[a][0].total_cmp(&objs[b][0]));
        let last = keep.len() - 1;
        Ok((0..n_points)
            .map(|k| {
                let pick = (k * last + (n_points - 1) / 2) / (n_points - 1);
                dense[keep[pick]].clone()
            })
            .collect())
    }

    /// Objective-space reference front at time `t`.
    pub fn true_pareto_front(&self, t: f64, n_points: usize) -> Result<Vec<Vec<f64>>> {
        Ok(self
            .pareto_front_samples(t, n_points)?
            .into_iter()
            .map(|s| s.objectives)
            .collect())
    }
}

/// A point on the true front together with its pre-image.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontSample {
    pub genome: Vec<f64>,
    pub objectives: Vec<f64>,
}

/// The sixteen benchmark problems at their default dimensions.
pub fn suite_catalog() -> Vec<Problem> {
    ProblemKind::ALL
        .into_iter()
        .map(Problem::with_default_dimension)
        .collect()
}
