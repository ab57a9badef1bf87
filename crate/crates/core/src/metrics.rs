//! IGD and the interval aggregation used to compare algorithm variants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `true` when `a` Pareto-dominates `b` (minimisation).
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Indices of the points not dominated by any other point, in input order.
/// Duplicates do not dominate each other and are all kept.
pub fn non_dominated_indices(points: &[Vec<f64>]) -> Vec<usize> {
    if points.first().is_some_and(|p| p.len() == 2) {
        return non_dominated_2d(points);
    }
    (0..points.len())
        .filter(|&i| !points.iter().any(|q| dominates(q, &points[i])))
        .collect()
}

fn non_dominated_2d(points: &[Vec<f64>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
    });
    let mut keep = Vec::with_capacity(points.len());
    // Smallest f2 among points with strictly smaller f1 than the current group.
    let mut best_before = f64::INFINITY;
    let mut i = 0;
    while i < order.len() {
        let f1 = points[order[i]][0];
        let mut j = i;
        while j < order.len() && points[order[j]][0] == f1 {
            j += 1;
        }
        // Within a group of equal f1 the first entry has the minimal f2.
        let group_min = points[order[i]][1];
        for &idx in &order[i..j] {
            let f2 = points[idx][1];
            if f2 == group_min && f2 < best_before {
                keep.push(idx);
            }
        }
        best_before = best_before.min(group_min);
        i = j;
    }
    keep.sort_unstable();
    keep
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Inverted generational distance: mean over `reference` of the distance to
/// the nearest point of `obtained`.
pub fn igd(obtained: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<f64> {
    if obtained.is_empty() || reference.is_empty() {
        return Err(Error::Metric("IGD needs non-empty point sets".into()));
    }
    let total: f64 = reference
        .iter()
        .map(|r| {
            obtained
                .iter()
                .map(|o| distance(r, o))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.len() as f64)
}

/// IGD of the non-dominated subset of `population`.
pub fn population_igd(population: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<f64> {
    let front: Vec<Vec<f64>> = non_dominated_indices(population)
        .into_iter()
        .map(|i| population[i].clone())
        .collect();
    igd(&front, reference)
}

/// Per-generation IGD values of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IgdTrace {
    pub problem: String,
    pub algorithm: String,
    pub run_seed: u64,
    pub points: Vec<TracePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub generation: u64,
    /// Problem time in effect during the generation.
    pub time: f64,
    pub igd: f64,
}

impl IgdTrace {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.igd)
    }

    pub fn validate(&self) -> Result<()> {
        for w in self.points.windows(2) {
            if w[1].generation <= w[0].generation {
                return Err(Error::Aggregation(format!(
                    "generations not strictly increasing at {}",
                    w[1].generation
                )));
            }
        }
        if let Some(p) = self
            .points
            .iter()
            .find(|p| !p.igd.is_finite() || p.igd < 0.0)
        {
            return Err(Error::Aggregation(format!(
                "invalid IGD {} at generation {}",
                p.igd, p.generation
            )));
        }
        Ok(())
    }
}

/// Mean IGD per block of `interval` generations, pooled over all runs.
///
/// A trailing partial block is averaged over the generations it holds.
pub fn interval_mean(traces: &[IgdTrace], interval: usize) -> Result<Vec<f64>> {
    if interval == 0 {
        return Err(Error::Aggregation("interval must be >= 1".into()));
    }
    let first = traces
        .first()
        .ok_or_else(|| Error::Aggregation("no traces to aggregate".into()))?;
    let len = first.points.len();
    for tr in traces {
        if tr.problem != first.problem {
            return Err(Error::Aggregation(format!(
                "mixed problems `{}` and `{}`",
                first.problem, tr.problem
            )));
        }
        if tr.points.len() != len {
            return Err(Error::Aggregation(format!(
                "ragged traces: {} vs {} generations",
                len,
                tr.points.len()
            )));
        }
    }
    Ok((0..len)
        .step_by(interval)
        .map(|start| {
            let end = (start + interval).min(len);
            let sum: f64 = traces
                .iter()
                .flat_map(|tr| tr.points[start..end].iter().map(|p| p.igd))
                .sum();
            sum / ((end - start) * traces.len()) as f64
        })
        .collect())
}

/// Signed relative improvement per interval, `100 (b - v) / b`.
/// Positive means the variant reached a lower IGD than the baseline.
pub fn interval_differences(baseline: &[f64], variant: &[f64]) -> Result<Vec<f64>> {
    if baseline.len() != variant.len() {
        return Err(Error::Dimension {
            expected: baseline.len(),
            actual: variant.len(),
        });
    }
    baseline
        .iter()
        .zip(variant)
        .enumerate()
        .map(|(k, (&b, &v))| {
            if b == 0.0 {
                Err(Error::UndefinedRatio(k))
            } else {
                Ok(100.0 * (b - v) / b)
            }
        })
        .collect()
}

/// Total % difference: the sum of [`interval_differences`].
pub fn percent_diff_total(baseline: &[f64], variant: &[f64]) -> Result<f64> {
    Ok(interval_differences(baseline, variant)?.iter().sum())
}
