use crate::error::{check_len, Error, Result};

/// Lower bound applied to weight components inside [`tchebycheff`].
pub const WEIGHT_FLOOR: f64 = 1e-6;

/// `n` weight vectors evenly spaced on the 2-simplex, ordered by first component.
pub fn generate_weight_vectors(n: usize, objectives: usize) -> Result<Vec<Vec<f64>>> {
    if objectives != 2 {
        return Err(Error::UnsupportedObjectiveCount(objectives));
    }
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 weight vectors (got {n})"
        )));
    }
    Ok((0..n)
        .map(|i| {
            let w = i as f64 / (n - 1) as f64;
            vec![w, 1.0 - w]
        })
        .collect())
}

/// For every weight vector, the indices of its `t` nearest weight vectors
/// (itself included), nearest first; equal distances go to the lower index.
pub fn build_neighborhoods(weights: &[Vec<f64>], t: usize) -> Result<Vec<Vec<usize>>> {
    if t == 0 || t > weights.len() {
        return Err(Error::InvalidConfig(format!(
            "neighbourhood size {t} must lie in [1, {}]",
            weights.len()
        )));
    }
    Ok(weights
        .iter()
        .map(|w| {
            let mut dist: Vec<(f64, usize)> = weights
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let d: f64 = w.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
                    (d, j)
                })
                .collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            dist.into_iter().take(t).map(|(_, j)| j).collect()
        })
        .collect())
}

/// Weighted Tchebycheff value `max_j w'_j |f_j - z_j|` with `w'_j = max(w_j, 1e-6)`.
pub fn tchebycheff(objectives: &[f64], weight: &[f64], ideal: &[f64]) -> Result<f64> {
    check_len(objectives.len(), weight.len())?;
    check_len(objectives.len(), ideal.len())?;
    Ok(tchebycheff_unchecked(objectives, weight, ideal))
}

pub(crate) fn tchebycheff_unchecked(objectives: &[f64], weight: &[f64], ideal: &[f64]) -> f64 {
    objectives
        .iter()
        .zip(weight)
        .zip(ideal)
        .map(|((f, w), z)| w.max(WEIGHT_FLOOR) * (f - z).abs())
        .fold(f64::NEG_INFINITY, f64::max)
}
