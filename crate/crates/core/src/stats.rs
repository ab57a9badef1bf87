//! Wilcoxon signed-rank test for paired samples.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Largest number of non-zero differences handled by exact enumeration.
pub const EXACT_LIMIT: usize = 25;

/// Conventional significance threshold.
pub const SIGNIFICANCE: f64 = 0.05;

/// Paired observations `(baseline, variant)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PairedSample {
    pairs: Vec<(f64, f64)>,
}

impl PairedSample {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::Metric(
                "paired sample contains non-finite values".into(),
            ));
        }
        Ok(Self { pairs })
    }

    pub fn from_columns(baseline: &[f64], variant: &[f64]) -> Result<Self> {
        if baseline.len() != variant.len() {
            return Err(Error::Dimension {
                expected: baseline.len(),
                actual: variant.len(),
            });
        }
        Self::new(
            baseline
                .iter()
                .copied()
                .zip(variant.iter().copied())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `variant - baseline` for every pair.
    pub fn differences(&self) -> Vec<f64> {
        self.pairs.iter().map(|(b, v)| v - b).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PValueMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// `min(W+, W-)`.
    pub statistic: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    /// Number of non-zero differences.
    pub n: usize,
    pub p_value: f64,
    pub method: PValueMethod,
}

impl WilcoxonResult {
    pub fn significant(&self) -> bool {
        self.p_value < SIGNIFICANCE
    }
}

/// Ranks of `|d|` over the non-zero differences (ties share the average rank),
/// returned together with the sign of each difference.
pub fn signed_ranks(differences: &[f64]) -> Vec<(f64, bool)> {
    let mut nonzero: Vec<f64> = differences.iter().copied().filter(|d| *d != 0.0).collect();
    nonzero.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let mut out = Vec::with_capacity(nonzero.len());
    let mut i = 0;
    while i < nonzero.len() {
        let mut j = i;
        while j < nonzero.len() && nonzero[j].abs() == nonzero[i].abs() {
            j += 1;
        }
        // ranks i+1 ..= j share their mean
        let rank = (i + 1 + j) as f64 / 2.0;
        out.extend(nonzero[i..j].iter().map(|d| (rank, *d > 0.0)));
        i = j;
    }
    out
}

/// Two-sided exact p-value of `W = w` under the null, by counting the sign
/// assignments of `ranks` whose positive rank sum is `<= w`.
pub fn exact_p_value(ranks: &[f64], w: f64) -> f64 {
    // Ranks are multiples of 1/2, so doubled ranks are integers.
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] != 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let limit = ((2.0 * w).round() as usize).min(total);
    let below: f64 = counts[..=limit].iter().sum();
    let p = 2.0 * below / 2f64.powi(ranks.len() as i32);
    p.min(1.0)
}

/// Two-sided normal-approximation p-value with the tie-corrected variance
/// `sum(r^2) / 4` and no continuity correction.
pub fn normal_p_value(ranks: &[f64], w: f64) -> f64 {
    let mean = ranks.iter().sum::<f64>() / 2.0;
    let var = ranks.iter().map(|r| r * r).sum::<f64>() / 4.0;
    let z = (w - mean) / var.sqrt();
    erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0)
}

/// Two-sided Wilcoxon signed-rank test on `variant - baseline`.
///
/// Zero differences are dropped. Exact enumeration is used for up to
/// [`EXACT_LIMIT`] non-zero differences, the normal approximation above.
pub fn wilcoxon_signed_rank(sample: &PairedSample) -> Result<WilcoxonResult> {
    let ranked = signed_ranks(&sample.differences());
    if ranked.is_empty() {
        return Err(Error::DegenerateSample);
    }
    let w_plus: f64 = ranked.iter().filter(|(_, pos)| *pos).map(|(r, _)| r).sum();
    let w_minus: f64 = ranked.iter().filter(|(_, pos)| !*pos).map(|(r, _)| r).sum();
    let statistic = w_plus.min(w_minus);
    let ranks: Vec<f64> = ranked.iter().map(|(r, _)| *r).collect();
    let (p_value, method) = if ranks.len() <= EXACT_LIMIT {
        (exact_p_value(&ranks, statistic), PValueMethod::Exact)
    } else {
        (normal_p_value(&ranks, statistic), PValueMethod::Normal)
    };
    Ok(WilcoxonResult {
        statistic,
        w_plus,
        w_minus,
        n: ranks.len(),
        p_value,
        method,
    })
}
