//! Epigenetic blocking of crossover.
//!
//! When the mechanism triggers for an offspring, a random set of loci is
//! "blocked": the offspring keeps its parent's genes there instead of the
//! values produced by crossover. Masks are sampled per reproduction event and
//! never stored, so nothing is inherited by later generations. The sampler
//! only sees the trigger probability, the block size and the dimension; it
//! has no access to fitness.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockingVariant {
    /// Plain MOEA/D-DE.
    #[serde(alias = "baseline")]
    Off,
    /// Constant probability and block size.
    E,
    /// Constant probability, block size growing with the evaluation budget.
    Eib,
    /// Constant block size, probability growing with the evaluation budget.
    Eip,
}

impl BlockingVariant {
    pub const ALL: [BlockingVariant; 4] = [
        BlockingVariant::Off,
        BlockingVariant::E,
        BlockingVariant::Eib,
        BlockingVariant::Eip,
    ];

    /// Short label used in reports and file names.
    pub fn label(self) -> &'static str {
        match self {
            BlockingVariant::Off => "baseline",
            BlockingVariant::E => "e",
            BlockingVariant::Eib => "eib",
            BlockingVariant::Eip => "eip",
        }
    }
}

impl fmt::Display for BlockingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BlockingVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "off" | "baseline" => Ok(BlockingVariant::Off),
            "e" => Ok(BlockingVariant::E),
            "eib" => Ok(BlockingVariant::Eib),
            "eip" => Ok(BlockingVariant::Eip),
            other => Err(Error::InvalidConfig(format!(
                "unknown blocking variant `{other}`"
            ))),
        }
    }
}

/// Which evaluation window the EIB/EIP schedules measure progress over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleSpan {
    /// `evals / max_evals` over the whole run.
    #[default]
    Run,
    /// The clock restarts at the beginning of every dynamic cycle.
    Cycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockingPolicy {
    pub variant: BlockingVariant,
    pub base_probability: f64,
    pub base_block_size: usize,
    pub max_probability: f64,
    pub probability_quantum: f64,
}

impl BlockingPolicy {
    pub fn new(variant: BlockingVariant) -> Self {
        Self {
            variant,
            base_probability: 0.1,
            base_block_size: 6,
            max_probability: 0.8,
            probability_quantum: 0.01,
        }
    }

    pub fn off() -> Self {
        Self::new(BlockingVariant::Off)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.base_probability) || !unit(self.max_probability) {
            return Err(Error::InvalidConfig(
                "blocking probabilities must lie in [0, 1]".into(),
            ));
        }
        if self.variant == BlockingVariant::Eip && self.base_probability > self.max_probability {
            return Err(Error::InvalidConfig(
                "base probability exceeds the maximum probability".into(),
            ));
        }
        if self.base_block_size == 0 {
            return Err(Error::InvalidConfig("block size must be >= 1".into()));
        }
        if !(self.probability_quantum > 0.0 && self.probability_quantum <= 1.0) {
            return Err(Error::InvalidConfig(
                "probability quantum must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }

    /// Trigger probability and block size after `evals` of `max_evals`
    /// evaluations on a `dim`-variable problem.
    pub fn effective_parameters(
        &self,
        evals: u64,
        max_evals: u64,
        dim: usize,
    ) -> Result<EffectiveBlocking> {
        let fixed = self.base_block_size.min(dim);
        let (probability, block_size) = match self.variant {
            BlockingVariant::Off => (0.0, 0),
            BlockingVariant::E => (self.base_probability, fixed),
            BlockingVariant::Eib => (
                self.base_probability,
                eib_block_size(evals, max_evals, dim)?,
            ),
            BlockingVariant::Eip => (
                scheduled_probability(
                    evals,
                    max_evals,
                    self.max_probability,
                    self.probability_quantum,
                )?,
                fixed,
            ),
        };
        Ok(EffectiveBlocking {
            probability,
            block_size,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveBlocking {
    pub probability: f64,
    pub block_size: usize,
}

fn check_budget(max_evals: u64) -> Result<()> {
    if max_evals == 0 {
        Err(Error::InvalidConfig("max_evals must be > 0".into()))
    } else {
        Ok(())
    }
}

/// EIB block size: `evals / max_evals * dim`, rounded half up and kept in `[1, dim]`.
pub fn eib_block_size(evals: u64, max_evals: u64, dim: usize) -> Result<usize> {
    check_budget(max_evals)?;
    if dim == 0 {
        return Err(Error::InvalidConfig("dimension must be >= 1".into()));
    }
    let evals = evals.min(max_evals) as u128;
    let max = max_evals as u128;
    let rounded = (2 * evals * dim as u128 + max) / (2 * max);
    Ok((rounded as usize).clamp(1, dim))
}

/// EIP probability: `evals / max_evals * 0.8`, floored to 0.01 steps.
pub fn eip_probability(evals: u64, max_evals: u64) -> Result<f64> {
    scheduled_probability(evals, max_evals, 0.8, 0.01)
}

/// `evals / max_evals * max_probability` floored to a multiple of `quantum`
/// and capped at `max_probability`.
pub fn scheduled_probability(
    evals: u64,
    max_evals: u64,
    max_probability: f64,
    quantum: f64,
) -> Result<f64> {
    check_budget(max_evals)?;
    // Integer arithmetic keeps the steps exact, e.g. 80 steps of 1/100.
    let per_unit = (1.0 / quantum).round() as u128;
    let max_steps = (max_probability * per_unit as f64).round() as u128;
    let evals = evals.min(max_evals) as u128;
    let steps = evals * max_steps / max_evals as u128;
    Ok((steps as f64 / per_unit as f64).min(max_probability))
}

/// Loci blocked for one offspring, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMask {
    indices: Vec<usize>,
}

impl BlockMask {
    pub fn new(mut indices: Vec<usize>, dim: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::Dimension {
                expected: dim,
                actual: bad + 1,
            });
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }
}

/// With probability `p`, picks `s` distinct loci of `dim` uniformly.
///
/// Consumes no randomness when `p == 0` or `s == 0`, so a disabled policy
/// leaves the caller's random stream untouched.
pub fn sample_block_mask<R: Rng + ?Sized>(
    p: f64,
    s: usize,
    dim: usize,
    rng: &mut R,
) -> Option<BlockMask> {
    if p <= 0.0 || s == 0 || dim == 0 {
        return None;
    }
    if rng.random::<f64>() >= p {
        return None;
    }
    let mut indices = index::sample(rng, dim, s.min(dim)).into_vec();
    indices.sort_unstable();
    Some(BlockMask { indices })
}

/// Copies the parent's genes into `child` at every blocked locus.
pub fn apply_block(parent: &[f64], child: &[f64], mask: Option<&BlockMask>) -> Result<Vec<f64>> {
    check_len(parent.len(), child.len())?;
    let mut out = child.to_vec();
    if let Some(mask) = mask {
        for &i in mask.indices() {
            let gene = parent.get(i).ok_or(Error::Dimension {
                expected: parent.len(),
                actual: i + 1,
            })?;
            out[i] = *gene;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eib_examples() {
        assert_eq!(eib_block_size(0, 100_000, 30).unwrap(), 1);
        assert_eq!(eib_block_size(100_000, 100_000, 30).unwrap(), 30);
        assert_eq!(eib_block_size(50_000, 100_000, 30).unwrap(), 15);
        assert!(eib_block_size(0, 0, 30).is_err());
        // round half up: 1/60 of the budget is half a variable
        assert_eq!(eib_block_size(5, 300, 30).unwrap(), 1);
        assert_eq!(eib_block_size(25, 300, 30).unwrap(), 3);
    }

    #[test]
    fn eip_examples() {
        assert_eq!(eip_probability(0, 100_000).unwrap(), 0.0);
        assert_eq!(eip_probability(100_000, 100_000).unwrap(), 0.8);
        assert_eq!(eip_probability(25_000, 100_000).unwrap(), 0.2);
        assert_eq!(eip_probability(1_249, 100_000).unwrap(), 0.0);
        assert_eq!(eip_probability(1_250, 100_000).unwrap(), 0.01);
        assert!(eip_probability(1, 0).is_err());
    }

    #[test]
    fn effective_parameters_table() {
        let e = BlockingPolicy::new(BlockingVariant::E);
        for evals in [0, 500, 100_000] {
            let p = e.effective_parameters(evals, 100_000, 30).unwrap();
            assert_eq!((p.probability, p.block_size), (0.1, 6));
        }
        let eip = BlockingPolicy::new(BlockingVariant::Eip);
        let p = eip.effective_parameters(100_000, 100_000, 30).unwrap();
        assert_eq!((p.probability, p.block_size), (0.8, 6));
        let p = e.effective_parameters(0, 100_000, 4).unwrap();
        assert_eq!((p.probability, p.block_size), (0.1, 4));
        let off = BlockingPolicy::off()
            .effective_parameters(10, 100, 30)
            .unwrap();
        assert_eq!((off.probability, off.block_size), (0.0, 0));
        let eib = BlockingPolicy::new(BlockingVariant::Eib);
        let p = eib.effective_parameters(50_000, 100_000, 30).unwrap();
        assert_eq!((p.probability, p.block_size), (0.1, 15));
    }

    #[test]
    fn variant_names() {
        assert_eq!(
            "baseline".parse::<BlockingVariant>().unwrap(),
            BlockingVariant::Off
        );
        assert_eq!(
            "off".parse::<BlockingVariant>().unwrap(),
            BlockingVariant::Off
        );
        assert_eq!(
            "EIB".parse::<BlockingVariant>().unwrap(),
            BlockingVariant::Eib
        );
        assert!("eibx".parse::<BlockingVariant>().is_err());
    }

    #[test]
    fn mask_sampling_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(sample_block_mask(0.0, 6, 30, &mut rng).is_none());
        }
        let full = sample_block_mask(1.0, 30, 30, &mut rng).unwrap();
        assert_eq!(full.indices(), (0..30).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn disabled_sampler_leaves_stream_untouched() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        assert!(sample_block_mask(0.0, 6, 30, &mut a).is_none());
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }

    #[test]
    fn apply_block_examples() {
        let parent = [1.0, 2.0, 3.0];
        let child = [9.0, 9.0, 9.0];
        assert_eq!(apply_block(&parent, &child, None).unwrap(), child.to_vec());
        let empty = BlockMask::new(vec![], 3).unwrap();
        assert_eq!(
            apply_block(&parent, &child, Some(&empty)).unwrap(),
            child.to_vec()
        );
        let all = BlockMask::new(vec![2, 0, 1], 3).unwrap();
        assert_eq!(
            apply_block(&parent, &child, Some(&all)).unwrap(),
            parent.to_vec()
        );
        let one = BlockMask::new(vec![1], 3).unwrap();
        assert_eq!(
            apply_block(&parent, &child, Some(&one)).unwrap(),
            vec![9.0, 2.0, 9.0]
        );
        assert!(apply_block(&parent, &child[..2], None).is_err());
        assert!(BlockMask::new(vec![3], 3).is_err());
    }
}
