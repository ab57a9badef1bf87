use rand::Rng;

use super::DEParams;
use crate::epigenetics::BlockMask;

pub fn clip_to_bounds(genome: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, &(lo, hi)) in genome.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

/// DE/rand/1 with binomial crossover against `target`, clipped to `bounds`.
///
/// Each gene takes `r1 + F (r2 - r3)` with probability `CR`, otherwise the
/// target's gene. One uniform draw is consumed per gene.
pub fn de_variation<R: Rng + ?Sized>(
    target: &[f64],
    r1: &[f64],
    r2: &[f64],
    r3: &[f64],
    params: &DEParams,
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> Vec<f64> {
    let mut child: Vec<f64> = (0..target.len())
        .map(|j| {
            if rng.random::<f64>() < params.cr {
                r1[j] + params.f * (r2[j] - r3[j])
            } else {
                target[j]
            }
        })
        .collect();
    clip_to_bounds(&mut child, bounds);
    child
}

/// Bounded polynomial mutation; every gene mutates independently with
/// probability `pm`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    genome: &[f64],
    pm: f64,
    eta_m: f64,
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> Vec<f64> {
    mutate_unblocked(genome, pm, eta_m, bounds, None, rng)
}

/// As [`polynomial_mutation`] but loci in `shielded` are left untouched and
/// consume no randomness.
pub(crate) fn mutate_unblocked<R: Rng + ?Sized>(
    genome: &[f64],
    pm: f64,
    eta_m: f64,
    bounds: &[(f64, f64)],
    shielded: Option<&BlockMask>,
    rng: &mut R,
) -> Vec<f64> {
    let mut out = genome.to_vec();
    if pm <= 0.0 {
        return out;
    }
    let power = 1.0 / (eta_m + 1.0);
    for (j, (v, &(lo, hi))) in out.iter_mut().zip(bounds).enumerate() {
        if shielded.is_some_and(|m| m.contains(j)) {
            continue;
        }
        if rng.random::<f64>() >= pm || hi <= lo {
            continue;
        }
        let span = hi - lo;
        let d1 = (*v - lo) / span;
        let d2 = (hi - *v) / span;
        let u: f64 = rng.random();
        let dq = if u < 0.5 {
            let base = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta_m + 1.0);
            base.powf(power) - 1.0
        } else {
            let base = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta_m + 1.0);
            1.0 - base.powf(power)
        };
        *v = (*v + dq * span).clamp(lo, hi);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(f: f64, cr: f64) -> DEParams {
        DEParams {
            f,
            cr,
            ..DEParams::default()
        }
    }

    #[test]
    fn de_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let wide = [(-10.0, 10.0); 2];
        let child = de_variation(
            &[0.0, 0.0],
            &[1.0, 1.0],
            &[1.0, 0.0],
            &[0.0, 1.0],
            &params(0.5, 1.0),
            &wide,
            &mut rng,
        );
        assert_eq!(child, vec![1.5, 0.5]);
        let unit = [(0.0, 1.0); 2];
        let clipped = de_variation(
            &[0.0, 0.0],
            &[1.0, 1.0],
            &[1.0, 0.0],
            &[0.0, 1.0],
            &params(0.5, 1.0),
            &unit,
            &mut rng,
        );
        assert_eq!(clipped, vec![1.0, 0.5]);
    }

    #[test]
    fn de_degenerate_rates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = [(-10.0, 10.0); 3];
        let (t, r1, r2, r3) = (
            [0.1, 0.2, 0.3],
            [1.0, 2.0, 3.0],
            [5.0, 5.0, 5.0],
            [4.0, 0.0, 1.0],
        );
        assert_eq!(
            de_variation(&t, &r1, &r2, &r3, &params(0.0, 1.0), &b, &mut rng),
            r1.to_vec()
        );
        assert_eq!(
            de_variation(&t, &r1, &r2, &r3, &params(0.5, 0.0), &b, &mut rng),
            t.to_vec()
        );
    }

    #[test]
    fn mutation_zero_probability_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = vec![0.3, -0.2, 0.9];
        assert_eq!(
            polynomial_mutation(&g, 0.0, 20.0, &[(-1.0, 1.0); 3], &mut rng),
            g
        );
    }

    #[test]
    fn mutation_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bounds = [(0.0, 1.0), (-1.0, 1.0)];
        for _ in 0..10_000 {
            let out = polynomial_mutation(&[0.0, 1.0], 1.0, 20.0, &bounds, &mut rng);
            assert!((0.0..=1.0).contains(&out[0]));
            assert!((-1.0..=1.0).contains(&out[1]));
        }
    }

    #[test]
    fn larger_index_means_smaller_steps() {
        // Monte-Carlo over 1e5 draws from the centre of [0, 1].
        let bounds = [(0.0, 1.0)];
        let mean_step = |eta: f64| {
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let n = 100_000;
            (0..n)
                .map(|_| (polynomial_mutation(&[0.5], 1.0, eta, &bounds, &mut rng)[0] - 0.5).abs())
                .sum::<f64>()
                / n as f64
        };
        let (m20, m5) = (mean_step(20.0), mean_step(5.0));
        assert!(m20 < m5, "eta=20 mean {m20} vs eta=5 mean {m5}");
        // Closed form of E|dq| from the centre: with v = 2u (or 2 - 2u) uniform,
        // |dq| = 1 - (c + (1 - c) v)^(1/(eta+1)) and c = 0.5^(eta+1).
        let expected = |eta: f64| {
            let c = 0.5f64.powf(eta + 1.0);
            let k = (eta + 2.0) / (eta + 1.0);
            1.0 - (1.0 - c.powf(k)) / (k * (1.0 - c))
        };
        assert!(
            (m20 - expected(20.0)).abs() < 2e-3,
            "{m20} vs {}",
            expected(20.0)
        );
        assert!(
            (m5 - expected(5.0)).abs() < 2e-3,
            "{m5} vs {}",
            expected(5.0)
        );
    }
}
