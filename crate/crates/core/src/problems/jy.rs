//! JY1-JY3 and JY5-JY8.
//!
//! All members share the front shape
//! `f1 = (1 + g) (x1 + A sin(W pi x1))^a`, `f2 = (1 + g) (1 - x1 + A sin(W pi x1))^b`
//! and differ in how `A`, `W`, the exponents and `g` move with time.

use std::f64::consts::PI;

fn shaped(x1: f64, a: f64, w: f64, alpha: f64, beta: f64, g: f64) -> [f64; 2] {
    let wave = a * (w * PI * x1).sin();
    // The bases are non-negative in exact arithmetic; clamp rounding noise so
    // fractional powers stay real.
    let left = (x1 + wave).max(0.0);
    let right = (1.0 - x1 + wave).max(0.0);
    [(1.0 + g) * left.powf(alpha), (1.0 + g) * right.powf(beta)]
}

fn sin_half_pi(t: f64) -> f64 {
    (0.5 * PI * t).sin()
}

fn shifted_sq(x: &[f64], shift: f64) -> f64 {
    x[1..].iter().map(|v| (v - shift).powi(2)).sum()
}

fn varying_w(t: f64) -> f64 {
    (6.0 * sin_half_pi(t - 1.0)).floor()
}

pub(super) fn jy1(x: &[f64], t: f64) -> [f64; 2] {
    let g = shifted_sq(x, sin_half_pi(t));
    shaped(x[0], 0.05, 6.0, 1.0, 1.0, g)
}

pub(super) fn jy2(x: &[f64], t: f64) -> [f64; 2] {
    let g = shifted_sq(x, sin_half_pi(t));
    shaped(x[0], 0.05, varying_w(t), 1.0, 1.0, g)
}

fn jy3_alpha(t: f64) -> f64 {
    (100.0 * sin_half_pi(t).powi(2)).floor()
}

fn jy3_y1(x1: f64, t: f64) -> f64 {
    (x1 * ((2.0 * jy3_alpha(t) + 0.5) * PI * x1).sin()).abs()
}

pub(super) fn jy3(x: &[f64], t: f64) -> [f64; 2] {
    let y1 = jy3_y1(x[0], t);
    let mut prev = y1;
    let mut g = 0.0;
    for &v in &x[1..] {
        g += (v * v - prev).powi(2);
        prev = v;
    }
    shaped(y1, 0.05, varying_w(t), 1.0, 1.0, g)
}

/// Finds `x1` in `[0, 1]` with `|x1 sin((2 alpha + 0.5) pi x1)| = y1` by
/// bisection on the last bracket below `x1 = 1`, where the map equals 1.
fn jy3_invert(y1: f64, t: f64) -> f64 {
    let f = |x: f64| jy3_y1(x, t) - y1;
    if f(1.0) <= 0.0 {
        return 1.0;
    }
    let grid = 64 * (jy3_alpha(t) as usize + 1);
    let mut hi = 1.0;
    let mut lo = 0.0;
    for k in (0..grid).rev() {
        let x = k as f64 / grid as f64;
        if f(x) <= 0.0 {
            lo = x;
            break;
        }
        hi = x;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(hi).abs() < f(lo).abs() {
        hi
    } else {
        lo
    }
}

/// `u` is the target value of the transformed first variable `y1`.
pub(super) fn jy3_optimum(u: f64, t: f64, dim: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(dim);
    let x1 = jy3_invert(u, t);
    x.push(x1);
    let mut prev = jy3_y1(x1, t);
    for _ in 1..dim {
        let v = prev.sqrt();
        x.push(v);
        prev = v;
    }
    x
}

pub(super) fn jy5(x: &[f64], t: f64) -> [f64; 2] {
    let a = 0.3 * sin_half_pi(t - 1.0);
    shaped(x[0], a, 1.0, 1.0, 1.0, shifted_sq(x, 0.0))
}

pub(super) fn jy6(x: &[f64], t: f64) -> [f64; 2] {
    let gt = sin_half_pi(t);
    let k = 2.0 * (10.0 * gt.abs()).floor();
    let g = x[1..]
        .iter()
        .map(|v| {
            let y = v - gt;
            4.0 * y * y - (k * PI * y).cos() + 1.0
        })
        .sum();
    shaped(x[0], 0.1, 3.0, 1.0, 1.0, g)
}

pub(super) fn jy7(x: &[f64], t: f64) -> [f64; 2] {
    let gt = sin_half_pi(t);
    let power = 0.2 + 2.8 * gt.abs();
    let g = x[1..]
        .iter()
        .map(|v| {
            let y = v - gt;
            y * y - 10.0 * (2.0 * PI * y).cos() + 10.0
        })
        .sum();
    shaped(x[0], 0.1, 3.0, power, power, g)
}

fn jy8_exponents(t: f64) -> (f64, f64) {
    let beta = 10.0 - 9.8 * sin_half_pi(t);
    (2.0 / beta, beta)
}

pub(super) fn jy8(x: &[f64], t: f64) -> [f64; 2] {
    let (alpha, beta) = jy8_exponents(t);
    shaped(x[0], 0.05, 6.0, alpha, beta, shifted_sq(x, 0.0))
}

/// Optimum for the members whose `g` is minimised at `x_i = shift`.
pub(super) fn shifted_optimum(u: f64, shift: f64, dim: usize) -> Vec<f64> {
    let mut x = vec![shift; dim];
    x[0] = u;
    x
}

pub(super) fn moving_shift(t: f64) -> f64 {
    sin_half_pi(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jy3_inversion_hits_target() {
        for &t in &[0.0, 0.3, 0.9] {
            for k in 0..=20 {
                let y = k as f64 / 20.0;
                let x1 = jy3_invert(y, t);
                assert!((0.0..=1.0).contains(&x1));
                assert!((jy3_y1(x1, t) - y).abs() < 1e-12, "t={t} y={y}");
            }
        }
    }

    #[test]
    fn jy3_optimum_zeroes_linkage_term() {
        let x = jy3_optimum(0.4, 0.5, 10);
        let f = jy3(&x, 0.5);
        let y1 = jy3_y1(x[0], 0.5);
        let expected = shaped(y1, 0.05, varying_w(0.5), 1.0, 1.0, 0.0);
        assert!((f[0] - expected[0]).abs() < 1e-12);
        assert!((f[1] - expected[1]).abs() < 1e-12);
    }
}
