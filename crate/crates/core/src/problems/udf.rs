//! UDF1-UDF6, the dynamic extensions of the UF suite.
//!
//! Variables `x_2..x_n` are split into odd (`J1`) and even (`J2`) positions
//! (1-based); `J1` feeds the first objective, `J2` the second.

use std::f64::consts::PI;

const SEGMENTS: f64 = 2.0;
const GAP: f64 = 0.1;

fn g_of(t: f64) -> f64 {
    (0.5 * PI * t).sin()
}

fn sine_target(x1: f64, j: usize, n: usize, shift: f64) -> f64 {
    (6.0 * PI * x1 + j as f64 * PI / n as f64).sin() + shift
}

fn power_target(x1: f64, j: usize, n: usize, gt: f64) -> f64 {
    let exponent = 0.5 * (2.0 + 3.0 * (j as f64 - 2.0) / (n as f64 - 2.0) + gt);
    x1.powf(exponent)
}

/// Mean-squared deviations over `J1` and `J2`, each scaled by 2.
fn split_squares(x: &[f64], target: impl Fn(usize) -> f64) -> (f64, f64) {
    let n = x.len();
    let (mut odd, mut even) = ((0.0, 0usize), (0.0, 0usize));
    for j in 2..=n {
        let y = x[j - 1] - target(j);
        let slot = if j % 2 == 1 { &mut odd } else { &mut even };
        slot.0 += y * y;
        slot.1 += 1;
    }
    (2.0 * odd.0 / odd.1 as f64, 2.0 * even.0 / even.1 as f64)
}

/// Multimodal deviation terms `2/|J| (4 sum y^2 - 2 prod cos(20 y pi / sqrt j) + 2)`.
fn split_multimodal(x: &[f64], target: impl Fn(usize) -> f64) -> (f64, f64) {
    let n = x.len();
    let mut acc = [(0.0, 1.0, 0usize); 2];
    for j in 2..=n {
        let y = x[j - 1] - target(j);
        let slot = &mut acc[j % 2];
        slot.0 += y * y;
        slot.1 *= (20.0 * y * PI / (j as f64).sqrt()).cos();
        slot.2 += 1;
    }
    let term =
        |(sq, prod, count): (f64, f64, usize)| 2.0 / count as f64 * (4.0 * sq - 2.0 * prod + 2.0);
    (term(acc[1]), term(acc[0]))
}

fn disconnection(x1: f64) -> f64 {
    (2.0 * (0.5 / SEGMENTS + GAP) * (2.0 * SEGMENTS * PI * x1).sin()).max(0.0)
}

pub(super) fn udf1(x: &[f64], t: f64) -> [f64; 2] {
    let gt = g_of(t);
    let n = x.len();
    let (h1, h2) = split_squares(x, |j| sine_target(x[0], j, n, gt));
    [x[0] + gt.abs() + h1, 1.0 - x[0] + gt.abs() + h2]
}

pub(super) fn udf2(x: &[f64], t: f64) -> [f64; 2] {
    let gt = g_of(t);
    let n = x.len();
    let (h1, h2) = split_squares(x, |j| power_target(x[0], j, n, gt) + gt);
    [x[0] + gt.abs() + h1, 1.0 - x[0] + gt.abs() + h2]
}

pub(super) fn udf3(x: &[f64], t: f64) -> [f64; 2] {
    let gt = g_of(t);
    let n = x.len();
    let (h1, h2) = split_multimodal(x, |j| sine_target(x[0], j, n, 0.0));
    let gap = disconnection(x[0]);
    [x[0] + gap + gt.abs() + h1, 1.0 - x[0] + gap + gt.abs() + h2]
}

fn udf45_shape(t: f64) -> (f64, f64) {
    let a = 0.5 + g_of(t).abs();
    (a, a)
}

pub(super) fn udf4(x: &[f64], t: f64) -> [f64; 2] {
    let gt = g_of(t);
    let n = x.len();
    let k = (n as f64 * gt).ceil();
    let (scale, power) = udf45_shape(t);
    let (h1, h2) = split_squares(x, |j| {
        (6.0 * PI * x[0] + (j as f64 + k) * PI / n as f64).sin()
    });
    [x[0] + h1, 1.0 - scale * x[0].powf(power) + h2]
}

pub(super) fn udf5(x: &[f64], t: f64) -> [f64; 2] {
    let gt = g_of(t);
    let n = x.len();
    let (scale, power) = udf45_shape(t);
    let (h1, h2) = split_squares(x, |j| power_target(x[0], j, n, gt));
    [x[0] + h1, 1.0 - scale * x[0].powf(power) + h2]
}

pub(super) fn udf6(x: &[f64], t: f64) -> [f64; 2] {
    let gt = g_of(t);
    let n = x.len();
    let (h1, h2) = split_multimodal(x, |j| sine_target(x[0], j, n, gt));
    let gap = disconnection(x[0]);
    [x[0] + gap + gt.abs() + h1, 1.0 - x[0] + gap + gt.abs() + h2]
}

/// Zero-deviation genome for UDF member `which` (1-based) at first variable `u`.
pub(super) fn optimum(which: u8, u: f64, t: f64, dim: usize) -> Vec<f64> {
    let gt = g_of(t);
    let n = dim;
    let mut x = vec![u; dim];
    for j in 2..=n {
        x[j - 1] = match which {
            1 | 6 => sine_target(u, j, n, gt),
            2 => power_target(u, j, n, gt) + gt,
            3 => sine_target(u, j, n, 0.0),
            4 => {
                let k = (n as f64 * gt).ceil();
                (6.0 * PI * u + (j as f64 + k) * PI / n as f64).sin()
            }
            5 => power_target(u, j, n, gt),
            _ => unreachable!("UDF{which} is not part of the suite"),
        };
    }
    x
}
