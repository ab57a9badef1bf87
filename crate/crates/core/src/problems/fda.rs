//! FDA1-FDA3. FDA2 is the bounded variant with `H(t) = 2 sin(0.5 pi (t - 1))`
//! whose `x_III` optimum `H/4` stays inside `[-1, 1]`.

use std::f64::consts::PI;

pub(super) fn fda1(x: &[f64], t: f64) -> [f64; 2] {
    let gt = (0.5 * PI * t).sin();
    let g = 1.0 + x[1..].iter().map(|v| (v - gt).powi(2)).sum::<f64>();
    let f1 = x[0];
    [f1, g * (1.0 - (f1 / g).sqrt())]
}

pub(super) fn fda1_optimum(u: f64, t: f64, dim: usize) -> Vec<f64> {
    let gt = (0.5 * PI * t).sin();
    let mut x = vec![gt; dim];
    x[0] = u;
    x
}

fn fda2_split(dim: usize) -> usize {
    1 + (dim - 1) / 2
}

fn fda2_h(t: f64) -> f64 {
    2.0 * (0.5 * PI * (t - 1.0)).sin()
}

pub(super) fn fda2(x: &[f64], t: f64) -> [f64; 2] {
    let split = fda2_split(x.len());
    let h = fda2_h(t);
    let f1 = x[0];
    let g = 1.0 + x[1..split].iter().map(|v| v * v).sum::<f64>();
    let shape = x[split..]
        .iter()
        .map(|v| (v - h / 4.0).powi(2))
        .sum::<f64>();
    let exponent = 2f64.powf(h + shape);
    [f1, g * (1.0 - (f1 / g).powf(exponent))]
}

pub(super) fn fda2_optimum(u: f64, t: f64, dim: usize) -> Vec<f64> {
    let split = fda2_split(dim);
    let h = fda2_h(t);
    let mut x = vec![0.0; dim];
    x[0] = u;
    for v in &mut x[split..] {
        *v = h / 4.0;
    }
    x
}

fn fda3_params(t: f64) -> (f64, f64) {
    let s = (0.5 * PI * t).sin();
    (10f64.powf(2.0 * s), s.abs())
}

pub(super) fn fda3(x: &[f64], t: f64) -> [f64; 2] {
    let (ft, gt) = fda3_params(t);
    let f1 = x[0].powf(ft);
    let g = 1.0 + gt + x[1..].iter().map(|v| (v - gt).powi(2)).sum::<f64>();
    [f1, g * (1.0 - (f1 / g).sqrt())]
}

/// `u` is the target value of `f1`.
pub(super) fn fda3_optimum(u: f64, t: f64, dim: usize) -> Vec<f64> {
    let (ft, gt) = fda3_params(t);
    let mut x = vec![gt; dim];
    x[0] = u.powf(1.0 / ft);
    x
}
