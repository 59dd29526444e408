//! Uniform grids on the unit circle.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// Angle of the `k`-th point of an `m`-point uniform grid.
#[inline]
pub fn angle(k: usize, m: usize) -> f64 {
    TAU * k as f64 / m as f64
}

/// `exp(2πik/m)`
#[inline]
pub fn point(k: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, angle(k, m))
}

pub fn points(m: usize) -> impl Iterator<Item = Complex64> {
    (0..m).map(move |k| point(k, m))
}

/// Principal argument of `b / a` in `(-π, π]`.
#[inline]
pub fn arg_increment(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// Continuous branch of the argument along a sampled path, starting from the
/// principal argument of the first sample.
pub fn unwrap_arg(samples: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(samples.len());
    let Some(first) = samples.first() else {
        return out;
    };
    let mut acc = first.arg();
    out.push(acc);
    for pair in samples.windows(2) {
        acc += arg_increment(pair[0], pair[1]);
        out.push(acc);
    }
    out
}

/// Total argument accumulated around a closed sampled loop (last sample
/// connects back to the first).
pub fn closed_arg_total(samples: &[Complex64]) -> f64 {
    let n = samples.len();
    (0..n)
        .map(|k| arg_increment(samples[k], samples[(k + 1) % n]))
        .sum()
}
