//! Discrete Fourier helpers on uniform circle grids.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::symbol::LaurentPoly;

fn fft(data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let plan = if inverse {
        planner.plan_fft_inverse(data.len())
    } else {
        planner.plan_fft_forward(data.len())
    };
    plan.process(data);
}

/// Signed frequency of FFT bin `m` for length `n`.
#[inline]
pub fn signed_freq(m: usize, n: usize) -> i64 {
    if m < n.div_ceil(2) {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// Laurent coefficients `c(s)` of a function sampled at `exp(2πik/N)`,
/// dropping coefficients with magnitude below `threshold`.
pub fn laurent_from_samples(samples: &[Complex64], threshold: f64) -> LaurentPoly {
    let n = samples.len();
    let mut buf = samples.to_vec();
    fft(&mut buf, false);
    let scale = 1.0 / n as f64;
    LaurentPoly::from_terms(
        buf.iter()
            .enumerate()
            .map(|(m, &c)| (signed_freq(m, n), c * scale))
            .filter(|(_, c)| c.norm() >= threshold),
    )
}

/// Values `Σ_s x(s) z_jˢ` at `z_j = exp(2πij/N)` for a finitely supported
/// sequence `x` starting at site `offset`.
pub fn fourier_series_on_grid(values: &[Complex64], offset: i64, n: usize) -> Vec<Complex64> {
    // Σ_s x(s) z^s with z = e^{2πij/N} is an inverse DFT of x folded mod N.
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, &v) in values.iter().enumerate() {
        let s = offset + i as i64;
        buf[s.rem_euclid(n as i64) as usize] += v;
    }
    fft(&mut buf, true);
    buf
}

/// Inverse of [`fourier_series_on_grid`]: recovers `x(s)` for
/// `s ∈ offset..offset+len` from grid values (requires `len ≤ N`).
pub fn sequence_from_grid(values: &[Complex64], offset: i64, len: usize) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    fft(&mut buf, false);
    let scale = 1.0 / n as f64;
    (0..len)
        .map(|i| buf[(offset + i as i64).rem_euclid(n as i64) as usize] * scale)
        .collect()
}

/// Spectral derivative of a real periodic function sampled on `N` uniform
/// points of `[0, 2π)`, together with the fraction of non-constant energy in
/// the upper half of the resolvable frequencies (`|m| ≥ N/4`).
pub fn spectral_derivative(samples: &[f64]) -> (Vec<f64>, f64) {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft(&mut buf, false);

    let mut total = 0.0;
    let mut tail = 0.0;
    for (m, c) in buf.iter().enumerate() {
        let k = signed_freq(m, n);
        if k == 0 {
            continue;
        }
        let e = c.norm_sqr();
        total += e;
        if 4 * k.unsigned_abs() as usize >= n {
            tail += e;
        }
    }
    let tail_fraction = if total > 1e-24 * (n as f64).powi(2) {
        tail / total
    } else {
        0.0
    };

    for (m, c) in buf.iter_mut().enumerate() {
        let k = signed_freq(m, n);
        if n.is_multiple_of(2) && m == n / 2 {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= Complex64::new(0.0, k as f64);
        }
    }
    fft(&mut buf, true);
    let scale = 1.0 / n as f64;
    (buf.iter().map(|c| c.re * scale).collect(), tail_fraction)
}
