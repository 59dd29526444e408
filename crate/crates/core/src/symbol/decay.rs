//! Empirical classification of coefficient decay.
//!
//! Decay constants for analytic operators are existential; here they are
//! estimated from a finite window of coefficients by least squares on
//! log-magnitudes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SymbolMatrix;
use crate::error::{Error, Result};

/// Relative RMS residual on log-magnitudes below which an exponential fit is accepted.
pub const EXP_FIT_RESIDUAL: f64 = 0.1;

/// Polynomial orders tested for smooth (rapid) decay.
pub const MAX_POLY_ORDER: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum DecayClass {
    FinitePropagation {
        radius: usize,
    },
    /// `|X(s)| ≤ c·r^{-|s|}` with fitted `r > 1`.
    AnalyticEstimate {
        c: f64,
        r: f64,
    },
    SmoothEstimate,
    Unbounded,
}

/// Diagnostics of a decay fit on a magnitude profile `m(k)`, `k = |s|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    /// Largest `k` with nonzero magnitude, when it lies strictly inside the window.
    pub finite_radius: Option<usize>,
    pub rate: f64,
    pub prefactor: f64,
    /// RMS residual of the exponential fit relative to the spread of the log-magnitudes.
    pub residual: f64,
    /// Slope of `log m(k)` against `log(1 + k)` over the upper half of the window.
    pub poly_slope: f64,
}

impl DecayFit {
    pub fn exponential_accepted(&self) -> bool {
        self.rate > 1.0 && self.residual < EXP_FIT_RESIDUAL
    }

    /// Whether decay of order `p` is detected (tail slope at most `-p`).
    pub fn decays_with_order(&self, p: u32) -> bool {
        self.poly_slope <= -(p as f64)
    }

    pub fn class(&self) -> DecayClass {
        if let Some(radius) = self.finite_radius {
            DecayClass::FinitePropagation { radius }
        } else if self.exponential_accepted() {
            DecayClass::AnalyticEstimate {
                c: self.prefactor,
                r: self.rate,
            }
        } else if (1..=MAX_POLY_ORDER).all(|p| self.decays_with_order(p)) {
            DecayClass::SmoothEstimate
        } else {
            DecayClass::Unbounded
        }
    }
}

/// Least-squares line `y ≈ a + b·x`; returns `(a, b, rms residual, std of y)`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - a - b * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let sy = (ys.iter().map(|y| (y - my).powi(2)).sum::<f64>() / n).sqrt();
    (a, b, rms, sy)
}

/// Fits a magnitude profile `profile[k] = max_{|s| = k} |coefficient|`, `k = 0..=cutoff`.
pub fn fit_decay(profile: &[f64]) -> Result<DecayFit> {
    if profile.len() < 5 {
        return Err(Error::CutoffTooSmall {
            cutoff: profile.len().saturating_sub(1),
        });
    }
    let cutoff = profile.len() - 1;
    let last_nonzero = profile.iter().rposition(|&m| m > 0.0);
    let finite_radius = match last_nonzero {
        None => Some(0),
        Some(r) if r < cutoff => Some(r),
        Some(_) => None,
    };

    let (xs, ys): (Vec<f64>, Vec<f64>) = profile
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0.0)
        .map(|(k, &m)| (k as f64, m.ln()))
        .unzip();
    let (a, b, rms, sy) = if xs.len() >= 2 {
        linear_fit(&xs, &ys)
    } else {
        (0.0, 0.0, 0.0, 0.0)
    };
    let residual = if sy > 0.0 { rms / sy } else { f64::INFINITY };

    let (tx, ty): (Vec<f64>, Vec<f64>) = profile
        .iter()
        .enumerate()
        .skip(cutoff / 2)
        .filter(|(_, &m)| m > 0.0)
        .map(|(k, &m)| ((1.0 + k as f64).ln(), m.ln()))
        .unzip();
    let poly_slope = if tx.len() >= 2 {
        linear_fit(&tx, &ty).1
    } else {
        f64::NEG_INFINITY
    };

    Ok(DecayFit {
        finite_radius,
        rate: (-b).exp(),
        prefactor: a.exp(),
        residual,
        poly_slope,
    })
}

/// Magnitude profile `m(k) = max |x(s)|` over `|s| = k` and over all sequences.
///
/// Each sequence holds coefficients at shifts `-cutoff..=cutoff`.
fn profile_of(sequences: &[Vec<Complex64>], cutoff: usize) -> Result<Vec<f64>> {
    let mut profile = vec![0.0_f64; cutoff + 1];
    for seq in sequences {
        if seq.len() != 2 * cutoff + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * cutoff + 1,
                found: seq.len(),
            });
        }
        for (i, c) in seq.iter().enumerate() {
            let k = (i as i64 - cutoff as i64).unsigned_abs() as usize;
            profile[k] = profile[k].max(c.norm());
        }
    }
    Ok(profile)
}

/// Classifies the decay of a matrix of coefficient sequences given on
/// shifts `|s| ≤ cutoff`.
pub fn classify_decay(sequences: &[Vec<Complex64>], cutoff: usize) -> Result<DecayClass> {
    if cutoff < 4 {
        return Err(Error::CutoffTooSmall { cutoff });
    }
    Ok(fit_decay(&profile_of(sequences, cutoff)?)?.class())
}

impl SymbolMatrix {
    /// Entry coefficients on shifts `-cutoff..=cutoff`, one sequence per entry.
    pub fn coefficient_sequences(&self, cutoff: usize) -> Vec<Vec<Complex64>> {
        let c = cutoff as i64;
        self.entries()
            .map(|(_, _, p)| (-c..=c).map(|s| p.coeff(s)).collect())
            .collect()
    }

    pub fn decay_class(&self, cutoff: usize) -> Result<DecayClass> {
        classify_decay(&self.coefficient_sequences(cutoff), cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(cutoff: usize, f: impl Fn(f64) -> f64) -> Vec<Vec<Complex64>> {
        let c = cutoff as i64;
        vec![(-c..=c).map(|s| Complex64::new(f(s as f64), 0.0)).collect()]
    }

    #[test]
    fn shift_is_finite_propagation() {
        let class = SymbolMatrix::shift(1).decay_class(8).unwrap();
        assert_eq!(class, DecayClass::FinitePropagation { radius: 1 });
    }

    #[test]
    fn geometric_coefficients_fit_rate_two() {
        match classify_decay(&synthetic(30, |s| 2f64.powf(-s.abs())), 30).unwrap() {
            DecayClass::AnalyticEstimate { c, r } => {
                assert!((r - 2.0).abs() < 0.1, "r = {r}");
                assert!((c - 1.0).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inverse_square_is_unbounded() {
        let data = synthetic(30, |s| 1.0 / (1.0 + s * s));
        let fit = fit_decay(&profile_of(&data, 30).unwrap()).unwrap();
        assert!(!fit.exponential_accepted());
        assert!(fit.decays_with_order(1));
        assert!(!fit.decays_with_order(3));
        assert_eq!(classify_decay(&data, 30).unwrap(), DecayClass::Unbounded);
    }

    #[test]
    fn high_power_decay_is_smooth() {
        let data = synthetic(30, |s| (1.0 + s.abs()).powi(-10));
        assert_eq!(
            classify_decay(&data, 30).unwrap(),
            DecayClass::SmoothEstimate
        );
    }

    #[test]
    fn small_cutoff_rejected() {
        assert_eq!(
            classify_decay(&synthetic(3, |_| 1.0), 3),
            Err(Error::CutoffTooSmall { cutoff: 3 })
        );
    }
}
