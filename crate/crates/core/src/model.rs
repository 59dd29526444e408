//! Model walks `U_{d,λ}`, the rearrangement `W_d`, shift factorization and
//! continuous-time generators.
//!
//! For `λ(ζ) = Σ c(s) ζˢ` the model walk on `ℓ₂(Z) ⊗ C^d` has entries
//! `U_{k,l} = Σ_s c(k − l + d·s) S_s`. Its symbol at `z = ζ^d` has eigenvalues
//! `λ(ζ)` over the `d` roots, with eigenvectors `(1, ζ⁻¹, …, ζ^{1−d})`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::grid;
use crate::simulate::StateVector;
use crate::symbol::{LaurentPoly, SymbolMatrix};

/// Grid used for the unimodularity check of `λ`.
pub const UNIMODULAR_GRID: usize = 256;
pub const UNIMODULAR_TOL: f64 = 1e-9;
/// Truncation threshold when λ is only available as samples.
pub const SAMPLE_TRUNCATION: f64 = 1e-12;

/// `(d, λ)` with `λ` given by its Fourier coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelWalkSpec {
    pub d: usize,
    pub lambda: LaurentPoly,
}

impl ModelWalkSpec {
    pub fn new(d: usize, lambda: LaurentPoly) -> Self {
        Self { d, lambda }
    }

    /// `λ` from samples on the uniform grid of its own circle, via DFT with
    /// truncation at [`SAMPLE_TRUNCATION`].
    pub fn from_samples(d: usize, samples: &[Complex64]) -> Self {
        Self {
            d,
            lambda: fourier::laurent_from_samples(samples, SAMPLE_TRUNCATION),
        }
    }

    /// `max | |λ(z)| − 1 |` on the check grid.
    pub fn unimodular_deviation(&self) -> f64 {
        grid::points(UNIMODULAR_GRID)
            .map(|z| (self.lambda.eval(z).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn eval_lambda(&self, zeta: Complex64) -> Complex64 {
        self.lambda.eval(zeta)
    }
}

/// Builds the `d × d` symbol of `U_{d,λ}`.
pub fn build_model_walk(spec: &ModelWalkSpec) -> Result<SymbolMatrix> {
    let d = spec.d;
    if d == 0 {
        return Err(Error::InvalidArgument(
            "model degree d must be positive".into(),
        ));
    }
    let deviation = spec.unimodular_deviation();
    if deviation >= UNIMODULAR_TOL {
        return Err(Error::LambdaNotUnimodular { deviation });
    }
    let di = d as i64;
    let mut w = SymbolMatrix::zeros(d);
    for (sigma, c) in spec.lambda.terms() {
        // σ = k − l + d·s with k, l ∈ 1..=d: one entry per column l.
        for l in 1..=di {
            let k = (sigma + l - 1).rem_euclid(di) + 1;
            let s = (sigma - k + l) / di;
            let (row, col) = ((k - 1) as usize, (l - 1) as usize);
            let mut p = w.entry(row, col).clone();
            p.add_term(s, c);
            w.set(row, col, p);
        }
    }
    Ok(w)
}

/// `max ‖Û(ζᵈ)v(ζ) − λ(ζ)v(ζ)‖` over `samples` points `ζ` of the circle, with
/// `v(ζ) = (1, ζ⁻¹, …, ζ^{1−d})`.
pub fn model_eigenvector_residual(spec: &ModelWalkSpec, samples: usize) -> Result<f64> {
    let w = build_model_walk(spec)?;
    let d = spec.d as i32;
    let mut worst: f64 = 0.0;
    for zeta in grid::points(samples) {
        let u = w.eval(zeta.powi(d))?;
        let v = nalgebra::DVector::from_fn(spec.d, |k, _| zeta.powi(-(k as i32)));
        let lambda = spec.lambda.eval(zeta);
        worst = worst.max((u * &v - v * lambda).norm());
    }
    Ok(worst)
}

/// `W_d`: `δ_s ⊗ δ_k ↦ δ_{k + d·s}` (channels 1-based), onto the 1-state lattice.
pub fn rearrange(xi: &StateVector) -> StateVector {
    let d = xi.channels() as i64;
    StateVector::from_amplitudes(1, xi.iter().map(|(s, k, a)| ((k as i64 + 1) + d * s, 0, a)))
        .expect("single channel")
}

/// `W_d*`: inverse of [`rearrange`].
pub fn unrearrange(xi: &StateVector, d: usize) -> StateVector {
    let di = d as i64;
    StateVector::from_amplitudes(
        d,
        xi.iter().map(|(m, _, a)| {
            let k = (m - 1).rem_euclid(di) + 1;
            ((m - k) / di, (k - 1) as usize, a)
        }),
    )
    .expect("channels in range")
}

/// Max ℓ₂ deviation between `W_d* U_{1,λ} W_d ξ` and `U_{d,λ} ξ` over the
/// test vectors.
pub fn rearrangement_check(spec: &ModelWalkSpec, test_vectors: &[StateVector]) -> Result<f64> {
    let direct = build_model_walk(spec)?;
    let one_state = build_model_walk(&ModelWalkSpec::new(1, spec.lambda.clone()))?;
    let mut worst: f64 = 0.0;
    for xi in test_vectors {
        let lhs = crate::simulate::apply_walk(&direct, xi)?;
        let through = unrearrange(
            &crate::simulate::apply_walk(&one_state, &rearrange(xi))?,
            spec.d,
        );
        worst = worst.max(lhs.distance(&through));
    }
    Ok(worst)
}

/// Winding number of samples of a closed loop on the unit circle.
pub fn sampled_winding(samples: &[Complex64]) -> (i64, f64) {
    let turns = grid::closed_arg_total(samples) / std::f64::consts::TAU;
    let w = turns.round();
    (w as i64, (turns - w).abs())
}

/// Grid used to measure the winding of a coefficient-given `λ`.
const WINDING_GRID: usize = 1024;

/// Factors `U_{1,λ} = S_w · U_{1,ζ^{−w}λ}` with `w` the winding of `λ`.
pub fn shift_factorization(spec: &ModelWalkSpec) -> Result<(i64, ModelWalkSpec)> {
    if spec.d != 1 {
        return Err(Error::InvalidArgument(
            "shift factorization needs the 1-state form; rearrange first".into(),
        ));
    }
    let samples: Vec<_> = grid::points(WINDING_GRID)
        .map(|z| spec.lambda.eval(z))
        .collect();
    let (w, residual) = sampled_winding(&samples);
    if residual >= 0.01 {
        return Err(Error::WindingNotIntegral { residual });
    }
    Ok((w, ModelWalkSpec::new(1, spec.lambda.shifted(-w))))
}

/// A real generator `h` with `exp(i·h) = λ` on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CtGenerator {
    pub h_samples: Vec<f64>,
    /// Zero Fourier mode of `h`.
    pub mean_value: f64,
}

impl CtGenerator {
    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.h_samples.len();
        (0..m).map(move |k| grid::angle(k, m))
    }

    /// Symbol of the one-parameter family at time `t`: `exp(i·t·h)` on the grid.
    pub fn family_symbol(&self, t: f64) -> Vec<Complex64> {
        self.h_samples
            .iter()
            .map(|&h| Complex64::from_polar(1.0, t * h))
            .collect()
    }

    /// CSV with columns `theta,h`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "theta,h")?;
        for (theta, h) in self.thetas().zip(&self.h_samples) {
            writeln!(out, "{},{}", crate::fmt17(theta), crate::fmt17(*h))?;
        }
        Ok(())
    }
}

/// Continuous branch of `arg λ`, which closes when the winding is zero.
pub fn ct_generator(lambda_samples: &[Complex64]) -> Result<CtGenerator> {
    if lambda_samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let gap = grid::closed_arg_total(lambda_samples);
    if gap.abs() >= 0.01 * std::f64::consts::TAU {
        return Err(Error::NonzeroWinding {
            winding: (gap / std::f64::consts::TAU).round() as i64,
        });
    }
    let h = grid::unwrap_arg(lambda_samples);
    let mean_value = h.iter().sum::<f64>() / h.len() as f64;
    Ok(CtGenerator {
        h_samples: h,
        mean_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::apply_walk;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zeta_pow(k: i64) -> LaurentPoly {
        LaurentPoly::monomial(k, c(1.0, 0.0))
    }

    #[test]
    fn degree_one_monomial_is_shift() {
        let w = build_model_walk(&ModelWalkSpec::new(1, zeta_pow(1))).unwrap();
        assert_eq!(w, SymbolMatrix::shift(1));
    }

    #[test]
    fn degree_two_monomial() {
        let w = build_model_walk(&ModelWalkSpec::new(2, zeta_pow(1))).unwrap();
        assert!(w.entry(0, 0).is_zero() && w.entry(1, 1).is_zero());
        assert_eq!(*w.entry(0, 1), zeta_pow(1));
        assert_eq!(*w.entry(1, 0), LaurentPoly::one());
    }

    #[test]
    fn constant_lambda_is_identity() {
        let w = build_model_walk(&ModelWalkSpec::new(2, LaurentPoly::one())).unwrap();
        assert_eq!(w, SymbolMatrix::identity(2));
    }

    #[test]
    fn non_unimodular_rejected() {
        let lambda = LaurentPoly::from_terms([(0, c(1.0, 0.0)), (1, c(0.5, 0.0))]);
        assert!(matches!(
            build_model_walk(&ModelWalkSpec::new(2, lambda)),
            Err(Error::LambdaNotUnimodular { .. })
        ));
    }

    #[test]
    fn rearrangement_on_delta() {
        let spec = ModelWalkSpec::new(2, zeta_pow(1));
        let xi = StateVector::delta(2, 0, 0);
        let direct = apply_walk(&build_model_walk(&spec).unwrap(), &xi).unwrap();
        assert_eq!(direct, StateVector::delta(2, 0, 1));
        assert_eq!(rearrangement_check(&spec, &[xi]).unwrap(), 0.0);

        let xi1 = StateVector::delta(1, 4, 0);
        assert_eq!(rearrange(&xi1), StateVector::delta(1, 5, 0));
        assert_eq!(
            rearrangement_check(&ModelWalkSpec::new(1, zeta_pow(3)), &[xi1]).unwrap(),
            0.0
        );
    }

    #[test]
    fn shift_factorization_examples() {
        let (w, rest) = shift_factorization(&ModelWalkSpec::new(1, zeta_pow(1))).unwrap();
        assert_eq!(w, 1);
        assert_eq!(rest.lambda, LaurentPoly::one());

        let i = LaurentPoly::constant(c(0.0, 1.0));
        let (w, rest) = shift_factorization(&ModelWalkSpec::new(1, i.clone())).unwrap();
        assert_eq!(w, 0);
        assert_eq!(rest.lambda, i);
    }

    #[test]
    fn generator_examples() {
        let g = ct_generator(&vec![c(1.0, 0.0); 64]).unwrap();
        assert!(g.h_samples.iter().all(|h| *h == 0.0));
        assert_eq!(g.mean_value, 0.0);

        let zeta: Vec<_> = grid::points(64).collect();
        assert!(matches!(
            ct_generator(&zeta),
            Err(Error::NonzeroWinding { winding: 1 })
        ));
    }

    #[test]
    fn generator_for_coined_band() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let m = 256;
        let samples: Vec<_> = (0..m)
            .map(|k| {
                let ct = r * grid::angle(k, m).cos();
                c(ct, (1.0 - ct * ct).sqrt())
            })
            .collect();
        let g = ct_generator(&samples).unwrap();
        for (k, h) in g.h_samples.iter().enumerate() {
            let expected = (r * grid::angle(k, m).cos()).acos();
            assert!((h - expected).abs() < 1e-12);
            assert!((Complex64::from_polar(1.0, *h) - samples[k]).norm() < 1e-8);
        }
        let half = g.family_symbol(0.5);
        assert!((half[0] * half[0] - samples[0]).norm() < 1e-12);
    }
}
