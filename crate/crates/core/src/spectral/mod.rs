//! Systems of eigenvalue functions recovered numerically from the symbol.
//!
//! A [`Band`] of covering degree `d` stores `λ(ζ_k)` at
//! `ζ_k = exp(2πik/(dM))`, `k = 0..dM`, where `M` is the base grid size; the
//! values over the `d` roots of a base point `z_i` sit at `k = i + ℓM`.

mod eig;
mod io;
mod projection;
mod refine;
mod track;

pub use io::EigenSystemJson;
pub use projection::{band_projections, BandWeights};
pub use refine::{
    are_conjugate, are_conjugate_systems, bands_equivalent, refine_system, rotation_period,
};
pub use track::{track_bands, track_bands_with, TrackOptions};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid;

/// Residual above which an accumulated argument is not an integer winding.
pub const WINDING_RESIDUAL: f64 = 0.01;

/// One eigenvalue function on its covering circle.
#[derive(Clone, Debug, PartialEq)]
pub struct Band {
    pub d: usize,
    pub winding: i64,
    pub multiplicity: usize,
    pub samples: Vec<Complex64>,
}

impl Band {
    /// Values over base point `i`, one per sheet.
    pub fn over(&self, i: usize, base_grid: usize) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.d).map(move |l| self.samples[i + l * base_grid])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub n: usize,
    pub bands: Vec<Band>,
    pub indecomposable: bool,
    pub base_grid: usize,
}

impl EigenSystem {
    /// Number of indecomposable components counted with multiplicity.
    pub fn component_count(&self) -> usize {
        self.bands.iter().map(|b| b.multiplicity).sum()
    }

    /// A walk is decomposable iff its refined system has more than one
    /// component.
    pub fn is_decomposable(&self) -> bool {
        self.component_count() > 1
    }

    /// All eigenvalues of `Û(z_i)` as predicted by the bands, with
    /// multiplicity.
    pub fn eigenvalues_at(&self, i: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.n);
        for b in &self.bands {
            for v in b.over(i, self.base_grid) {
                out.extend(std::iter::repeat_n(v, b.multiplicity));
            }
        }
        out
    }
}

/// Largest principal argument step, as a fraction of a turn, accepted before
/// the branch between consecutive samples counts as ambiguous.
pub const MAX_ARG_STEP: f64 = 0.25;

/// Winding of a closed sampled loop.
///
/// Principal increments around a closed loop always sum to a multiple of 2π
/// up to rounding, so a loop also counts as under-resolved when any single
/// step exceeds [`MAX_ARG_STEP`] of a turn; the reported residual is then
/// that step in turns.
pub(crate) fn band_winding(samples: &[Complex64]) -> Result<i64> {
    let len = samples.len();
    let tau = std::f64::consts::TAU;
    let max_step = (0..len)
        .map(|k| grid::arg_increment(samples[k], samples[(k + 1) % len]).abs() / tau)
        .fold(0.0, f64::max);
    if max_step > MAX_ARG_STEP {
        return Err(Error::WindingNotIntegral { residual: max_step });
    }
    let turns = grid::closed_arg_total(samples) / tau;
    let rounded = turns.round();
    let residual = (turns - rounded).abs();
    if residual >= WINDING_RESIDUAL {
        return Err(Error::WindingNotIntegral { residual });
    }
    Ok(rounded as i64)
}

/// Winding number of every band, recomputed from the samples.
pub fn winding_numbers(sys: &EigenSystem) -> Result<Vec<i64>> {
    sys.bands.iter().map(|b| band_winding(&b.samples)).collect()
}

/// `Σ_j |w(λ_j)|` counted with multiplicity.
pub fn total_winding(sys: &EigenSystem) -> u64 {
    sys.bands
        .iter()
        .map(|b| b.winding.unsigned_abs() * b.multiplicity as u64)
        .sum()
}

/// True iff every band has winding zero.
pub fn ct_realizable(sys: &EigenSystem) -> bool {
    sys.bands.iter().all(|b| b.winding == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::SymbolMatrix;
    use crate::walks;

    #[test]
    fn winding_of_monomials() {
        for s in [-2i64, 0, 1, 3] {
            let sys = track_bands(&SymbolMatrix::shift(s), 64, 1e-6).unwrap();
            assert_eq!(winding_numbers(&sys).unwrap(), vec![s]);
            assert_eq!(total_winding(&sys), s.unsigned_abs());
            assert_eq!(ct_realizable(&sys), s == 0);
        }
    }

    #[test]
    fn non_integral_winding_is_an_error() {
        let samples: Vec<Complex64> = (0..64)
            .map(|k| Complex64::from_polar(1.0, 0.04 * k as f64))
            .collect();
        assert!(matches!(
            band_winding(&samples),
            Err(Error::WindingNotIntegral { .. })
        ));
    }

    #[test]
    fn predicted_eigenvalues_match_direct_ones() {
        let w = walks::grover3();
        let sys = track_bands(&w, 128, 1e-6).unwrap();
        for i in [0, 17, 64, 127] {
            let mut got = sys.eigenvalues_at(i);
            let mut want = eig::eigenvalues(&w.eval(grid::point(i, 128)).unwrap());
            let key = |c: &Complex64| (c.arg() * 1e6).round() as i64;
            got.sort_by_key(key);
            want.sort_by_key(key);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }
}
