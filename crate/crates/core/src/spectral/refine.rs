//! Reduction to indecomposable form and conjugacy comparison.

use super::{band_winding, track_bands_with, Band, EigenSystem, TrackOptions};
use crate::error::{Error, Result};
use crate::symbol::SymbolMatrix;

/// Largest deviation between `a` and `b` rotated by `shift` covering
/// positions.
fn rotated_distance(
    a: &[num_complex::Complex64],
    b: &[num_complex::Complex64],
    shift: usize,
) -> f64 {
    let len = a.len();
    (0..len)
        .map(|k| (a[k] - b[(k + shift) % len]).norm())
        .fold(0.0, f64::max)
}

/// Smallest proper divisor `c` of `d` with `λ(e^{2πic/d}ζ) = λ(ζ)` within
/// `tol`, if any.
pub fn rotation_period(band: &Band, base_grid: usize, tol: f64) -> Option<usize> {
    (1..band.d)
        .filter(|c| band.d.is_multiple_of(*c))
        .find(|&c| rotated_distance(&band.samples, &band.samples, c * base_grid) < tol)
}

/// Replaces every rotation-symmetric band by copies of its contraction until
/// no band is symmetric, and marks the result indecomposable.
pub fn refine_system(sys: &EigenSystem, tol: f64) -> Result<EigenSystem> {
    let m = sys.base_grid;
    let mut bands = Vec::with_capacity(sys.bands.len());
    for band in &sys.bands {
        let mut band = band.clone();
        while let Some(c) = rotation_period(&band, m, tol) {
            // λ̃(η) = λ(η^{1/b}) with b = d/c: its samples at exp(2πik/(cM))
            // are the first cM samples of λ.
            let copies = band.d / c;
            let samples = band.samples[..c * m].to_vec();
            let winding = band_winding(&samples)?;
            band = Band {
                d: c,
                winding,
                multiplicity: band.multiplicity * copies,
                samples,
            };
        }
        bands.push(band);
    }
    Ok(EigenSystem {
        n: sys.n,
        bands,
        indecomposable: true,
        base_grid: m,
    })
}

/// Whether two bands agree up to rotation `ζ ↦ e^{2πic/d}ζ` within `tol`.
pub fn bands_equivalent(a: &Band, b: &Band, base_grid: usize, tol: f64) -> bool {
    a.d == b.d
        && a.samples.len() == b.samples.len()
        && (0..a.d).any(|c| rotated_distance(&a.samples, &b.samples, c * base_grid) < tol)
}

/// Multiplicity-respecting bijection between the bands of two refined
/// systems on the same grid.
pub fn are_conjugate_systems(a: &EigenSystem, b: &EigenSystem, tol: f64) -> bool {
    if a.n != b.n || a.base_grid != b.base_grid {
        return false;
    }
    let m = a.base_grid;
    // Equivalence is transitive, so greedy matching by multiplicity totals is
    // exact: compare the multiplicity mass of each equivalence class.
    let mut claimed_a = vec![false; a.bands.len()];
    for i in 0..a.bands.len() {
        if claimed_a[i] {
            continue;
        }
        let rep = &a.bands[i];
        let mut mass_a = 0;
        for (j, other) in a.bands.iter().enumerate() {
            if !claimed_a[j] && bands_equivalent(rep, other, m, tol) {
                claimed_a[j] = true;
                mass_a += other.multiplicity;
            }
        }
        let mass_b: usize = b
            .bands
            .iter()
            .filter(|other| bands_equivalent(rep, other, m, tol))
            .map(|o| o.multiplicity)
            .sum();
        if mass_a != mass_b {
            return false;
        }
    }
    let total_a: usize = a.bands.iter().map(|x| x.multiplicity * x.d).sum();
    let total_b: usize = b.bands.iter().map(|x| x.multiplicity * x.d).sum();
    total_a == total_b
}

/// Tracks and refines both walks on a common grid and compares their
/// systems of eigenvalue functions.
pub fn are_conjugate(w1: &SymbolMatrix, w2: &SymbolMatrix, tol: f64) -> Result<bool> {
    if w1.dim() != w2.dim() {
        return Err(Error::DimensionMismatch {
            expected: w1.dim(),
            found: w2.dim(),
        });
    }
    let mut opts = TrackOptions::default();
    loop {
        let a = track_bands_with(w1, &opts)?;
        let b = track_bands_with(w2, &opts)?;
        if a.base_grid == b.base_grid {
            let a = refine_system(&a, tol)?;
            let b = refine_system(&b, tol)?;
            return Ok(are_conjugate_systems(&a, &b, tol));
        }
        opts.base_grid = a.base_grid.max(b.base_grid);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model_walk, ModelWalkSpec};
    use crate::spectral::track_bands;
    use crate::symbol::LaurentPoly;
    use crate::walks;
    use num_complex::Complex64;

    fn model(d: usize, terms: &[(i64, f64)]) -> SymbolMatrix {
        let lambda =
            LaurentPoly::from_terms(terms.iter().map(|&(s, c)| (s, Complex64::new(c, 0.0))));
        build_model_walk(&ModelWalkSpec::new(d, lambda)).unwrap()
    }

    #[test]
    fn squared_zeta_splits_into_two_copies() {
        // U_{2,ζ²} = S₁ ⊕ S₁ up to relabeling: tracking already merges it.
        let sys = track_bands(&model(2, &[(2, 1.0)]), 64, 1e-6).unwrap();
        let refined = refine_system(&sys, 1e-6).unwrap();
        assert_eq!(refined.bands.len(), 1);
        assert_eq!(
            (
                refined.bands[0].d,
                refined.bands[0].multiplicity,
                refined.bands[0].winding
            ),
            (1, 2, 1)
        );
    }

    #[test]
    fn synthetic_symmetric_band_contracts() {
        let m = 64;
        let samples: Vec<Complex64> = (0..2 * m)
            .map(|k| crate::grid::point(k, 2 * m).powi(2))
            .collect();
        let sys = EigenSystem {
            n: 2,
            bands: vec![Band {
                d: 2,
                winding: 2,
                multiplicity: 1,
                samples,
            }],
            indecomposable: false,
            base_grid: m,
        };
        let r = refine_system(&sys, 1e-9).unwrap();
        assert_eq!(r.bands.len(), 1);
        assert_eq!(
            (r.bands[0].d, r.bands[0].multiplicity, r.bands[0].winding),
            (1, 2, 1)
        );
        assert!(r.indecomposable);
        assert_eq!(refine_system(&r, 1e-9).unwrap(), r);
    }

    #[test]
    fn modified_walk_is_already_indecomposable() {
        let sys = track_bands(&walks::modified_hadamard(), 256, 1e-6).unwrap();
        let r = refine_system(&sys, 1e-6).unwrap();
        assert_eq!(r.bands.len(), 1);
        assert_eq!(r.bands[0].d, 2);
        assert!(!r.is_decomposable());
    }

    #[test]
    fn conjugacy_examples() {
        let h = walks::hadamard();
        assert!(are_conjugate(&h, &h, 1e-8).unwrap());
        assert!(!are_conjugate(&SymbolMatrix::shift(1), &SymbolMatrix::shift(-1), 1e-8).unwrap());
        let u = walks::modified_hadamard();
        let v = walks::permutation_matrix(&[1, 0]);
        let mixed = crate::symbol::CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.6, 0.0),
            ],
        );
        for c in [v, mixed] {
            assert!(are_conjugate(&u, &u.conjugate_by(&c).unwrap(), 1e-8).unwrap());
        }
    }
}
