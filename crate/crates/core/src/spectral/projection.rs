//! Weights of a vector field `ξ̂(z)` on the eigenspaces of `Û(z)`.

use num_complex::Complex64;

use super::eig::{cluster, eigen};
use super::EigenSystem;
use crate::error::{Error, Result};
use crate::grid;
use crate::symbol::SymbolMatrix;

/// `weights[j][k]`: weight of band `j` at covering point `k` (over base
/// point `k mod M`), already including the band multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct BandWeights {
    pub weights: Vec<Vec<f64>>,
}

impl BandWeights {
    /// Total weight over base point `i`.
    pub fn total_at(&self, i: usize, base_grid: usize) -> f64 {
        self.weights
            .iter()
            .map(|w| (i..w.len()).step_by(base_grid).map(|k| w[k]).sum::<f64>())
            .sum()
    }

    /// Mean weight of band `j` over the base grid.
    pub fn band_mean(&self, j: usize, base_grid: usize) -> f64 {
        self.weights[j].iter().sum::<f64>() / base_grid as f64
    }
}

struct Shared {
    total: f64,
    members: Vec<(usize, usize, usize)>,
}

/// Computes `‖P_λ(z_i) ξ̂(z_i)‖²` for every tracked eigenvalue.
///
/// `xi_hat[i]` is `ξ̂(z_i)` on the system's base grid. Eigenvalues of `Û(z)`
/// are clustered at `tol`; a cluster holding a single tracked value gives it
/// the whole projected weight. Where distinct tracked values meet (a band
/// crossing on the grid), the cluster weight is split in proportion to each
/// value's weight at the neighbouring covering points.
pub fn band_projections(
    w: &SymbolMatrix,
    sys: &EigenSystem,
    xi_hat: &[Vec<Complex64>],
    tol: f64,
) -> Result<BandWeights> {
    let m = sys.base_grid;
    if xi_hat.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: xi_hat.len(),
        });
    }
    let n = w.dim();
    let mut resolved: Vec<Vec<Option<f64>>> = sys
        .bands
        .iter()
        .map(|b| vec![None; b.samples.len()])
        .collect();
    let mut shared: Vec<(usize, Shared)> = Vec::new();

    for (i, xi) in xi_hat.iter().enumerate() {
        if xi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: xi.len(),
            });
        }
        let e = eigen(&w.eval(grid::point(i, m))?);
        let groups = cluster(&e.values, tol);
        let xi_vec = nalgebra::DVector::from_column_slice(xi);
        let cluster_weight: Vec<f64> = groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&c| e.vectors.column(c).dotc(&xi_vec).norm_sqr())
                    .sum()
            })
            .collect();

        let mut members: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); groups.len()];
        for (j, band) in sys.bands.iter().enumerate() {
            for l in 0..band.d {
                let k = i + l * m;
                let v = band.samples[k];
                let (g, dist) = groups
                    .iter()
                    .enumerate()
                    .map(|(g, idx)| {
                        let d = idx
                            .iter()
                            .map(|&c| (e.values[c] - v).norm())
                            .fold(f64::INFINITY, f64::min);
                        (g, d)
                    })
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("at least one eigenvalue");
                if dist > tol.max(1e-9) * 10.0 {
                    return Err(Error::ClusterAmbiguous { index: i });
                }
                members[g].push((j, k, band.multiplicity));
            }
        }
        for (g, mem) in members.into_iter().enumerate() {
            let dim: usize = mem.iter().map(|x| x.2).sum();
            if dim != groups[g].len() {
                return Err(Error::ClusterAmbiguous { index: i });
            }
            if mem.len() == 1 {
                resolved[mem[0].0][mem[0].1] = Some(cluster_weight[g]);
            } else {
                shared.push((
                    i,
                    Shared {
                        total: cluster_weight[g],
                        members: mem,
                    },
                ));
            }
        }
    }

    for (i, s) in &shared {
        let estimates: Vec<f64> = s
            .members
            .iter()
            .map(|&(j, k, _)| {
                let len = resolved[j].len();
                let near = [resolved[j][(k + 1) % len], resolved[j][(k + len - 1) % len]];
                let known: Vec<f64> = near.iter().flatten().copied().collect();
                if known.is_empty() {
                    None
                } else {
                    Some(known.iter().sum::<f64>() / known.len() as f64)
                }
            })
            .collect::<Option<Vec<f64>>>()
            .ok_or(Error::ClusterAmbiguous { index: *i })?;
        let sum: f64 = estimates.iter().sum();
        let mult_sum: usize = s.members.iter().map(|x| x.2).sum();
        for (&(j, k, mult), est) in s.members.iter().zip(&estimates) {
            let share = if sum > 1e-300 {
                est / sum
            } else {
                mult as f64 / mult_sum as f64
            };
            resolved[j][k] = Some(s.total * share);
        }
    }

    let weights = resolved
        .into_iter()
        .map(|band| {
            band.into_iter()
                .map(|x| x.expect("every covering point assigned"))
                .collect()
        })
        .collect();
    Ok(BandWeights { weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::track_bands;
    use crate::walks;

    fn constant_field(m: usize, v: &[Complex64]) -> Vec<Vec<Complex64>> {
        vec![v.to_vec(); m]
    }

    #[test]
    fn one_state_walk_gets_everything() {
        let w = SymbolMatrix::shift(2);
        let sys = track_bands(&w, 64, 1e-6).unwrap();
        let xi: Vec<Vec<Complex64>> = (0..64).map(|i| vec![grid::point(i, 64) * 0.5]).collect();
        let bw = band_projections(&w, &sys, &xi, 1e-6).unwrap();
        for v in &bw.weights[0] {
            assert!((v - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn grover_flat_band_weight_at_one() {
        let w = walks::grover3();
        let sys = track_bands(&w, 256, 1e-6).unwrap();
        let e2 = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let bw = band_projections(&w, &sys, &constant_field(256, &e2), 1e-6).unwrap();
        let flat = sys
            .bands
            .iter()
            .position(|b| b.d == 1 && (b.samples[5] - Complex64::new(1.0, 0.0)).norm() < 1e-9)
            .expect("flat band");
        // Û(1) is the Grover coin; its eigenvalue-1 eigenvector is (1,1,1)/√3.
        assert!(
            (bw.weights[flat][0] - 1.0 / 3.0).abs() < 1e-9,
            "{}",
            bw.weights[flat][0]
        );
        for i in 0..256 {
            assert!((bw.total_at(i, 256) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn crossing_on_grid_is_resolved() {
        // Two decoupled 1-state walks whose eigenvalues meet at z = 1.
        let w =
            SymbolMatrix::direct_sum(&[SymbolMatrix::shift(1), SymbolMatrix::shift(-1)]).unwrap();
        let sys = track_bands(&w, 64, 1e-6).unwrap();
        assert_eq!(sys.bands.len(), 2);
        let v = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let bw = band_projections(&w, &sys, &constant_field(64, &v), 1e-6).unwrap();
        for (j, b) in sys.bands.iter().enumerate() {
            let expected = if b.winding == 1 { 0.36 } else { 0.64 };
            for x in &bw.weights[j] {
                assert!((x - expected).abs() < 1e-12);
            }
        }
    }
}
