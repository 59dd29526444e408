//! Branch tracking of eigenvalues around the base circle.

use num_complex::Complex64;

use super::eig::{cluster, eigenvalues, min_cost_assignment};
use super::{Band, EigenSystem};
use crate::error::{Error, Result};
use crate::grid;
use crate::symbol::{verify_unitary_symbol, SymbolMatrix};

/// Grid used for the unitarity precondition.
const UNITARITY_GRID: usize = 256;
const UNITARITY_TOL: f64 = 1e-9;

/// Tracking parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackOptions {
    /// Base grid size `M` (power of two, at least 64).
    pub base_grid: usize,
    /// Closure and cluster-spread tolerance.
    pub tol: f64,
    /// Distance below which eigenvalues count as one degenerate band.
    pub degeneracy_tol: f64,
    /// Largest grid tried before giving up.
    pub max_grid: usize,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            base_grid: 1024,
            tol: 1e-6,
            degeneracy_tol: 1e-8,
            max_grid: 1 << 16,
        }
    }
}

/// Tracks the eigenvalue functions of `Û` on an `m`-point base grid.
///
/// The grid is doubled until the monodromy permutation agrees on two
/// successive resolutions; the system on the coarser of the two is returned.
pub fn track_bands(w: &SymbolMatrix, m: usize, tol: f64) -> Result<EigenSystem> {
    track_bands_with(
        w,
        &TrackOptions {
            base_grid: m,
            tol,
            ..TrackOptions::default()
        },
    )
}

pub fn track_bands_with(w: &SymbolMatrix, opts: &TrackOptions) -> Result<EigenSystem> {
    let m = opts.base_grid;
    if m < 64 || !m.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "base grid {m} must be a power of two >= 64"
        )));
    }
    if w.dim() > 16 {
        return Err(Error::DimensionTooLarge {
            n: w.dim(),
            max: 16,
        });
    }
    let report = verify_unitary_symbol(w, UNITARITY_GRID, UNITARITY_TOL);
    if !report.pass {
        return Err(Error::NotUnitary {
            deviation: report.max_deviation,
        });
    }

    let values = grid_eigenvalues(w, m);
    let j0 = start_point(&values, opts.degeneracy_tol);
    let strands = cluster_strands(&values[j0], opts.degeneracy_tol);

    let mut grid_size = m;
    let mut start = j0;
    let mut current = run_loop(&values, start, &strands, opts.tol);
    loop {
        if grid_size * 2 > opts.max_grid {
            return Err(Error::GridResolutionExceeded {
                max_grid: opts.max_grid,
            });
        }
        let finer_values = grid_eigenvalues(w, grid_size * 2);
        let finer = run_loop(&finer_values, start * 2, &strands, opts.tol);
        match (&current, &finer) {
            (Some(a), Some(b)) if a.perm == b.perm => {
                return assemble(w.dim(), grid_size, start, &strands, a);
            }
            _ => {}
        }
        current = finer;
        grid_size *= 2;
        start *= 2;
    }
}

fn grid_eigenvalues(w: &SymbolMatrix, m: usize) -> Vec<Vec<Complex64>> {
    (0..m)
        .map(|i| eigenvalues(&w.eval(grid::point(i, m)).expect("grid points are nonzero")))
        .collect()
}

/// Grid point with the most distinct eigenvalues, ties broken by the widest
/// minimal gap.
fn start_point(values: &[Vec<Complex64>], deg_tol: f64) -> usize {
    let mut best = (0usize, f64::NEG_INFINITY, 0usize);
    for (i, v) in values.iter().enumerate() {
        let groups = cluster(v, deg_tol);
        let centers: Vec<Complex64> = groups.iter().map(|g| mean(v, g)).collect();
        let mut gap = f64::INFINITY;
        for a in 0..centers.len() {
            for b in (a + 1)..centers.len() {
                gap = gap.min((centers[a] - centers[b]).norm());
            }
        }
        if groups.len() > best.0 || (groups.len() == best.0 && gap > best.1 + 1e-12) {
            best = (groups.len(), gap, i);
        }
    }
    best.2
}

fn mean(values: &[Complex64], idx: &[usize]) -> Complex64 {
    idx.iter().map(|&i| values[i]).sum::<Complex64>() / idx.len() as f64
}

/// Strands at the start point: value and multiplicity.
#[derive(Clone, Debug)]
struct Strand {
    value: Complex64,
    multiplicity: usize,
}

fn cluster_strands(values: &[Complex64], deg_tol: f64) -> Vec<Strand> {
    cluster(values, deg_tol)
        .into_iter()
        .map(|g| Strand {
            value: mean(values, &g),
            multiplicity: g.len(),
        })
        .collect()
}

struct LoopRun {
    /// Start strand reached by strand `s` after one loop.
    perm: Vec<usize>,
    /// `track[s][p]`: value of strand `s` at grid point `start + p`.
    track: Vec<Vec<Complex64>>,
}

/// Slot `i` of the `n` eigenvalue slots belongs to strand `owner[i]`.
fn owners(strands: &[Strand]) -> Vec<usize> {
    strands
        .iter()
        .enumerate()
        .flat_map(|(s, st)| std::iter::repeat_n(s, st.multiplicity))
        .collect()
}

/// Matches eigenvalues to strands by minimal total distance to `targets`,
/// returning each strand's averaged value and the largest spread within a
/// strand.
fn match_step(eig: &[Complex64], owner: &[usize], targets: &[Complex64]) -> (Vec<Complex64>, f64) {
    let n = eig.len();
    let assignment = min_cost_assignment(|slot, t| (targets[owner[slot]] - eig[t]).norm(), n);
    let k = targets.len();
    let mut sums = vec![Complex64::new(0.0, 0.0); k];
    let mut counts = vec![0usize; k];
    for (slot, &t) in assignment.iter().enumerate() {
        sums[owner[slot]] += eig[t];
        counts[owner[slot]] += 1;
    }
    let means: Vec<Complex64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    let spread = assignment
        .iter()
        .enumerate()
        .map(|(slot, &t)| (eig[t] - means[owner[slot]]).norm())
        .fold(0.0, f64::max);
    (means, spread)
}

/// One loop around the grid starting at `start`; `None` when the loop does
/// not close onto a permutation of the start strands at this resolution.
fn run_loop(
    values: &[Vec<Complex64>],
    start: usize,
    strands: &[Strand],
    tol: f64,
) -> Option<LoopRun> {
    let m = values.len();
    let owner = owners(strands);
    let k = strands.len();
    let start_values: Vec<Complex64> = strands.iter().map(|s| s.value).collect();

    let (mut prev, _) = match_step(&values[(start + m - 1) % m], &owner, &start_values);
    let mut cur = start_values.clone();
    let mut track: Vec<Vec<Complex64>> = cur.iter().map(|&v| vec![v]).collect();

    for step in 1..=m {
        let i = (start + step) % m;
        let predicted: Vec<Complex64> = cur.iter().zip(&prev).map(|(c, p)| 2.0 * c - p).collect();
        let (next, spread) = match_step(&values[i], &owner, &predicted);
        if spread > tol {
            return None;
        }
        if step < m {
            for (s, v) in next.iter().enumerate() {
                track[s].push(*v);
            }
        }
        prev = cur;
        cur = next;
    }

    let mut perm = vec![usize::MAX; k];
    let mut used = vec![false; k];
    for s in 0..k {
        let (t, dist) = (0..k)
            .filter(|&t| !used[t] && strands[t].multiplicity == strands[s].multiplicity)
            .map(|t| (t, (cur[s] - start_values[t]).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if dist > tol {
            return None;
        }
        used[t] = true;
        perm[s] = t;
    }
    Some(LoopRun { perm, track })
}

fn assemble(
    n: usize,
    m: usize,
    start: usize,
    strands: &[Strand],
    run: &LoopRun,
) -> Result<EigenSystem> {
    let k = strands.len();
    let mut seen = vec![false; k];
    let mut bands = Vec::new();
    for s0 in 0..k {
        if seen[s0] {
            continue;
        }
        let mut cycle = vec![s0];
        seen[s0] = true;
        let mut s = run.perm[s0];
        while s != s0 {
            seen[s] = true;
            cycle.push(s);
            s = run.perm[s];
        }
        let d = cycle.len();
        let mut samples = vec![Complex64::new(0.0, 0.0); d * m];
        for (l, &strand) in cycle.iter().enumerate() {
            for p in 0..m {
                let v = run.track[strand][p];
                samples[(start + l * m + p) % (d * m)] = v / v.norm();
            }
        }
        let winding = super::band_winding(&samples)?;
        bands.push(Band {
            d,
            winding,
            multiplicity: strands[s0].multiplicity,
            samples,
        });
    }
    Ok(EigenSystem {
        n,
        bands,
        indecomposable: false,
        base_grid: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walks;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn shift_is_one_band() {
        let sys = track_bands(&SymbolMatrix::shift(1), 64, 1e-6).unwrap();
        assert_eq!(sys.bands.len(), 1);
        let b = &sys.bands[0];
        assert_eq!((b.d, b.winding, b.multiplicity), (1, 1, 1));
        for (k, v) in b.samples.iter().enumerate() {
            assert!((v - grid::point(k, 64)).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_is_degenerate() {
        let sys = track_bands(&SymbolMatrix::identity(3), 64, 1e-6).unwrap();
        assert_eq!(sys.bands.len(), 1);
        assert_eq!(sys.bands[0].multiplicity, 3);
        assert_eq!(sys.bands[0].winding, 0);
    }

    #[test]
    fn hadamard_bands_match_closed_form() {
        let sys = track_bands(&walks::hadamard(), 1024, 1e-6).unwrap();
        assert_eq!(
            sys.bands.iter().map(|b| b.d).collect::<Vec<_>>(),
            vec![1, 1]
        );
        let r = FRAC_1_SQRT_2;
        for b in &sys.bands {
            let sign = if b.samples[0].im > 0.0 { 1.0 } else { -1.0 };
            for (k, v) in b.samples.iter().enumerate() {
                let c = r * grid::angle(k, 1024).cos();
                let exact = Complex64::new(c, sign * (1.0 - c * c).sqrt());
                assert!((v - exact).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn modified_walk_is_a_two_cycle() {
        let sys = track_bands(&walks::modified_hadamard(), 1024, 1e-6).unwrap();
        assert_eq!(sys.bands.len(), 1);
        assert_eq!((sys.bands[0].d, sys.bands[0].winding), (2, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            track_bands(&SymbolMatrix::shift(1), 100, 1e-6),
            Err(Error::InvalidArgument(_))
        ));
        let bad = SymbolMatrix::from_constant(&crate::symbol::CMatrix::from_element(
            1,
            1,
            Complex64::new(2.0, 0.0),
        ))
        .unwrap();
        assert!(matches!(
            track_bands(&bad, 64, 1e-6),
            Err(Error::NotUnitary { .. })
        ));
    }
}
