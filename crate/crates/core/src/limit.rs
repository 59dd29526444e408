//! Weak limit of `X_t / t`: group velocities, the band-weighted pushforward
//! measure, its moments, and comparison with simulation.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt17;
use crate::fourier;
use crate::grid;
use crate::simulate::{
    classify_initial, position_distribution, Evolution, PositionDistribution, StateVector,
};
use crate::spectral::{band_projections, BandWeights, EigenSystem};
use crate::symbol::SymbolMatrix;

/// Spectral tail fraction above which a band counts as under-resolved.
pub const TAIL_TOLERANCE: f64 = 1e-8;
/// Velocity variation below which a band becomes an exact atom.
pub const ATOM_VARIATION: f64 = 1e-9;
pub const DEFAULT_BINS: usize = 512;

/// Group velocity of one band.
#[derive(Clone, Debug, PartialEq)]
pub struct BandVelocity {
    pub d: usize,
    /// `h(θ_k)`, derivative of `arg λ` in the covering angle.
    pub h: Vec<f64>,
    /// `1/d`, converting `h` to base-lattice velocity.
    pub scale: f64,
}

impl BandVelocity {
    /// Base-scale velocity at covering point `k`.
    pub fn velocity(&self, k: usize) -> f64 {
        self.h[k] * self.scale
    }

    pub fn variation(&self) -> f64 {
        let max = self.h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.h.iter().copied().fold(f64::INFINITY, f64::min);
        (max - min) * self.scale
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VelocityProfile {
    pub bands: Vec<BandVelocity>,
}

impl VelocityProfile {
    /// `max_j max_θ |h_j(θ)| / d(j)`
    pub fn max_speed(&self) -> f64 {
        self.bands
            .iter()
            .flat_map(|b| (0..b.h.len()).map(move |k| b.velocity(k).abs()))
            .fold(0.0, f64::max)
    }
}

/// Spectral derivative of `arg λ` for every band.
pub fn group_velocities(sys: &EigenSystem) -> Result<VelocityProfile> {
    let mut bands = Vec::with_capacity(sys.bands.len());
    for band in &sys.bands {
        let len = band.samples.len();
        let w = band.winding as f64;
        let phase = grid::unwrap_arg(&band.samples);
        let periodic: Vec<f64> = phase
            .iter()
            .enumerate()
            .map(|(k, p)| p - w * grid::angle(k, len))
            .collect();
        let (deriv, tail) = fourier::spectral_derivative(&periodic);
        if tail > TAIL_TOLERANCE {
            return Err(Error::UnderResolved { tail });
        }
        let h = deriv.into_iter().map(|x| x + w).collect();
        bands.push(BandVelocity {
            d: band.d,
            h,
            scale: 1.0 / band.d as f64,
        });
    }
    Ok(VelocityProfile { bands })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub mass: f64,
}

/// Limit measure as exact atoms plus a binned continuous part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitMeasure {
    pub atoms: Vec<Point>,
    pub bins: Vec<Point>,
}

impl LimitMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().chain(&self.bins).map(|p| p.mass).sum()
    }

    /// `Σ xᵐ·mass` over atoms and bins.
    pub fn moment(&self, m: u32) -> f64 {
        self.atoms
            .iter()
            .chain(&self.bins)
            .map(|p| p.x.powi(m as i32) * p.mass)
            .sum()
    }

    /// Mass of the atom at `x` (within `tol`), zero if absent.
    pub fn atom_mass(&self, x: f64, tol: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| (a.x - x).abs() <= tol)
            .map(|a| a.mass)
            .sum()
    }

    /// Largest `|x|` carrying positive mass.
    pub fn support_bound(&self) -> f64 {
        self.atoms
            .iter()
            .chain(&self.bins)
            .filter(|p| p.mass > 0.0)
            .map(|p| p.x.abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// CSV `kind,x,mass` with atoms first.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "kind,x,mass")?;
        for a in &self.atoms {
            writeln!(out, "atom,{},{}", fmt17(a.x), fmt17(a.mass))?;
        }
        for b in &self.bins {
            writeln!(out, "bin,{},{}", fmt17(b.x), fmt17(b.mass))?;
        }
        Ok(())
    }

    /// Cumulative mass of `(-∞, x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .chain(&self.bins)
            .filter(|p| p.x <= x)
            .map(|p| p.mass)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitOptions {
    pub bins: usize,
    /// Projection clustering tolerance.
    pub tol: f64,
    /// Window `|s| ≤ cutoff` used to classify the initial vector. `None`
    /// treats the stored amplitudes as the full, finitely supported vector.
    pub cutoff: Option<usize>,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self {
            bins: DEFAULT_BINS,
            tol: 1e-6,
            cutoff: None,
        }
    }
}

/// The limit measure and the ingredients it was built from.
#[derive(Clone, Debug)]
pub struct LimitAnalysis {
    pub measure: LimitMeasure,
    pub weights: BandWeights,
    pub velocities: VelocityProfile,
}

pub fn limit_measure(
    w: &SymbolMatrix,
    xi: &StateVector,
    sys: &EigenSystem,
) -> Result<LimitMeasure> {
    Ok(limit_analysis(w, xi, sys, &LimitOptions::default())?.measure)
}

pub fn limit_analysis(
    w: &SymbolMatrix,
    xi: &StateVector,
    sys: &EigenSystem,
    opts: &LimitOptions,
) -> Result<LimitAnalysis> {
    if opts.bins == 0 {
        return Err(Error::InvalidArgument("bin count must be positive".into()));
    }
    if xi.channels() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: xi.channels(),
        });
    }
    let cutoff = opts
        .cutoff
        .unwrap_or((xi.support_radius() as usize + 1).max(4));
    if !classify_initial(xi, cutoff)?.admits_limit() {
        return Err(Error::NotRapidlyDecreasing);
    }
    let m = sys.base_grid;
    if let Some((lo, hi)) = xi.support() {
        if (hi - lo + 1) as usize >= m {
            return Err(Error::InvalidArgument(format!(
                "initial support width {} needs a base grid above {m}",
                hi - lo + 1
            )));
        }
    }

    let norm_sqr = xi.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::InvalidArgument("initial vector is zero".into()));
    }
    let scale = 1.0 / norm_sqr.sqrt();
    let xi_hat: Vec<Vec<_>> = xi
        .fourier_on_grid(m)
        .into_iter()
        .map(|v| v.into_iter().map(|c| c * scale).collect())
        .collect();
    let weights = band_projections(w, sys, &xi_hat, opts.tol)?;
    let velocities = group_velocities(sys)?;

    let mut atoms: Vec<Point> = Vec::new();
    let mut continuous: Vec<(f64, f64)> = Vec::new();
    for (j, bv) in velocities.bands.iter().enumerate() {
        let masses = weights.weights[j].iter().map(|x| x / m as f64);
        if bv.variation() < ATOM_VARIATION {
            let x = bv.h.iter().sum::<f64>() / bv.h.len() as f64 * bv.scale;
            let mass: f64 = masses.sum();
            match atoms.iter_mut().find(|a| (a.x - x).abs() < ATOM_VARIATION) {
                Some(a) => a.mass += mass,
                None => atoms.push(Point { x, mass }),
            }
        } else {
            continuous.extend(masses.enumerate().map(|(k, mass)| (bv.velocity(k), mass)));
        }
    }
    atoms.sort_by(|a, b| a.x.total_cmp(&b.x));

    let vmax = velocities.max_speed().max(f64::MIN_POSITIVE);
    let width = 2.0 * vmax / opts.bins as f64;
    // Each bin carries its mass at the mass-weighted mean velocity of its
    // samples (the center when empty), so the first moment is exact.
    let mut first = vec![0.0; opts.bins];
    let mut bins: Vec<Point> = (0..opts.bins)
        .map(|b| Point {
            x: -vmax + (b as f64 + 0.5) * width,
            mass: 0.0,
        })
        .collect();
    for (v, mass) in continuous {
        let b = (((v + vmax) / width).floor() as isize).clamp(0, opts.bins as isize - 1) as usize;
        bins[b].mass += mass;
        first[b] += mass * v;
    }
    for (bin, f) in bins.iter_mut().zip(first) {
        if bin.mass > 0.0 {
            bin.x = f / bin.mass;
        }
    }
    Ok(LimitAnalysis {
        measure: LimitMeasure { atoms, bins },
        weights,
        velocities,
    })
}

/// `∫ xᵐ dμ`
pub fn limit_moments(mu: &LimitMeasure, m: u32) -> f64 {
    mu.moment(m)
}

/// One row of [`compare_empirical`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub t: usize,
    pub m: u32,
    pub empirical: f64,
    pub limit: f64,
    pub deviation: f64,
}

/// Rescaled moments `E[(X_t/t)ᵐ]` of the simulated walk against the limit
/// measure, for `m = 1..=m_max` and each `t` in `t_list`.
pub fn compare_empirical(
    w: &SymbolMatrix,
    xi: &StateVector,
    sys: &EigenSystem,
    t_list: &[usize],
    m_max: u32,
) -> Result<Vec<ComparisonRow>> {
    let mu = limit_measure(w, xi, sys)?;
    compare_with_measure(w, xi, &mu, t_list, m_max)
}

/// As [`compare_empirical`] with a precomputed measure.
pub fn compare_with_measure(
    w: &SymbolMatrix,
    xi: &StateVector,
    mu: &LimitMeasure,
    t_list: &[usize],
    m_max: u32,
) -> Result<Vec<ComparisonRow>> {
    let mut times = t_list.to_vec();
    times.sort_unstable();
    let mut ev = Evolution::new(w, &xi.normalized())?;
    let mut rows = Vec::new();
    for &t in &times {
        if t == 0 {
            return Err(Error::InvalidArgument(
                "rescaled moments need t >= 1".into(),
            ));
        }
        ev.advance_to(t);
        let dist = position_distribution(ev.state(), t);
        for m in 1..=m_max {
            let empirical = dist.rescaled_moment(t, m);
            let limit = mu.moment(m);
            rows.push(ComparisonRow {
                t,
                m,
                empirical,
                limit,
                deviation: (empirical - limit).abs(),
            });
        }
    }
    Ok(rows)
}

/// CSV `t,m,empirical,limit,deviation`.
pub fn write_comparison_csv<W: Write>(rows: &[ComparisonRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,m,empirical,limit,deviation")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.t,
            r.m,
            fmt17(r.empirical),
            fmt17(r.limit),
            fmt17(r.deviation)
        )?;
    }
    Ok(())
}

/// Kolmogorov–Smirnov distance between the rescaled empirical distribution
/// and `μ`. Diagnostic only: it need not vanish at atoms.
pub fn ks_distance(dist: &PositionDistribution, mu: &LimitMeasure) -> f64 {
    let t = dist.time.max(1) as f64;
    let mut points: Vec<(f64, f64, f64)> = dist
        .probs
        .iter()
        .map(|(&s, &p)| (s as f64 / t, p, 0.0))
        .collect();
    points.extend(mu.atoms.iter().chain(&mu.bins).map(|p| (p.x, 0.0, p.mass)));
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut fe, mut fm, mut sup) = (0.0, 0.0, 0.0_f64);
    let mut i = 0;
    while i < points.len() {
        let x = points[i].0;
        while i < points.len() && points[i].0 == x {
            fe += points[i].1;
            fm += points[i].2;
            i += 1;
        }
        sup = sup.max((fe - fm).abs());
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{refine_system, track_bands, Band};
    use crate::walks;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn system(w: &SymbolMatrix, m: usize) -> EigenSystem {
        refine_system(&track_bands(w, m, 1e-6).unwrap(), 1e-6).unwrap()
    }

    #[test]
    fn velocity_of_monomial_and_constant() {
        let mk = |f: &dyn Fn(Complex64) -> Complex64, w| EigenSystem {
            n: 1,
            bands: vec![Band {
                d: 1,
                winding: w,
                multiplicity: 1,
                samples: grid::points(64).map(f).collect(),
            }],
            indecomposable: true,
            base_grid: 64,
        };
        let v = group_velocities(&mk(&|z| z, 1)).unwrap();
        assert!(v.bands[0].h.iter().all(|h| (h - 1.0).abs() < 1e-12));
        let v = group_velocities(&mk(&|_| Complex64::new(0.0, 1.0), 0)).unwrap();
        assert!(v.bands[0].h.iter().all(|h| h.abs() < 1e-12));
    }

    #[test]
    fn hadamard_velocity_closed_form() {
        let sys = system(&walks::hadamard(), 1024);
        let v = group_velocities(&sys).unwrap();
        let r = FRAC_1_SQRT_2;
        for (band, bv) in sys.bands.iter().zip(&v.bands) {
            let sign = if band.samples[0].im > 0.0 { 1.0 } else { -1.0 };
            for (k, h) in bv.h.iter().enumerate() {
                let th = grid::angle(k, 1024);
                let exact = sign * r * th.sin() / (1.0 - (r * th.cos()).powi(2)).sqrt();
                assert!((h - exact).abs() < 1e-8, "{k}: {h} vs {exact}");
            }
        }
        assert!((v.max_speed() - r).abs() < 1e-5);
    }

    #[test]
    fn under_resolved_band_is_rejected() {
        let samples: Vec<Complex64> = grid::points(64)
            .map(|z| Complex64::from_polar(1.0, 0.5 * (20.0 * z.arg()).sin()))
            .collect();
        let sys = EigenSystem {
            n: 1,
            bands: vec![Band {
                d: 1,
                winding: 0,
                multiplicity: 1,
                samples,
            }],
            indecomposable: true,
            base_grid: 64,
        };
        assert!(matches!(
            group_velocities(&sys),
            Err(Error::UnderResolved { .. })
        ));
    }

    #[test]
    fn shift_gives_unit_atom() {
        let w = SymbolMatrix::shift(1);
        let sys = system(&w, 64);
        let mu = limit_measure(&w, &StateVector::delta(1, 3, 0), &sys).unwrap();
        assert_eq!(mu.atoms.len(), 1);
        assert!((mu.atoms[0].x - 1.0).abs() < 1e-12);
        assert!((mu.atoms[0].mass - 1.0).abs() < 1e-12);
        assert!((limit_moments(&mu, 3) - 1.0).abs() < 1e-12);
        assert!((limit_moments(&mu, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_hadamard_has_zero_mean() {
        let w = walks::hadamard();
        let sys = system(&w, 1024);
        let xi = StateVector::local(
            0,
            &[
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(0.0, FRAC_1_SQRT_2),
            ],
        );
        let mu = limit_measure(&w, &xi, &sys).unwrap();
        assert!(mu.atoms.is_empty());
        assert!((mu.total_mass() - 1.0).abs() < 1e-9);
        assert!(limit_moments(&mu, 1).abs() < 1e-6);
        assert!(mu.support_bound() <= FRAC_1_SQRT_2 + 1e-6);
    }

    #[test]
    fn slow_decay_is_rejected() {
        let w = SymbolMatrix::shift(1);
        let sys = system(&w, 256);
        let amps = (-40i64..=40).map(|s| (s, 0, Complex64::new(1.0 / (1.0 + (s * s) as f64), 0.0)));
        let xi = StateVector::from_amplitudes(1, amps).unwrap();
        let opts = LimitOptions {
            cutoff: Some(40),
            ..LimitOptions::default()
        };
        assert!(matches!(
            limit_analysis(&w, &xi, &sys, &opts),
            Err(Error::NotRapidlyDecreasing)
        ));
    }

    #[test]
    fn shift_comparison_is_exact() {
        let w = SymbolMatrix::shift(1);
        let sys = system(&w, 64);
        let rows =
            compare_empirical(&w, &StateVector::delta(1, 0, 0), &sys, &[1, 10, 50], 1).unwrap();
        assert!(rows.iter().all(|r| r.deviation < 1e-15));
    }

    #[test]
    fn json_round_trip() {
        let mu = LimitMeasure {
            atoms: vec![Point { x: 0.0, mass: 0.25 }],
            bins: vec![Point {
                x: -0.1,
                mass: 0.75,
            }],
        };
        assert_eq!(
            LimitMeasure::from_json_str(&mu.to_json_string()).unwrap(),
            mu
        );
    }

    #[test]
    fn ks_of_identical_point_masses() {
        let dist = position_distribution(&StateVector::delta(1, 10, 0), 10);
        let mu = LimitMeasure {
            atoms: vec![Point { x: 1.0, mass: 1.0 }],
            bins: vec![],
        };
        assert!(ks_distance(&dist, &mu) < 1e-15);
    }
}
