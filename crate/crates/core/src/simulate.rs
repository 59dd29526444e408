//! Lattice evolution of finitely supported vectors and position statistics.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::grid;
use crate::symbol::{fit_decay, SymbolMatrix, MAX_POLY_ORDER};

/// Amplitudes below this are discarded when truncating rapidly decreasing vectors.
pub const TRUNCATION_THRESHOLD: f64 = 1e-14;

/// A finitely supported vector in `ℓ₂(Z) ⊗ Cⁿ`.
///
/// Stored densely over a contiguous site window; channels are zero-based in
/// the API and 1-based in JSON.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    offset: i64,
    data: Vec<Complex64>,
}

impl PartialEq for StateVector {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.iter().eq(other.iter())
    }
}

impl StateVector {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            offset: 0,
            data: Vec::new(),
        }
    }

    /// `δ_site ⊗ δ_channel`
    pub fn delta(n: usize, site: i64, channel: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n];
        data[channel] = Complex64::new(1.0, 0.0);
        Self {
            n,
            offset: site,
            data,
        }
    }

    /// `δ_site ⊗ v`
    pub fn local(site: i64, v: &[Complex64]) -> Self {
        Self {
            n: v.len(),
            offset: site,
            data: v.to_vec(),
        }
    }

    /// Collects `(site, channel, amplitude)` triples; repeats are summed.
    pub fn from_amplitudes<I>(n: usize, amps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, usize, Complex64)>,
    {
        let amps: Vec<_> = amps.into_iter().collect();
        if let Some(&(_, k, _)) = amps.iter().find(|(_, k, _)| *k >= n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: k + 1,
            });
        }
        let Some(lo) = amps.iter().map(|a| a.0).min() else {
            return Ok(Self::zero(n));
        };
        let hi = amps.iter().map(|a| a.0).max().expect("nonempty");
        let mut data = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize * n];
        for (s, k, a) in amps {
            data[(s - lo) as usize * n + k] += a;
        }
        Ok(Self {
            n,
            offset: lo,
            data,
        })
    }

    pub fn channels(&self) -> usize {
        self.n
    }

    fn sites(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn get(&self, site: i64, channel: usize) -> Complex64 {
        let i = site - self.offset;
        if i < 0 || i as usize >= self.sites() || channel >= self.n {
            return Complex64::new(0.0, 0.0);
        }
        self.data[i as usize * self.n + channel]
    }

    /// Nonzero amplitudes as `(site, channel, amplitude)` in site order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, usize, Complex64)> + '_ {
        let n = self.n;
        let offset = self.offset;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(move |(i, &a)| (offset + (i / n) as i64, i % n, a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let k = 1.0 / self.norm();
        Self {
            n: self.n,
            offset: self.offset,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    /// Smallest and largest site carrying a nonzero amplitude.
    pub fn support(&self) -> Option<(i64, i64)> {
        let mut it = self.iter();
        let first = it.next()?.0;
        let last = it.last().map_or(first, |a| a.0);
        Some((first, last))
    }

    /// `max |s|` over the support.
    pub fn support_radius(&self) -> i64 {
        self.support().map_or(0, |(lo, hi)| lo.abs().max(hi.abs()))
    }

    /// `‖self − other‖₂`
    pub fn distance(&self, other: &Self) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.sites() as i64).max(other.offset + other.sites() as i64);
        let mut acc = 0.0;
        for s in lo..hi {
            for k in 0..self.n.max(other.n) {
                acc += (self.get(s, k) - other.get(s, k)).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Drops amplitudes with magnitude below `threshold`; returns the kept
    /// vector and the discarded mass.
    pub fn truncated(&self, threshold: f64) -> (Self, f64) {
        let mut discarded = 0.0;
        let kept: Vec<_> = self
            .iter()
            .filter(|(_, _, a)| {
                if a.norm() < threshold {
                    discarded += a.norm_sqr();
                    false
                } else {
                    true
                }
            })
            .collect();
        (
            Self::from_amplitudes(self.n, kept).expect("same channels"),
            discarded,
        )
    }

    /// Removes leading and trailing all-zero sites.
    fn trim(&mut self) {
        match self.support() {
            None => {
                self.data.clear();
                self.offset = 0;
            }
            Some((lo, hi)) => {
                let start = (lo - self.offset) as usize * self.n;
                let end = (hi - self.offset + 1) as usize * self.n;
                self.data.truncate(end);
                self.data.drain(..start);
                self.offset = lo;
            }
        }
    }

    /// `Σ_s x(s) zˢ` per channel on the `m`-point grid; `result[j][k]` is
    /// channel `k` at `z_j`.
    pub fn fourier_on_grid(&self, m: usize) -> Vec<Vec<Complex64>> {
        let per_channel: Vec<Vec<Complex64>> = (0..self.n)
            .map(|k| {
                let seq: Vec<_> = (0..self.sites())
                    .map(|i| self.data[i * self.n + k])
                    .collect();
                fourier::fourier_series_on_grid(&seq, self.offset, m)
            })
            .collect();
        (0..m)
            .map(|j| per_channel.iter().map(|c| c[j]).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
struct AmpJson {
    site: i64,
    channel: usize,
    re: f64,
    im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    n: usize,
    amps: Vec<AmpJson>,
}

impl StateVector {
    /// Parses `{ "n": int, "amps": [ { "site", "channel" (1-based), "re", "im" } ] }`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: StateJson = serde_json::from_str(text)?;
        if doc.n == 0 {
            return Err(Error::InvalidArgument("field `n` must be positive".into()));
        }
        if let Some(a) = doc
            .amps
            .iter()
            .find(|a| a.channel == 0 || a.channel > doc.n)
        {
            return Err(Error::InvalidArgument(format!(
                "channel {} outside 1..={}",
                a.channel, doc.n
            )));
        }
        Self::from_amplitudes(
            doc.n,
            doc.amps
                .iter()
                .map(|a| (a.site, a.channel - 1, Complex64::new(a.re, a.im))),
        )
    }

    pub fn to_json_string(&self) -> String {
        let doc = StateJson {
            n: self.n,
            amps: self
                .iter()
                .map(|(site, k, a)| AmpJson {
                    site,
                    channel: k + 1,
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }
}

/// Precomputed convolution stencil of a finite-propagation walk.
#[derive(Clone, Debug)]
struct Stencil {
    n: usize,
    radius: i64,
    /// `(k, l, u, c)`: output channel, input channel, shift, coefficient.
    taps: Vec<(usize, usize, i64, Complex64)>,
}

impl Stencil {
    fn new(w: &SymbolMatrix) -> Self {
        let taps = w
            .entries()
            .flat_map(|(k, l, p)| p.terms().map(move |(u, c)| (k, l, u, c)))
            .collect();
        Self {
            n: w.dim(),
            radius: w.propagation_radius(),
            taps,
        }
    }

    fn apply(&self, xi: &StateVector) -> StateVector {
        let n = self.n;
        let r = self.radius;
        let in_sites = xi.sites();
        if in_sites == 0 {
            return StateVector::zero(n);
        }
        let out_sites = in_sites + 2 * r as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); out_sites * n];
        for &(k, l, u, c) in &self.taps {
            let base = (u + r) as usize;
            for i in 0..in_sites {
                let a = xi.data[i * n + l];
                out[(i + base) * n + k] += c * a;
            }
        }
        StateVector {
            n,
            offset: xi.offset - r,
            data: out,
        }
    }
}

fn check_channels(w: &SymbolMatrix, xi: &StateVector) -> Result<()> {
    if w.dim() != xi.channels() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: xi.channels(),
        });
    }
    Ok(())
}

/// One step: `(Uξ)(s, k) = Σ_{l,u} c_{k,l}(u) · ξ(s − u, l)`.
pub fn apply_walk(w: &SymbolMatrix, xi: &StateVector) -> Result<StateVector> {
    check_channels(w, xi)?;
    let mut out = Stencil::new(w).apply(xi);
    out.trim();
    Ok(out)
}

/// `Uᵗ ξ` by repeated exact convolution.
pub fn evolve(w: &SymbolMatrix, xi: &StateVector, t: usize) -> Result<StateVector> {
    let mut ev = Evolution::new(w, xi)?;
    ev.advance_to(t);
    Ok(ev.into_state())
}

/// Incremental evolution, for sampling several times along one trajectory.
#[derive(Clone, Debug)]
pub struct Evolution {
    stencil: Stencil,
    state: StateVector,
    time: usize,
}

impl Evolution {
    pub fn new(w: &SymbolMatrix, xi: &StateVector) -> Result<Self> {
        check_channels(w, xi)?;
        Ok(Self {
            stencil: Stencil::new(w),
            state: xi.clone(),
            time: 0,
        })
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(mut self) -> StateVector {
        self.state.trim();
        self.state
    }

    /// Advances to time `t` (no-op if already past it).
    pub fn advance_to(&mut self, t: usize) {
        while self.time < t {
            self.state = self.stencil.apply(&self.state);
            self.time += 1;
            if self.time.is_multiple_of(64) {
                self.state.trim();
            }
        }
        self.state.trim();
    }
}

/// `P[ξ]({s}) = Σ_k |ξ(s, k)|²` at a given time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositionDistribution {
    pub time: usize,
    pub probs: BTreeMap<i64, f64>,
}

impl PositionDistribution {
    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn prob(&self, site: i64) -> f64 {
        self.probs.get(&site).copied().unwrap_or(0.0)
    }

    /// `½ Σ |p(s) − q(s)|`
    pub fn total_variation(&self, other: &Self) -> f64 {
        let mut acc = 0.0;
        for (s, p) in &self.probs {
            acc += (p - other.prob(*s)).abs();
        }
        for (s, q) in &other.probs {
            if !self.probs.contains_key(s) {
                acc += q.abs();
            }
        }
        0.5 * acc
    }

    /// `Σ_s (s/t)ᵐ P(s)`
    pub fn rescaled_moment(&self, t: usize, m: u32) -> f64 {
        let t = t as f64;
        self.probs
            .iter()
            .map(|(&s, &p)| (s as f64 / t).powi(m as i32) * p)
            .sum()
    }

    /// Mass of `{ s : |s/t| ≤ x }`.
    pub fn mass_within(&self, t: usize, x: f64) -> f64 {
        self.probs
            .iter()
            .filter(|(&s, _)| (s as f64 / t as f64).abs() <= x)
            .map(|(_, p)| p)
            .sum()
    }

    /// CSV `site,prob`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "site,prob")?;
        for (s, p) in &self.probs {
            writeln!(out, "{s},{}", crate::fmt17(*p))?;
        }
        Ok(())
    }

    /// CSV `x,prob` with `x = s/t`.
    pub fn write_rescaled_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,prob")?;
        let t = self.time.max(1) as f64;
        for (s, p) in &self.probs {
            writeln!(out, "{},{}", crate::fmt17(*s as f64 / t), crate::fmt17(*p))?;
        }
        Ok(())
    }
}

/// Position distribution of `ξ`, labelled with time `t`; sites with zero
/// probability are omitted.
pub fn position_distribution(xi: &StateVector, time: usize) -> PositionDistribution {
    let mut probs = BTreeMap::new();
    for (s, _, a) in xi.iter() {
        *probs.entry(s).or_insert(0.0) += a.norm_sqr();
    }
    PositionDistribution { time, probs }
}

/// `Σ_s (s/t)ᵐ P[ξ](s)`
pub fn rescaled_moment(xi: &StateVector, t: usize, m: u32) -> f64 {
    position_distribution(xi, t).rescaled_moment(t, m)
}

/// Distribution of `Uᵗξ` computed in Fourier space on an `m`-point grid:
/// `Û(z)ᵗ ξ̂(z)` transformed back. Exact when `m` exceeds the support width
/// of the evolved vector.
pub fn fourier_distribution(
    w: &SymbolMatrix,
    xi: &StateVector,
    t: usize,
    m: usize,
) -> Result<PositionDistribution> {
    check_channels(w, xi)?;
    let Some((lo, hi)) = xi.support() else {
        return Ok(PositionDistribution {
            time: t,
            probs: BTreeMap::new(),
        });
    };
    let reach = w.propagation_radius() * t as i64;
    let (lo, hi) = (lo - reach, hi + reach);
    let width = (hi - lo + 1) as usize;
    if width > m {
        return Err(Error::InvalidArgument(format!(
            "grid of {m} points cannot resolve support width {width}"
        )));
    }
    let n = w.dim();
    let hat = xi.fourier_on_grid(m);
    let evolved: Vec<Vec<Complex64>> = hat
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let u = w.eval(grid::point(j, m)).expect("nonzero");
            let vec = nalgebra::DVector::from_column_slice(v);
            let out = u.pow(t as u32) * vec;
            out.iter().copied().collect()
        })
        .collect();
    let mut probs = BTreeMap::new();
    for k in 0..n {
        let values: Vec<_> = evolved.iter().map(|v| v[k]).collect();
        for (i, a) in fourier::sequence_from_grid(&values, lo, width)
            .iter()
            .enumerate()
        {
            *probs.entry(lo + i as i64).or_insert(0.0) += a.norm_sqr();
        }
    }
    Ok(PositionDistribution { time: t, probs })
}

/// Decay classes of initial vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum InitialClass {
    FiniteSupport,
    ExponentialType { r: f64 },
    RapidDecrease,
    Other,
}

impl InitialClass {
    /// Whether the weak limit theorem applies.
    pub fn admits_limit(&self) -> bool {
        !matches!(self, InitialClass::Other)
    }
}

/// Classifies the decay of `ξ` from its amplitudes on sites `|s| ≤ cutoff`.
pub fn classify_initial(xi: &StateVector, cutoff: usize) -> Result<InitialClass> {
    if cutoff < 4 {
        return Err(Error::CutoffTooSmall { cutoff });
    }
    let mut profile = vec![0.0_f64; cutoff + 1];
    for (s, _, a) in xi.iter() {
        let k = s.unsigned_abs() as usize;
        if k <= cutoff {
            profile[k] = profile[k].max(a.norm());
        }
    }
    let fit = fit_decay(&profile)?;
    Ok(
        if fit.finite_radius.is_some() && xi.support_radius() <= cutoff as i64 {
            InitialClass::FiniteSupport
        } else if fit.exponential_accepted() {
            InitialClass::ExponentialType { r: fit.rate }
        } else if (1..=MAX_POLY_ORDER).all(|p| fit.decays_with_order(p)) {
            InitialClass::RapidDecrease
        } else {
            InitialClass::Other
        },
    )
}
