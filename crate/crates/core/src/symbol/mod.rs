//! Finite-propagation homogeneous walks as matrices of Laurent polynomials.
//!
//! A walk `U` on `ℓ₂(Z) ⊗ Cⁿ` with matrix coefficients `X((s,k),(t,l))`
//! depending only on `s - t` is stored through its symbol: entry `(k, l)` is
//! the Laurent polynomial `Σ_s X_{k,l}(s) zˢ`, so that `S₁` (the shift
//! `δ_t ↦ δ_{t+1}`) corresponds to the monomial `z`.

mod charpoly;
mod decay;
mod io;
mod laurent;

pub use charpoly::{char_poly, verify_cayley_hamilton, CharPoly, MAX_EXACT_DIM};
pub use decay::{
    classify_decay, fit_decay, DecayClass, DecayFit, EXP_FIT_RESIDUAL, MAX_POLY_ORDER,
};
pub use io::{EntrySpec, ModelSpecJson, WalkFile};
pub use laurent::{LaurentPoly, Term, PRUNE_THRESHOLD};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid;

/// Dense complex matrix type used for evaluated symbols.
pub type CMatrix = DMatrix<Complex64>;

/// An `n × n` matrix of Laurent polynomials: the symbol `Û(z)` of a
/// finite-propagation homogeneous operator.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolMatrix {
    n: usize,
    entries: Vec<LaurentPoly>,
}

/// Result of [`verify_unitary_symbol`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitarityReport {
    pub pass: bool,
    pub max_deviation: f64,
}

impl SymbolMatrix {
    /// Builds a symbol from row-major entries.
    pub fn new(n: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "internal dimension must be positive".into(),
            ));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![LaurentPoly::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut w = Self::zeros(n);
        for k in 0..n {
            w.set(k, k, LaurentPoly::one());
        }
        w
    }

    /// The 1-state shift `S_s`, symbol `zˢ`.
    pub fn shift(s: i64) -> Self {
        Self {
            n: 1,
            entries: vec![LaurentPoly::monomial(s, Complex64::new(1.0, 0.0))],
        }
    }

    /// A constant (site-local) operator.
    pub fn from_constant(m: &CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let n = m.nrows();
        let entries = (0..n * n)
            .map(|idx| LaurentPoly::constant(m[(idx / n, idx % n)]))
            .collect();
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `(k, l)`, zero-based.
    pub fn entry(&self, k: usize, l: usize) -> &LaurentPoly {
        &self.entries[k * self.n + l]
    }

    pub fn set(&mut self, k: usize, l: usize, p: LaurentPoly) {
        self.entries[k * self.n + l] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &LaurentPoly)> {
        let n = self.n;
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, p)| (i / n, i % n, p))
    }

    /// `R = max |s|` over all entries.
    pub fn propagation_radius(&self) -> i64 {
        self.entries
            .iter()
            .map(LaurentPoly::radius)
            .max()
            .unwrap_or(0)
    }

    /// `Û(z)`, the symbol evaluated at `z`.
    pub fn eval(&self, z: Complex64) -> Result<CMatrix> {
        if z.norm() == 0.0 {
            return Err(Error::ZeroArgument);
        }
        Ok(CMatrix::from_fn(self.n, self.n, |k, l| {
            self.entry(k, l).eval(z)
        }))
    }

    /// Matrix product `self · rhs` with Laurent entry arithmetic.
    pub fn compose(&self, rhs: &SymbolMatrix) -> Result<SymbolMatrix> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: rhs.n,
            });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for k in 0..n {
            for l in 0..n {
                let mut acc = LaurentPoly::zero();
                for j in 0..n {
                    let a = self.entry(k, j);
                    let b = rhs.entry(j, l);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(k, l, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose with shift negation.
    pub fn adjoint(&self) -> SymbolMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for (k, l, p) in self.entries() {
            out.set(l, k, p.reflect_conj());
        }
        out
    }

    /// `Uᴺ` for `N ≥ 0`.
    pub fn power(&self, exponent: u32) -> SymbolMatrix {
        let mut acc = Self::identity(self.n);
        for _ in 0..exponent {
            acc = acc.compose(self).expect("same dimension");
        }
        acc
    }

    /// Block-diagonal direct sum of walks.
    pub fn direct_sum(blocks: &[SymbolMatrix]) -> Result<SymbolMatrix> {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        if n == 0 {
            return Err(Error::InvalidArgument("empty direct sum".into()));
        }
        let mut out = Self::zeros(n);
        let mut offset = 0;
        for b in blocks {
            for (k, l, p) in b.entries() {
                out.set(offset + k, offset + l, p.clone());
            }
            offset += b.n;
        }
        Ok(out)
    }

    /// `V · W · V*` for a constant matrix `V`.
    pub fn conjugate_by(&self, v: &CMatrix) -> Result<SymbolMatrix> {
        if v.nrows() != self.n || v.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.nrows(),
            });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for k in 0..n {
            for l in 0..n {
                let mut acc = LaurentPoly::zero();
                for a in 0..n {
                    for b in 0..n {
                        let w = self.entry(a, b);
                        if w.is_zero() {
                            continue;
                        }
                        acc = &acc + &w.scale(v[(k, a)] * v[(l, b)].conj());
                    }
                }
                out.set(k, l, acc);
            }
        }
        Ok(out)
    }

    /// Largest coefficient difference over all entries.
    pub fn max_abs_diff(&self, other: &SymbolMatrix) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &SymbolMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

/// `Û(z)` for a walk; see [`SymbolMatrix::eval`].
pub fn eval_symbol(w: &SymbolMatrix, z: Complex64) -> Result<CMatrix> {
    w.eval(z)
}

/// `‖A*A − I‖_F`
pub fn unitarity_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    (a.adjoint() * a - CMatrix::identity(n, n)).norm()
}

/// Evaluates `Û` on a uniform grid and reports `max ‖Û*Û − I‖_F`.
pub fn verify_unitary_symbol(w: &SymbolMatrix, grid_size: usize, tol: f64) -> UnitarityReport {
    let max_deviation = grid::points(grid_size.max(16))
        .map(|z| unitarity_deviation(&w.eval(z).expect("grid points are nonzero")))
        .fold(0.0, f64::max);
    UnitarityReport {
        pass: max_deviation < tol,
        max_deviation,
    }
}
