//! Finitely supported Laurent polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coefficients with magnitude below this are dropped after arithmetic.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// A Laurent polynomial `Σ_s c(s) zˢ` over a finite set of integer shifts.
///
/// The representation is canonical: no stored coefficient has magnitude below
/// [`PRUNE_THRESHOLD`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

/// One `(shift, coefficient)` pair in the JSON term lists.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub shift: i64,
    pub re: f64,
    pub im: f64,
}

impl From<Vec<Term>> for LaurentPoly {
    fn from(terms: Vec<Term>) -> Self {
        LaurentPoly::from_terms(
            terms
                .into_iter()
                .map(|t| (t.shift, Complex64::new(t.re, t.im))),
        )
    }
}

impl From<LaurentPoly> for Vec<Term> {
    fn from(p: LaurentPoly) -> Self {
        p.to_terms()
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, c)
    }

    /// `c · zˢ`
    pub fn monomial(shift: i64, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(shift, c);
        p
    }

    /// Builds a polynomial from terms; repeated shifts are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (s, c) in terms {
            p.add_term(s, c);
        }
        p
    }

    /// Adds `c · zˢ` in place, keeping the canonical form.
    pub fn add_term(&mut self, shift: i64, c: Complex64) {
        let entry = self.coeffs.entry(shift).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < PRUNE_THRESHOLD {
            self.coeffs.remove(&shift);
        }
    }

    pub fn coeff(&self, shift: i64) -> Complex64 {
        self.coeffs.get(&shift).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&s, &c)| (s, c))
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms()
            .map(|(shift, c)| Term {
                shift,
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_shift(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_shift(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `max |s|` over the support, 0 for the zero polynomial.
    pub fn radius(&self) -> i64 {
        match (self.min_shift(), self.max_shift()) {
            (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
            _ => 0,
        }
    }

    /// Evaluates at a nonzero complex `z`, summing in increasing shift order.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms().map(|(s, c)| c * z.powi(s as i32)).sum()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(s, c)| (s, c * k)))
    }

    /// Multiplies by `zᵏ`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&s, &c)| (s + k, c)).collect(),
        }
    }

    /// The adjoint in the symbol algebra: the coefficient at `s` becomes the
    /// conjugate of the original coefficient at `-s`, so that on the unit
    /// circle `p*(z) = conj(p(z))`.
    pub fn reflect_conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&s, &c)| (-s, c.conj())).collect(),
        }
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (s, c) in self.terms() {
            worst = worst.max((c - other.coeff(s)).norm());
        }
        for (s, c) in other.terms() {
            if !self.coeffs.contains_key(&s) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (s, c) in rhs.terms() {
            out.add_term(s, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (s, c) in rhs.terms() {
            out.add_term(s, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (s, a) in self.terms() {
            for (t, b) in rhs.terms() {
                *acc.entry(s + t).or_default() += a * b;
            }
        }
        acc.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
        LaurentPoly { coeffs: acc }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            match s {
                0 => {}
                1 => write!(f, "·z")?,
                _ => write!(f, "·z^{s}")?,
            }
        }
        Ok(())
    }
}
