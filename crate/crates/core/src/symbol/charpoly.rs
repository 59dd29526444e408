use num_complex::Complex64;

use super::{CMatrix, LaurentPoly, SymbolMatrix};
use crate::error::{Error, Result};
use crate::grid;

/// Largest internal dimension for which the determinant is expanded exactly.
pub const MAX_EXACT_DIM: usize = 8;

/// `f(λ; z) = det(λI − Û(z))` with Laurent-polynomial coefficients.
///
/// `coeffs[k]` is the coefficient of `λᵏ`; the leading coefficient is the
/// constant polynomial 1.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    coeffs: Vec<LaurentPoly>,
}

type LambdaPoly = Vec<LaurentPoly>;

fn lambda_mul(a: &LambdaPoly, b: &LambdaPoly) -> LambdaPoly {
    let mut out = vec![LaurentPoly::zero(); a.len() + b.len() - 1];
    for (i, p) in a.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (j, q) in b.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(p * q);
        }
    }
    out
}

fn lambda_add_signed(acc: &mut LambdaPoly, term: &LambdaPoly, negate: bool) {
    if acc.len() < term.len() {
        acc.resize(term.len(), LaurentPoly::zero());
    }
    for (a, t) in acc.iter_mut().zip(term) {
        *a = if negate { &*a - t } else { &*a + t };
    }
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `λᵏ`.
    pub fn coeff(&self, k: usize) -> &LaurentPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    /// Coefficients of the scalar polynomial `f(·; z)`, lowest degree first.
    pub fn eval_at(&self, z: Complex64) -> Vec<Complex64> {
        self.coeffs.iter().map(|p| p.eval(z)).collect()
    }

    /// `f(A; z)` by Horner's rule.
    pub fn eval_matrix(&self, a: &CMatrix, z: Complex64) -> CMatrix {
        let n = a.nrows();
        let id = CMatrix::identity(n, n);
        let mut acc = id.clone() * self.coeffs[self.degree()].eval(z);
        for k in (0..self.degree()).rev() {
            acc = &acc * a + &id * self.coeffs[k].eval(z);
        }
        acc
    }

    /// Largest coefficient difference against another characteristic polynomial.
    pub fn max_abs_diff(&self, other: &CharPoly) -> f64 {
        if self.degree() != other.degree() {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Product of characteristic polynomials (the polynomial of a direct sum).
    pub fn product(&self, other: &CharPoly) -> CharPoly {
        CharPoly {
            coeffs: lambda_mul(&self.coeffs, &other.coeffs),
        }
    }
}

/// Exact `det(λI − Û)` by Laplace expansion over column subsets.
pub fn char_poly(w: &SymbolMatrix) -> Result<CharPoly> {
    let n = w.dim();
    if n > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_EXACT_DIM,
        });
    }
    // entry(k, l) of λI − Û as a polynomial in λ
    let entry = |k: usize, l: usize| -> LambdaPoly {
        let mut p = vec![-w.entry(k, l)];
        if k == l {
            p.push(LaurentPoly::one());
        }
        p
    };

    // minors[mask] = det of rows 0..|mask| against the columns in mask
    let mut minors: Vec<LambdaPoly> = vec![Vec::new(); 1 << n];
    minors[0] = vec![LaurentPoly::one()];
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc: LambdaPoly = vec![LaurentPoly::zero()];
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let a = entry(row, col);
            if a.iter().all(LaurentPoly::is_zero) {
                continue;
            }
            let rest = &minors[mask ^ (1 << col)];
            let above = (mask >> (col + 1)).count_ones();
            lambda_add_signed(&mut acc, &lambda_mul(&a, rest), above % 2 == 1);
        }
        minors[mask] = acc;
    }
    let mut coeffs = std::mem::take(&mut minors[(1 << n) - 1]);
    coeffs.resize(n + 1, LaurentPoly::zero());
    coeffs[n] = LaurentPoly::one();
    Ok(CharPoly { coeffs })
}

/// `max_z ‖f(Û(z); z)‖_F` over a uniform grid.
pub fn verify_cayley_hamilton(w: &SymbolMatrix, grid_size: usize) -> Result<f64> {
    let f = char_poly(w)?;
    Ok(grid::points(grid_size)
        .map(|z| {
            let u = w.eval(z).expect("grid points are nonzero");
            f.eval_matrix(&u, z).norm()
        })
        .fold(0.0, f64::max))
}
