//! Reference walks used throughout the tests and the CLI fixtures.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::symbol::{CMatrix, LaurentPoly, SymbolMatrix};

fn mono(shift: i64, c: Complex64) -> LaurentPoly {
    LaurentPoly::monomial(shift, c)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The 2-state coined walk
/// `[[ā S₋₁, −b S₋₁], [b̄ S₁, a S₁]]` for `|a|² + |b|² = 1`.
pub fn coined(a: Complex64, b: Complex64) -> SymbolMatrix {
    let entries = vec![
        mono(-1, a.conj()),
        mono(-1, -b),
        mono(1, b.conj()),
        mono(1, a),
    ];
    SymbolMatrix::new(2, entries).expect("2x2")
}

/// [`coined`] with `a = r e^{iα}`, `b = √(1 − r²) e^{iβ}`.
pub fn coined_polar(r: f64, alpha: f64, beta: f64) -> SymbolMatrix {
    coined(
        Complex64::from_polar(r, alpha),
        Complex64::from_polar((1.0 - r * r).sqrt(), beta),
    )
}

/// Hadamard-type walk: [`coined`] with `a = b = 1/√2`.
pub fn hadamard() -> SymbolMatrix {
    coined(re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2))
}

/// `[[r S₁, −b S₁], [b̄, r]]` with real `r` and `r² + |b|² = 1`.
pub fn modified(r: f64, b: Complex64) -> SymbolMatrix {
    let entries = vec![
        mono(1, re(r)),
        mono(1, -b),
        mono(0, b.conj()),
        mono(0, re(r)),
    ];
    SymbolMatrix::new(2, entries).expect("2x2")
}

/// [`modified`] with `r = b = 1/√2`.
pub fn modified_hadamard() -> SymbolMatrix {
    modified(FRAC_1_SQRT_2, re(FRAC_1_SQRT_2))
}

/// The 3-state Grover walk
/// `(1/3)[[−S₋₁, 2S₋₁, 2S₋₁], [2, −1, 2], [2S₁, 2S₁, −S₁]]`.
pub fn grover3() -> SymbolMatrix {
    let t = 1.0 / 3.0;
    let rows: [(i64, [f64; 3]); 3] = [
        (-1, [-1.0, 2.0, 2.0]),
        (0, [2.0, -1.0, 2.0]),
        (1, [2.0, 2.0, -1.0]),
    ];
    let mut entries = Vec::with_capacity(9);
    for (shift, row) in rows {
        for x in row {
            entries.push(mono(shift, re(x * t)));
        }
    }
    SymbolMatrix::new(3, entries).expect("3x3")
}

/// Permutation matrix sending basis vector `j` to `perm[j]`.
pub fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let mut m = CMatrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = re(1.0);
    }
    m
}

/// Named walks exercised by the invariant tests.
pub fn corpus() -> Vec<(&'static str, SymbolMatrix)> {
    vec![
        ("hadamard", hadamard()),
        ("coined_general", coined_polar(0.6, 0.4, 1.1)),
        ("modified_hadamard", modified_hadamard()),
        ("grover3", grover3()),
        ("shift1", SymbolMatrix::shift(1)),
        ("shift_minus2", SymbolMatrix::shift(-2)),
        ("identity2", SymbolMatrix::identity(2)),
        (
            "hadamard_plus_shift",
            SymbolMatrix::direct_sum(&[hadamard(), SymbolMatrix::shift(1)]).expect("blocks"),
        ),
    ]
}
