#![allow(dead_code)]

use num_complex::Complex64;
use qwalk_core::grid;
use qwalk_core::model::ModelWalkSpec;
use qwalk_core::CMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Haar-like random unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal moved into Q.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(gauss(rng), gauss(rng)));
    let (q, r) = g.qr().unpack();
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller.
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// Random unimodular `λ(ζ) = ζᵏ exp(i p(θ))` with a real trigonometric
/// polynomial `p` of degree 3 whose first harmonic is bounded away from zero,
/// so `λ` has no rotation symmetry. Coefficients come from a DFT truncated at
/// the model sample threshold, giving a finite-propagation walk.
pub fn random_lambda(
    rng: &mut ChaCha8Rng,
    d: usize,
) -> (ModelWalkSpec, impl Fn(Complex64) -> Complex64) {
    let k: i32 = rng.gen_range(-1..=2);
    let mut a = [0.0; 4];
    let mut b = [0.0; 4];
    for j in 1..4 {
        a[j] = rng.gen_range(-0.3..0.3);
        b[j] = rng.gen_range(-0.3..0.3);
    }
    a[1] = 0.15 + rng.gen_range(0.0..0.2);
    let f = move |zeta: Complex64| {
        let th = zeta.arg();
        let p: f64 = (1..4)
            .map(|j| a[j] * (j as f64 * th).cos() + b[j] * (j as f64 * th).sin())
            .sum();
        zeta.powi(k) * Complex64::from_polar(1.0, p)
    };
    let samples: Vec<Complex64> = grid::points(512).map(&f).collect();
    (ModelWalkSpec::from_samples(d, &samples), f)
}

/// `min_c sup_k |a[k] − b[(k + c·M) mod len]|` over rotations by `d`-th
/// roots of unity.
pub fn rotation_distance(a: &[Complex64], b: &[Complex64], d: usize) -> f64 {
    let len = a.len();
    let m = len / d;
    (0..d)
        .map(|c| {
            (0..len)
                .map(|k| (a[k] - b[(k + c * m) % len]).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}
