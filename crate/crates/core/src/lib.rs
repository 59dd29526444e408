//! Analysis of space-homogeneous discrete-time quantum walks on `Z`.
//!
//! A walk is described by its symbol, an `n × n` matrix of Laurent
//! polynomials ([`SymbolMatrix`]). From it the crate computes the
//! characteristic polynomial, tracks the eigenvalue functions around the unit
//! circle ([`spectral`]), builds the canonical model walks ([`model`]),
//! simulates the evolution ([`simulate`]) and computes weak limit
//! distributions ([`limit`]).

pub mod error;
pub mod fourier;
pub mod grid;
pub mod limit;
pub mod model;
pub mod simulate;
pub mod spectral;
pub mod symbol;
pub mod walks;

pub use error::{Error, Result};
pub use limit::{
    compare_empirical, group_velocities, limit_analysis, limit_measure, limit_moments,
    LimitMeasure, LimitOptions, VelocityProfile,
};
pub use model::{build_model_walk, ct_generator, shift_factorization, CtGenerator, ModelWalkSpec};
pub use simulate::{evolve, position_distribution, PositionDistribution, StateVector};
pub use spectral::{
    are_conjugate, band_projections, ct_realizable, refine_system, total_winding, track_bands,
    track_bands_with, winding_numbers, Band, EigenSystem, TrackOptions,
};
pub use symbol::{
    char_poly, verify_unitary_symbol, CMatrix, CharPoly, LaurentPoly, SymbolMatrix, WalkFile,
};

/// Formats `x` with 17 significant digits in scientific notation, independent
/// of locale.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::fmt17;

    #[test]
    fn fmt17_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 12345.678, 0.0] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt17(0.5), "5.0000000000000000e-1");
    }
}
