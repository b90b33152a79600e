//! Periodic-box discretization: grids, Fourier transforms and Fourier
//! multipliers.

pub mod bump;
mod field;
mod grid;
mod multiplier;
mod transform;

pub use field::{ComplexField, SpectralField};
pub use grid::Grid;
pub use multiplier::{
    apply, apply_in_place, dealias_mask, frac_symbol, japanese_symbol, lp_projector, lp_projector_wide, Multiplier,
};
pub use transform::{forward, inverse};
pub(crate) use transform::{forward_raw, inverse_raw};

/// `(2π)^{3/2}`: ratio `‖û‖₂ / ‖u‖₂` under the transform normalization.
pub const PLANCHEREL_CONSTANT: f64 = 15.749609945722419;

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("grid resolution must be a power of two and at least 8, got {0}")]
    InvalidResolution(usize),
    #[error("box length must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("fractional order α must lie in (1, 2], got {0}")]
    InvalidAlpha(f64),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("field contains non-finite values")]
    NonFinite,
}

/// Convenience wrapper: make a grid.
pub fn make_grid(n: usize, length: f64) -> Result<Grid, SpectralError> {
    Grid::new(n, length)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    #[test]
    fn plancherel_constant_value() {
        assert!((super::PLANCHEREL_CONSTANT - (2.0 * PI).powf(1.5)).abs() < 1e-14);
    }
}
