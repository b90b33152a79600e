//! Modified scattering: profiles, the phase geometry of the Hartree
//! interaction, the logarithmic phase correction `B` and Cauchy gaps of the
//! corrected profile.

mod correction;
pub mod lemmas;
mod phase;

use num_complex::Complex64;
use thiserror::Error;

pub use correction::{
    cauchy_gap, cutoff, cutoff_scaled, default_theta, modified_profile, raw_gap, sigma_quadrature, weighted_sup_gap,
    CorrectionParams, ModifiedProfile, PhaseCorrection,
};
pub use phase::{phase_phi, phase_tilde, velocity_direction, z_lower_bound, z_vector, Vec3};

use crate::spectral::{forward, frac_symbol, ComplexField, SpectralError, SpectralField};

#[derive(Debug, Error)]
pub enum ScatteringError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("{0} must be nonzero")]
    ZeroVector(&'static str),
    #[error("cutoff exponent θ = {theta} is not positive for alpha = {alpha}; alpha must exceed 5/3 unless theta is set explicitly")]
    ThetaNotPositive { alpha: f64, theta: f64 },
    #[error("theta must be finite and nonnegative, got {0}")]
    InvalidTheta(f64),
    #[error("cutoff radius must be positive, got {0}")]
    InvalidCutoffRadius(f64),
    #[error("time must be finite and nonnegative, got {0}")]
    InvalidTime(f64),
    #[error("accumulation step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("accumulation must continue from t = {expected}, got s = {found}")]
    NonContiguous { expected: f64, found: f64 },
    #[error("profile at t = {profile} does not match correction accumulated through t = {correction}")]
    TimeMismatch { profile: f64, correction: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("non-finite value in input")]
    NonFinite,
}

/// `v̂(t, ξ) = e^{it|ξ|^α} û(t, ξ)`: the Fourier profile with the free flow undone.
pub fn profile(u: &ComplexField, t: f64, alpha: f64) -> Result<SpectralField, ScatteringError> {
    let symbol = frac_symbol(u.grid(), alpha)?;
    let mut v = forward(u);
    if t != 0.0 {
        for (z, s) in v.values_mut().iter_mut().zip(symbol.values()) {
            *z *= Complex64::cis(t * s.re);
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::linear_propagate;
    use crate::spectral::Grid;

    #[test]
    fn profile_at_zero_is_transform() {
        let g = Grid::new(16, 8.0).unwrap();
        let u = ComplexField::from_position_fn(&g, |x| {
            Complex64::new((-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp(), 0.0)
        });
        assert_eq!(profile(&u, 0.0, 1.8).unwrap(), forward(&u));
    }

    #[test]
    fn free_profile_is_constant() {
        let g = Grid::new(16, 8.0).unwrap();
        let u0 = ComplexField::from_position_fn(&g, |x| {
            Complex64::new((-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp(), 0.2 * x[1])
        });
        let v0 = profile(&u0, 0.0, 1.8).unwrap();
        let u = linear_propagate(&u0, 3.7, 1.8).unwrap();
        let v = profile(&u, 3.7, 1.8).unwrap();
        let scale = v0.sup_norm();
        for (a, b) in v.values().iter().zip(v0.values()) {
            assert!((a - b).norm() < 1e-12 * scale);
        }
        let uh = forward(&u);
        for (a, b) in v.values().iter().zip(uh.values()) {
            assert!((a.norm() - b.norm()).abs() <= 1e-15 * b.norm().max(1e-300) + 1e-300);
        }
    }
}
