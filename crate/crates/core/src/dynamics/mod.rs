//! Time evolution: the fractional free flow, the Hartree potential and the
//! operator-splitting integrator, plus the conserved quantities.

mod config;
mod conserved;
mod hartree;
mod stepper;

pub use config::{Scheme, SimConfig};
pub use conserved::{energy, kinetic_energy, mass, potential_energy};
pub use hartree::{hartree_potential, riesz_constant, HartreeKernel};
pub use stepper::{evolve, strang_step, Stepper};

use num_complex::Complex64;

use crate::spectral::{self, ComplexField, SpectralError};

#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("{name} = {value} is outside the legal range {range}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("non-finite state after step ending at t = {t}; the configuration is too aggressive")]
    BlowUp { t: f64 },
    #[error("target time {target} precedes the current time {current}")]
    BackwardsInTime { current: f64, target: f64 },
}

/// Solution snapshot `u(t, ·)`.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub t: f64,
    pub u: ComplexField,
}

impl State {
    pub fn new(t: f64, u: ComplexField) -> Self {
        Self { t, u }
    }
}

/// `F^{-1}[e^{-iτ|ξ|^α} û]`, the free evolution over a signed time `τ`.
pub fn linear_propagate(u: &ComplexField, tau: f64, alpha: f64) -> Result<ComplexField, DynamicsError> {
    if !tau.is_finite() {
        return Err(DynamicsError::InvalidParameter {
            name: "tau",
            value: tau,
            range: "finite",
        });
    }
    let symbol = spectral::frac_symbol(u.grid(), alpha)?;
    let mut uh = spectral::forward(u);
    for (z, s) in uh.values_mut().iter_mut().zip(symbol.values()) {
        *z *= Complex64::cis(-tau * s.re);
    }
    Ok(spectral::inverse(&uh))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::Grid;

    fn plane_wave(g: &Grid, m: [i64; 3], phase_shift: f64) -> ComplexField {
        let xi = g.xi(g.mode_index(m).unwrap());
        ComplexField::from_position_fn(g, |x| {
            Complex64::cis(xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2] + phase_shift)
        })
    }

    #[test]
    fn zero_time_is_identity() {
        let g = Grid::new(8, 3.0).unwrap();
        let u = ComplexField::from_fn(&g, |i| Complex64::new((i as f64).cos(), 0.3));
        let v = linear_propagate(&u, 0.0, 1.6).unwrap();
        for (a, b) in u.values().iter().zip(v.values()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn plane_wave_picks_up_dispersion_phase() {
        let g = Grid::new(16, 2.0 * PI).unwrap();
        let m = [2, -1, 3];
        let k = g.xi_norm(g.mode_index(m).unwrap());
        let alpha = 1.8;
        let tau = 2.7;
        let u = plane_wave(&g, m, 0.0);
        let got = linear_propagate(&u, tau, alpha).unwrap();
        let expected = plane_wave(&g, m, -tau * k.powf(alpha));
        for (a, b) in got.values().iter().zip(expected.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite_time() {
        let g = Grid::new(8, 3.0).unwrap();
        let u = ComplexField::zeros(&g);
        assert!(linear_propagate(&u, f64::NAN, 1.5).is_err());
        assert!(linear_propagate(&u, f64::INFINITY, 1.5).is_err());
        assert!(linear_propagate(&u, 1.0, 2.2).is_err());
    }

    #[test]
    fn free_schrodinger_gaussian_spread() {
        // α = 2: u₀ = e^{-|x|²/2} evolves to (1+2it)^{-3/2} e^{-|x|²/(2(1+2it))}
        let g = Grid::new(64, 24.0).unwrap();
        let t = 0.5;
        let u0 = ComplexField::from_position_fn(&g, |x| {
            Complex64::new((-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2.0).exp(), 0.0)
        });
        let got = linear_propagate(&u0, t, 2.0).unwrap();
        let b = Complex64::new(1.0, 2.0 * t);
        let pref = b.powf(-1.5);
        let exact = ComplexField::from_position_fn(&g, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            pref * (-r2 / (2.0 * b)).exp()
        });
        let diff: f64 = got
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let norm: f64 = exact.values().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(diff / norm < 1e-6, "relative error {}", diff / norm);
    }
}
