use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma as gamma_fn;

use super::DynamicsError;
use crate::spectral::{dealias_mask, forward_raw, inverse_raw, ComplexField, Grid};

/// Constant `c_γ` in `F(|x|^{-γ})(η) = c_γ |η|^{γ-3}` on ℝ³:
/// `c_γ = π^{3/2} 2^{3-γ} Γ((3-γ)/2) / Γ(γ/2)`, so `c_1 = 4π`.
pub fn riesz_constant(gamma: f64) -> f64 {
    if gamma == 1.0 {
        return 4.0 * PI;
    }
    PI.powf(1.5) * 2f64.powf(3.0 - gamma) * gamma_fn((3.0 - gamma) / 2.0) / gamma_fn(gamma / 2.0)
}

fn check_gamma(gamma: f64) -> Result<(), DynamicsError> {
    if gamma > 0.0 && gamma < 3.0 {
        Ok(())
    } else {
        Err(DynamicsError::InvalidParameter {
            name: "gamma",
            value: gamma,
            range: "(0, 3)",
        })
    }
}

/// Convolution symbol `c_γ |η|^{γ-3}` on the mode lattice.
///
/// The `η = 0` entry is zero, which removes the spatial mean of the
/// potential. On the torus this only adds a global time-dependent phase to
/// the solution. With `dealias` the density is 2/3-masked before the
/// convolution.
#[derive(Clone, Debug)]
pub struct HartreeKernel {
    grid: Grid,
    symbol: Vec<f64>,
}

impl HartreeKernel {
    pub fn new(grid: &Grid, gamma: f64, dealias: bool) -> Result<Self, DynamicsError> {
        check_gamma(gamma)?;
        let c = riesz_constant(gamma);
        let mask = dealias.then(|| dealias_mask(grid));
        let symbol = (0..grid.len())
            .map(|i| {
                if i == 0 {
                    return 0.0;
                }
                let r = grid.xi_norm(i);
                let s = if gamma == 1.0 {
                    c / (r * r)
                } else {
                    c * r.powf(gamma - 3.0)
                };
                match &mask {
                    Some(m) => s * m.values()[i].re,
                    None => s,
                }
            })
            .collect();
        Ok(Self {
            grid: grid.clone(),
            symbol,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `λ (|x|^{-γ} ∗ |u|²)` as a complex buffer; the imaginary part is round-off.
    pub(crate) fn potential_raw(&self, u: &[Complex64], lambda: f64) -> Vec<Complex64> {
        let mut rho: Vec<Complex64> = u.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
        forward_raw(&self.grid, &mut rho);
        for (z, s) in rho.iter_mut().zip(&self.symbol) {
            *z *= lambda * s;
        }
        inverse_raw(&self.grid, &mut rho);
        rho
    }

    pub fn potential(&self, u: &ComplexField, lambda: f64) -> Result<ComplexField, DynamicsError> {
        u.check_grid(&self.grid)?;
        Ok(ComplexField::from_raw(
            &self.grid,
            self.potential_raw(u.values(), lambda),
        ))
    }
}

/// `λ (|x|^{-γ} ∗ |u|²)` computed spectrally, without dealiasing.
pub fn hartree_potential(u: &ComplexField, lambda: f64, gamma: f64) -> Result<ComplexField, DynamicsError> {
    let kernel = HartreeKernel::new(u.grid(), gamma, false)?;
    kernel.potential(u, lambda)
}
