use super::{DynamicsError, HartreeKernel, SimConfig};
use crate::spectral::{forward, frac_symbol, ComplexField};

/// `‖u‖²_{L²}` by cell quadrature.
pub fn mass(u: &ComplexField) -> f64 {
    let l2 = u.l2_norm();
    l2 * l2
}

/// `½ ‖|∇|^{α/2} u‖²_{L²}`, evaluated on the spectral side through Plancherel.
pub fn kinetic_energy(u: &ComplexField, alpha: f64) -> Result<f64, DynamicsError> {
    let grid = u.grid();
    let symbol = frac_symbol(grid, alpha)?;
    let uh = forward(u);
    let sum: f64 = uh
        .values()
        .iter()
        .zip(symbol.values())
        .map(|(z, s)| s.re * z.norm_sqr())
        .sum();
    Ok(0.5 * sum / grid.length().powi(3))
}

/// `(λ/4) ∫ |u|² (|x|^{-γ} ∗ |u|²) dx`, with the same kernel (zero mode
/// removed, optional dealiasing) as the time stepper.
pub fn potential_energy(u: &ComplexField, lambda: f64, kernel: &HartreeKernel) -> Result<f64, DynamicsError> {
    let v = kernel.potential(u, 1.0)?;
    let sum: f64 = u
        .values()
        .iter()
        .zip(v.values())
        .map(|(z, p)| z.norm_sqr() * p.re)
        .sum();
    Ok(0.25 * lambda * sum * u.grid().cell_volume())
}

/// Total energy of the torus system the stepper integrates.
pub fn energy(u: &ComplexField, cfg: &SimConfig) -> Result<f64, DynamicsError> {
    let kernel = HartreeKernel::new(u.grid(), cfg.gamma, cfg.dealias)?;
    Ok(kinetic_energy(u, cfg.alpha)? + potential_energy(u, cfg.lambda, &kernel)?)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn zero_field() {
        let cfg = SimConfig::new(8, 4.0, 1.5, 1.0);
        let u = ComplexField::zeros(&cfg.grid().unwrap());
        assert_eq!(mass(&u), 0.0);
        assert_eq!(energy(&u, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn single_mode_mass_and_kinetic() {
        let g = Grid::new(16, 5.0).unwrap();
        let m = [1, -2, 3];
        let idx = g.mode_index(m).unwrap();
        let xi = g.xi(idx);
        let k = g.xi_norm(idx);
        let a = 0.7;
        let u = ComplexField::from_position_fn(&g, |x| {
            Complex64::from_polar(a, xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2])
        });
        let l3 = g.length().powi(3);
        assert!((mass(&u) - a * a * l3).abs() < 1e-12 * a * a * l3);
        let alpha = 1.7;
        let kin = kinetic_energy(&u, alpha).unwrap();
        let expected = 0.5 * a * a * l3 * k.powf(alpha);
        assert!((kin - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn energy_homogeneity() {
        let cfg = SimConfig {
            lambda: -0.8,
            ..SimConfig::new(16, 8.0, 1.8, 1.0)
        };
        let g = cfg.grid().unwrap();
        let u = ComplexField::from_position_fn(&g, |x| {
            Complex64::new(
                (-(x[0] * x[0] + 2.0 * x[1] * x[1] + x[2] * x[2]) / 2.0).exp(),
                0.1 * x[2],
            )
        });
        let c = 1.7;
        let uc = u.scale(Complex64::new(c, 0.0));
        let kernel = HartreeKernel::new(&g, 1.0, true).unwrap();
        let k1 = kinetic_energy(&u, 1.8).unwrap();
        let kc = kinetic_energy(&uc, 1.8).unwrap();
        assert!((kc - c * c * k1).abs() < 1e-12 * kc.abs());
        let p1 = potential_energy(&u, -0.8, &kernel).unwrap();
        let pc = potential_energy(&uc, -0.8, &kernel).unwrap();
        assert!((pc - c.powi(4) * p1).abs() < 1e-12 * pc.abs());
    }
}
