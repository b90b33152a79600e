use num_complex::Complex64;

use super::bump::{lp_bump, lp_bump_wide};
use super::{Grid, SpectralError, SpectralField};

/// One scalar per mode, applied to a [`SpectralField`] by pointwise product.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplier {
    grid: Grid,
    values: Vec<Complex64>,
}

impl Multiplier {
    pub fn from_values(grid: &Grid, values: Vec<Complex64>) -> Result<Self, SpectralError> {
        if values.len() != grid.len() {
            return Err(SpectralError::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    /// Real symbol evaluated from each mode's flat index.
    pub fn real_from_index(grid: &Grid, mut f: impl FnMut(usize) -> f64) -> Self {
        Self {
            grid: grid.clone(),
            values: (0..grid.len()).map(|i| Complex64::new(f(i), 0.0)).collect(),
        }
    }

    /// Radial real symbol `m(|ξ|)`.
    pub fn radial(grid: &Grid, mut f: impl FnMut(f64) -> f64) -> Self {
        Self::real_from_index(grid, |i| f(grid.xi_norm(i)))
    }

    pub fn ones(grid: &Grid) -> Self {
        Self::real_from_index(grid, |_| 1.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Pointwise product of two symbols.
    pub fn product(&self, other: &Multiplier) -> Result<Multiplier, SpectralError> {
        if self.grid != other.grid {
            return Err(SpectralError::GridMismatch);
        }
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// Pointwise sum of two symbols.
    pub fn sum(&self, other: &Multiplier) -> Result<Multiplier, SpectralError> {
        if self.grid != other.grid {
            return Err(SpectralError::GridMismatch);
        }
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }
}

fn check_alpha(alpha: f64) -> Result<(), SpectralError> {
    if alpha.is_finite() && alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(SpectralError::InvalidAlpha(alpha))
    }
}

/// `|ξ|^α`, with value 0 at the zero mode.
pub fn frac_symbol(grid: &Grid, alpha: f64) -> Result<Multiplier, SpectralError> {
    check_alpha(alpha)?;
    Ok(Multiplier::radial(grid, |r| if r == 0.0 { 0.0 } else { r.powf(alpha) }))
}

/// `⟨ξ⟩^s = (1 + |ξ|²)^{s/2}`.
pub fn japanese_symbol(grid: &Grid, s: f64) -> Multiplier {
    Multiplier::radial(grid, |r| (1.0 + r * r).powf(0.5 * s))
}

/// Littlewood–Paley projector symbol `β(|ξ| / 2^k)`.
pub fn lp_projector(grid: &Grid, k: i32) -> Multiplier {
    let scale = 2f64.powi(-k);
    Multiplier::radial(grid, |r| lp_bump(r * scale))
}

/// Widened projector `P_{k-1} + P_k + P_{k+1}`, evaluated in telescoped form.
pub fn lp_projector_wide(grid: &Grid, k: i32) -> Multiplier {
    let scale = 2f64.powi(-k);
    Multiplier::radial(grid, |r| lp_bump_wide(r * scale))
}

/// 2/3-rule mask: 1 where every `|m_j| ≤ n/3`, else 0.
pub fn dealias_mask(grid: &Grid) -> Multiplier {
    let n = grid.n() as i64;
    Multiplier::real_from_index(grid, |i| {
        if grid.mode(i).iter().all(|&m| 3 * m.abs() <= n) {
            1.0
        } else {
            0.0
        }
    })
}

/// Pointwise product `m(ξ) F(ξ)`.
pub fn apply(m: &Multiplier, f: &SpectralField) -> Result<SpectralField, SpectralError> {
    f.check_grid(m.grid())?;
    let values = f.values().iter().zip(m.values()).map(|(a, b)| a * b).collect();
    Ok(SpectralField::from_raw(f.grid(), values))
}

/// In-place variant of [`apply`].
pub fn apply_in_place(m: &Multiplier, f: &mut SpectralField) -> Result<(), SpectralError> {
    f.check_grid(m.grid())?;
    for (a, b) in f.values_mut().iter_mut().zip(m.values()) {
        *a *= b;
    }
    Ok(())
}
