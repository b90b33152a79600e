use num_complex::Complex64;

use super::{Grid, SpectralError};

/// Complex amplitudes on the physical grid points.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

/// Complex amplitudes on the mode lattice, in FFT order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    values: Vec<Complex64>,
}

macro_rules! field_common {
    ($ty:ident) => {
        impl $ty {
            pub fn zeros(grid: &Grid) -> Self {
                Self {
                    grid: grid.clone(),
                    values: vec![Complex64::new(0.0, 0.0); grid.len()],
                }
            }

            pub fn from_values(grid: &Grid, values: Vec<Complex64>) -> Result<Self, SpectralError> {
                if values.len() != grid.len() {
                    return Err(SpectralError::LengthMismatch {
                        expected: grid.len(),
                        found: values.len(),
                    });
                }
                if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(SpectralError::NonFinite);
                }
                Ok(Self {
                    grid: grid.clone(),
                    values,
                })
            }

            /// Builds a field by evaluating `f` at every flat index.
            pub fn from_fn(grid: &Grid, f: impl FnMut(usize) -> Complex64) -> Self {
                Self {
                    grid: grid.clone(),
                    values: (0..grid.len()).map(f).collect(),
                }
            }

            pub(crate) fn from_raw(grid: &Grid, values: Vec<Complex64>) -> Self {
                debug_assert_eq!(values.len(), grid.len());
                Self {
                    grid: grid.clone(),
                    values,
                }
            }

            pub fn grid(&self) -> &Grid {
                &self.grid
            }

            pub fn values(&self) -> &[Complex64] {
                &self.values
            }

            pub fn values_mut(&mut self) -> &mut [Complex64] {
                &mut self.values
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.values
            }

            pub fn is_finite(&self) -> bool {
                self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            }

            pub fn scale(&self, c: Complex64) -> Self {
                Self {
                    grid: self.grid.clone(),
                    values: self.values.iter().map(|z| z * c).collect(),
                }
            }

            /// Largest pointwise modulus.
            pub fn sup_norm(&self) -> f64 {
                self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
            }

            pub(crate) fn check_grid(&self, other: &Grid) -> Result<(), SpectralError> {
                if &self.grid != other {
                    return Err(SpectralError::GridMismatch);
                }
                Ok(())
            }
        }
    };
}

field_common!(ComplexField);
field_common!(SpectralField);

impl ComplexField {
    /// `(∫|u|² dx)^{1/2}` with the cell quadrature weight `(L/n)³`.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|z| z.norm_sqr()).sum();
        (sum * self.grid.cell_volume()).sqrt()
    }

    /// Evaluates a function of position at every grid point.
    pub fn from_position_fn(grid: &Grid, mut f: impl FnMut([f64; 3]) -> Complex64) -> Self {
        Self::from_fn(grid, |idx| f(grid.x(idx)))
    }
}

impl SpectralField {
    /// `(∫|û|² dξ)^{1/2}` with the mode quadrature weight `(2π/L)³`.
    ///
    /// Under the transform normalization this equals `(2π)^{3/2}` times
    /// [`ComplexField::l2_norm`] of the inverse transform.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|z| z.norm_sqr()).sum();
        (sum * self.grid.mode_volume()).sqrt()
    }

    /// Evaluates a function of the frequency vector at every mode.
    pub fn from_xi_fn(grid: &Grid, mut f: impl FnMut([f64; 3]) -> Complex64) -> Self {
        Self::from_fn(grid, |idx| f(grid.xi(idx)))
    }
}
