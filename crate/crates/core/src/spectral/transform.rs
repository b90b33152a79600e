//! Discrete approximation of the continuum Fourier pair
//!
//! ```text
//! û(ξ) = ∫ e^{-ix·ξ} u(x) dx,      u(x) = (2π)^{-3} ∫ e^{ix·ξ} û(ξ) dξ
//! ```
//!
//! on the centered periodic box. The forward sum carries the cell weight
//! `(L/n)³`, the inverse sum the mode weight `(2π)^{-3}(2π/L)³ = L^{-3}`.
//! Because the physical grid starts at `-L/2`, both directions pick up the
//! checkerboard factor `(-1)^{i1+i2+i3}`.

use num_complex::Complex64;
use rustfft::Fft;

use super::{ComplexField, Grid, SpectralField};

/// `û = (L/n)³ Σ_x e^{-ix·ξ} u(x)`.
pub fn forward(f: &ComplexField) -> SpectralField {
    let mut data = f.values().to_vec();
    forward_raw(f.grid(), &mut data);
    SpectralField::from_raw(f.grid(), data)
}

/// `u(x) = L^{-3} Σ_ξ e^{ix·ξ} û(ξ)`.
pub fn inverse(f: &SpectralField) -> ComplexField {
    let mut data = f.values().to_vec();
    inverse_raw(f.grid(), &mut data);
    ComplexField::from_raw(f.grid(), data)
}

/// Forward transform of a raw buffer laid out on `grid`.
pub(crate) fn forward_raw(grid: &Grid, data: &mut Vec<Complex64>) {
    fft3(grid, data, &*grid.plans().forward);
    apply_checkerboard(grid, data, grid.cell_volume());
}

/// Inverse transform of a raw buffer laid out on `grid`.
pub(crate) fn inverse_raw(grid: &Grid, data: &mut Vec<Complex64>) {
    apply_checkerboard(grid, data, grid.length().powi(-3));
    fft3(grid, data, &*grid.plans().inverse);
}

fn apply_checkerboard(grid: &Grid, data: &mut [Complex64], weight: f64) {
    let n = grid.n();
    for (row, line) in data.chunks_exact_mut(n).enumerate() {
        let (a, b) = (row / n, row % n);
        let mut s = if (a + b) % 2 == 0 { weight } else { -weight };
        for z in line {
            *z *= s;
            s = -s;
        }
    }
}

/// In-place unnormalized 3-d transform: three passes of contiguous 1-d
/// transforms, each followed by a cyclic axis rotation
/// `(i1, i2, i3) -> (i3, i1, i2)`. Three rotations restore the layout.
fn fft3(grid: &Grid, data: &mut Vec<Complex64>, plan: &dyn Fft<f64>) {
    let n = grid.n();
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    let mut rotated = vec![Complex64::new(0.0, 0.0); data.len()];
    for _ in 0..3 {
        plan.process_with_scratch(data, &mut scratch);
        rotate_axes(n, data, &mut rotated);
        std::mem::swap(data, &mut rotated);
    }
}

/// The rotation is a transpose of the `n² × n` matrix `src[(i1 i2), i3]`,
/// done in square tiles so both sides stay in cache.
fn rotate_axes(n: usize, src: &[Complex64], dst: &mut [Complex64]) {
    const TILE: usize = 16;
    let rows = n * n;
    for r0 in (0..rows).step_by(TILE) {
        let r1 = (r0 + TILE).min(rows);
        for c0 in (0..n).step_by(TILE) {
            let c1 = (c0 + TILE).min(n);
            for r in r0..r1 {
                for c in c0..c1 {
                    dst[c * rows + r] = src[r * n + c];
                }
            }
        }
    }
}
