use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::phase::{norm, velocity_direction, Vec3};
use super::ScatteringError;
use crate::spectral::bump::plateau;
use crate::spectral::{Grid, SpectralField};

/// Default cutoff exponent `θ = (3α − 5) / (40(α + 1))`; positive only for `α > 5/3`.
pub fn default_theta(alpha: f64) -> Result<f64, ScatteringError> {
    let theta = (3.0 * alpha - 5.0) / (40.0 * (alpha + 1.0));
    if theta > 0.0 {
        Ok(theta)
    } else {
        Err(ScatteringError::ThetaNotPositive { alpha, theta })
    }
}

/// Time-dependent frequency cutoff `χ(|s^{-θ} ξ|)`.
pub fn cutoff(xi: Vec3, s: f64, theta: f64) -> Result<f64, ScatteringError> {
    cutoff_scaled(xi, s, theta, 1.0)
}

/// Cutoff with its plateau stretched to radius `radius`: `χ(|s^{-θ} ξ| / radius)`.
///
/// At `s = 0` this takes its limit value: 1 at `ξ = 0`, 0 elsewhere.
pub fn cutoff_scaled(xi: Vec3, s: f64, theta: f64, radius: f64) -> Result<f64, ScatteringError> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(ScatteringError::InvalidTime(s));
    }
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(ScatteringError::InvalidTheta(theta));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(ScatteringError::InvalidCutoffRadius(radius));
    }
    Ok(cutoff_radial(norm(xi), s, theta, radius))
}

fn cutoff_radial(r: f64, s: f64, theta: f64, radius: f64) -> f64 {
    if s == 0.0 && theta > 0.0 {
        return if r == 0.0 { 1.0 } else { 0.0 };
    }
    plateau(r * s.powf(-theta) / radius)
}

/// Parameters of the phase correction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrectionParams {
    pub alpha: f64,
    pub lambda: f64,
    pub theta: f64,
    /// Plateau radius of the cutoff `φ`; 1 gives `χ(|s^{-θ}ξ|)`.
    pub cutoff_radius: f64,
    /// Multiplies the prefactor `−λ/(α(2π)³)`.
    pub prefactor_scale: f64,
}

impl CorrectionParams {
    /// Parameters with the default `θ`, unit cutoff radius and unscaled prefactor.
    pub fn new(alpha: f64, lambda: f64) -> Result<Self, ScatteringError> {
        Ok(Self {
            alpha,
            lambda,
            theta: default_theta(alpha)?,
            cutoff_radius: 1.0,
            prefactor_scale: 1.0,
        })
    }

    /// `−λ / (α (2π)³)`, times the configured scale.
    pub fn prefactor(&self) -> f64 {
        -self.prefactor_scale * self.lambda / (self.alpha * (2.0 * PI).powi(3))
    }
}

/// Accumulated logarithmic phase `B(t, ξ)` on the mode lattice:
///
/// ```text
/// B(t, ξ) = −λ/(α(2π)³) ∫₀ᵗ φ(s^{-θ}ξ) ⟨s⟩^{-1} ∫ |ξ/|ξ|^{2-α} − σ/|σ|^{2-α}|^{-1} |v̂(s,σ)|² dσ ds
/// ```
///
/// The `σ` integral is a Riemann sum over the lattice with weight
/// `(2π/L)³`, omitting the singular cell `σ = ξ`. The `σ = 0` cell is kept:
/// `σ/|σ|^{2-α}` extends continuously by 0 there for `α > 1`. The time integral is a
/// left-endpoint rule: each increment uses the snapshot at the start of its
/// interval.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseCorrection {
    grid: Grid,
    params: CorrectionParams,
    values: Vec<f64>,
    t: f64,
    last_step: f64,
}

impl PhaseCorrection {
    /// Identically zero correction starting at `t0`.
    pub fn new(grid: &Grid, params: CorrectionParams, t0: f64) -> Result<Self, ScatteringError> {
        if !(params.theta >= 0.0 && params.theta.is_finite()) {
            return Err(ScatteringError::InvalidTheta(params.theta));
        }
        if !(params.cutoff_radius > 0.0 && params.cutoff_radius.is_finite()) {
            return Err(ScatteringError::InvalidCutoffRadius(params.cutoff_radius));
        }
        if !(t0 >= 0.0 && t0.is_finite()) {
            return Err(ScatteringError::InvalidTime(t0));
        }
        Ok(Self {
            grid: grid.clone(),
            params,
            values: vec![0.0; grid.len()],
            t: t0,
            last_step: 0.0,
        })
    }

    /// Rebuilds a correction from stored values (checkpoint restore).
    pub fn from_parts(
        grid: &Grid,
        params: CorrectionParams,
        values: Vec<f64>,
        t: f64,
        last_step: f64,
    ) -> Result<Self, ScatteringError> {
        let mut out = Self::new(grid, params, t)?;
        if values.len() != grid.len() {
            return Err(ScatteringError::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|b| !b.is_finite()) {
            return Err(ScatteringError::NonFinite);
        }
        out.values = values;
        out.last_step = last_step;
        Ok(out)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &CorrectionParams {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Time through which the correction has been accumulated.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Length of the most recent increment (0 before the first one).
    pub fn last_step(&self) -> f64 {
        self.last_step
    }

    /// Value at the mode nearest to `xi`.
    pub fn at(&self, xi: Vec3) -> f64 {
        self.values[self.grid.nearest_mode(xi)]
    }

    /// Adds the increment over `[s, s + ds]` computed from the snapshot
    /// `v̂(s)`. Requires `s` to equal the current accumulation time.
    pub fn accumulate(&self, v_hat: &SpectralField, s: f64, ds: f64) -> Result<Self, ScatteringError> {
        if v_hat.grid() != &self.grid {
            return Err(ScatteringError::GridMismatch);
        }
        if !(ds > 0.0 && ds.is_finite()) {
            return Err(ScatteringError::InvalidStep(ds));
        }
        if !s.is_finite() || (s - self.t).abs() > 1e-9 * self.t.abs().max(1.0) {
            return Err(ScatteringError::NonContiguous {
                expected: self.t,
                found: s,
            });
        }
        if !v_hat.is_finite() {
            return Err(ScatteringError::NonFinite);
        }
        let q = self.increment_weights(v_hat, s);
        let scale = ds * self.params.prefactor() / (1.0 + s * s).sqrt();
        let values = self.values.iter().zip(&q).map(|(b, q)| b + scale * q).collect();
        Ok(Self {
            grid: self.grid.clone(),
            params: self.params,
            values,
            t: s + ds,
            last_step: ds,
        })
    }

    /// `φ(s^{-θ}ξ) Q(ξ)` for every mode, where `Q` is the lattice `σ` sum.
    fn increment_weights(&self, v_hat: &SpectralField, s: f64) -> Vec<f64> {
        let grid = &self.grid;
        let p = &self.params;
        let cut: Vec<f64> = (0..grid.len())
            .map(|i| cutoff_radial(grid.xi_norm(i), s, p.theta, p.cutoff_radius))
            .collect();
        let active: Vec<usize> = (0..grid.len()).filter(|&i| cut[i] > 0.0).collect();
        let mut out = vec![0.0; grid.len()];
        if active.is_empty() {
            return out;
        }
        let sigma = SigmaTable::new(grid, v_hat.values(), p.alpha);
        let sums: Vec<f64> = active
            .par_iter()
            .map(|&i| sigma.inverse_distance_sum(velocity_direction(grid.xi(i), p.alpha)))
            .collect();
        for (&i, q) in active.iter().zip(sums) {
            out[i] = cut[i] * q;
        }
        out
    }
}

/// Lattice quadrature `Σ_σ |z(ξ, σ)|^{-1} |v̂(σ)|² (2π/L)³` at an arbitrary
/// `ξ` (not necessarily a lattice mode), over `σ ≠ ξ`.
pub fn sigma_quadrature(v_hat: &SpectralField, xi: Vec3, alpha: f64) -> f64 {
    SigmaTable::new(v_hat.grid(), v_hat.values(), alpha).inverse_distance_sum(velocity_direction(xi, alpha))
}

/// Structure-of-arrays view of `σ/|σ|^{2-α}` and the weights `|v̂(σ)|² (2π/L)³`
/// over all lattice modes.
struct SigmaTable {
    gx: Vec<f64>,
    gy: Vec<f64>,
    gz: Vec<f64>,
    weight: Vec<f64>,
}

impl SigmaTable {
    fn new(grid: &Grid, v_hat: &[Complex64], alpha: f64) -> Self {
        let dv = grid.mode_volume();
        let n = grid.len();
        let mut t = Self {
            gx: Vec::with_capacity(n),
            gy: Vec::with_capacity(n),
            gz: Vec::with_capacity(n),
            weight: Vec::with_capacity(n),
        };
        for (i, z) in v_hat.iter().enumerate() {
            let g = velocity_direction(grid.xi(i), alpha);
            t.gx.push(g[0]);
            t.gy.push(g[1]);
            t.gz.push(g[2]);
            t.weight.push(z.norm_sqr() * dv);
        }
        t
    }

    /// `Σ_σ w(σ) / |g − g(σ)|`, skipping the coincident mode. Lanes are
    /// summed in a fixed order, so the result is reproducible.
    fn inverse_distance_sum(&self, g: Vec3) -> f64 {
        const LANES: usize = 8;
        #[inline(always)]
        fn term(g: &Vec3, x: f64, y: f64, z: f64, w: f64) -> f64 {
            let (dx, dy, dz) = (g[0] - x, g[1] - y, g[2] - z);
            let r2 = dx * dx + dy * dy + dz * dz;
            let t = w / r2.sqrt();
            if r2 > 0.0 {
                t
            } else {
                0.0
            }
        }
        let mut acc = [0.0f64; LANES];
        let chunks = self
            .gx
            .chunks_exact(LANES)
            .zip(self.gy.chunks_exact(LANES))
            .zip(self.gz.chunks_exact(LANES))
            .zip(self.weight.chunks_exact(LANES));
        for (((x, y), z), w) in chunks {
            for l in 0..LANES {
                acc[l] += term(&g, x[l], y[l], z[l], w[l]);
            }
        }
        let mut total = acc.iter().sum::<f64>();
        let split = self.weight.len() - self.weight.len() % LANES;
        for j in split..self.weight.len() {
            total += term(&g, self.gx[j], self.gy[j], self.gz[j], self.weight[j]);
        }
        total
    }
}

/// `w(t, ξ) = e^{-iB(t, ξ)} v̂(t, ξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModifiedProfile {
    grid: Grid,
    values: Vec<Complex64>,
    t: f64,
}

impl ModifiedProfile {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Builds a profile from stored values (checkpoint restore).
    pub fn from_parts(grid: &Grid, values: Vec<Complex64>, t: f64) -> Result<Self, ScatteringError> {
        if values.len() != grid.len() {
            return Err(ScatteringError::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            values,
            t,
        })
    }

    /// Applies a further phase rotation `e^{-iB}`.
    pub fn rotate(&self, correction: &PhaseCorrection) -> Result<Self, ScatteringError> {
        if correction.grid() != &self.grid {
            return Err(ScatteringError::GridMismatch);
        }
        Ok(Self {
            grid: self.grid.clone(),
            values: rotate(&self.values, correction.values()),
            t: self.t,
        })
    }
}

fn rotate(v: &[Complex64], b: &[f64]) -> Vec<Complex64> {
    v.iter().zip(b).map(|(z, b)| z * Complex64::cis(-b)).collect()
}

/// Forms `w = e^{-iB} v̂` for a profile sampled at time `t`. The correction may
/// lead or lag `t` by at most its last accumulation step.
pub fn modified_profile(
    v_hat: &SpectralField,
    t: f64,
    correction: &PhaseCorrection,
) -> Result<ModifiedProfile, ScatteringError> {
    if v_hat.grid() != correction.grid() {
        return Err(ScatteringError::GridMismatch);
    }
    let slack = correction.last_step() + 1e-9 * t.abs().max(1.0);
    if (correction.t() - t).abs() > slack {
        return Err(ScatteringError::TimeMismatch {
            profile: t,
            correction: correction.t(),
        });
    }
    Ok(ModifiedProfile {
        grid: v_hat.grid().clone(),
        values: rotate(v_hat.values(), correction.values()),
        t,
    })
}

/// `max_ξ ⟨ξ⟩⁵ |b(ξ) − a(ξ)|` over two mode-lattice arrays.
pub fn weighted_sup_gap(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            let r = grid.xi_norm(i);
            (1.0 + r * r).powf(2.5) * (y - x).norm()
        })
        .fold(0.0, f64::max)
}

/// `‖⟨ξ⟩⁵ (w₂ − w₁)‖_∞`.
pub fn cauchy_gap(w1: &ModifiedProfile, w2: &ModifiedProfile) -> Result<f64, ScatteringError> {
    if w1.grid != w2.grid {
        return Err(ScatteringError::GridMismatch);
    }
    Ok(weighted_sup_gap(&w1.grid, &w1.values, &w2.values))
}

/// `‖⟨ξ⟩⁵ (v̂₂ − v̂₁)‖_∞` for uncorrected profiles.
pub fn raw_gap(v1: &SpectralField, v2: &SpectralField) -> Result<f64, ScatteringError> {
    if v1.grid() != v2.grid() {
        return Err(ScatteringError::GridMismatch);
    }
    Ok(weighted_sup_gap(v1.grid(), v1.values(), v2.values()))
}
