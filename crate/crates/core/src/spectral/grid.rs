use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::SpectralError;

/// Cached 1-d plans for one axis length.
pub(crate) struct Plans {
    pub(crate) forward: Arc<dyn Fft<f64>>,
    pub(crate) inverse: Arc<dyn Fft<f64>>,
}

/// Periodic cube `[-L/2, L/2)^3` sampled with `n` points per axis.
///
/// Modes are stored in FFT order: index `i` along an axis maps to the integer
/// mode `m = i` for `i < n/2` and `m = i - n` otherwise, so the lattice is
/// `ξ = (2π/L) m` with `m ∈ {-n/2, …, n/2-1}`. Values are laid out row-major
/// over `(i1, i2, i3)`.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    length: f64,
    plans: Arc<Plans>,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self, SpectralError> {
        if n < 8 || !n.is_power_of_two() {
            return Err(SpectralError::InvalidResolution(n));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(SpectralError::InvalidLength(length));
        }
        let mut planner = FftPlanner::new();
        let plans = Plans {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        };
        Ok(Self {
            n,
            length,
            plans: Arc::new(plans),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of grid points (and of modes), `n³`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical spacing `L/n`.
    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Lattice spacing in frequency, `2π/L`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Largest per-axis frequency magnitude `π n / L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    /// Quadrature weight of one physical cell, `(L/n)³`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(3)
    }

    /// Quadrature weight of one mode, `(2π/L)³`.
    pub fn mode_volume(&self) -> f64 {
        self.dk().powi(3)
    }

    pub(crate) fn plans(&self) -> &Plans {
        &self.plans
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n + i2) * self.n + i3
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    /// Signed integer mode for an axis index.
    #[inline]
    pub fn axis_mode(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Integer mode triple of a flat mode index.
    #[inline]
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let [a, b, c] = self.unravel(idx);
        [self.axis_mode(a), self.axis_mode(b), self.axis_mode(c)]
    }

    /// Flat index of an integer mode triple, if it lies on the lattice.
    pub fn mode_index(&self, m: [i64; 3]) -> Option<usize> {
        let half = (self.n / 2) as i64;
        let mut out = [0usize; 3];
        for (o, &mj) in out.iter_mut().zip(m.iter()) {
            if mj < -half || mj >= half {
                return None;
            }
            *o = if mj >= 0 {
                mj as usize
            } else {
                (mj + self.n as i64) as usize
            };
        }
        Some(self.index(out[0], out[1], out[2]))
    }

    /// Frequency vector of a flat mode index.
    #[inline]
    pub fn xi(&self, idx: usize) -> [f64; 3] {
        let dk = self.dk();
        let m = self.mode(idx);
        [dk * m[0] as f64, dk * m[1] as f64, dk * m[2] as f64]
    }

    /// `|ξ|` of a mode. Computed from the integer norm so that modes related
    /// by a lattice symmetry get bit-identical radii.
    #[inline]
    pub fn xi_norm(&self, idx: usize) -> f64 {
        let m = self.mode(idx);
        let m2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
        self.dk() * (m2 as f64).sqrt()
    }

    /// Centered coordinate `-L/2 + i L/n` along one axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    /// Physical position of a flat point index.
    #[inline]
    pub fn x(&self, idx: usize) -> [f64; 3] {
        let [a, b, c] = self.unravel(idx);
        [self.coord(a), self.coord(b), self.coord(c)]
    }

    /// Flat index of the mode nearest to a frequency vector (clamped to the lattice).
    pub fn nearest_mode(&self, xi: [f64; 3]) -> usize {
        let half = (self.n / 2) as i64;
        let m = xi.map(|v| ((v / self.dk()).round() as i64).clamp(-half, half - 1));
        self.mode_index(m).expect("clamped mode is on the lattice")
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length.to_bits() == other.length.to_bits()
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}
