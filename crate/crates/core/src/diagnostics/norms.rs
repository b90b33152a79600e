use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::spectral::{forward, forward_raw, lp_projector, ComplexField, Grid, SpectralField};

/// Fraction of the box half-width beyond which mass counts as edge mass.
pub const EDGE_SHELL: f64 = 0.8;
/// Edge mass fraction above which weighted norms are flagged.
pub const EDGE_TOLERANCE: f64 = 0.01;

/// `L^{-3} Σ ⟨ξ⟩^{2s} |f̂(ξ)|²`, the squared `H^s` norm from raw transform values.
fn sobolev_sq_raw(grid: &Grid, fh: &[Complex64], s: f64) -> f64 {
    let sum: f64 = if s == 0.0 {
        fh.iter().map(|z| z.norm_sqr()).sum()
    } else {
        fh.iter()
            .enumerate()
            .map(|(i, z)| {
                let r = grid.xi_norm(i);
                (1.0 + r * r).powf(s) * z.norm_sqr()
            })
            .sum()
    };
    sum / grid.length().powi(3)
}

/// `‖⟨ξ⟩^s û‖₂`, normalized so that `s = 0` gives the `L²` norm of `u`.
pub fn sobolev_norm(u: &ComplexField, s: f64) -> f64 {
    let uh = forward(u);
    sobolev_sq_raw(u.grid(), uh.values(), s).sqrt()
}

/// Moment norms of a profile in physical space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedNorms {
    /// `Σ_j ‖x_j v‖_{H³}`.
    pub xv_h3: f64,
    /// `Σ_{j,l} ‖x_j x_l v‖_{H²}`.
    pub x2v_h2: f64,
    /// Share of `‖v‖²₂` with `max_j |x_j| ≥ 0.4 L`.
    pub edge_fraction: f64,
    /// `edge_fraction > 1%`: the moments are contaminated by the periodic images.
    pub edge_warning: bool,
}

/// Moment norms `‖xv‖_{H³}` and `‖x²v‖_{H²}`, computed by multiplying `v` by
/// the centred box coordinates.
pub fn weighted_norms(v: &ComplexField) -> WeightedNorms {
    let grid = v.grid();
    let coords: Vec<[f64; 3]> = (0..grid.len()).map(|i| grid.x(i)).collect();
    let moment = |f: &dyn Fn([f64; 3]) -> f64, s: f64| {
        let mut data: Vec<Complex64> = v.values().iter().zip(&coords).map(|(z, x)| z * f(*x)).collect();
        forward_raw(grid, &mut data);
        sobolev_sq_raw(grid, &data, s).sqrt()
    };
    let mut xv_h3 = 0.0;
    for j in 0..3 {
        xv_h3 += moment(&|x| x[j], 3.0);
    }
    let mut x2v_h2 = 0.0;
    for j in 0..3 {
        for l in j..3 {
            let w = if j == l { 1.0 } else { 2.0 };
            x2v_h2 += w * moment(&|x| x[j] * x[l], 2.0);
        }
    }
    let edge = EDGE_SHELL * 0.5 * grid.length();
    let (mut total, mut outer) = (0.0, 0.0);
    for (z, x) in v.values().iter().zip(&coords) {
        let m = z.norm_sqr();
        total += m;
        if x.iter().any(|c| c.abs() >= edge) {
            outer += m;
        }
    }
    let edge_fraction = if total > 0.0 { outer / total } else { 0.0 };
    WeightedNorms {
        xv_h3,
        x2v_h2,
        edge_fraction,
        edge_warning: edge_fraction > EDGE_TOLERANCE,
    }
}

/// `max_ξ ⟨ξ⟩⁵ |v̂(ξ)|`.
pub fn xi5_sup(v_hat: &SpectralField) -> f64 {
    let grid = v_hat.grid();
    v_hat
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let r = grid.xi_norm(i);
            (1.0 + r * r).powf(2.5) * z.norm()
        })
        .fold(0.0, f64::max)
}

/// Share of `‖û‖²` inside the radius used for the fastest group speed.
pub const WRAP_MASS_FRACTION: f64 = 0.999;

/// Smallest `|ξ|` such that the modes with `|ξ'| ≤ |ξ|` carry `fraction` of `‖û‖²`.
pub fn spectral_radius(u: &ComplexField, fraction: f64) -> f64 {
    let grid = u.grid();
    let uh = forward(u);
    let mut shells: Vec<(f64, f64)> = uh
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| (grid.xi_norm(i), z.norm_sqr()))
        .collect();
    shells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = shells.iter().map(|s| s.1).sum();
    let mut acc = 0.0;
    for (r, m) in shells {
        acc += m;
        if acc >= fraction * total {
            return r;
        }
    }
    3f64.sqrt() * grid.nyquist()
}

/// Wrap-around horizon `L / (α ξ_max^{α-1})`, with `ξ_max` the
/// [`WRAP_MASS_FRACTION`] spectral radius of `u`.
pub fn wrap_horizon(u: &ComplexField, alpha: f64) -> f64 {
    let xi_max = spectral_radius(u, WRAP_MASS_FRACTION).max(u.grid().dk());
    u.grid().length() / (alpha * xi_max.powf(alpha - 1.0))
}

/// Dyadic indices whose bumps cover every nonzero mode of `grid`.
pub fn default_lp_range(grid: &Grid) -> RangeInclusive<i32> {
    let lo = grid.dk().log2().floor() as i32;
    let hi = (3f64.sqrt() * grid.nyquist()).log2().ceil() as i32;
    lo..=hi
}

/// `‖P_k u‖₂` for each `k` in `k_range`.
///
/// At most two bumps overlap at any frequency and `β(r)² + β(2r)²` lies in
/// `[1/2, 1]`, so for a mean-free `u` and a range covering the whole lattice
/// `Σ_k ‖P_k u‖² / ‖u‖²` lies in `[1/2, 1]`.
pub fn lp_energy_profile(u: &ComplexField, k_range: RangeInclusive<i32>) -> Vec<f64> {
    let grid = u.grid();
    let uh = forward(u);
    k_range
        .map(|k| {
            let p = lp_projector(grid, k);
            let sum: f64 = uh
                .values()
                .iter()
                .zip(p.values())
                .map(|(z, m)| m.re * m.re * z.norm_sqr())
                .sum();
            (sum / grid.length().powi(3)).sqrt()
        })
        .collect()
}
