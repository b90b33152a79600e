//! Observables of a run: conserved quantities, the components of the
//! bootstrap control norm, decay fits and dyadic energy profiles.

mod fit;
mod norms;

use std::ops::RangeInclusive;

use thiserror::Error;

pub use fit::{decay_fit, DecayFit, MIN_FIT_SAMPLES};
pub use norms::{
    default_lp_range, lp_energy_profile, sobolev_norm, spectral_radius, weighted_norms, wrap_horizon, xi5_sup,
    WeightedNorms, EDGE_SHELL, EDGE_TOLERANCE, WRAP_MASS_FRACTION,
};

use crate::dynamics::{energy, mass, DynamicsError, SimConfig, State};
use crate::scattering::{profile, ScatteringError};
use crate::spectral::inverse;

/// Default weight exponent `δ₀` of the control norm.
pub const DEFAULT_DELTA0: f64 = 1.0 / 36.0;
/// Default Sobolev order `N` of the control norm.
pub const DEFAULT_SOBOLEV_ORDER: f64 = 10.0;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error("empty series")]
    Empty,
    #[error("fit window [{start}, {end}] must satisfy 1 ≤ start < end")]
    InvalidWindow { start: f64, end: f64 },
    #[error("{found} samples in window, at least {needed} required")]
    TooFewSamples { found: usize, needed: usize },
    #[error("non-positive value {value} at t = {t}")]
    NonPositive { t: f64, value: f64 },
    #[error("{name} = {value} is outside the legal range {range}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("records carry H^{found} norms, H^{expected} requested")]
    OrderMismatch { expected: f64, found: f64 },
}

/// One row of the time series.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    /// `‖u‖_∞`.
    pub sup_u: f64,
    /// `‖u‖_{H^N}` with `N = sobolev_order`.
    pub h_n: f64,
    pub xv_h3: f64,
    pub x2v_h2: f64,
    /// `‖⟨ξ⟩⁵ v̂‖_∞`.
    pub xi5_sup: f64,
    /// `‖P_k u‖₂` for `k` in the configured dyadic range.
    pub lp_profile: Vec<f64>,
    /// The profile has more than 1% of its mass near the box edge.
    pub edge_warning: bool,
    pub sobolev_order: f64,
}

/// Settings for [`record`].
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsOptions {
    pub sobolev_order: f64,
    pub lp_range: RangeInclusive<i32>,
}

impl DiagnosticsOptions {
    pub fn for_grid(grid: &crate::spectral::Grid) -> Self {
        Self {
            sobolev_order: DEFAULT_SOBOLEV_ORDER,
            lp_range: default_lp_range(grid),
        }
    }
}

/// Evaluates every diagnostic on `state`.
pub fn record(
    state: &State,
    cfg: &SimConfig,
    opts: &DiagnosticsOptions,
) -> Result<DiagnosticsRecord, DiagnosticsError> {
    if !(opts.sobolev_order >= 0.0 && opts.sobolev_order.is_finite()) {
        return Err(DiagnosticsError::InvalidParameter {
            name: "sobolev_order",
            value: opts.sobolev_order,
            range: "[0, ∞)",
        });
    }
    let u = &state.u;
    let v_hat = profile(u, state.t, cfg.alpha)?;
    let v = inverse(&v_hat);
    let w = weighted_norms(&v);
    Ok(DiagnosticsRecord {
        t: state.t,
        mass: mass(u),
        energy: energy(u, cfg)?,
        sup_u: u.sup_norm(),
        h_n: sobolev_norm(u, opts.sobolev_order),
        xv_h3: w.xv_h3,
        x2v_h2: w.x2v_h2,
        xi5_sup: xi5_sup(&v_hat),
        lp_profile: lp_energy_profile(u, opts.lp_range.clone()),
        edge_warning: w.edge_warning,
        sobolev_order: opts.sobolev_order,
    })
}

/// `sup_t [⟨t⟩^{-δ₀}‖u‖_{H^N} + ⟨t⟩^{-δ₀}‖xv‖_{H³} + ⟨t⟩^{-2δ₀}‖x²v‖_{H²} + ‖⟨ξ⟩⁵v̂‖_∞]`
/// over the sampled times.
pub fn sigma_norm(records: &[DiagnosticsRecord], delta0: f64, order: f64) -> Result<f64, DiagnosticsError> {
    if records.is_empty() {
        return Err(DiagnosticsError::Empty);
    }
    if !(delta0 > 0.0 && delta0.is_finite()) {
        return Err(DiagnosticsError::InvalidParameter {
            name: "delta0",
            value: delta0,
            range: "(0, ∞)",
        });
    }
    let mut sup: f64 = 0.0;
    for r in records {
        if r.sobolev_order != order {
            return Err(DiagnosticsError::OrderMismatch {
                expected: order,
                found: r.sobolev_order,
            });
        }
        sup = sup.max(sigma_bracket(r, delta0));
    }
    Ok(sup)
}

/// The bracket of [`sigma_norm`] at a single record.
pub fn sigma_bracket(r: &DiagnosticsRecord, delta0: f64) -> f64 {
    let jt = (1.0 + r.t * r.t).sqrt();
    let w = jt.powf(-delta0);
    w * r.h_n + w * r.xv_h3 + w * w * r.x2v_h2 + r.xi5_sup
}
