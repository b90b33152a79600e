//! Pointwise phase geometry: the group-velocity difference `z`, its lower
//! bound, and the exact and linearized four-wave phases.

use super::ScatteringError;

pub type Vec3 = [f64; 3];

#[inline]
pub(crate) fn norm(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[inline]
pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// `v / |v|^{2-α}`, i.e. the group velocity of `|ξ|^α` divided by `α`.
/// Extended by 0 at the origin.
#[inline]
pub fn velocity_direction(v: Vec3, alpha: f64) -> Vec3 {
    let r = norm(v);
    if r == 0.0 {
        return [0.0; 3];
    }
    let s = r.powf(alpha - 2.0);
    [v[0] * s, v[1] * s, v[2] * s]
}

fn nonzero(v: Vec3, what: &'static str) -> Result<(), ScatteringError> {
    if norm(v) == 0.0 {
        Err(ScatteringError::ZeroVector(what))
    } else {
        Ok(())
    }
}

/// `z = ξ/|ξ|^{2-α} − σ/|σ|^{2-α}`.
pub fn z_vector(xi: Vec3, sigma: Vec3, alpha: f64) -> Result<Vec3, ScatteringError> {
    nonzero(xi, "xi")?;
    nonzero(sigma, "sigma")?;
    Ok(sub(velocity_direction(xi, alpha), velocity_direction(sigma, alpha)))
}

/// `min(|σ|^{α-1}, |ξ-σ| / |σ|^{2-α})`, the lower-bound profile for `|z|`.
pub fn z_lower_bound(xi: Vec3, sigma: Vec3, alpha: f64) -> Result<f64, ScatteringError> {
    nonzero(xi, "xi")?;
    nonzero(sigma, "sigma")?;
    let rs = norm(sigma);
    let a = rs.powf(alpha - 1.0);
    let b = norm(sub(xi, sigma)) * rs.powf(alpha - 2.0);
    Ok(a.min(b))
}

/// `|x+η|^α − |x|^α`, evaluated without cancellation for small `η`.
fn power_increment(x: Vec3, eta: Vec3, alpha: f64) -> f64 {
    let r2 = dot(x, x);
    if r2 == 0.0 {
        return dot(eta, eta).powf(0.5 * alpha);
    }
    let rel = (2.0 * dot(x, eta) + dot(eta, eta)) / r2;
    r2.powf(0.5 * alpha) * (0.5 * alpha * rel.ln_1p()).exp_m1()
}

/// `φ(ξ,η,σ) = |ξ|^α − |ξ+η|^α − |ξ+σ|^α + |ξ+η+σ|^α`.
pub fn phase_phi(xi: Vec3, eta: Vec3, sigma: Vec3, alpha: f64) -> f64 {
    power_increment(add(xi, sigma), eta, alpha) - power_increment(xi, eta, alpha)
}

/// `φ̃(ξ,η,σ) = α (ξ·η/|ξ|^{2-α} − (ξ+σ)·η/|ξ+σ|^{2-α})`.
///
/// With these signs the first-order Taylor term of [`phase_phi`] in `η` is
/// `−φ̃`; the two agree up to orientation of `η`.
pub fn phase_tilde(xi: Vec3, eta: Vec3, sigma: Vec3, alpha: f64) -> Result<f64, ScatteringError> {
    nonzero(xi, "xi")?;
    let xs = add(xi, sigma);
    nonzero(xs, "xi + sigma")?;
    Ok(alpha * (dot(velocity_direction(xi, alpha), eta) - dot(velocity_direction(xs, alpha), eta)))
}
