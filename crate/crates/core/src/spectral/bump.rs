//! Smooth radial cutoffs.
//!
//! `plateau(r)` is the C^∞ profile
//!
//! ```text
//!            ⎧ 1                              r ≤ 1
//! χ(r)  =    ⎨ ψ(2 - r) / (ψ(2 - r) + ψ(r - 1))   1 < r < 2,     ψ(t) = e^{-1/t} (t > 0), 0 otherwise
//!            ⎩ 0                              r ≥ 2
//! ```
//!
//! and the Littlewood–Paley bump is `β(r) = χ(r) - χ(2r)`, supported in
//! `(1/2, 2)` with `β(1) = 1`. The dyadic family `β(r / 2^k)` telescopes to a
//! partition of unity on `r > 0`.

fn psi(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step: 1 on `[0, 1]`, 0 on `[2, ∞)`.
pub fn plateau(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let a = psi(2.0 - r);
        let b = psi(r - 1.0);
        a / (a + b)
    }
}

/// Dyadic annulus bump `χ(r) - χ(2r)`.
pub fn lp_bump(r: f64) -> f64 {
    plateau(r) - plateau(2.0 * r)
}

/// Sum of the three neighbouring bumps `β(r/2) + β(r) + β(2r)`, evaluated in
/// telescoped form `χ(r/2) - χ(4r)`. It is exactly 1 on the support of `β`.
pub fn lp_bump_wide(r: f64) -> f64 {
    plateau(0.5 * r) - plateau(4.0 * r)
}
