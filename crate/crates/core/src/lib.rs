//! Pseudo-spectral simulation and modified-scattering diagnostics for the
//! 3-d Hartree-type fractional Schrödinger equation
//!
//! ```text
//! i∂ₜu − |∇|^α u = λ (|x|^{−γ} ∗ |u|²) u,    1 < α ≤ 2,  0 < γ < 3,
//! ```
//!
//! on a periodic box standing in for ℝ³.
//!
//! * [`spectral`]: grids, transforms and Fourier multipliers.
//! * [`dynamics`]: free flow, Hartree potential, splitting integrator, conserved quantities.
//! * [`scattering`]: profiles, phase functions, the logarithmic phase correction and Cauchy gaps.
//! * [`diagnostics`]: weighted norms, decay fits and dyadic energy profiles.
//! * [`runner`]: manifests, checkpoints, CSV output and the end-to-end run driver.

pub mod diagnostics;
pub mod dynamics;
pub mod runner;
pub mod scattering;
pub mod spectral;
