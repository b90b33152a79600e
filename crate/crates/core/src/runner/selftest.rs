//! Fast invariant checks runnable from the command line.

use num_complex::Complex64;

use super::{load_checkpoint, save_checkpoint, Run, RunManifest};
use crate::dynamics::{linear_propagate, mass, SimConfig, State, Stepper};
use crate::scattering::{modified_profile, profile, z_vector, CorrectionParams, PhaseCorrection};
use crate::spectral::bump::lp_bump;
use crate::spectral::{forward, inverse, lp_projector, lp_projector_wide, ComplexField, Grid};

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, value: f64, limit: f64) -> Check {
    Check {
        name,
        passed: value <= limit,
        detail: format!("{value:.3e} (limit {limit:.0e})"),
    }
}

fn test_field(g: &Grid) -> ComplexField {
    ComplexField::from_position_fn(g, |x| {
        let r2 = (x[0] - 0.3).powi(2) + x[1] * x[1] + (x[2] + 0.5).powi(2);
        Complex64::new((-r2 / 2.0).exp(), 0.2 * (-r2).exp() * x[1])
    })
}

/// Runs every check; none takes more than a fraction of a second.
pub fn run_selftest() -> Vec<Check> {
    let mut out = Vec::new();
    let g = Grid::new(16, 10.0).expect("valid grid");
    let u = test_field(&g);

    let back = inverse(&forward(&u));
    let err = u
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    out.push(check("transform round trip", err / u.sup_norm(), 1e-13));

    let k = [1.0 * g.dk(), -2.0 * g.dk(), 0.0];
    let wave = ComplexField::from_position_fn(&g, |x| Complex64::cis(k[0] * x[0] + k[1] * x[1]));
    let tau = 3.3;
    let moved = linear_propagate(&wave, tau, 1.8).expect("valid alpha");
    let omega = (k[0] * k[0] + k[1] * k[1]).sqrt().powf(1.8);
    let err = wave
        .values()
        .iter()
        .zip(moved.values())
        .map(|(a, b)| (a * Complex64::cis(-omega * tau) - b).norm())
        .fold(0.0, f64::max);
    out.push(check("plane-wave propagation", err, 1e-12));

    let mut worst: f64 = 0.0;
    for k in -2..4 {
        let p = lp_projector(&g, k);
        let pw = lp_projector_wide(&g, k);
        for (a, b) in p.values().iter().zip(pw.values()) {
            worst = worst.max((a * b - a).norm());
        }
    }
    out.push(check("P_k P~_k = P_k", worst, 0.0));

    let mut worst: f64 = 0.0;
    for i in 1..2000 {
        let r = 0.01 * i as f64;
        let s: f64 = (-12..12).map(|k| lp_bump(r / 2f64.powi(k))).sum();
        worst = worst.max((s - 1.0).abs());
    }
    out.push(check("partition of unity", worst, 1e-12));

    let cfg = SimConfig {
        dt: 0.05,
        ..SimConfig::new(16, 10.0, 1.8, 1.0)
    };
    let stepper = Stepper::new(&cfg).expect("valid config");
    let s0 = State::new(0.0, u.clone());
    let m0 = mass(&u);
    let s1 = stepper.advance(&s0, 1.0).expect("stable");
    out.push(check(
        "mass drift over 20 steps",
        ((mass(&s1.u) - m0) / m0).abs(),
        1e-12,
    ));

    let v = profile(&s1.u, 1.0, 1.8).expect("valid alpha");
    let params = CorrectionParams::new(1.8, 1.0).expect("alpha above 5/3");
    let b = PhaseCorrection::new(&g, params, 0.0)
        .and_then(|b| b.accumulate(&v, 0.0, 1.0))
        .expect("finite data");
    let w = modified_profile(&v, 1.0, &b).expect("matching times");
    let err = w
        .values()
        .iter()
        .zip(v.values())
        .map(|(a, b)| (a.norm() - b.norm()).abs() / b.norm().max(1e-300))
        .fold(0.0, f64::max);
    out.push(check("|w| = |v^|", err, 1e-14));

    let (xi, sigma) = ([0.3, -1.1, 0.4], [2.0, 0.5, -0.7]);
    let a = z_vector(xi, sigma, 1.8).expect("nonzero");
    let bz = z_vector(sigma, xi, 1.8).expect("nonzero");
    let err = (0..3).map(|j| (a[j] + bz[j]).abs()).fold(0.0, f64::max);
    out.push(check("z antisymmetry", err, 0.0));

    out.push(checkpoint_check());
    out
}

fn checkpoint_check() -> Check {
    let name = "checkpoint round trip";
    let result = (|| -> Result<bool, super::RunError> {
        let m = RunManifest::parse("n = 8\nL = 8.0\nalpha = 1.8\nt_end = 1.0\ndt = 0.1\nsample_interval = 0.5\n")?;
        let mut run = Run::new(&m)?;
        run.run_until(1.0)?;
        let dir = tempfile::tempdir().map_err(super::io_err(std::path::Path::new(".")))?;
        let path = dir.path().join("selftest.ckpt");
        let ckpt = run.checkpoint();
        save_checkpoint(&ckpt, &path)?;
        Ok(load_checkpoint(&path)? == ckpt)
    })();
    match result {
        Ok(ok) => Check {
            name,
            passed: ok,
            detail: if ok { "bit-identical".into() } else { "mismatch".into() },
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}
