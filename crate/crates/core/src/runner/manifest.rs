use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Deserialize;

use super::RunError;
use crate::diagnostics::{DEFAULT_DELTA0, DEFAULT_SOBOLEV_ORDER};
use crate::dynamics::{Scheme, SimConfig};
use crate::scattering::{default_theta, CorrectionParams, Vec3};

/// Version of the manifest, CSV and checkpoint formats written by this build.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    n: Option<usize>,
    #[serde(rename = "L")]
    length: Option<f64>,
    alpha: Option<f64>,
    t_end: Option<f64>,
    gamma: Option<f64>,
    lambda: Option<f64>,
    dt: Option<f64>,
    epsilon0: Option<f64>,
    scheme: Option<Scheme>,
    dealias: Option<bool>,
    gaussian_width: Option<f64>,
    random_phases: Option<bool>,
    seed: Option<u64>,
    theta: Option<f64>,
    cutoff_radius: Option<f64>,
    prefactor_scale: Option<f64>,
    delta0: Option<f64>,
    sobolev_order: Option<f64>,
    sample_interval: Option<f64>,
    probe_xi: Option<Vec<Vec3>>,
    output_dir: Option<PathBuf>,
    schema_version: Option<u32>,
}

/// A fully resolved and validated run description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub config: SimConfig,
    /// Width `w` of the initial Gaussian `ε₀ e^{-|x|²/(2w²)}`.
    pub gaussian_width: f64,
    /// Rotate the lowest `5³` Fourier modes of the initial datum by seeded random phases.
    pub random_phases: bool,
    pub seed: u64,
    pub theta: f64,
    pub cutoff_radius: f64,
    pub prefactor_scale: f64,
    pub delta0: f64,
    pub sobolev_order: f64,
    /// Cadence of the time series; dyadic times `2^m` are always added.
    pub sample_interval: f64,
    /// Frequencies at which `B(t, ξ)` is written to the time series.
    pub probe_xi: Vec<Vec3>,
    pub output_dir: PathBuf,
    pub schema_version: u32,
}

fn range_err(key: &'static str, value: f64, range: &'static str) -> RunError {
    RunError::Manifest {
        key,
        message: format!("{value} is outside the legal range {range}"),
    }
}

fn required<T>(v: Option<T>, key: &'static str) -> Result<T, RunError> {
    v.ok_or(RunError::Manifest {
        key,
        message: "missing required key".into(),
    })
}

impl RunManifest {
    /// Parses and validates manifest text (TOML). Unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self, RunError> {
        let raw: RawManifest = toml::from_str(text).map_err(|e| RunError::Parse(e.message().to_string()))?;
        let n = required(raw.n, "n")?;
        let length = required(raw.length, "L")?;
        let alpha = required(raw.alpha, "alpha")?;
        let t_end = required(raw.t_end, "t_end")?;
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(range_err("alpha", alpha, "(1, 2]"));
        }
        if !(n >= 8 && n.is_power_of_two()) {
            return Err(range_err("n", n as f64, "powers of two ≥ 8"));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(range_err("L", length, "(0, ∞)"));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(range_err("t_end", t_end, "(0, ∞)"));
        }
        let mut config = SimConfig::new(n, length, alpha, t_end);
        config.gamma = raw.gamma.unwrap_or(config.gamma);
        config.lambda = raw.lambda.unwrap_or(config.lambda);
        config.dt = raw.dt.unwrap_or(config.dt.min(t_end / 2.0));
        config.epsilon0 = raw.epsilon0.unwrap_or(config.epsilon0);
        config.scheme = raw.scheme.unwrap_or(config.scheme);
        config.dealias = raw.dealias.unwrap_or(config.dealias);
        config.validate().map_err(|e| match e {
            crate::dynamics::DynamicsError::InvalidParameter { name, value, range } => range_err(name, value, range),
            other => RunError::Manifest {
                key: "config",
                message: other.to_string(),
            },
        })?;

        let theta = match raw.theta {
            Some(t) if t > 0.0 && t.is_finite() => t,
            Some(t) => return Err(range_err("theta", t, "(0, ∞)")),
            None => default_theta(alpha).map_err(|_| RunError::Manifest {
                key: "theta",
                message: format!(
                    "default (3α−5)/(40(α+1)) is not positive for alpha = {alpha} ≤ 5/3; set theta explicitly"
                ),
            })?,
        };
        let positive = |v: Option<f64>, default: f64, key: &'static str| -> Result<f64, RunError> {
            let v = v.unwrap_or(default);
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(range_err(key, v, "(0, ∞)"))
            }
        };
        let gaussian_width = positive(raw.gaussian_width, 1.0, "gaussian_width")?;
        let cutoff_radius = positive(raw.cutoff_radius, 1.0, "cutoff_radius")?;
        let prefactor_scale = raw.prefactor_scale.unwrap_or(1.0);
        if !prefactor_scale.is_finite() {
            return Err(range_err("prefactor_scale", prefactor_scale, "finite"));
        }
        let delta0 = positive(raw.delta0, DEFAULT_DELTA0, "delta0")?;
        let sobolev_order = raw.sobolev_order.unwrap_or(DEFAULT_SOBOLEV_ORDER);
        if !(sobolev_order >= 0.0 && sobolev_order.is_finite()) {
            return Err(range_err("sobolev_order", sobolev_order, "[0, ∞)"));
        }
        let sample_interval = positive(raw.sample_interval, 0.25, "sample_interval")?;
        if sample_interval < config.dt {
            return Err(range_err("sample_interval", sample_interval, "[dt, ∞)"));
        }
        let probe_xi = raw.probe_xi.unwrap_or_else(|| vec![[0.5, 0.0, 0.0], [1.0, 0.0, 0.0]]);
        if probe_xi.iter().flatten().any(|c| !c.is_finite()) {
            return Err(RunError::Manifest {
                key: "probe_xi",
                message: "entries must be finite".into(),
            });
        }
        let schema_version = raw.schema_version.unwrap_or(SCHEMA_VERSION);
        if schema_version != SCHEMA_VERSION {
            return Err(RunError::Manifest {
                key: "schema_version",
                message: format!("{schema_version} is not supported; this build writes version {SCHEMA_VERSION}"),
            });
        }
        Ok(Self {
            config,
            gaussian_width,
            random_phases: raw.random_phases.unwrap_or(false),
            seed: raw.seed.unwrap_or(0),
            theta,
            cutoff_radius,
            prefactor_scale,
            delta0,
            sobolev_order,
            sample_interval,
            probe_xi,
            output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
            schema_version,
        })
    }

    pub fn correction_params(&self) -> CorrectionParams {
        CorrectionParams {
            alpha: self.config.alpha,
            lambda: self.config.lambda,
            theta: self.theta,
            cutoff_radius: self.cutoff_radius,
            prefactor_scale: self.prefactor_scale,
        }
    }

    /// The resolved manifest as TOML, every key explicit. Parsing the echo
    /// gives back the same manifest.
    pub fn echo(&self) -> String {
        let c = &self.config;
        let scheme = match c.scheme {
            Scheme::Strang => "strang",
            Scheme::Lie => "lie",
        };
        let mut s = String::new();
        let _ = writeln!(s, "schema_version = {}", self.schema_version);
        let _ = writeln!(s, "n = {}", c.n);
        let _ = writeln!(s, "L = {:?}", c.length);
        let _ = writeln!(s, "alpha = {:?}", c.alpha);
        let _ = writeln!(s, "gamma = {:?}", c.gamma);
        let _ = writeln!(s, "lambda = {:?}", c.lambda);
        let _ = writeln!(s, "dt = {:?}", c.dt);
        let _ = writeln!(s, "t_end = {:?}", c.t_end);
        let _ = writeln!(s, "epsilon0 = {:?}", c.epsilon0);
        let _ = writeln!(s, "scheme = \"{scheme}\"");
        let _ = writeln!(s, "dealias = {}", c.dealias);
        let _ = writeln!(s, "gaussian_width = {:?}", self.gaussian_width);
        let _ = writeln!(s, "random_phases = {}", self.random_phases);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "theta = {:?}", self.theta);
        let _ = writeln!(s, "cutoff_radius = {:?}", self.cutoff_radius);
        let _ = writeln!(s, "prefactor_scale = {:?}", self.prefactor_scale);
        let _ = writeln!(s, "delta0 = {:?}", self.delta0);
        let _ = writeln!(s, "sobolev_order = {:?}", self.sobolev_order);
        let _ = writeln!(s, "sample_interval = {:?}", self.sample_interval);
        let probes: Vec<String> = self
            .probe_xi
            .iter()
            .map(|p| format!("[{:?}, {:?}, {:?}]", p[0], p[1], p[2]))
            .collect();
        let _ = writeln!(s, "probe_xi = [{}]", probes.join(", "));
        let _ = writeln!(s, "output_dir = {:?}", self.output_dir.display().to_string());
        s
    }
}
