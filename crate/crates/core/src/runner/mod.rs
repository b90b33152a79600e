//! End-to-end experiment driver: manifests, the sampling schedule, initial
//! data, checkpoints and CSV output.

mod checkpoint;
mod manifest;
mod output;
mod schedule;
pub mod selftest;

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, MAGIC};
pub use manifest::{RunManifest, SCHEMA_VERSION};
pub use output::{emit_gaps, emit_series, format_f64, series_header};
pub use schedule::{dyadic_index, sample_times};

use crate::diagnostics::{record, wrap_horizon, DiagnosticsError, DiagnosticsOptions, DiagnosticsRecord};
use crate::dynamics::{DynamicsError, State, Stepper};
use crate::scattering::{
    cauchy_gap, modified_profile, profile, raw_gap, ModifiedProfile, PhaseCorrection, ScatteringError,
};
use crate::spectral::{forward, inverse, ComplexField, Grid, SpectralField};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("manifest: {0}")]
    Parse(String),
    #[error("manifest key `{key}`: {message}")]
    Manifest { key: &'static str, message: String },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("checkpoint checksum mismatch (file truncated or corrupted)")]
    Checksum,
    #[error("checkpoint is not a fracscat checkpoint")]
    BadMagic,
    #[error("checkpoint schema version {found}, this build reads {expected}")]
    SchemaMismatch { expected: u32, found: u32 },
    #[error("checkpoint payload is inconsistent: {0}")]
    Corrupt(String),
    #[error("cannot resume to t = {until}: checkpoint is already at t = {current}")]
    ResumeBackwards { current: f64, until: f64 },
    #[error("nothing to emit")]
    Empty,
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// One row of `series.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRow {
    pub record: DiagnosticsRecord,
    /// `B(t, ξ)` at the nearest mode to each configured probe.
    pub probe_b: Vec<f64>,
}

/// One row of `gaps.csv`: Cauchy gaps between the dyadic times `2^m` and `2^{m+1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapRow {
    pub m: i32,
    pub t1: f64,
    pub t2: f64,
    /// `‖⟨ξ⟩⁵ (w(t₂) − w(t₁))‖_∞`.
    pub gap_w: f64,
    /// `‖⟨ξ⟩⁵ (v̂(t₂) − v̂(t₁))‖_∞`.
    pub gap_v: f64,
}

/// Profiles kept from the most recent dyadic time.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicSnapshot {
    pub m: i32,
    pub w: ModifiedProfile,
    pub v_hat: SpectralField,
}

/// How a run ended.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RunStatus {
    Complete { t: f64 },
    BlowUp { t: f64 },
}

/// `ε₀ e^{-|x|²/(2w²)}`, optionally with seeded random phases on the Fourier
/// modes `m ∈ {-2, …, 2}³`.
pub fn initial_state(manifest: &RunManifest, grid: &Grid) -> ComplexField {
    let eps = manifest.config.epsilon0;
    let w2 = manifest.gaussian_width * manifest.gaussian_width;
    let u = ComplexField::from_position_fn(grid, |x| {
        Complex64::new(
            eps * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * w2)).exp(),
            0.0,
        )
    });
    if !manifest.random_phases {
        return u;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(manifest.seed);
    let mut uh = forward(&u);
    for a in -2..=2 {
        for b in -2..=2 {
            for c in -2..=2 {
                let phase = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                if let Some(i) = grid.mode_index([a, b, c]) {
                    uh.values_mut()[i] *= Complex64::cis(phase);
                }
            }
        }
    }
    inverse(&uh)
}

/// A run in progress. The state always sits on a sample time, with the
/// phase correction accumulated through it and the profile at that time held
/// back for the next left-endpoint increment.
#[derive(Clone, Debug)]
pub struct Run {
    manifest: RunManifest,
    stepper: Stepper,
    opts: DiagnosticsOptions,
    state: State,
    correction: PhaseCorrection,
    pending: Option<SpectralField>,
    last_dyadic: Option<DyadicSnapshot>,
    rows: Vec<SampleRow>,
    gaps: Vec<GapRow>,
}

impl Run {
    /// Sets up the initial state and records the `t = 0` sample.
    pub fn new(manifest: &RunManifest) -> Result<Self, RunError> {
        let stepper = Stepper::new(&manifest.config)?;
        let grid = stepper.grid().clone();
        let u0 = initial_state(manifest, &grid);
        let correction = PhaseCorrection::new(&grid, manifest.correction_params(), 0.0)?;
        let mut run = Self {
            opts: diagnostics_options(manifest, &grid),
            manifest: manifest.clone(),
            stepper,
            state: State::new(0.0, u0),
            correction,
            pending: None,
            last_dyadic: None,
            rows: Vec::new(),
            gaps: Vec::new(),
        };
        run.sample()?;
        Ok(run)
    }

    pub(crate) fn from_parts(manifest: RunManifest, ckpt: Checkpoint) -> Result<Self, RunError> {
        let stepper = Stepper::new(&manifest.config)?;
        let grid = stepper.grid().clone();
        Ok(Self {
            opts: diagnostics_options(&manifest, &grid),
            manifest,
            stepper,
            state: ckpt.state,
            correction: ckpt.correction,
            pending: ckpt.pending,
            last_dyadic: ckpt.last_dyadic,
            rows: ckpt.rows,
            gaps: ckpt.gaps,
        })
    }

    pub fn manifest(&self) -> &RunManifest {
        &self.manifest
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn correction(&self) -> &PhaseCorrection {
        &self.correction
    }

    pub fn rows(&self) -> &[SampleRow] {
        &self.rows
    }

    pub fn gaps(&self) -> &[GapRow] {
        &self.gaps
    }

    pub fn last_dyadic(&self) -> Option<&DyadicSnapshot> {
        self.last_dyadic.as_ref()
    }

    /// Advances through every sample time in `(t, until]`.
    pub fn run_until(&mut self, until: f64) -> Result<(), RunError> {
        if until < self.state.t {
            return Err(RunError::ResumeBackwards {
                current: self.state.t,
                until,
            });
        }
        let times = sample_times(self.manifest.sample_interval, until);
        let start = self.state.t;
        for &t in times.iter().filter(|&&t| t > start) {
            self.state = self.stepper.advance(&self.state, t)?;
            self.sample()?;
        }
        Ok(())
    }

    fn sample(&mut self) -> Result<(), RunError> {
        let t = self.state.t;
        let v_hat = profile(&self.state.u, t, self.manifest.config.alpha)?;
        if let Some(prev) = self.pending.take() {
            let s = self.correction.t();
            self.correction = self.correction.accumulate(&prev, s, t - s)?;
        }
        let record = record(&self.state, &self.manifest.config, &self.opts)?;
        let probe_b = self
            .manifest
            .probe_xi
            .iter()
            .map(|&xi| self.correction.at(xi))
            .collect();
        self.rows.push(SampleRow { record, probe_b });
        if let Some(m) = dyadic_index(t) {
            let w = modified_profile(&v_hat, t, &self.correction)?;
            if let Some(prev) = self.last_dyadic.as_ref().filter(|d| d.m == m - 1) {
                self.gaps.push(GapRow {
                    m: prev.m,
                    t1: prev.w.t(),
                    t2: t,
                    gap_w: cauchy_gap(&prev.w, &w)?,
                    gap_v: raw_gap(&prev.v_hat, &v_hat)?,
                });
            }
            self.last_dyadic = Some(DyadicSnapshot {
                m,
                w,
                v_hat: v_hat.clone(),
            });
        }
        self.pending = Some(v_hat);
        Ok(())
    }

    /// Wrap-around horizon of the initial data.
    pub fn wrap_horizon(&self) -> f64 {
        let u0 = initial_state(&self.manifest, self.stepper.grid());
        wrap_horizon(&u0, self.manifest.config.alpha)
    }

    /// Snapshot for [`save_checkpoint`].
    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            manifest_text: self.manifest.echo(),
            state: self.state.clone(),
            correction: self.correction.clone(),
            pending: self.pending.clone(),
            last_dyadic: self.last_dyadic.clone(),
            rows: self.rows.clone(),
            gaps: self.gaps.clone(),
        }
    }

    /// Rebuilds a run from a checkpoint.
    pub fn resume(ckpt: Checkpoint) -> Result<Self, RunError> {
        let manifest = RunManifest::parse(&ckpt.manifest_text)?;
        Self::from_parts(manifest, ckpt)
    }

    /// Writes `series.csv`, `gaps.csv`, `checkpoint.bin`, `manifest.toml` and
    /// `status.txt` into `dir`.
    pub fn write_outputs(&self, dir: &Path, status: RunStatus) -> Result<(), RunError> {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        emit_series(&self.rows, &self.opts, &dir.join("series.csv"))?;
        emit_gaps(&self.gaps, &dir.join("gaps.csv"))?;
        save_checkpoint(&self.checkpoint(), &dir.join("checkpoint.bin"))?;
        output::write_atomic(&dir.join("manifest.toml"), self.manifest.echo().as_bytes())?;
        let mut status_text = match status {
            RunStatus::Complete { t } => format!("status = \"complete\"\nt = {}\n", format_f64(t)),
            RunStatus::BlowUp { t } => format!(
                "status = \"blow-up\"\nt = {}\npartial = true\nlast_sample = {}\n",
                format_f64(t),
                format_f64(self.state.t)
            ),
        };
        status_text.push_str(&format!("t_wrap = {}\n", format_f64(self.wrap_horizon())));
        output::write_atomic(&dir.join("status.txt"), status_text.as_bytes())
    }
}

fn diagnostics_options(manifest: &RunManifest, grid: &Grid) -> DiagnosticsOptions {
    DiagnosticsOptions {
        sobolev_order: manifest.sobolev_order,
        ..DiagnosticsOptions::for_grid(grid)
    }
}

/// Drives `run` to `until` and writes the outputs to `dir`. A blow-up is
/// reported in `status.txt` with the samples gathered so far.
pub fn drive(run: &mut Run, until: f64, dir: &Path) -> Result<RunStatus, RunError> {
    match run.run_until(until) {
        Ok(()) => {
            let status = RunStatus::Complete { t: run.state().t };
            run.write_outputs(dir, status)?;
            Ok(status)
        }
        Err(RunError::Dynamics(DynamicsError::BlowUp { t })) => {
            let status = RunStatus::BlowUp { t };
            run.write_outputs(dir, status)?;
            Ok(status)
        }
        Err(e) => Err(e),
    }
}

/// Runs a manifest from `t = 0` to `t_end`, writing into its output directory.
pub fn run_manifest(manifest: &RunManifest) -> Result<(Run, RunStatus), RunError> {
    let mut run = Run::new(manifest)?;
    let status = drive(&mut run, manifest.config.t_end, &manifest.output_dir)?;
    Ok((run, status))
}

/// Loads a checkpoint and continues it to `until`, writing into `dir`.
pub fn resume_checkpoint(path: &Path, until: f64, dir: &Path) -> Result<(Run, RunStatus), RunError> {
    let mut run = Run::resume(load_checkpoint(path)?)?;
    let status = drive(&mut run, until, dir)?;
    Ok((run, status))
}
