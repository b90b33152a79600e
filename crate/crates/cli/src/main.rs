use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fracscat::runner::{self, selftest::run_selftest, RunManifest, RunStatus};
use fracscat::scattering::lemmas::verify_lemmas;

/// Environment variable holding the worker thread count.
const THREADS_VAR: &str = "FRACSCAT_THREADS";

#[derive(Parser)]
#[command(
    name = "fracscat",
    version,
    about = "Fractional Hartree simulator and modified-scattering diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a manifest from t = 0 to t_end
    Run { manifest: PathBuf },
    /// Continue a checkpoint to a later time
    Resume {
        checkpoint: PathBuf,
        #[arg(long)]
        until: f64,
        /// Output directory (defaults to the checkpoint's directory)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte-Carlo check of the |z| lower bound and the phase linearization
    VerifyLemmas {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fast invariant suite
    Selftest,
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .parse()
            .with_context(|| format!("{THREADS_VAR}={v} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn report(status: RunStatus, dir: &std::path::Path) -> ExitCode {
    match status {
        RunStatus::Complete { t } => {
            println!("complete at t = {t}; outputs in {}", dir.display());
            ExitCode::SUCCESS
        }
        RunStatus::BlowUp { t } => {
            eprintln!("blow-up at t = {t}; partial outputs in {}", dir.display());
            ExitCode::from(2)
        }
    }
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    init_threads()?;
    match cli.command {
        Command::Run { manifest } => {
            let text = std::fs::read_to_string(&manifest).with_context(|| format!("reading {}", manifest.display()))?;
            let m = RunManifest::parse(&text)?;
            print!("{}", m.echo());
            let (_, status) = runner::run_manifest(&m)?;
            Ok(report(status, &m.output_dir))
        }
        Command::Resume {
            checkpoint,
            until,
            output,
        } => {
            let dir = output.unwrap_or_else(|| {
                checkpoint
                    .parent()
                    .map(|p| p.to_path_buf())
                    .unwrap_or_else(|| PathBuf::from("."))
            });
            let (_, status) = runner::resume_checkpoint(&checkpoint, until, &dir)?;
            Ok(report(status, &dir))
        }
        Command::VerifyLemmas { alpha, samples, seed } => {
            let r = verify_lemmas(alpha, samples, seed)?;
            println!("alpha = {}", r.alpha);
            println!("samples = {}, seed = {}", r.samples, r.seed);
            println!(
                "inf |z| / min(|σ|^(α-1), |ξ-σ|/|σ|^(2-α)) = {:.6} ({} below {:.4})",
                r.z_ratio_inf,
                r.z_violations,
                r.z_threshold()
            );
            println!("sup |φ + φ~| / |η|^α = {:.6}", r.phase_ratio_sup);
            println!(
                "  by |η|/reach decade [1e-3,1e-2) [1e-2,1e-1) [1e-1,1]: {:.6} {:.6} {:.6}",
                r.phase_band_sups[0], r.phase_band_sups[1], r.phase_band_sups[2]
            );
            println!("sup |φ - φ~| / |η|^α = {:.6e}", r.phase_ratio_sup_literal);
            Ok(
                if r.z_violations == 0 && r.z_ratio_inf > 0.0 && r.phase_ratio_sup.is_finite() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                },
            )
        }
        Command::Selftest => {
            let checks = run_selftest();
            let mut ok = true;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
