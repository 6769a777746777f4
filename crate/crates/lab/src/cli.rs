//! Argument parsing and subcommand dispatch for the `cbs` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cone, enhancement, spectrum};
use crate::config::{Config, Mode, Overrides};
use crate::error::{LabError, Result};
use crate::output::{ensure_dir, write_json};
use crate::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "cbs", version, about = "Coherent backscattering by two saturated two-level atoms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inelastic fluorescence spectrum of one atom.
    Spectrum(Common),
    /// Enhancement factor against on-resonance saturation.
    Enhancement(Common),
    /// Backscattering pattern versus detection angle.
    Cone(Common),
    /// Run every oracle check and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Set every tolerance to zero to exercise the failure path.
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML config file.
    #[arg(long, short = 'c')]
    pub config: Option<PathBuf>,
    /// Detuning in linewidths, for every command.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, conflicts_with = "s0")]
    pub s: Option<f64>,
    #[arg(long)]
    pub s0: Option<f64>,
    #[arg(long)]
    pub r12_in_wavelengths: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
}

impl Common {
    pub fn resolve(&self, inject_fault: bool) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        cfg.apply(&Overrides {
            delta: self.delta,
            s: self.s,
            s0: self.s0,
            r12_in_wavelengths: self.r12_in_wavelengths,
            seed: self.seed,
            out: self.out.clone(),
            tol: self.tol,
            mode: self.mode,
            inject_fault,
        });
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs the verification suite and writes `verify.json`. A failing check
/// is reported as [`LabError::Verification`] after the report is written.
pub fn verify(cfg: &Config) -> Result<crate::verify::Report> {
    let report = Suite::new(cfg).run()?;
    ensure_dir(&cfg.out)?;
    write_json(&cfg.out.join("verify.json"), &report)?;
    Ok(report)
}

/// Executes a parsed command line; messages go to stdout.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum(c) => {
            let side = spectrum::run(&c.resolve(false)?)?;
            for s in &side.spectra {
                let positions: Vec<String> = s.peaks.iter().map(|p| format!("{:.4}", p.position)).collect();
                println!("delta {}: peaks at [{}]", s.delta, positions.join(", "));
            }
        }
        Command::Enhancement(c) => {
            let side = enhancement::run(&c.resolve(false)?)?;
            println!("slope d alpha/d s0 at 0: {:.6}", side.slope_at_zero);
        }
        Command::Cone(c) => {
            let side = cone::run(&c.resolve(false)?)?;
            println!(
                "peak {:.6e}, first zero at theta = {:.6}",
                side.orientation_averaged.peak, side.orientation_averaged.first_zero
            );
        }
        Command::Verify { common, inject_fault } => {
            let cfg = common.resolve(inject_fault)?;
            let report = verify(&cfg)?;
            for line in report.summary_lines() {
                println!("{line}");
            }
            if !report.passed {
                return Err(LabError::Verification {
                    failed: report.failed(),
                    total: report.checks.len(),
                });
            }
        }
    }
    Ok(())
}
