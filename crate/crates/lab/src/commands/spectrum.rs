use cbs_core::single_atom::{default_half_width, inelastic_spectrum, uniform_grid};
use cbs_core::Drive;
use serde::Serialize;

use crate::config::Config;
use crate::error::{LabError, Result};
use crate::output::{ensure_dir, output_paths, write_csv, write_json, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakSummary {
    pub position: f64,
    pub height: f64,
    pub fwhm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub delta: f64,
    pub s: f64,
    pub half_width: f64,
    pub points: usize,
    /// Trapezoid integral of the sampled density.
    pub integral: f64,
    /// `s^2 / 2`
    pub integral_exact: f64,
    /// Width of the central peak; absent when the spectrum is split.
    pub fwhm: Option<f64>,
    pub peaks: Vec<PeakSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSidecar {
    pub command: &'static str,
    pub config_sha256: String,
    pub spectra: Vec<SpectrumSummary>,
}

/// Samples the inelastic spectrum for every configured detuning.
pub fn compute(cfg: &Config) -> Result<(Table, Vec<SpectrumSummary>)> {
    let s = cfg.drive()?.s();
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &delta in &cfg.spectrum.deltas {
        let drive = Drive::new(delta, s).map_err(|e| LabError::config("spectrum.deltas", e.to_string()))?;
        let half_width = cfg.spectrum.half_width.unwrap_or_else(|| default_half_width(&drive));
        let grid = uniform_grid(half_width, cfg.spectrum.points);
        let density = inelastic_spectrum(&drive, &grid).map_err(|e| match e {
            cbs_core::CbsError::GridTooNarrow { .. } => LabError::config("spectrum.half_width", e.to_string()),
            other => LabError::numeric("spectrum", other),
        })?;
        let peaks: Vec<PeakSummary> = density
            .peaks()
            .into_iter()
            .map(|p| PeakSummary {
                position: p.position,
                height: p.height,
                fwhm: p.fwhm,
            })
            .collect();
        rows.extend(density.grid.iter().zip(&density.values).map(|(&nu, &p)| vec![delta, nu, p]));
        summaries.push(SpectrumSummary {
            delta,
            s,
            half_width,
            points: grid.len(),
            integral: density.trapezoid(),
            integral_exact: density.norm,
            fwhm: if peaks.len() == 1 { Some(peaks[0].fwhm) } else { None },
            peaks,
        });
    }
    let table = Table {
        columns: vec!["delta_in_Gamma", "omega_minus_omegaL_in_Gamma", "P_in_per_eta"],
        units: "frequencies in Gamma; P_in in eta per Gamma".into(),
        rows,
    };
    Ok((table, summaries))
}

pub fn run(cfg: &Config) -> Result<SpectrumSidecar> {
    let (table, spectra) = compute(cfg)?;
    let hash = cfg.hash();
    ensure_dir(&cfg.out)?;
    let (csv, json) = output_paths(&cfg.out, "spectrum");
    write_csv(&csv, "spectrum", &hash, &table)?;
    let sidecar = SpectrumSidecar {
        command: "spectrum",
        config_sha256: hash,
        spectra,
    };
    write_json(&json, &sidecar)?;
    Ok(sidecar)
}
