use cbs_core::numerics::Tolerance;
use cbs_core::two_atom::{
    crossed_pair_quadrature, enhancement_factor, enhancement_large_detuning, enhancement_linear, inelastic_crossed,
};
use cbs_core::Drive;
use serde::Serialize;

use super::linspace;
use crate::config::Config;
use crate::error::{LabError, Result};
use crate::output::{ensure_dir, output_paths, write_csv, write_json, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnhancementSidecar {
    pub command: &'static str,
    pub config_sha256: String,
    pub delta: f64,
    pub mode: &'static str,
    /// One-sided second-order finite difference of `alpha_exact` at `s0 = 0`.
    pub slope_at_zero: f64,
    pub slope_step: f64,
    pub slope_expected: f64,
    /// Largest `|alpha_exact - alpha_large_detuning|` on the grid.
    pub max_large_detuning_deviation: f64,
    /// Crossed inelastic term at the largest `s0`, closed form and by
    /// quadrature in the configured propagation mode.
    pub crossed_inelastic_closed: f64,
    pub crossed_inelastic_quadrature: f64,
}

pub fn alpha_exact(delta: f64, s0: f64) -> Result<f64> {
    let drive = Drive::from_s0(delta, s0).map_err(|e| LabError::config("enhancement", e.to_string()))?;
    enhancement_factor(&drive)
        .map(|(alpha, _)| alpha)
        .map_err(|e| LabError::config("enhancement.s0_max", e.to_string()))
}

pub fn slope_at_zero(delta: f64, h: f64) -> Result<f64> {
    Ok((-3.0 * alpha_exact(delta, 0.0)? + 4.0 * alpha_exact(delta, h)? - alpha_exact(delta, 2.0 * h)?) / (2.0 * h))
}

pub fn compute(cfg: &Config) -> Result<(Table, EnhancementSidecar)> {
    let e = &cfg.enhancement;
    let s_max = e.s0_max / (1.0 + 4.0 * e.delta * e.delta);
    if s_max > 0.2 {
        return Err(LabError::config(
            "enhancement.s0_max",
            format!("reaches s = {s_max:.3} at delta = {}, above the perturbative limit 0.2", e.delta),
        ));
    }
    let mut rows = Vec::new();
    let mut max_dev: f64 = 0.0;
    for s0 in linspace(0.0, e.s0_max, e.points) {
        let exact = alpha_exact(e.delta, s0)?;
        let large = enhancement_large_detuning(s0);
        max_dev = max_dev.max((exact - large).abs());
        rows.push(vec![s0, exact, large, enhancement_linear(s0)]);
    }
    let top = Drive::from_s0(e.delta, e.s0_max).map_err(|err| LabError::config("enhancement", err.to_string()))?;
    let tol: Tolerance = cfg.tolerance();
    // two interfering pairs, one per inelastic atom
    let quad = 2.0 * crossed_pair_quadrature(&top, &cfg.propagation(), &tol)
        .map_err(|err| LabError::numeric("crossed inelastic quadrature", err))?;
    let sidecar = EnhancementSidecar {
        command: "enhancement",
        config_sha256: cfg.hash(),
        delta: e.delta,
        mode: cfg.mode.as_str(),
        slope_at_zero: slope_at_zero(e.delta, e.slope_step)?,
        slope_step: e.slope_step,
        slope_expected: -0.25,
        max_large_detuning_deviation: max_dev,
        crossed_inelastic_closed: inelastic_crossed(&top),
        crossed_inelastic_quadrature: quad,
    };
    let table = Table {
        columns: vec!["s0", "alpha_exact", "alpha_large_detuning", "alpha_linear"],
        units: "s0 dimensionless on-resonance saturation; alpha dimensionless".into(),
        rows,
    };
    Ok((table, sidecar))
}

pub fn run(cfg: &Config) -> Result<EnhancementSidecar> {
    let (table, sidecar) = compute(cfg)?;
    ensure_dir(&cfg.out)?;
    let (csv, json) = output_paths(&cfg.out, "enhancement");
    write_csv(&csv, "enhancement", &sidecar.config_sha256, &table)?;
    write_json(&json, &sidecar)?;
    Ok(sidecar)
}
