use cbs_core::coherence::{averaged_pattern, cone_shape, fixed_frequency_pattern};
use cbs_core::two_atom::{crossed_pair_quadrature, inelastic_ladder};
use serde::Serialize;

use super::{default_theta_max, linspace};
use crate::config::Config;
use crate::error::{LabError, Result};
use crate::output::{ensure_dir, output_paths, write_csv, write_json, Table};

/// Pattern at one detected frequency.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPanel {
    pub nu_d: f64,
    pub phase: f64,
    pub contrast: f64,
    /// Factor applied so that the angular mean equals `I_I + I_II`.
    pub scale: f64,
}

/// Pattern after integrating over the detected frequency.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragedPanel {
    pub path_i: f64,
    pub path_ii: f64,
    pub gamma: f64,
    pub phi: f64,
    /// `2 sqrt(I_I I_II) gamma`
    pub amplitude: f64,
}

/// Both atoms scattering inelastically, pair orientation averaged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrientationPanel {
    pub ladder: f64,
    pub crossed: f64,
    pub peak: f64,
    pub first_zero: f64,
    pub far_field: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeSidecar {
    pub command: &'static str,
    pub config_sha256: String,
    pub delta: f64,
    pub s: f64,
    pub mode: &'static str,
    pub k_r12: f64,
    pub k_r_perp: f64,
    pub fixed: FixedPanel,
    pub averaged: AveragedPanel,
    pub orientation_averaged: OrientationPanel,
}

pub fn compute(cfg: &Config) -> Result<(Table, ConeSidecar)> {
    let drive = cfg.drive()?;
    let tol = cfg.tolerance();
    let k_r12 = cfg.k_r12();
    let k_r_perp = cfg.cone.r_perp_ratio * k_r12;
    let nu_d = cfg.cone.nu_d.unwrap_or(-drive.delta());
    let theta_max = cfg.cone.theta_max.unwrap_or_else(|| default_theta_max(k_r12));
    let thetas = linspace(0.0, theta_max, cfg.cone.points);

    let ladder = inelastic_ladder(&drive);
    let fixed = fixed_frequency_pattern(nu_d, k_r_perp, &drive, &thetas).map_err(|e| LabError::config("cone", e.to_string()))?;
    let mean_fixed = 0.5 * (fixed.upper + fixed.lower);
    let scale = if mean_fixed > 0.0 {
        (ladder.path_i + ladder.path_ii) / mean_fixed
    } else {
        0.0
    };
    let averaged = averaged_pattern(k_r_perp, &drive, &thetas, &tol).map_err(|e| LabError::numeric("averaged pattern", e))?;
    let crossed = 2.0 * crossed_pair_quadrature(&drive, &cfg.propagation(), &tol)
        .map_err(|e| LabError::numeric("crossed inelastic quadrature", e))?;
    let cone = cone_shape(crossed, k_r12, &thetas).map_err(|e| LabError::config("cone.r12_in_wavelengths", e.to_string()))?;

    let rows = thetas
        .iter()
        .enumerate()
        .map(|(i, &t)| vec![t, scale * fixed.intensities[i], averaged.curve[i], ladder.ladder + cone.curve[i]])
        .collect();
    let table = Table {
        columns: vec!["theta", "I_fixed", "I_avg_omega", "I_avg_omega_and_positions"],
        units: "theta in rad; intensities in eta~".into(),
        rows,
    };
    let sidecar = ConeSidecar {
        command: "cone",
        config_sha256: cfg.hash(),
        delta: drive.delta(),
        s: drive.s(),
        mode: cfg.mode.as_str(),
        k_r12,
        k_r_perp,
        fixed: FixedPanel {
            nu_d,
            phase: fixed.phase,
            contrast: fixed.contrast(),
            scale,
        },
        averaged: AveragedPanel {
            path_i: averaged.path_i,
            path_ii: averaged.path_ii,
            gamma: averaged.gamma,
            phi: averaged.phi,
            amplitude: 2.0 * (averaged.path_i * averaged.path_ii).sqrt() * averaged.gamma,
        },
        orientation_averaged: OrientationPanel {
            ladder: ladder.ladder,
            crossed,
            peak: ladder.ladder + crossed,
            first_zero: cone.first_zero(),
            far_field: cone.far_field,
        },
    };
    Ok((table, sidecar))
}

pub fn run(cfg: &Config) -> Result<ConeSidecar> {
    let (table, sidecar) = compute(cfg)?;
    ensure_dir(&cfg.out)?;
    let (csv, json) = output_paths(&cfg.out, "cone");
    write_csv(&csv, "cone", &sidecar.config_sha256, &table)?;
    write_json(&json, &sidecar)?;
    Ok(sidecar)
}
