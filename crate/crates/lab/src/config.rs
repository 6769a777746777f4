//! Run configuration: a TOML file with nested sections, overridden by flags.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use cbs_core::numerics::Tolerance;
use cbs_core::two_atom::PropagationMode;
use cbs_core::Drive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    PhaseNeglect,
    ExactPhase,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::PhaseNeglect => "phase-neglect",
            Mode::ExactPhase => "exact-phase",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// Output directory. Not part of the config hash.
    pub out: PathBuf,
    pub mode: Mode,
    pub drive: DriveConfig,
    pub propagation: PropagationConfig,
    pub quadrature: QuadratureConfig,
    pub spectrum: SpectrumConfig,
    pub enhancement: EnhancementConfig,
    pub cone: ConeConfig,
    pub verify: VerifyConfig,
}

/// Detuning and saturation in units of the linewidth. Give `s` or `s0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveConfig {
    pub delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationConfig {
    /// Laser frequency over linewidth, used by `exact-phase`.
    pub omega_l_over_gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub deltas: Vec<f64>,
    pub points: usize,
    /// Grid half-width; defaults to `max(10, 4|delta| + 5)` per detuning.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnhancementConfig {
    pub delta: f64,
    pub s0_max: f64,
    pub points: usize,
    /// Step of the one-sided finite difference for the slope at `s0 = 0`.
    pub slope_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConeConfig {
    pub r12_in_wavelengths: f64,
    /// Transverse separation over `r12`.
    pub r_perp_ratio: f64,
    /// Detected offset from the laser for the fixed-frequency panel;
    /// defaults to `-delta`, i.e. the atomic resonance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_d: Option<f64>,
    pub points: usize,
    /// Largest angle in radians; defaults to `6 pi / (k r12)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub cone_samples: usize,
    pub eta_samples: usize,
    pub reciprocity_draws: usize,
    /// Sets every acceptance tolerance to zero to exercise the reporter.
    pub inject_fault: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            out: PathBuf::from("out"),
            mode: Mode::default(),
            drive: DriveConfig::default(),
            propagation: PropagationConfig::default(),
            quadrature: QuadratureConfig::default(),
            spectrum: SpectrumConfig::default(),
            enhancement: EnhancementConfig::default(),
            cone: ConeConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            delta: 1.0,
            s: None,
            s0: None,
        }
    }
}

impl Default for PropagationConfig {
    fn default() -> Self {
        // optical transition with a few-MHz linewidth
        Self {
            omega_l_over_gamma: 1e8,
        }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            deltas: vec![0.0, 2.0],
            points: 4001,
            half_width: None,
        }
    }
}

impl Default for EnhancementConfig {
    fn default() -> Self {
        Self {
            delta: 10.0,
            s0_max: 8.0,
            points: 81,
            slope_step: 1e-4,
        }
    }
}

impl Default for ConeConfig {
    fn default() -> Self {
        Self {
            r12_in_wavelengths: 8.0,
            r_perp_ratio: 2.0 / 3.0,
            nu_d: None,
            points: 401,
            theta_max: None,
        }
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            cone_samples: 100_000,
            eta_samples: 1_000_000,
            reciprocity_draws: 100,
            inject_fault: false,
        }
    }
}

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub delta: Option<f64>,
    pub s: Option<f64>,
    pub s0: Option<f64>,
    pub r12_in_wavelengths: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub mode: Option<Mode>,
    pub inject_fault: bool,
}

impl Config {
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::ConfigFile {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text).map_err(|e| LabError::ConfigFile {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// `--delta` sets the detuning of every command.
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(d) = o.delta {
            self.drive.delta = d;
            self.spectrum.deltas = vec![d];
            self.enhancement.delta = d;
        }
        if let Some(s) = o.s {
            self.drive.s = Some(s);
            self.drive.s0 = None;
        }
        if let Some(s0) = o.s0 {
            self.drive.s0 = Some(s0);
            self.drive.s = None;
        }
        if let Some(r) = o.r12_in_wavelengths {
            self.cone.r12_in_wavelengths = r;
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        if let Some(tol) = o.tol {
            self.quadrature.rel_tol = tol;
        }
        if let Some(mode) = o.mode {
            self.mode = mode;
        }
        if o.inject_fault {
            self.verify.inject_fault = true;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |field: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(LabError::config(field, "must be finite"))
            }
        };
        let positive = |field: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(LabError::config(field, "must be positive"))
            }
        };
        finite("drive.delta", self.drive.delta)?;
        match (self.drive.s, self.drive.s0) {
            (Some(_), Some(_)) => return Err(LabError::config("drive.s", "give either s or s0, not both")),
            (Some(s), None) if !(0.0..=0.2).contains(&s) => {
                return Err(LabError::config("drive.s", "must lie in [0, 0.2]"));
            }
            (None, Some(s0)) if !(s0 >= 0.0 && s0.is_finite()) => {
                return Err(LabError::config("drive.s0", "must be finite and >= 0"));
            }
            _ => {}
        }
        let s = self.drive()?.s();
        if s > 0.2 {
            return Err(LabError::config("drive.s0", format!("gives s = {s}, above the perturbative limit 0.2")));
        }
        positive("propagation.omega_l_over_gamma", self.propagation.omega_l_over_gamma)?;
        positive("quadrature.rel_tol", self.quadrature.rel_tol)?;
        if self.quadrature.max_subdivisions == 0 {
            return Err(LabError::config("quadrature.max_subdivisions", "must be at least 1"));
        }
        if self.spectrum.deltas.is_empty() {
            return Err(LabError::config("spectrum.deltas", "needs at least one detuning"));
        }
        for d in &self.spectrum.deltas {
            finite("spectrum.deltas", *d)?;
        }
        if self.spectrum.points < 3 {
            return Err(LabError::config("spectrum.points", "needs at least 3 points"));
        }
        if let Some(w) = self.spectrum.half_width {
            positive("spectrum.half_width", w)?;
        }
        finite("enhancement.delta", self.enhancement.delta)?;
        positive("enhancement.s0_max", self.enhancement.s0_max)?;
        positive("enhancement.slope_step", self.enhancement.slope_step)?;
        if self.enhancement.points < 2 {
            return Err(LabError::config("enhancement.points", "needs at least 2 points"));
        }
        positive("cone.r12_in_wavelengths", self.cone.r12_in_wavelengths)?;
        positive("cone.r_perp_ratio", self.cone.r_perp_ratio)?;
        if self.cone.r_perp_ratio > 1.0 {
            return Err(LabError::config("cone.r_perp_ratio", "cannot exceed 1"));
        }
        if let Some(nu) = self.cone.nu_d {
            finite("cone.nu_d", nu)?;
        }
        if let Some(t) = self.cone.theta_max {
            positive("cone.theta_max", t)?;
        }
        if self.cone.points < 2 {
            return Err(LabError::config("cone.points", "needs at least 2 points"));
        }
        if self.verify.cone_samples < 100 {
            return Err(LabError::config("verify.cone_samples", "needs at least 100 samples"));
        }
        if self.verify.eta_samples < 10_000 {
            return Err(LabError::config("verify.eta_samples", "needs at least 10000 samples"));
        }
        if self.verify.reciprocity_draws == 0 {
            return Err(LabError::config("verify.reciprocity_draws", "needs at least one draw"));
        }
        Ok(())
    }

    pub fn drive(&self) -> Result<Drive> {
        let d = self.drive.delta;
        let drive = match (self.drive.s, self.drive.s0) {
            (_, Some(s0)) => Drive::from_s0(d, s0),
            (s, None) => Drive::new(d, s.unwrap_or(0.1)),
        };
        drive.map_err(|e| LabError::config("drive", e.to_string()))
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance {
            max_subdivisions: self.quadrature.max_subdivisions,
            ..Tolerance::relative(self.quadrature.rel_tol)
        }
    }

    pub fn k_r12(&self) -> f64 {
        2.0 * PI * self.cone.r12_in_wavelengths
    }

    pub fn propagation(&self) -> PropagationMode {
        match self.mode {
            Mode::PhaseNeglect => PropagationMode::PhaseNeglect,
            Mode::ExactPhase => PropagationMode::ExactPhase {
                omega_l: self.propagation.omega_l_over_gamma,
                k_r12: self.k_r12(),
            },
        }
    }

    /// SHA-256 of the canonical JSON form, excluding the output directory.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out = PathBuf::new();
        let json = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}
