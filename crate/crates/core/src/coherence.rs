//! Which-path analysis of the inelastic double-scattering signal.
//!
//! For a fixed detected frequency the two reversed paths interfere with full
//! coherence but unequal amplitudes. Averaging over the detected frequency,
//! whose partner photon carries which-path information, reduces the degree of
//! coherence `gamma_I,II`; averaging over which atom scatters inelastically
//! reduces it further to `gamma_12 = C_in / L_in`.
//!
//! Amplitudes drop every factor independent of the detected frequency and of
//! the detection angle. Only ratios, phases and contrasts are meaningful;
//! absolute curves are rescaled to `eta~` units through the closed-form
//! ladder terms.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{CbsError, Result};
use crate::numerics::{integrate_real_line, spectral_window, sphere_average, McEstimate, Tolerance};
use crate::params::Drive;
use crate::single_atom::pair_bracket;
use crate::two_atom::inelastic_ladder;

/// Relative tolerance between quadrature and closed forms for the coherence
/// quantities.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-6;

/// Amplitudes of the two reversed paths for a detected photon at laser-frame
/// offset `nu_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathAmplitudes {
    /// Inelastic event first; the other atom scatters at `omega_D`.
    pub path_i: Complex64,
    /// Elastic event first, at the laser frequency.
    pub path_ii: Complex64,
}

impl PathAmplitudes {
    pub fn intensity(&self) -> f64 {
        (self.path_i + self.path_ii).norm_sqr()
    }
}

/// Elastic response of the atom that does not scatter inelastically.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ElasticResponse {
    /// Identical atoms.
    #[default]
    SameAtom,
    /// Same resonance frequency, linewidth `ratio` times larger.
    Linewidth(f64),
    /// Frequency-independent response.
    Flat,
}

impl ElasticResponse {
    fn kernel(&self, offset: Complex64) -> Complex64 {
        match *self {
            ElasticResponse::SameAtom => offset.inv(),
            ElasticResponse::Linewidth(ratio) => Complex64::new(offset.re, 0.5 * ratio).inv(),
            ElasticResponse::Flat => Complex64::new(1.0, 0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ElasticResponse::Linewidth(r) if !(r > 0.0 && r.is_finite()) => {
                Err(CbsError::InputDomain("linewidth ratio must be positive"))
            }
            _ => Ok(()),
        }
    }
}

/// `E_I = K e^{-i k r_perp theta/2}/(omega_D - omega_0)`,
/// `E_II = K e^{+i k r_perp theta/2}/(omega_L - omega_0)`, with `K` the
/// two-photon bracket at `omega_D`.
pub fn path_amplitudes(nu_d: f64, theta: f64, k_r_perp: f64, drive: &Drive) -> PathAmplitudes {
    path_amplitudes_with(nu_d, theta, k_r_perp, drive, &ElasticResponse::SameAtom)
}

fn path_amplitudes_with(nu_d: f64, theta: f64, k_r_perp: f64, drive: &Drive, response: &ElasticResponse) -> PathAmplitudes {
    let bracket = pair_bracket(nu_d, drive);
    let half = 0.5 * k_r_perp * theta;
    PathAmplitudes {
        path_i: bracket * response.kernel(drive.offset(nu_d)) * Complex64::from_polar(1.0, -half),
        path_ii: bracket * response.kernel(drive.laser_offset()) * Complex64::from_polar(1.0, half),
    }
}

/// Phase shift `phi_0` of the fixed-frequency pattern
/// `|E_I|^2 + |E_II|^2 + 2|E_I||E_II| cos(phi_0 + k r_perp theta)`:
/// `tan(phi_0) = 2 (delta - eps)/(4 delta eps + 1)` with `eps = omega_D - omega_at`,
/// principal value in `(-pi, pi]`.
pub fn fixed_phase_offset(nu_d: f64, drive: &Drive) -> f64 {
    let (d, eps) = (drive.delta(), nu_d + drive.delta());
    libm::atan2(2.0 * (d - eps), 4.0 * d * eps + 1.0)
}

/// Interference pattern at a fixed detected frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPattern {
    pub intensities: Vec<f64>,
    /// `(|E_I| - |E_II|)^2`
    pub lower: f64,
    /// `(|E_I| + |E_II|)^2`
    pub upper: f64,
    pub phase: f64,
}

impl FixedPattern {
    pub fn contrast(&self) -> f64 {
        (self.upper - self.lower) / (self.upper + self.lower)
    }
}

pub fn fixed_frequency_pattern(nu_d: f64, k_r_perp: f64, drive: &Drive, thetas: &[f64]) -> Result<FixedPattern> {
    if thetas.iter().any(|t| !t.is_finite()) {
        return Err(CbsError::InputDomain("detection angles must be finite"));
    }
    let amps = path_amplitudes(nu_d, 0.0, k_r_perp, drive);
    let (a, b) = (amps.path_i.norm(), amps.path_ii.norm());
    Ok(FixedPattern {
        intensities: thetas
            .iter()
            .map(|&t| path_amplitudes(nu_d, t, k_r_perp, drive).intensity())
            .collect(),
        lower: (a - b) * (a - b),
        upper: (a + b) * (a + b),
        phase: fixed_phase_offset(nu_d, drive),
    })
}

/// Norms and overlap of the which-path detector states, i.e. of the
/// path amplitudes integrated over the detected frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorOverlap {
    pub norm_i: f64,
    pub norm_ii: f64,
    /// `<D_I|D_II> = int E_I*(omega) E_II(omega) d omega` at `theta = 0`.
    pub overlap: Complex64,
}

impl DetectorOverlap {
    /// Degree of coherence `gamma_I,II`.
    pub fn gamma(&self) -> f64 {
        self.overlap.norm() / libm::sqrt(self.norm_i * self.norm_ii)
    }

    /// Residual phase `phi` of the averaged pattern.
    pub fn phase(&self) -> f64 {
        self.overlap.arg()
    }

    /// `I_I / I_II`
    pub fn intensity_ratio(&self) -> f64 {
        self.norm_i / self.norm_ii
    }
}

pub fn detector_state_overlap(drive: &Drive, tol: &Tolerance) -> Result<DetectorOverlap> {
    detector_state_overlap_with(drive, &ElasticResponse::SameAtom, tol)
}

pub fn detector_state_overlap_with(drive: &Drive, response: &ElasticResponse, tol: &Tolerance) -> Result<DetectorOverlap> {
    response.validate()?;
    let half = spectral_window(drive);
    let d = drive.delta();
    let breaks = [-d, 0.0, d];
    let amps = |nu: f64| path_amplitudes_with(nu, 0.0, 0.0, drive, response);
    let norm_i = integrate_real_line(|nu| amps(nu).path_i.norm_sqr(), -half, half, &breaks, tol)?.value;
    let norm_ii = integrate_real_line(|nu| amps(nu).path_ii.norm_sqr(), -half, half, &breaks, tol)?.value;
    let overlap = integrate_real_line(
        |nu| {
            let a = amps(nu);
            a.path_i.conj() * a.path_ii
        },
        -half,
        half,
        &breaks,
        tol,
    )?
    .value;
    Ok(DetectorOverlap { norm_i, norm_ii, overlap })
}

/// `gamma_I,II = sqrt((9 + 4 delta^2)/(12 + 16 delta^2))`.
pub fn gamma_paths_closed(delta: f64) -> f64 {
    let d2 = delta * delta;
    libm::sqrt((9.0 + 4.0 * d2) / (12.0 + 16.0 * d2))
}

/// `phi` with `tan(phi) = 2 delta / 3`, principal value.
pub fn phi_closed(delta: f64) -> f64 {
    libm::atan2(2.0 * delta, 3.0)
}

/// `gamma_12 = 6/(7 + 4 delta^2)`.
pub fn gamma_atoms_closed(delta: f64) -> f64 {
    6.0 / (7.0 + 4.0 * delta * delta)
}

/// Amplitude-asymmetry factor `2 sqrt(I_I I_II)/(I_I + I_II)`.
pub fn asymmetry_factor(drive: &Drive) -> f64 {
    let l = inelastic_ladder(drive);
    2.0 * libm::sqrt(l.path_i * l.path_ii) / (l.path_i + l.path_ii)
}

fn check_closed(what: &'static str, closed: f64, numerical: f64, scale: f64) -> Result<()> {
    if (closed - numerical).abs() > CLOSED_FORM_TOLERANCE * scale {
        Err(CbsError::OracleMismatch { what, closed, numerical })
    } else {
        Ok(())
    }
}

/// Detected-frequency-averaged pattern
/// `I_I + I_II + 2 sqrt(I_I I_II) gamma_I,II cos(phi + k r_perp theta)`,
/// in units of `eta~`.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedPattern {
    pub path_i: f64,
    pub path_ii: f64,
    pub gamma: f64,
    pub phi: f64,
    pub curve: Vec<f64>,
}

impl AveragedPattern {
    pub fn evaluate(&self, theta: f64, k_r_perp: f64) -> f64 {
        let amp = 2.0 * libm::sqrt(self.path_i * self.path_ii) * self.gamma;
        self.path_i + self.path_ii + amp * libm::cos(self.phi + k_r_perp * theta)
    }
}

/// Computes `gamma_I,II` and `phi` by quadrature, checks them against the
/// closed forms and samples the averaged pattern.
pub fn averaged_pattern(k_r_perp: f64, drive: &Drive, thetas: &[f64], tol: &Tolerance) -> Result<AveragedPattern> {
    let overlap = detector_state_overlap(drive, tol)?;
    let (gamma, phi) = (overlap.gamma(), overlap.phase());
    let d = drive.delta();
    let gamma_closed = gamma_paths_closed(d);
    check_closed("gamma_I,II", gamma_closed, gamma, gamma_closed)?;
    check_closed("phi", phi_closed(d), phi, 1.0)?;
    let ladder = inelastic_ladder(drive);
    check_closed(
        "I_I / I_II",
        ladder.path_i / ladder.path_ii,
        overlap.intensity_ratio(),
        ladder.path_i / ladder.path_ii,
    )?;
    let mut pattern = AveragedPattern {
        path_i: ladder.path_i,
        path_ii: ladder.path_ii,
        gamma,
        phi,
        curve: Vec::new(),
    };
    pattern.curve = thetas.iter().map(|&t| pattern.evaluate(t, k_r_perp)).collect();
    Ok(pattern)
}

/// Pattern summed over which atom scatters inelastically:
/// `L_in + C_in cos(k r_perp theta)` with `C_in = 4 sqrt(I_I I_II) gamma cos(phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalPattern {
    pub ladder: f64,
    pub crossed: f64,
    pub gamma_12: f64,
    pub curve: Vec<f64>,
}

pub fn total_pattern(k_r_perp: f64, drive: &Drive, thetas: &[f64], tol: &Tolerance) -> Result<TotalPattern> {
    let avg = averaged_pattern(k_r_perp, drive, &[], tol)?;
    let ladder = 2.0 * (avg.path_i + avg.path_ii);
    let crossed = 4.0 * libm::sqrt(avg.path_i * avg.path_ii) * avg.gamma * libm::cos(avg.phi);
    let at = |theta: f64| ladder + crossed * libm::cos(k_r_perp * theta);
    // I_1 = I_2 = L/2, so gamma_12 = (I(0) - L)/L.
    let gamma_12 = if ladder > 0.0 { (at(0.0) - ladder) / ladder } else { 0.0 };
    Ok(TotalPattern {
        ladder,
        crossed,
        gamma_12,
        curve: thetas.iter().map(|&t| at(t)).collect(),
    })
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        libm::sin(x) / x
    }
}

/// Crossed term versus detection angle after averaging the pair orientation
/// at fixed separation: `C(theta) = C(0) sin(k r12 theta)/(k r12 theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeShape {
    pub crossed_peak: f64,
    pub k_r12: f64,
    pub curve: Vec<f64>,
    /// False when `k r12 < 10`, outside the far-field assumption.
    pub far_field: bool,
}

impl ConeShape {
    /// First zero of the profile, `pi / (k r12)`.
    pub fn first_zero(&self) -> f64 {
        PI / self.k_r12
    }
}

pub fn cone_shape(crossed_peak: f64, k_r12: f64, thetas: &[f64]) -> Result<ConeShape> {
    if !(k_r12 > 0.0 && k_r12.is_finite()) {
        return Err(CbsError::InputDomain("optical separation k r12 must be positive"));
    }
    Ok(ConeShape {
        crossed_peak,
        k_r12,
        curve: thetas.iter().map(|&t| crossed_peak * sinc(k_r12 * t)).collect(),
        far_field: k_r12 >= 10.0,
    })
}

/// Monte Carlo average over pair orientations of the crossed-path phase
/// factor `cos((k_L + k_D) . r12)`, with the laser along `+z` and the
/// detector tilted by `theta` from exact backscattering.
pub fn cone_phase_average(k_r12: f64, theta: f64, samples: usize, seed: u64) -> Result<McEstimate> {
    let q = [k_r12 * libm::sin(theta), 0.0, k_r12 * (1.0 - libm::cos(theta))];
    sphere_average(|n| libm::cos(n.dot(&q)), samples, seed)
}

/// Degree of coherence `gamma_I,II` when the elastically scattering atom has
/// a different (or flat) spectral response.
pub fn distinct_linewidth_check(response: &ElasticResponse, drive: &Drive, tol: &Tolerance) -> Result<f64> {
    Ok(detector_state_overlap_with(drive, response, tol)?.gamma())
}
