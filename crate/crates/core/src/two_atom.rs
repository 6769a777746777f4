//! Double scattering by two distant atoms in the helicity-preserving channel.
//!
//! Contributions are reported in units of `eta~ s^k`, the two-atom intensity
//! scale, which contains the position average of
//! `|B(omega_L)|^2 |eps_L . Delta_12 . eps_D*|^2`. Only one photon is exchanged
//! between the atoms (no recurrent scattering).

use num_complex::Complex64;

use crate::error::{CbsError, Result};
use crate::numerics::{integrate_spectrum_weighted, sphere_average, McEstimate, Tolerance};
use crate::params::{AtomResonance, Drive};
use crate::polarization::{helicity_matrix_element, Polarization};

/// Photon exchange factor `B(omega)` at a given frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeFactor {
    pub omega: f64,
    pub value: Complex64,
}

/// `B(omega) = -3 Gamma e^{i omega r12} / (4 omega r12 (omega - omega_0))`
/// in units with `c = 1`: `omega` is absolute, `r12` is measured in `c` over
/// the frequency unit of `res`.
pub fn exchange_factor(omega: f64, res: &AtomResonance, r12: f64) -> Result<ExchangeFactor> {
    if !(r12 > 0.0 && r12.is_finite()) {
        return Err(CbsError::InputDomain("atom separation must be positive"));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(CbsError::InputDomain("photon frequency must be positive"));
    }
    let phase = Complex64::from_polar(1.0, omega * r12);
    let denom = Complex64::new(omega, 0.0) - res.omega0();
    let value = phase * (-3.0 * res.gamma()) / (4.0 * omega * r12 * denom);
    Ok(ExchangeFactor { omega, value })
}

/// Treatment of the vacuum propagation between the atoms for photons that
/// left the laser mode.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PropagationMode {
    /// `e^{i(omega - omega_L) r12} ~ 1` and `omega_L / omega ~ 1`, valid for
    /// `delta, Gamma << c / r12`.
    #[default]
    PhaseNeglect,
    /// Keeps the retardation phase and the `1/omega` factor.
    ExactPhase {
        /// Laser frequency in linewidths.
        omega_l: f64,
        /// Optical phase `omega_L r12 / c`.
        k_r12: f64,
    },
}

impl PropagationMode {
    /// `B(omega_L + nu) / B(omega_L)` for a laser-frame offset `nu`.
    pub fn relative_exchange(&self, nu: f64, drive: &Drive) -> Complex64 {
        let lorentz = drive.laser_offset() / drive.offset(nu);
        match *self {
            PropagationMode::PhaseNeglect => lorentz,
            PropagationMode::ExactPhase { omega_l, k_r12 } => {
                let delay = k_r12 / omega_l;
                lorentz * Complex64::from_polar(omega_l / (omega_l + nu), nu * delay)
            }
        }
    }
}

/// First- and second-order elastic ladder and crossed terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticTerms {
    pub ladder_first: f64,
    pub crossed_first: f64,
    pub ladder_second: f64,
    pub crossed_second: f64,
}

impl ElasticTerms {
    pub fn ladder(&self) -> f64 {
        self.ladder_first + self.ladder_second
    }

    pub fn crossed(&self) -> f64 {
        self.crossed_first + self.crossed_second
    }
}

/// `L1 = C1 = s`, `L2 = C2 = -4 s^2`.
pub fn ladder_crossed_elastic(drive: &Drive) -> ElasticTerms {
    let s = drive.s();
    ElasticTerms {
        ladder_first: s,
        crossed_first: s,
        ladder_second: -4.0 * s * s,
        crossed_second: -4.0 * s * s,
    }
}

/// Inelastic ladder contributions: path I (inelastic event first, the other
/// atom sees the shifted frequency) and path II (elastic event first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InelasticLadder {
    pub path_i: f64,
    pub path_ii: f64,
    pub ladder: f64,
}

/// `I_II = s^2/2`, `I_I = (3/4 + delta^2) s^2/2`, `L_in = 2 I_I + 2 I_II`.
pub fn inelastic_ladder(drive: &Drive) -> InelasticLadder {
    let s2 = drive.s() * drive.s();
    let d2 = drive.delta() * drive.delta();
    let path_ii = 0.5 * s2;
    let path_i = (0.75 + d2) * 0.5 * s2;
    InelasticLadder {
        path_i,
        path_ii,
        ladder: 2.0 * path_i + 2.0 * path_ii,
    }
}

/// `C_in = 3/2 s^2`, independent of the detuning.
pub fn inelastic_crossed(drive: &Drive) -> f64 {
    1.5 * drive.s() * drive.s()
}

/// `I_I` from the weighted spectrum integral
/// `int |B(omega)/B(omega_L)|^2 P_in(omega)`.
pub fn path_i_quadrature(drive: &Drive, mode: &PropagationMode, tol: &Tolerance) -> Result<f64> {
    let r = integrate_spectrum_weighted(|nu| mode.relative_exchange(nu, drive).norm_sqr(), drive, tol)?;
    Ok(r.value)
}

/// `I_II` as the plain spectrum integral.
pub fn path_ii_quadrature(drive: &Drive, tol: &Tolerance) -> Result<f64> {
    Ok(integrate_spectrum_weighted(|_| 1.0, drive, tol)?.value)
}

/// One interfering pair: `2 int Re{B(omega)/B(omega_L)} P_in(omega)`, which
/// equals `3/4 s^2` in the phase-neglect limit.
pub fn crossed_pair_quadrature(drive: &Drive, mode: &PropagationMode, tol: &Tolerance) -> Result<f64> {
    let r = integrate_spectrum_weighted(|nu| 2.0 * mode.relative_exchange(nu, drive).re, drive, tol)?;
    Ok(r.value)
}

/// Ladder, crossed and enhancement factor of the complete double-scattering
/// signal at exact backscattering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CbsSignal {
    pub elastic: ElasticTerms,
    pub inelastic: InelasticLadder,
    pub crossed_inelastic: f64,
    pub alpha: f64,
    pub x: f64,
}

impl CbsSignal {
    pub fn ladder(&self) -> f64 {
        self.elastic.ladder() + self.inelastic.ladder
    }

    pub fn crossed(&self) -> f64 {
        self.elastic.crossed() + self.crossed_inelastic
    }

    /// Degree of coherence between the light emitted by the two atoms,
    /// `C / L = alpha - 1`.
    pub fn coherence(&self) -> f64 {
        self.crossed() / self.ladder()
    }

    /// Inelastic-only degree of coherence, `C_in / L_in`.
    pub fn inelastic_coherence(&self) -> f64 {
        self.crossed_inelastic / self.inelastic.ladder
    }
}

/// Assembles the ladder and crossed terms and evaluates the enhancement
/// factor `alpha = (L + C)/L` together with `x = s0/(4 - 10 s)`.
pub fn assemble_signal(drive: &Drive) -> Result<CbsSignal> {
    let (alpha_closed, x) = enhancement_factor(drive)?;
    let elastic = ladder_crossed_elastic(drive);
    let inelastic = inelastic_ladder(drive);
    let crossed_inelastic = inelastic_crossed(drive);
    let ladder = elastic.ladder() + inelastic.ladder;
    let crossed = elastic.crossed() + crossed_inelastic;
    let alpha = if drive.s() == 0.0 { 2.0 } else { (ladder + crossed) / ladder };
    if (alpha - alpha_closed).abs() > 1e-12 * alpha_closed {
        return Err(CbsError::OracleMismatch {
            what: "enhancement factor",
            closed: alpha_closed,
            numerical: alpha,
        });
    }
    Ok(CbsSignal {
        elastic,
        inelastic,
        crossed_inelastic,
        alpha,
        x,
    })
}

/// `alpha = (8 - (19 - 4 delta^2) s) / (4 - (9 - 4 delta^2) s)` and
/// `x = s0 / (4 - 10 s)`, with `alpha = (2 + x)/(1 + x)`.
pub fn enhancement_factor(drive: &Drive) -> Result<(f64, f64)> {
    let (s, d2) = (drive.s(), drive.delta() * drive.delta());
    let num = 8.0 - (19.0 - 4.0 * d2) * s;
    let den = 4.0 - (9.0 - 4.0 * d2) * s;
    let x_den = 4.0 - 10.0 * s;
    for denominator in [den, x_den] {
        if denominator.is_nan() || denominator <= 0.0 {
            return Err(CbsError::NonPositiveDenominator { denominator });
        }
    }
    let alpha = num / den;
    let x = drive.s0() / x_den;
    let rewritten = (2.0 + x) / (1.0 + x);
    if (alpha - rewritten).abs() > 1e-12 * alpha {
        return Err(CbsError::OracleMismatch {
            what: "alpha = (2 + x)/(1 + x)",
            closed: alpha,
            numerical: rewritten,
        });
    }
    Ok((alpha, x))
}

/// Large-detuning form `(8 + s0)/(4 + s0)`, i.e. `x = s0/4`.
pub fn enhancement_large_detuning(s0: f64) -> f64 {
    (8.0 + s0) / (4.0 + s0)
}

/// Linear regime `2 - s0/4`.
pub fn enhancement_linear(s0: f64) -> f64 {
    2.0 - 0.25 * s0
}

/// Numeric prefactor printed for the position average in the closed form of
/// `eta~`.
pub const ETA_TILDE_STATED_CONSTANT: f64 = 3.0 / 8.0;

/// Uniform-sphere value of the polarization average `<sin^4(theta)/4>`.
pub const ETA_TILDE_SPHERE_AVERAGE: f64 = 2.0 / 15.0;

/// Monte Carlo estimate of the angular factor of `eta~`, relative to
/// `|B(omega_L)|^2`, compared against both constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaTildeFactor {
    pub estimate: McEstimate,
    pub sphere_average: f64,
    pub stated_constant: f64,
}

impl EtaTildeFactor {
    /// `stated / sphere average`, `45/16` for the uniform distribution.
    pub fn discrepancy_ratio(&self) -> f64 {
        self.stated_constant / self.sphere_average
    }
}

/// Minimum samples for the `eta~` average.
pub const ETA_TILDE_MIN_SAMPLES: usize = 10_000;

/// Averages `|eps_L . Delta_12 . eps_L|^2` over uniformly oriented pairs.
pub fn etatilde_angular_factor(samples: usize, seed: u64) -> Result<EtaTildeFactor> {
    if samples < ETA_TILDE_MIN_SAMPLES {
        return Err(CbsError::TooFewSamples {
            samples,
            min: ETA_TILDE_MIN_SAMPLES,
        });
    }
    let eps = Polarization::circular();
    let estimate = sphere_average(|n| helicity_matrix_element(&eps, n).norm_sqr(), samples, seed)?;
    Ok(EtaTildeFactor {
        estimate,
        sphere_average: ETA_TILDE_SPHERE_AVERAGE,
        stated_constant: ETA_TILDE_STATED_CONSTANT,
    })
}
