//! Units, resonance and drive parameters, and pair geometry.
//!
//! The atomic linewidth sets the frequency unit. Functions that work in the
//! laser frame take frequency offsets `nu = omega - omega_L` measured in units
//! of the linewidth, so that `omega - omega_0 = nu + delta + i/2`.
//!
//! Absolute prefactors (the dipole moment `d`, detector distance `R`, the
//! coupling constant `g` and quantization volume `L^3`) only enter the overall
//! intensity scales `eta`, `eta~` and `eta_s`. They are never runtime inputs:
//! intensities are reported in units of those scales.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{CbsError, Result};
use crate::polarization::{Direction, Polarization};

/// A two-level resonance with complex frequency `omega_0 = omega_at - i*gamma/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomResonance {
    gamma: f64,
    omega_at: f64,
}

impl AtomResonance {
    pub fn new(gamma: f64, omega_at: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(CbsError::InputDomain("linewidth must be positive and finite"));
        }
        if !omega_at.is_finite() {
            return Err(CbsError::InputDomain("resonance frequency must be finite"));
        }
        Ok(Self { gamma, omega_at })
    }

    /// Unit linewidth with the resonance at the origin of the frequency axis.
    pub fn unit() -> Self {
        Self {
            gamma: 1.0,
            omega_at: 0.0,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega_at(&self) -> f64 {
        self.omega_at
    }

    pub fn omega0(&self) -> Complex64 {
        Complex64::new(self.omega_at, -0.5 * self.gamma)
    }

    /// Laser frequency for a drive whose detuning is given in linewidths.
    pub fn laser_frequency(&self, drive: &Drive) -> f64 {
        self.omega_at + drive.delta() * self.gamma
    }
}

impl Default for AtomResonance {
    fn default() -> Self {
        Self::unit()
    }
}

/// Laser drive: detuning `delta` (in linewidths), saturation `s` and its
/// on-resonance counterpart `s0 = (1 + 4 delta^2) s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    delta: f64,
    s: f64,
    s0: f64,
    polarization: Polarization,
}

impl Drive {
    pub fn new(delta: f64, s: f64) -> Result<Self> {
        if !delta.is_finite() {
            return Err(CbsError::InputDomain("detuning must be finite"));
        }
        if !(s >= 0.0 && s.is_finite()) {
            return Err(CbsError::InputDomain("saturation parameter must be finite and >= 0"));
        }
        Ok(Self {
            delta,
            s,
            s0: detuning_factor(delta) * s,
            polarization: Polarization::circular(),
        })
    }

    /// Drive specified through the on-resonance saturation `s0`, which depends
    /// only on the incident intensity.
    pub fn from_s0(delta: f64, s0: f64) -> Result<Self> {
        if !delta.is_finite() {
            return Err(CbsError::InputDomain("detuning must be finite"));
        }
        if !(s0 >= 0.0 && s0.is_finite()) {
            return Err(CbsError::InputDomain("on-resonance saturation must be finite and >= 0"));
        }
        let s = s0 / detuning_factor(delta);
        Ok(Self {
            delta,
            s,
            s0,
            polarization: Polarization::circular(),
        })
    }

    pub fn with_polarization(mut self, polarization: Polarization) -> Self {
        self.polarization = polarization;
        self
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    /// `omega_L - omega_0` in linewidth units.
    pub fn laser_offset(&self) -> Complex64 {
        Complex64::new(self.delta, 0.5)
    }

    /// `omega - omega_0` for `omega = omega_L + nu`, in linewidth units.
    pub fn offset(&self, nu: f64) -> Complex64 {
        Complex64::new(nu + self.delta, 0.5)
    }

    /// `2 omega_L - omega - omega_0` for `omega = omega_L + nu`.
    pub fn mirror_offset(&self, nu: f64) -> Complex64 {
        Complex64::new(self.delta - nu, 0.5)
    }
}

/// `1 + 4 delta^2`, the ratio `s0 / s`.
pub fn detuning_factor(delta: f64) -> f64 {
    1.0 + 4.0 * delta * delta
}

/// Perturbative validity guard for saturation-dependent results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbativeLimit {
    pub max_s: f64,
}

impl PerturbativeLimit {
    pub fn check(&self, drive: &Drive) -> Result<()> {
        if drive.s() > self.max_s {
            Err(CbsError::PerturbationBroken {
                s: drive.s(),
                max_s: self.max_s,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for PerturbativeLimit {
    fn default() -> Self {
        Self { max_s: 0.2 }
    }
}

/// Relative placement of the two atoms and the detector.
///
/// Distances are in optical wavelengths; `k_r12()` is the optical phase
/// `omega_L r12 / c` that sets the cone width `1 / (omega_L r12)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    r12: f64,
    n12: Direction,
    theta_det: f64,
    r_perp: f64,
}

impl PairGeometry {
    /// Geometry with the laser along `+z`; the transverse separation follows
    /// from the orientation of the pair.
    pub fn new(r12: f64, n12: Direction, theta_det: f64) -> Result<Self> {
        if !(r12 > 0.0 && r12.is_finite()) {
            return Err(CbsError::InputDomain("atom separation must be positive"));
        }
        let [x, y, _] = n12.components();
        let r_perp = r12 * libm::sqrt(x * x + y * y);
        Ok(Self {
            r12,
            n12,
            theta_det,
            r_perp: r_perp.min(r12),
        })
    }

    /// Pair oriented in the xz-plane with a prescribed transverse separation.
    pub fn from_transverse(r12: f64, r_perp: f64, theta_det: f64) -> Result<Self> {
        if !(r12 > 0.0 && r12.is_finite()) {
            return Err(CbsError::InputDomain("atom separation must be positive"));
        }
        if !(0.0..=r12).contains(&r_perp) {
            return Err(CbsError::InputDomain("transverse separation must lie in [0, r12]"));
        }
        let sin = r_perp / r12;
        let cos = libm::sqrt((1.0 - sin * sin).max(0.0));
        let n12 = Direction::new([sin, 0.0, cos])?;
        Ok(Self {
            r12,
            n12,
            theta_det,
            r_perp,
        })
    }

    pub fn r12(&self) -> f64 {
        self.r12
    }

    pub fn n12(&self) -> Direction {
        self.n12
    }

    pub fn theta_det(&self) -> f64 {
        self.theta_det
    }

    pub fn r_perp(&self) -> f64 {
        self.r_perp
    }

    pub fn k_r12(&self) -> f64 {
        2.0 * PI * self.r12
    }

    pub fn k_r_perp(&self) -> f64 {
        2.0 * PI * self.r_perp
    }

    /// Angular width of the backscattering cone, `1 / (omega_L r12)`.
    pub fn cone_width(&self) -> f64 {
        1.0 / self.k_r12()
    }
}
