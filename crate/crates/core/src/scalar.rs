//! Scalar-photon variant of the two-atom problem.
//!
//! Without polarization, single scattering and all diagrams survive. Results
//! are reported in units of `eta_s = (Gamma_s / (2 d omega_L R))^2`, with the
//! scalar linewidth `Gamma_s = d^2 omega_at^3 / (2 pi eps_0)` taking the role of
//! the frequency unit.
//!
//! Interference terms between diagrams where the undetected photon leaves
//! different atoms are canceled exactly by the remaining diagrams, so the
//! contributions below are the complete result to second order in `s` and in
//! `1/(omega_L r12)`. Terms oscillating with `r12` on the wavelength scale are
//! averaged out.

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{CbsError, Result};
use crate::params::Drive;

/// Scalar exchange factor `B_s = Gamma / (2 omega_L r12 (omega_L - omega_0))`.
pub fn scalar_exchange(drive: &Drive, k_r12: f64) -> Result<Complex64> {
    if !(k_r12 > 0.0 && k_r12.is_finite()) {
        return Err(CbsError::InputDomain("optical separation k r12 must be positive"));
    }
    Ok((2.0 * k_r12 * drive.laser_offset()).inv())
}

/// Rational coefficients of the scalar contributions at `delta^2` rational.
///
/// Single-atom terms multiply `s` and `s^2`; exchange terms multiply
/// `|B|^2 s` and `|B|^2 s^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarCoefficients {
    pub elastic_single_first: Ratio<i64>,
    pub elastic_single_second: Ratio<i64>,
    pub inelastic_single: Ratio<i64>,
    pub ladder_elastic_first: Ratio<i64>,
    pub crossed_elastic_first: Ratio<i64>,
    pub ladder_elastic_second: Ratio<i64>,
    pub crossed_elastic_second: Ratio<i64>,
    pub ladder_inelastic: Ratio<i64>,
    pub crossed_inelastic: Ratio<i64>,
}

impl ScalarCoefficients {
    pub fn new(delta_sq: Ratio<i64>) -> Self {
        let int = Ratio::from_integer;
        Self {
            elastic_single_first: int(1),
            elastic_single_second: int(-2),
            inelastic_single: int(1),
            ladder_elastic_first: int(1),
            crossed_elastic_first: int(1),
            ladder_elastic_second: int(-10),
            crossed_elastic_second: int(-8),
            ladder_inelastic: Ratio::new(19, 4) + delta_sq,
            crossed_inelastic: int(3),
        }
    }
}

fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// All scalar contributions in units of `eta_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarSignal {
    pub exchange_sq: f64,
    /// `s - 2 s^2`
    pub ladder_elastic_single: f64,
    /// `s^2`
    pub ladder_inelastic_single: f64,
    /// `|B|^2 s`
    pub ladder_elastic_first: f64,
    pub crossed_elastic_first: f64,
    /// `-10 |B|^2 s^2`
    pub ladder_elastic_second: f64,
    /// `-8 |B|^2 s^2`
    pub crossed_elastic_second: f64,
    /// `(19/4 + delta^2) |B|^2 s^2`
    pub ladder_inelastic: f64,
    /// `3 |B|^2 s^2`
    pub crossed_inelastic: f64,
}

impl ScalarSignal {
    /// Ladder terms of order `|B|^2`.
    pub fn double_ladder(&self) -> f64 {
        self.ladder_elastic_first + self.ladder_elastic_second + self.ladder_inelastic
    }

    pub fn double_crossed(&self) -> f64 {
        self.crossed_elastic_first + self.crossed_elastic_second + self.crossed_inelastic
    }

    /// `(L2 + C2)/L2` restricted to the double-scattering part.
    pub fn double_enhancement(&self) -> f64 {
        (self.double_ladder() + self.double_crossed()) / self.double_ladder()
    }

    pub fn inelastic_enhancement(&self) -> f64 {
        self.crossed_inelastic / self.ladder_inelastic
    }

    pub fn background(&self) -> f64 {
        self.ladder_elastic_single + self.ladder_inelastic_single + self.double_ladder()
    }
}

/// Evaluates every scalar contribution for `|B|^2` supplied directly.
pub fn scalar_signal_with_exchange(drive: &Drive, exchange_sq: f64) -> ScalarSignal {
    let (s, d2) = (drive.s(), drive.delta() * drive.delta());
    let c = ScalarCoefficients::new(Ratio::from_integer(0));
    let b = exchange_sq;
    ScalarSignal {
        exchange_sq: b,
        ladder_elastic_single: to_f64(c.elastic_single_first) * s + to_f64(c.elastic_single_second) * s * s,
        ladder_inelastic_single: to_f64(c.inelastic_single) * s * s,
        ladder_elastic_first: to_f64(c.ladder_elastic_first) * b * s,
        crossed_elastic_first: to_f64(c.crossed_elastic_first) * b * s,
        ladder_elastic_second: to_f64(c.ladder_elastic_second) * b * s * s,
        crossed_elastic_second: to_f64(c.crossed_elastic_second) * b * s * s,
        ladder_inelastic: (to_f64(c.ladder_inelastic) + d2) * b * s * s,
        crossed_inelastic: to_f64(c.crossed_inelastic) * b * s * s,
    }
}

/// Scalar contributions with `|B|^2 = |B_s(omega_L)|^2` for the given
/// optical separation.
pub fn scalar_signal(drive: &Drive, k_r12: f64) -> Result<ScalarSignal> {
    if k_r12 < 10.0 {
        return Err(CbsError::InputDomain("scalar results need k r12 >> 1"));
    }
    let b = scalar_exchange(drive, k_r12)?.norm_sqr();
    Ok(scalar_signal_with_exchange(drive, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exchange_on_resonance() {
        let d0 = Drive::new(0.0, 0.1).unwrap();
        let b = scalar_exchange(&d0, 40.0).unwrap();
        assert!((b.norm() - 1.0 / 40.0).abs() < 1e-16);
        let b2 = scalar_exchange(&d0, 80.0).unwrap();
        assert!((b / b2 - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        for &d in &[0.5, 2.0] {
            let r = scalar_exchange(&Drive::new(d, 0.1).unwrap(), 40.0).unwrap().norm() / b.norm();
            assert!((r - 1.0 / libm::sqrt(1.0 + 4.0 * d * d)).abs() < 1e-14);
        }
        assert!(scalar_exchange(&d0, 0.0).is_err());
    }

    #[test]
    fn quoted_values() {
        let sig = scalar_signal_with_exchange(&Drive::new(0.0, 0.1).unwrap(), 1e-4);
        // -10 * 1e-4 * 0.01 and -8 * 1e-4 * 0.01
        assert!((sig.ladder_elastic_second + 1e-5).abs() < 1e-18);
        assert!((sig.crossed_elastic_second + 8e-6).abs() < 1e-18);
        assert_eq!(sig.ladder_elastic_first, sig.crossed_elastic_first);
        assert!((sig.inelastic_enhancement() - 12.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn inelastic_enhancement_below_one() {
        for &d in &[0.0, 0.3, 1.0, 10.0] {
            let sig = scalar_signal(&Drive::new(d, 0.05).unwrap(), 30.0).unwrap();
            assert!(sig.inelastic_enhancement() < 1.0);
        }
    }

    #[test]
    fn rational_coefficients() {
        let c = ScalarCoefficients::new(Ratio::new(1, 4));
        assert_eq!(c.ladder_inelastic, Ratio::from_integer(5));
        assert_eq!(c.ladder_elastic_second, Ratio::from_integer(-10));
    }
}
