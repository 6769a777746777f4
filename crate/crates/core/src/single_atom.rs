//! One-atom scattering: the one- and two-photon resonance kernels, the
//! photodetection signal to second order in the saturation parameter, and the
//! inelastic power spectrum.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{CbsError, Result};
use crate::numerics::{integrate, Tolerance};
use crate::params::{AtomResonance, Drive, PerturbativeLimit};

/// Default number of samples of a spectrum grid.
pub const DEFAULT_GRID_POINTS: usize = 4001;

/// One-photon kernel `1/(omega_i - omega_0)`.
pub fn t1_amplitude(omega_i: f64, res: &AtomResonance) -> Complex64 {
    (Complex64::new(omega_i, 0.0) - res.omega0()).inv()
}

/// Two-photon kernel for two laser photons scattered into `omega3` and
/// `omega4 = 2 omega_L - omega3`:
/// `[1/(omega3 - omega_0) + 1/(omega4 - omega_0)] / (omega_L - omega_0)^2`.
pub fn t2_kernel(omega3: f64, drive: &Drive, res: &AtomResonance) -> Complex64 {
    let omega_l = res.laser_frequency(drive);
    let omega4 = 2.0 * omega_l - omega3;
    let w0 = res.omega0();
    let bracket = (Complex64::new(omega3, 0.0) - w0).inv() + (Complex64::new(omega4, 0.0) - w0).inv();
    let laser = Complex64::new(omega_l, 0.0) - w0;
    bracket / (laser * laser)
}

/// The bracket of [`t2_kernel`] in laser-frame linewidth units:
/// `1/(nu + delta + i/2) + 1/(delta - nu + i/2)`.
pub fn pair_bracket(nu: f64, drive: &Drive) -> Complex64 {
    drive.offset(nu).inv() + drive.mirror_offset(nu).inv()
}

/// Inelastic spectral density at `nu = omega - omega_L` (linewidths), in
/// units of `eta` per linewidth, normalized to `I_in = s^2/2`:
/// `P(nu) = I_in/(4 pi) |1/(omega - omega_0) + 1/(2 omega_L - omega - omega_0)|^2`.
pub fn inelastic_density(nu: f64, drive: &Drive) -> f64 {
    let s = drive.s();
    0.5 * s * s / (4.0 * PI) * pair_bracket(nu, drive).norm_sqr()
}

/// Single-atom intensity channels to second order in `s`, in units of `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleAtomIntensities {
    pub elastic_first: f64,
    pub elastic_second: f64,
    pub inelastic: f64,
}

impl SingleAtomIntensities {
    pub fn elastic(&self) -> f64 {
        self.elastic_first + self.elastic_second
    }

    pub fn total(&self) -> f64 {
        self.elastic() + self.inelastic
    }
}

/// `(I_el1, I_el2, I_in) = (s/2, -f s^2, f s^2/2)` with `f = (N-1)/N`;
/// `atom_photons = None` takes the large-`N` limit `f = 1`.
pub fn single_atom_intensities(
    drive: &Drive,
    limit: &PerturbativeLimit,
    atom_photons: Option<u64>,
) -> Result<SingleAtomIntensities> {
    limit.check(drive)?;
    let f = match atom_photons {
        None => 1.0,
        Some(0) => return Err(CbsError::InputDomain("photon number must be positive")),
        Some(n) => (n - 1) as f64 / n as f64,
    };
    let s = drive.s();
    Ok(SingleAtomIntensities {
        elastic_first: 0.5 * s,
        elastic_second: -f * s * s,
        inelastic: 0.5 * f * s * s,
    })
}

/// Exact power-series coefficients `[s^1, s^2]` of the elastic and inelastic
/// channels in the large-`N` limit.
pub fn channel_series() -> ([Ratio<i64>; 2], [Ratio<i64>; 2]) {
    (
        [Ratio::new(1, 2), Ratio::from_integer(-1)],
        [Ratio::from_integer(0), Ratio::new(1, 2)],
    )
}

/// A sampled inelastic spectrum together with the elastic line weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    /// Offsets from the laser frequency, strictly increasing (linewidths).
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Analytic integral `I_in = s^2/2` of the density.
    pub norm: f64,
    /// Weight of the elastic line at the laser frequency, `s/2 - s^2`.
    pub elastic_weight: f64,
}

/// A local maximum with its full width at half maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPeak {
    pub position: f64,
    pub height: f64,
    pub fwhm: f64,
}

impl SpectralDensity {
    pub fn trapezoid(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    /// Local maxima, each with a half-maximum width found by linear
    /// interpolation between neighbouring samples.
    pub fn peaks(&self) -> Vec<SpectralPeak> {
        let v = &self.values;
        let mut peaks = Vec::new();
        for i in 1..v.len().saturating_sub(1) {
            if v[i] > v[i - 1] && v[i] >= v[i + 1] {
                let half = 0.5 * v[i];
                let (Some(left), Some(right)) = (self.crossing(i, half, false), self.crossing(i, half, true)) else {
                    continue;
                };
                peaks.push(SpectralPeak {
                    position: self.grid[i],
                    height: v[i],
                    fwhm: right - left,
                });
            }
        }
        peaks
    }

    fn crossing(&self, peak: usize, level: f64, rightwards: bool) -> Option<f64> {
        let (x, v) = (&self.grid, &self.values);
        let mut j = peak;
        loop {
            let k = if rightwards {
                if j + 1 >= v.len() {
                    return None;
                }
                j + 1
            } else {
                j.checked_sub(1)?
            };
            if v[k] <= level {
                let t = (v[j] - level) / (v[j] - v[k]);
                return Some(x[j] + t * (x[k] - x[j]));
            }
            j = k;
        }
    }
}

/// Half-width `max(10, 4|delta|)` that a spectrum grid must cover.
pub fn required_half_width(drive: &Drive) -> f64 {
    10.0_f64.max(4.0 * drive.delta().abs())
}

/// `max(10, 4|delta| + 5)`, comfortably wider than [`required_half_width`].
pub fn default_half_width(drive: &Drive) -> f64 {
    10.0_f64.max(4.0 * drive.delta().abs() + 5.0)
}

/// Uniform grid of [`DEFAULT_GRID_POINTS`] over `+-default_half_width`.
pub fn default_grid(drive: &Drive) -> Vec<f64> {
    uniform_grid(default_half_width(drive), DEFAULT_GRID_POINTS)
}

pub fn uniform_grid(half_width: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect()
}

/// Samples the inelastic spectrum on `grid` (offsets from the laser frequency).
///
/// A grid narrower than [`required_half_width`] is rejected with the fraction
/// of spectral mass it would have captured.
pub fn inelastic_spectrum(drive: &Drive, grid: &[f64]) -> Result<SpectralDensity> {
    if grid.len() < 2 || grid.iter().any(|x| !x.is_finite()) {
        return Err(CbsError::InputDomain("grid needs at least two finite points"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CbsError::InputDomain("grid must be strictly increasing"));
    }
    let required = required_half_width(drive);
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let half_width = (-lo).min(hi);
    let s = drive.s();
    let norm = 0.5 * s * s;
    if half_width < required {
        let captured_fraction = captured_fraction(drive, lo, hi)?;
        return Err(CbsError::GridTooNarrow {
            half_width,
            required,
            captured_fraction,
        });
    }
    Ok(SpectralDensity {
        grid: grid.to_vec(),
        values: grid.iter().map(|&nu| inelastic_density(nu, drive)).collect(),
        norm,
        elastic_weight: 0.5 * s - s * s,
    })
}

fn captured_fraction(drive: &Drive, lo: f64, hi: f64) -> Result<f64> {
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Ok(0.0);
    }
    // Shape only; the s^2 prefactor cancels in the ratio.
    let unit = Drive::new(drive.delta(), 1.0)?;
    let r = integrate(|nu| inelastic_density(nu, &unit), lo, hi, &[-drive.delta(), 0.0, drive.delta()], &Tolerance::absolute(1e-10))?;
    Ok(r.value / 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t1_on_resonance_is_minus_two_i_over_gamma() {
        for &g in &[1.0, 2.0, 0.3] {
            let res = AtomResonance::new(g, 5.0).unwrap();
            let t = t1_amplitude(5.0, &res);
            assert!((t - Complex64::new(0.0, -2.0 / g)).norm() < 1e-14);
            let half = t1_amplitude(5.0 + g / 2.0, &res);
            assert!((half.norm_sqr() - 2.0 / (g * g)).abs() < 1e-13);
        }
    }

    #[test]
    fn t1_lorentzian_ratio() {
        let res = AtomResonance::new(1.0, 0.0).unwrap();
        let on = t1_amplitude(0.0, &res).norm_sqr();
        for &d in &[0.1, 1.0, 3.7] {
            let r = t1_amplitude(d, &res).norm_sqr() / on;
            assert!((r - 1.0 / (1.0 + 4.0 * d * d)).abs() < 1e-14);
        }
    }

    #[test]
    fn t2_kernel_on_resonance() {
        // bracket = 2 * (-2i), (omega_L - omega_0)^2 = (i/2)^2 = -1/4
        let res = AtomResonance::unit();
        let drive = Drive::new(0.0, 0.1).unwrap();
        let k = t2_kernel(0.0, &drive, &res);
        assert!((k - Complex64::new(0.0, 16.0)).norm() < 1e-13);
    }

    #[test]
    fn t2_kernel_mirror_symmetry_and_decay() {
        let res = AtomResonance::new(1.0, 3.0).unwrap();
        let drive = Drive::new(1.3, 0.1).unwrap();
        let wl = res.laser_frequency(&drive);
        for &x in &[0.0, 0.4, 2.0, 17.0] {
            assert_eq!(pair_bracket(x, &drive), pair_bracket(-x, &drive));
            let a = t2_kernel(wl + x, &drive, &res);
            let b = t2_kernel(wl - x, &drive, &res);
            assert!((a - b).norm() <= 1e-14 * a.norm());
        }
        let far = t2_kernel(wl + 1e4, &drive, &res).norm();
        let farther = t2_kernel(wl + 2e4, &drive, &res).norm();
        // the two poles cancel at leading order: decay is 1/omega^2
        assert!((far / farther - 4.0).abs() < 1e-3);
    }

    #[test]
    fn intensities_second_order() {
        let limit = PerturbativeLimit::default();
        let i = single_atom_intensities(&Drive::new(0.0, 0.1).unwrap(), &limit, None).unwrap();
        assert!((i.elastic_first - 0.05).abs() < 1e-15);
        assert!((i.elastic_second + 0.01).abs() < 1e-15);
        assert!((i.inelastic - 0.005).abs() < 1e-15);
        let z = single_atom_intensities(&Drive::new(0.0, 0.0).unwrap(), &limit, None).unwrap();
        assert_eq!(z.total(), 0.0);
        let finite = single_atom_intensities(&Drive::new(0.0, 0.1).unwrap(), &limit, Some(4)).unwrap();
        assert!((finite.inelastic - 0.75 * 0.005).abs() < 1e-15);
        assert!(single_atom_intensities(&Drive::new(0.0, 0.3).unwrap(), &limit, None).is_err());
    }

    #[test]
    fn spectrum_mirror_symmetric() {
        for &d in &[0.0, 0.7, 2.0, -3.0] {
            let drive = Drive::new(d, 0.1).unwrap();
            for &x in &[0.0, 0.1, 1.9, 6.0, 40.0] {
                let (a, b) = (inelastic_density(x, &drive), inelastic_density(-x, &drive));
                assert!((a - b).abs() <= 1e-12 * a.max(b));
            }
        }
    }

    #[test]
    fn narrow_grid_reports_captured_mass() {
        let drive = Drive::new(0.0, 0.1).unwrap();
        match inelastic_spectrum(&drive, &uniform_grid(2.0, 101)) {
            Err(CbsError::GridTooNarrow { captured_fraction, .. }) => {
                assert!(captured_fraction > 0.5 && captured_fraction < 1.0)
            }
            other => panic!("{other:?}"),
        }
        assert!(inelastic_spectrum(&drive, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn sampled_spectrum_properties() {
        let drive = Drive::new(2.0, 0.1).unwrap();
        let spec = inelastic_spectrum(&drive, &default_grid(&drive)).unwrap();
        assert!(spec.values.iter().all(|&v| v >= 0.0));
        assert!((spec.norm - 0.005).abs() < 1e-15);
        assert!((spec.elastic_weight - 0.04).abs() < 1e-15);
        // trapezoid over +-13 misses the 1/nu^2 tails, about 4% of the mass
        let ratio = spec.trapezoid() / spec.norm;
        assert!(ratio > 0.9 && ratio < 1.0, "{ratio}");
    }
}
