//! Quadrature and Monte Carlo oracles backing every closed-form result.

pub mod montecarlo;
pub mod quadrature;

pub use montecarlo::{sphere_average, McEstimate};
pub use quadrature::{integrate, integrate_real_line, QuadratureResult, Tolerance};

use crate::error::Result;
use crate::params::Drive;
use crate::single_atom::inelastic_density;

/// Half-width of the direct-integration window around the laser frequency.
pub fn spectral_window(drive: &Drive) -> f64 {
    40.0_f64.max(10.0 * drive.delta().abs())
}

/// `int dnu weight(nu) P_in(nu)` over the whole frequency axis, with `P_in`
/// normalized to `s^2/2` (units of `eta`). `nu` is the offset from the laser
/// frequency in linewidths.
pub fn integrate_spectrum_weighted<T, W>(weight: W, drive: &Drive, tol: &Tolerance) -> Result<QuadratureResult<T>>
where
    T: quadrature::QuadValue,
    W: Fn(f64) -> T,
{
    let half = spectral_window(drive);
    let d = drive.delta();
    integrate_real_line(
        |nu| weight(nu) * inelastic_density(nu, drive),
        -half,
        half,
        &[-d, 0.0, d],
        tol,
    )
}
