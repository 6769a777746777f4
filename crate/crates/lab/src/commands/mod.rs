//! Data-producing subcommands. Each writes a CSV and a JSON sidecar into the
//! configured output directory and returns the sidecar contents.

pub mod cone;
pub mod enhancement;
pub mod spectrum;

use std::f64::consts::PI;

pub(crate) fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub(crate) fn default_theta_max(k_r12: f64) -> f64 {
    6.0 * PI / k_r12
}
