//! Coherent backscattering of light by two saturated two-level atoms.
//!
//! Perturbative two-photon scattering theory to second order in the
//! saturation parameter: single-atom elastic and inelastic intensities, the
//! inelastic power spectrum, ladder and crossed double-scattering terms in the
//! helicity-preserving channel, the enhancement factor, degrees of coherence
//! and the scalar-photon variant. Every closed form has an independent
//! quadrature or Monte Carlo counterpart in [`numerics`].
//!
//! Frequencies are measured in units of the atomic linewidth; intensities in
//! units of the geometric prefactors (`eta`, `eta~`, `eta_s`).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod coherence;
pub mod error;
pub mod numerics;
pub mod params;
pub mod polarization;
pub mod scalar;
pub mod single_atom;
pub mod two_atom;

pub use error::{CbsError, Result};
pub use params::{AtomResonance, Drive, PairGeometry, PerturbativeLimit};
pub use polarization::{Direction, Polarization};
