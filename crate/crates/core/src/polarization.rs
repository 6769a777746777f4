//! Polarization vectors and the transverse projector between two atoms.

use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{CbsError, Result};

const UNIT_TOL: f64 = 1e-10;

/// A real unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction([f64; 3]);

impl Direction {
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = norm3(&v);
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(CbsError::InputDomain("direction must be a unit vector"));
        }
        Ok(Self(v))
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let n = norm3(&v);
        if !(n > 0.0 && n.is_finite()) {
            return Err(CbsError::InputDomain("cannot normalize a zero vector"));
        }
        Ok(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Unit vector at polar angle `theta` from `+z` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = (libm::sin(theta), libm::cos(theta));
        Self([st * libm::cos(phi), st * libm::sin(phi), ct])
    }

    pub(crate) fn from_components_unchecked(v: [f64; 3]) -> Self {
        Self(v)
    }

    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm3(&self.0)
    }

    pub fn dot(&self, other: &[f64; 3]) -> f64 {
        self.0[0] * other[0] + self.0[1] * other[1] + self.0[2] * other[2]
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
}

/// A complex polarization vector of unit Hermitian norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polarization([Complex64; 3]);

impl Polarization {
    pub fn new(v: [Complex64; 3]) -> Result<Self> {
        let n = hermitian_norm(&v);
        if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
            return Err(CbsError::InputDomain("polarization must have unit norm"));
        }
        Ok(Self(v))
    }

    /// Circular polarization `(1, i, 0)/sqrt(2)` for light propagating along `+z`.
    pub fn circular() -> Self {
        Self([
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, FRAC_1_SQRT_2),
            Complex64::new(0.0, 0.0),
        ])
    }

    /// Detection polarization of the helicity-preserving channel, `eps_D = eps_L*`.
    pub fn helicity_preserving(&self) -> Self {
        self.conj()
    }

    pub fn conj(&self) -> Self {
        Self([self.0[0].conj(), self.0[1].conj(), self.0[2].conj()])
    }

    pub fn components(&self) -> [Complex64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        hermitian_norm(&self.0)
    }

    /// Bilinear product `a . b` (no conjugation).
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }
}

fn hermitian_norm(v: &[Complex64; 3]) -> f64 {
    libm::sqrt(v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr())
}

/// `I - n n^T`: projection onto the plane transverse to the atom separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseProjector([[f64; 3]; 3]);

impl TransverseProjector {
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn apply(&self, v: &[f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// Bilinear form `a . P . b`.
    pub fn sandwich(&self, a: &Polarization, b: &Polarization) -> Complex64 {
        let (a, b) = (a.components(), b.components());
        let mut acc = Complex64::new(0.0, 0.0);
        for (ai, row) in a.iter().zip(&self.0) {
            for (pij, bj) in row.iter().zip(&b) {
                acc += ai * pij * bj;
            }
        }
        acc
    }

    pub fn square(&self) -> Self {
        let m = &self.0;
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| m[i][k] * m[k][j]).sum();
            }
        }
        Self(out)
    }
}

/// Builds the transverse projector for a unit separation vector.
pub fn transverse_projector(n12: &Direction) -> TransverseProjector {
    let n = n12.components();
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = if i == j { 1.0 } else { 0.0 } - n[i] * n[j];
        }
    }
    TransverseProjector(m)
}

/// `eps_L . Delta_12 . eps_D*` in the helicity-preserving channel, where
/// `eps_D* = eps_L`. Its squared modulus is `sin^4(theta)/4` for circular
/// input, with `theta` the angle between the laser axis and the pair.
pub fn helicity_matrix_element(eps_l: &Polarization, n12: &Direction) -> Complex64 {
    let eps_d_conj = eps_l.helicity_preserving().conj();
    transverse_projector(n12).sandwich(eps_l, &eps_d_conj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    use proptest::prelude::*;

    fn assert_matrix(p: &TransverseProjector, want: [[f64; 3]; 3]) {
        for (row, want_row) in p.matrix().iter().zip(&want) {
            for (x, w) in row.iter().zip(want_row) {
                assert!((x - w).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn axis_projectors() {
        let pz = transverse_projector(&Direction::z());
        assert_matrix(&pz, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]);
        let px = transverse_projector(&Direction::new([1.0, 0.0, 0.0]).unwrap());
        assert_matrix(&px, [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    }

    #[test]
    fn non_unit_direction_rejected() {
        assert!(Direction::new([1.0, 1.0, 0.0]).is_err());
        assert!(Direction::normalized([0.0, 0.0, 0.0]).is_err());
        assert!(Direction::normalized([1.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn circular_channel() {
        let eps_l = Polarization::circular();
        let eps_d = eps_l.helicity_preserving();
        assert!((eps_l.norm() - 1.0).abs() < 1e-12);
        // eps_L . eps_D* = 0: no single scattering in this channel
        assert!(eps_l.dot(&eps_d.conj()).norm() < 1e-15);
    }

    #[test]
    fn helicity_element_reference_angles() {
        let eps = Polarization::circular();
        let m0 = helicity_matrix_element(&eps, &Direction::z());
        assert!(m0.norm() < 1e-15);
        let m90 = helicity_matrix_element(&eps, &Direction::from_angles(FRAC_PI_2, 0.3));
        assert!((m90.norm_sqr() - 0.25).abs() < 1e-15);
        let m45 = helicity_matrix_element(&eps, &Direction::from_angles(FRAC_PI_4, 1.1));
        assert!((m45.norm_sqr() - 1.0 / 16.0).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn projector_is_idempotent_with_trace_two(theta in 0.0..core::f64::consts::PI, phi in 0.0..6.3f64) {
            let n = Direction::from_angles(theta, phi);
            let p = transverse_projector(&n);
            let p2 = p.square();
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert!((p2.matrix()[i][j] - p.matrix()[i][j]).abs() < 1e-12);
                    prop_assert!((p.matrix()[i][j] - p.matrix()[j][i]).abs() < 1e-15);
                }
            }
            prop_assert!((p.trace() - 2.0).abs() < 1e-12);
            let kernel = p.apply(&n.components());
            prop_assert!(kernel.iter().all(|c| c.abs() < 1e-12));
        }

        #[test]
        fn helicity_element_is_sin4_over_4(theta in 0.0..core::f64::consts::PI, phi in 0.0..6.3f64) {
            let n = Direction::from_angles(theta, phi);
            let m = helicity_matrix_element(&Polarization::circular(), &n);
            let s = libm::sin(theta);
            prop_assert!((m.norm_sqr() - s * s * s * s / 4.0).abs() < 1e-12);
        }
    }
}
