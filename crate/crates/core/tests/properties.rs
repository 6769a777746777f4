//! Invariants over randomly drawn drives.

use cbs_core::coherence;
use cbs_core::scalar;
use cbs_core::two_atom;
use cbs_core::Drive;
use proptest::prelude::*;

proptest! {
    #[test]
    fn elastic_reciprocity(s in 0.0..0.2f64, d in -10.0..10.0f64) {
        let t = two_atom::ladder_crossed_elastic(&Drive::new(d, s).unwrap());
        prop_assert_eq!(t.ladder(), t.crossed());
        if s > 0.0 {
            prop_assert_eq!((t.ladder() + t.crossed()) / t.ladder(), 2.0);
        }
    }

    #[test]
    fn enhancement_bounds_and_identity(s in 1e-6..0.2f64, d in -10.0..10.0f64) {
        let drive = Drive::new(d, s).unwrap();
        let sig = two_atom::assemble_signal(&drive).unwrap();
        prop_assert!(sig.alpha >= 1.0 && sig.alpha <= 2.0);
        prop_assert!((sig.alpha - (2.0 + sig.x) / (1.0 + sig.x)).abs() < 1e-12);
        prop_assert!((sig.coherence() - 1.0 / (1.0 + sig.x)).abs() < 1e-12);
        prop_assert!(sig.crossed_inelastic < sig.inelastic.ladder);
        prop_assert!((sig.inelastic_coherence() - coherence::gamma_atoms_closed(d)).abs() < 1e-12);
    }

    #[test]
    fn enhancement_decreases_with_intensity(d in 0.0..10.0f64, s0a in 0.0..0.19f64, step in 1e-4..0.01f64) {
        let a = two_atom::enhancement_factor(&Drive::from_s0(d, s0a).unwrap()).unwrap().0;
        let b = two_atom::enhancement_factor(&Drive::from_s0(d, s0a + step).unwrap()).unwrap().0;
        prop_assert!(b < a);
    }

    #[test]
    fn coherence_bounds(d in -20.0..20.0f64) {
        let drive = Drive::new(d, 0.1).unwrap();
        let g = coherence::gamma_paths_closed(d);
        let g12 = coherence::gamma_atoms_closed(d);
        prop_assert!((0.0..=1.0).contains(&g));
        prop_assert!((0.0..=1.0).contains(&g12));
        prop_assert!(g12 <= g + 1e-15);
        let from_factors = g * coherence::phi_closed(d).cos() * coherence::asymmetry_factor(&drive);
        prop_assert!((from_factors - g12).abs() < 1e-12);
        if d.abs() < 1.0 {
            prop_assert!(coherence::asymmetry_factor(&drive) >= 0.96);
        }
    }

    #[test]
    fn spectrum_mirror_symmetry(d in -8.0..8.0f64, x in 0.0..50.0f64) {
        let drive = Drive::new(d, 0.1).unwrap();
        let a = cbs_core::single_atom::inelastic_density(x, &drive);
        let b = cbs_core::single_atom::inelastic_density(-x, &drive);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(b));
    }

    #[test]
    fn scalar_relations(d in -10.0..10.0f64, s in 0.0..0.2f64, b in 1e-6..1e-2f64) {
        let drive = Drive::new(d, s).unwrap();
        let sig = scalar::scalar_signal_with_exchange(&drive, b);
        prop_assert_eq!(sig.ladder_elastic_first, sig.crossed_elastic_first);
        if s > 0.0 {
            prop_assert!(sig.inelastic_enhancement() < 1.0);
        }
        // the doubled diagrams are the elastic-first ones: 2 I_I + 8 I_II
        let l = two_atom::inelastic_ladder(&drive);
        let rebuilt = (2.0 * l.path_i + 8.0 * l.path_ii) * b;
        prop_assert!((sig.ladder_inelastic - rebuilt).abs() <= 1e-12 * sig.ladder_inelastic.max(1e-300));
    }
}

#[test]
fn literal_eight_two_combination_only_matches_at_half_linewidth() {
    // 8 I_I + 2 I_II = (4 + 4 delta^2) s^2 differs from (19/4 + delta^2) s^2
    // except where 3 delta^2 = 3/4.
    for &(d, agrees) in &[(0.0, false), (0.5, true), (1.0, false), (2.0, false)] {
        let drive = Drive::new(d, 0.1).unwrap();
        let l = two_atom::inelastic_ladder(&drive);
        let literal = 8.0 * l.path_i + 2.0 * l.path_ii;
        let sig = scalar::scalar_signal_with_exchange(&drive, 1.0);
        assert_eq!((literal - sig.ladder_inelastic).abs() < 1e-12, agrees, "delta {d}");
    }
}
