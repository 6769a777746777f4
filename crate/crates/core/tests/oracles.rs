//! Closed forms checked against independent numerical or exact oracles.

use cbs_core::coherence::{self, ElasticResponse};
use cbs_core::numerics::montecarlo::{block_count, combine_blocks, sphere_block};
use cbs_core::numerics::{integrate_spectrum_weighted, sphere_average, Tolerance};
use cbs_core::single_atom::{self, channel_series, default_grid, inelastic_spectrum};
use cbs_core::two_atom::{self, PropagationMode};
use cbs_core::Drive;
use num_rational::Ratio;

const DELTAS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];

fn tol() -> Tolerance {
    Tolerance::relative(1e-10)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn spectrum_integrates_to_inelastic_intensity() {
    for &d in &[0.0, 1.0, 2.0, 5.0] {
        let drive = Drive::new(d, 0.1).unwrap();
        let r = integrate_spectrum_weighted(|_| 1.0, &drive, &tol()).unwrap();
        assert!(rel(r.value, 0.005) < 1e-9, "delta {d}: {}", r.value);
    }
}

#[test]
fn spectrum_width_on_resonance() {
    // |P| ~ 1/(nu^2 + 1/4)^2, half maximum at nu^2 = (sqrt 2 - 1)/4
    let exact = 2.0 * ((2f64.sqrt() - 1.0) / 4.0).sqrt();
    assert!((exact - 0.643_594_252_905_582_6).abs() < 1e-15);
    let drive = Drive::new(0.0, 0.1).unwrap();
    let peaks = inelastic_spectrum(&drive, &default_grid(&drive)).unwrap().peaks();
    assert_eq!(peaks.len(), 1);
    assert!(peaks[0].position.abs() < 1e-12);
    assert!((peaks[0].fwhm - exact).abs() < 1e-4, "{}", peaks[0].fwhm);
}

#[test]
fn spectrum_peaks_at_large_detuning() {
    // Denominator (delta^2 - 1/4 - nu^2)^2 + delta^2 is smallest at
    // nu^2 = delta^2 - 1/4; half maximum where nu^2 = nu_0^2 +- delta.
    let delta: f64 = 2.0;
    let nu0 = (delta * delta - 0.25).sqrt();
    let fwhm = (nu0 * nu0 + delta).sqrt() - (nu0 * nu0 - delta).sqrt();
    assert!((nu0 - 1.936_491_673_103_708_5).abs() < 1e-15);
    assert!((fwhm - 1.075_040_106_124_064).abs() < 1e-12);
    let drive = Drive::new(delta, 0.1).unwrap();
    let peaks = inelastic_spectrum(&drive, &default_grid(&drive)).unwrap().peaks();
    assert_eq!(peaks.len(), 2);
    for p in &peaks {
        assert!((p.position.abs() - nu0).abs() < 5e-3, "{p:?}");
        assert!((p.fwhm - fwhm).abs() < 1e-3, "{p:?}");
    }
}

#[test]
fn bloch_series_matches_channels() {
    // s/(2(1+s)^2) and s^2/(2(1+s)^2) with 1/(1+s)^2 = sum (-1)^n (n+1) s^n
    let inv_sq = |n: i64| Ratio::from_integer(if n % 2 == 0 { n + 1 } else { -(n + 1) });
    let half = Ratio::new(1, 2);
    let elastic = [half * inv_sq(0), half * inv_sq(1)];
    let inelastic = [Ratio::from_integer(0), half * inv_sq(0)];
    let (el, inel) = channel_series();
    assert_eq!(el, elastic);
    assert_eq!(inel, inelastic);

    let limit = cbs_core::PerturbativeLimit::default();
    for &s in &[0.0, 0.01, 0.1, 0.2] {
        let i = single_atom::single_atom_intensities(&Drive::new(0.3, s).unwrap(), &limit, None).unwrap();
        assert_eq!(i.elastic_first, 0.5 * s);
        assert_eq!(i.elastic_second, -(s * s));
        assert_eq!(i.inelastic, 0.5 * s * s);
    }
}

#[test]
fn path_i_quadrature_matches_closed_form() {
    for &d in &DELTAS {
        let drive = Drive::new(d, 0.1).unwrap();
        let q = two_atom::path_i_quadrature(&drive, &PropagationMode::PhaseNeglect, &tol()).unwrap();
        let closed = two_atom::inelastic_ladder(&drive).path_i;
        assert!(rel(q, closed) < 1e-8, "delta {d}: {q} vs {closed}");
        let q2 = two_atom::path_ii_quadrature(&drive, &tol()).unwrap();
        assert!(rel(q2, two_atom::inelastic_ladder(&drive).path_ii) < 1e-8);
    }
}

#[test]
fn crossed_pair_is_detuning_independent() {
    for &d in &[0.0, 0.5, 1.0, 2.0, 3.0, 5.0] {
        let drive = Drive::new(d, 0.1).unwrap();
        let q = two_atom::crossed_pair_quadrature(&drive, &PropagationMode::PhaseNeglect, &tol()).unwrap();
        assert!(rel(q, 0.75 * 0.01) < 1e-8, "delta {d}: {q}");
        assert!(rel(2.0 * q, two_atom::inelastic_crossed(&drive)) < 1e-8);
    }
}

#[test]
fn exact_phase_reduces_to_phase_neglect_for_short_delay() {
    let drive = Drive::new(1.0, 0.1).unwrap();
    let near = PropagationMode::ExactPhase {
        omega_l: 1e8,
        k_r12: 50.0,
    };
    let q = two_atom::crossed_pair_quadrature(&drive, &near, &tol()).unwrap();
    assert!(rel(q, 0.0075) < 1e-6);
    // a delay comparable to the lifetime degrades the crossed term
    let far = PropagationMode::ExactPhase {
        omega_l: 1e3,
        k_r12: 2e3,
    };
    let q = two_atom::crossed_pair_quadrature(&drive, &far, &tol()).unwrap();
    assert!(q < 0.9 * 0.0075, "{q}");
}

#[test]
fn enhancement_slope_by_finite_differences() {
    for &d in &[0.0, 1.0, 3.0] {
        let alpha = |s0: f64| two_atom::enhancement_factor(&Drive::from_s0(d, s0).unwrap()).unwrap().0;
        let h = 1e-4;
        let slope = (-3.0 * alpha(0.0) + 4.0 * alpha(h) - alpha(2.0 * h)) / (2.0 * h);
        assert!((slope + 0.25).abs() < 1e-6, "delta {d}: {slope}");
    }
}

#[test]
fn coherence_quadrature_matches_closed_forms() {
    for &d in &[0.0, 0.3, 1.0, 2.0, 5.0] {
        let drive = Drive::new(d, 0.1).unwrap();
        let o = coherence::detector_state_overlap(&drive, &tol()).unwrap();
        assert!((o.gamma() - coherence::gamma_paths_closed(d)).abs() < 1e-8, "delta {d}");
        assert!((o.phase() - coherence::phi_closed(d)).abs() < 1e-8, "delta {d}");
        assert!(rel(o.intensity_ratio(), 0.75 + d * d) < 1e-8);
        let total = coherence::total_pattern(10.0, &drive, &[], &tol()).unwrap();
        assert!((total.gamma_12 - coherence::gamma_atoms_closed(d)).abs() < 1e-9);
        let sig = two_atom::assemble_signal(&drive).unwrap();
        assert!((sig.inelastic_coherence() - coherence::gamma_atoms_closed(d)).abs() < 1e-12);
        assert!(rel(total.crossed, sig.crossed_inelastic) < 1e-8);
    }
}

#[test]
fn wide_elastic_atom_restores_coherence() {
    let g = coherence::distinct_linewidth_check(&ElasticResponse::Linewidth(1e3), &Drive::new(0.0, 0.1).unwrap(), &tol()).unwrap();
    assert!((0.999..=1.0).contains(&g), "{g}");
    let g100 = coherence::distinct_linewidth_check(&ElasticResponse::Linewidth(100.0), &Drive::new(0.0, 0.1).unwrap(), &tol()).unwrap();
    assert!(g100 < g && g100 > coherence::gamma_paths_closed(0.0));
}

#[test]
fn sphere_average_of_plane_wave_is_sinc() {
    // int dOmega e^{i k.r} = 4 pi sin(kr)/(kr)
    let kr = 50.0_f64;
    let est = sphere_average(|n| (kr * n.components()[2]).cos(), 200_000, 11).unwrap();
    assert!(est.within_sigma(kr.sin() / kr, 3.0), "{est:?}");
}

#[test]
fn sphere_average_of_polarization_factor() {
    // <sin^4 theta>/4 = (1/2) int_0^pi sin^5 theta d theta / 4 = 2/15
    let est = sphere_average(
        |n| {
            let c = n.components()[2];
            (1.0 - c * c).powi(2) / 4.0
        },
        1_000_000,
        3,
    )
    .unwrap();
    assert!(est.within_sigma(2.0 / 15.0, 3.0), "{est:?}");
}

#[test]
fn shard_grouping_does_not_change_bits() {
    let f = |n: &cbs_core::Direction| (7.0 * n.components()[0]).sin() + n.components()[2];
    let samples = 100_003;
    let whole = sphere_average(f, samples, 99).unwrap();
    let blocks = block_count(samples);
    for shards in [1usize, 3, 8] {
        let per = blocks.div_ceil(shards);
        let mut parts = Vec::new();
        for s in 0..shards {
            let range = (s * per)..((s + 1) * per).min(blocks);
            parts.push(range.map(|b| sphere_block(&f, 99, b, samples)).collect::<Vec<_>>());
        }
        let est = combine_blocks(parts.into_iter().flatten(), 99);
        assert_eq!(est.mean.to_bits(), whole.mean.to_bits());
        assert_eq!(est.std_error.to_bits(), whole.std_error.to_bits());
    }
}

#[test]
fn standard_error_scales_with_root_samples() {
    let f = |n: &cbs_core::Direction| n.components()[2];
    let mut ratio_sum = 0.0;
    for rep in 0..30u64 {
        let a = sphere_average(f, 2_000, rep).unwrap();
        let b = sphere_average(f, 4_000, 1000 + rep).unwrap();
        ratio_sum += a.std_error / b.std_error;
    }
    let mean_ratio = ratio_sum / 30.0;
    assert!((mean_ratio / 2f64.sqrt() - 1.0).abs() < 0.2, "{mean_ratio}");
}
