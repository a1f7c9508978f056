use super::*;
use crate::spectrum::enumerate_wkb;

fn sech() -> PotentialSpec {
    PotentialSpec::sech(1.0, 0.0, 1.0).unwrap()
}

#[test]
fn sech_refined_eigenvalues_are_exact() {
    let s = sech();
    let sp = discrete_spectrum(&s, 0.2, &DiscretizationParams::new(15.0, 256)).unwrap();
    let mus = sp.mus();
    assert_eq!(mus.len(), 5, "{sp:?}");
    for (k, mu) in mus.iter().enumerate() {
        assert!((mu - (0.9 - 0.2 * k as f64)).abs() < 1e-6, "{mus:?}");
    }
    assert!(sp.eigenvalues.iter().all(|e| e.residual < 1e-8 && e.edge_mass < 0.01));
    assert!(sp.violations.is_empty(), "{:?}", sp.violations);
    assert!(sp.symmetry_defect < 1e-6, "{}", sp.symmetry_defect);
}

#[test]
fn doubling_n_leaves_refined_values_unchanged() {
    let s = sech();
    let a = discrete_spectrum(&s, 0.3, &DiscretizationParams::new(15.0, 128)).unwrap().mus();
    let b = discrete_spectrum(&s, 0.3, &DiscretizationParams::new(15.0, 256)).unwrap().mus();
    assert_eq!(a.len(), b.len());
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-8), "{a:?} vs {b:?}");
}

#[test]
fn above_formation_threshold_is_empty() {
    // 2 ||A||_1 / pi = 2 for sech.
    let s = sech();
    let sp = discrete_spectrum(&s, 2.5, &DiscretizationParams::new(15.0, 64)).unwrap();
    assert!(sp.eigenvalues.is_empty(), "{sp:?}");
}

#[test]
fn resolution_guard_refuses() {
    let s = sech();
    let err = discrete_spectrum(&s, 0.01, &DiscretizationParams::new(30.0, 256)).unwrap_err();
    assert!(matches!(err, Error::Resolution { n: 256, required } if required == 7640));
    assert!(DiscretizationParams::for_spec(&s, 0.01, 30.0).n >= 7640);
}

#[test]
fn mismatch_vanishes_only_at_eigenvalues() {
    let s = sech();
    assert!(mismatch(&s, 0.5, 0.2).unwrap().abs() < 1e-8);
    assert!(mismatch(&s, 0.6, 0.2).unwrap().abs() > 1e-3);
    assert!(mismatch(&s, 1.5, 0.2).is_err());
}

#[test]
fn sech_reflectionless_and_fast_decay() {
    let s = sech();
    let o = ReflectionOptions::default();
    let r = reflection(&s, 1.0 / 3.0, 0.5, &o).unwrap();
    assert!(r.r_abs < 1e-6 && r.cross_check < 1e-6, "{r:?}");
    let r = reflection(&s, 0.3, 10.0, &o).unwrap();
    assert!(r.r_abs < 1e-8, "{r:?}");
    let r = reflection(&s, 0.3, 0.5, &o).unwrap();
    assert!(r.r_abs > 1e-4 && r.cross_check < 1e-6 && r.unitarity_defect < 1e-8, "{r:?}");
    assert!(reflection(&s, 0.3, 0.1, &o).is_err());
}

#[test]
fn sech_reflection_matches_closed_form() {
    // For A = sech, |b| = |sin(pi/hbar)| / cosh(pi lambda / hbar) and
    // |a|^2 + |b|^2 = 1.
    let s = sech();
    let hbar: f64 = 0.3;
    for lambda in [0.4, 0.8] {
        let r = reflection(&s, hbar, lambda, &ReflectionOptions::default()).unwrap();
        let b = (std::f64::consts::PI / hbar).sin().abs() / (std::f64::consts::PI * lambda / hbar).cosh();
        let exact = b / (1.0 - b * b).sqrt();
        assert!((r.r_abs - exact).abs() < 1e-9, "{lambda}: {} vs {exact}", r.r_abs);
    }
}

#[test]
fn matching_sech_gaps_are_tiny() {
    let s = sech();
    let sp = discrete_spectrum(&s, 0.2, &DiscretizationParams::new(15.0, 256)).unwrap();
    let w = enumerate_wkb(&s, 0.2, (0.0, 1.0)).unwrap();
    let m = match_spectra(0.2, &sp.mus(), &w);
    assert_eq!(m.pairs.len(), 5);
    assert!(!m.cardinality_mismatch);
    assert!(m.max_gap.unwrap() < 1e-8, "{m:?}");
    assert!(m.pairs.iter().enumerate().all(|(k, p)| p.wkb.n == k));
}

#[test]
fn empty_matching_has_no_slope() {
    let m = match_spectra(0.1, &[], &[]);
    assert!(m.pairs.is_empty() && m.max_gap.is_none());
    assert_eq!(fit_slope(&[]), None);
    assert_eq!(fit_slope(&[(0.1, 1.0)]), None);
    let s = fit_slope(&[(0.2, 0.2f64.powi(2)), (0.1, 0.01), (0.05, 0.0025)]).unwrap();
    assert!((s - 2.0).abs() < 1e-12);
}
