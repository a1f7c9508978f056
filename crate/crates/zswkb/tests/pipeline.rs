use zswkb::oracle::{self, DiscretizationParams};
use zswkb::potential::PotentialSpec;
use zswkb::spectrum;

#[test]
fn sech_oracle_reproduces_wkb_levels() {
    let s = PotentialSpec::sech(1.0, 0.0, 1.0).unwrap();
    let hbar = 0.25;
    let sp = oracle::discrete_spectrum(&s, hbar, &DiscretizationParams::new(15.0, 256)).unwrap();
    let wkb = spectrum::enumerate_wkb(&s, hbar, (0.0, 1.0)).unwrap();
    let m = oracle::match_spectra(hbar, &sp.mus(), &wkb);
    assert!(!m.cardinality_mismatch, "{m:?}");
    assert_eq!(m.pairs.len(), 4);
    assert!(m.max_gap.unwrap() < 1e-8, "{m:?}");
}

#[test]
fn two_hump_oracle_tracks_wkb_inside_the_window() {
    let s = PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)]).unwrap();
    let hbar = 0.2;
    let m1 = s.minima().next().unwrap().value;
    let low = s.maxima().map(|e| e.value).fold(f64::INFINITY, f64::min);
    let params = DiscretizationParams::for_spec(&s, hbar, 20.0);
    assert_eq!(params.n, 512);
    let sp = oracle::discrete_spectrum(&s, hbar, &params).unwrap();
    assert!(sp.violations.is_empty(), "{:?}", sp.violations);
    let wkb = spectrum::enumerate_wkb(&s, hbar, (0.0, s.amax())).unwrap();
    let gaps = oracle::nearest_gaps(&sp.mus(), &wkb, (m1, low));
    assert_eq!(gaps.len(), 8);
    // Frozen value; the worst level sits just above m1.
    let worst = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    assert!((worst - 3.96e-3).abs() < 5e-5, "{worst}");
    assert!(worst < hbar.powf(5.0 / 3.0));
}

#[test]
fn resolution_guard_names_the_required_size() {
    let s = PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)]).unwrap();
    let err = oracle::discrete_spectrum(&s, 0.05, &DiscretizationParams::new(20.0, 256)).unwrap_err();
    assert!(err.to_string().contains("2048"), "{err}");
}
