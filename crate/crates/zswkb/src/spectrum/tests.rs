use super::*;
use crate::liouville::{LiouvilleChart, Region};

fn sech() -> PotentialSpec {
    PotentialSpec::sech(1.0, 0.0, 1.0).unwrap()
}

fn two_hump() -> PotentialSpec {
    PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)]).unwrap()
}

fn single(spec: &PotentialSpec) -> BarrierNode {
    barrier_nodes(spec)[0]
}

#[test]
fn sech_action_closed_form() {
    let s = sech();
    let n = single(&s);
    assert!((action(&s, &n, 0.5).unwrap() - PI / 2.0).abs() < 1e-10);
    assert!((action_derivative(&s, &n, 0.5).unwrap() + PI).abs() < 1e-8);
    assert!(action(&s, &n, 1.0 - 1e-9).unwrap() < 1e-6);
    assert!(matches!(action(&s, &n, 1.2), Err(Error::OutOfWindow(_))));
}

#[test]
fn derivative_matches_finite_difference() {
    let s = two_hump();
    for n in barrier_nodes(&s) {
        let mu = n.lo + 0.37 * (n.hi - n.lo);
        let h = 1e-5 * (n.hi - n.lo);
        let fd = (action(&s, &n, mu + h).unwrap() - action(&s, &n, mu - h).unwrap()) / (2.0 * h);
        let d = action_derivative(&s, &n, mu).unwrap();
        assert!(d < 0.0 && (fd / d - 1.0).abs() < 1e-5, "{n:?}: {fd} vs {d}");
    }
}

#[test]
fn two_hump_has_three_barrier_nodes() {
    let s = two_hump();
    let nodes = barrier_nodes(&s);
    let m1 = s.minima().next().unwrap().value;
    assert_eq!(nodes.len(), 3);
    assert_eq!((nodes[0].lo, nodes[2].lo), (m1, m1));
    assert_eq!((nodes[1].lo, nodes[1].hi), (0.0, m1));
}

#[test]
fn action_agrees_with_chart_alpha() {
    let s = two_hump();
    let nodes = barrier_nodes(&s);
    let mu = 0.5 * (nodes[0].lo + nodes[0].hi);
    let d = decompose(&s, mu).unwrap();
    for (k, node) in [(0, nodes[0]), (1, nodes[2])] {
        let c = LiouvilleChart::build(&d, Region::barrier(k), &s).unwrap();
        assert!((action(&s, &node, mu).unwrap() - c.action()).abs() < 1e-10);
    }
}

#[test]
fn inversion() {
    let s = sech();
    let p = ActionProfile::build(&s, 0).unwrap();
    assert!((p.phi_lo - PI).abs() < 1e-9 && p.phi_hi == 0.0);
    assert!(p.phi.windows(2).all(|w| w[0] > w[1]));
    assert!((invert_action(&s, &p, PI / 2.0).unwrap() - 0.5).abs() < 1e-10);
    assert!(invert_action(&s, &p, 1e-6).unwrap() > 0.999);
    assert!(matches!(invert_action(&s, &p, 4.0), Err(Error::NoSolution(_))));
}

#[test]
fn near_zero_inversion_on_lorentzian() {
    let s = PotentialSpec::lorentzian_sum(&[(1.0, 0.0, 1.0)]).unwrap();
    let p = ActionProfile::build(&s, 0).unwrap();
    let mu = invert_action(&s, &p, 0.99 * s.l1_norm()).unwrap();
    assert!(mu > 0.0 && mu < 0.05, "{mu}");
    let n = single(&s);
    assert!((action(&s, &n, mu).unwrap() / (0.99 * s.l1_norm()) - 1.0).abs() < 1e-10);
}

#[test]
fn near_zero_action_approaches_l1_norm() {
    let s = sech();
    let n = single(&s);
    assert!((action(&s, &n, 1e-3).unwrap() / s.l1_norm() - 1.0).abs() < 0.01);
}

#[test]
fn sech_wkb_eigenvalues_are_exact() {
    let s = sech();
    let evs = enumerate_wkb(&s, 0.1, (0.0, 1.0)).unwrap();
    assert_eq!(evs.len(), 10);
    for (k, e) in evs.iter().enumerate() {
        assert_eq!(e.n, k);
        assert!((e.mu - (1.0 - (k as f64 + 0.5) * 0.1)).abs() < 1e-10, "{e:?}");
        assert_eq!(e.norming_sign, if k % 2 == 0 { 1 } else { -1 });
    }
    assert!(enumerate_wkb(&s, 2.1, (0.0, 1.0)).unwrap().is_empty());
}

#[test]
fn quantization_residuals_and_interlacing() {
    let s = two_hump();
    let nodes = barrier_nodes(&s);
    let hbar = 0.05;
    let evs = enumerate_wkb(&s, hbar, (0.0, s.amax())).unwrap();
    for e in &evs {
        let r = action(&s, &nodes[e.l], e.mu).unwrap() - PI * (e.n as f64 + 0.5) * hbar;
        assert!(r.abs() < 1e-9, "{e:?}: {r}");
    }
    for l in 0..nodes.len() {
        let mine: Vec<&WkbEigenvalue> = evs.iter().filter(|e| e.l == l).collect();
        assert!(mine.windows(2).all(|w| w[0].n < w[1].n && w[0].mu > w[1].mu));
    }
}

#[test]
fn norming_signs() {
    let mut e = WkbEigenvalue {
        l: 0,
        first_max: 0,
        last_max: 0,
        n: 0,
        mu: 0.5,
        norming_sign: 0,
        tail_unverified: false,
    };
    assert_eq!(norming_constant(&e), 1);
    e.n = 1;
    assert_eq!(norming_constant(&e), -1);
    e.n = 7;
    assert_eq!(norming_constant(&e), -1);
}

#[test]
fn sech_density_is_one() {
    let s = sech();
    for d in density(&s, &[0.1, 0.5, 0.9]).unwrap() {
        assert!((d.rho_imag - 1.0).abs() < 1e-8, "{d:?}");
        assert_eq!(d.barriers, 1);
    }
}

#[test]
fn two_hump_density_structure() {
    let s = two_hump();
    let m1 = s.minima().next().unwrap().value;
    let low = &density(&s, &[0.5 * m1]).unwrap()[0];
    assert_eq!(low.barriers, 1);
    let mid = &density(&s, &[m1 + 0.1]).unwrap()[0];
    assert_eq!(mid.barriers, 2);
    assert!(mid.contributions.iter().all(|c| *c > 0.0));
    let at = &density(&s, &[m1]).unwrap()[0];
    assert!(at.discontinuity.is_some());
}

#[test]
fn integrated_density_matches_quadrature_of_rho() {
    let s = two_hump();
    let m1 = s.minima().next().unwrap().value;
    let top = s.maxima().map(|e| e.value).fold(0.0, f64::max);
    let second = s.maxima().map(|e| e.value).fold(f64::INFINITY, f64::min);
    let mu = m1 + 0.2;
    let rho = |m: f64| density(&s, &[m]).unwrap()[0].rho_imag;
    let q = quad::adaptive(rho, mu, second, QuadTol::new(1e-10, 1e-10)).unwrap().value
        + quad::adaptive(rho, second, top, QuadTol::new(1e-10, 1e-10)).unwrap().value;
    let direct = integrated_density(&s, mu).unwrap();
    assert!((q - direct).abs() < 1e-6, "{q} vs {direct}");
}

#[test]
fn sech_counting_gap_is_half_hbar() {
    let s = sech();
    let hbar = 0.1;
    let evs = enumerate_wkb(&s, hbar, (0.0, 1.0)).unwrap();
    let r = counting_check(&s, &evs, hbar, &density_grid(&s, 50)).unwrap();
    assert!((r.sup_gap - 0.5 * hbar).abs() < 1e-8, "{r:?}");
}

