use super::*;
use crate::liouville::Region;
use crate::potential::decompose;

fn sech_chart(mu: f64) -> LiouvilleChart {
    let s = PotentialSpec::sech(1.0, 0.0, 1.0).unwrap();
    let d = decompose(&s, mu).unwrap();
    LiouvilleChart::build(&d, Region::barrier(0), &s).unwrap()
}

fn middle_well() -> LiouvilleChart {
    let s = PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)]).unwrap();
    let e = s.extrema();
    let mu = 0.5 * (e[0].value + e[1].value);
    let d = decompose(&s, mu).unwrap();
    LiouvilleChart::build(&d, Region::well(1), &s).unwrap()
}

/// zeta-space (X, X_zeta) of an x-space state at zeta.
fn to_zeta(chart: &LiouvilleChart, zeta: f64, st: Scaled<2>) -> [f64; 2] {
    let (_, xd, xdd) = chart.jacobian(zeta).unwrap();
    let [y, dy] = st.values();
    let r = xd.sqrt();
    let x = y / r;
    [x, r * (dy - 0.5 * xdd * x / (xd * r))]
}

#[test]
fn asymptotic_sigma_special_values() {
    let c = sech_chart(0.5);
    assert!((c.gamma - 1.0).abs() < 1e-10);
    let a = Approximants::new(&c, 0.1).unwrap().asymptotic();
    assert!(a[0][0].abs() < 1e-9 && (a[0][1] + 1.0).abs() < 1e-9);
    let a = Approximants::new(&c, 0.5).unwrap().asymptotic();
    assert!((a[0][1] + 1.0).abs() < 1e-9);
}

#[test]
fn zeta_round_trip_of_state_conversion() {
    let c = sech_chart(0.5);
    let st = Scaled::new([0.3, -1.7]);
    let (_, xd, xdd) = c.jacobian(0.4).unwrap();
    let back = to_zeta(&c, 0.4, to_x(st, xd, xdd));
    assert!((back[0] - 0.3).abs() < 1e-14 && (back[1] + 1.7).abs() < 1e-13);
}

#[test]
fn envelopes_vanish_at_pinning_points() {
    let c = sech_chart(0.5);
    let a = Approximants::new(&c, 0.1).unwrap();
    let p = a.at(0.0, Side::Plus).unwrap();
    assert_eq!(p.z.env_value, 0.0);
    assert!(p.y.env_value > 0.0);
    let w = middle_well();
    let a = Approximants::new(&w, 0.1).unwrap();
    let p = a.at(0.0, Side::Minus).unwrap();
    assert_eq!(p.y.env_value, 0.0);
    let q = a.at(w.zeta_bounds.1, Side::Plus).unwrap();
    assert_eq!(q.z.env_value, 0.0);
}

#[test]
fn side_mismatch_is_a_range_error() {
    let c = sech_chart(0.5);
    let a = Approximants::new(&c, 0.1).unwrap();
    assert!(matches!(a.at(-0.5, Side::Plus), Err(Error::Range(_))));
    assert!(matches!(a.at(0.5, Side::Minus), Err(Error::Range(_))));
    assert!(Approximants::new(&c, 0.0).is_err());
}

#[test]
fn barrier_solution_lies_inside_its_envelope() {
    let c = sech_chart(0.5);
    for hbar in [0.2, 0.05] {
        let a = Approximants::new(&c, hbar).unwrap();
        let b = a.basis().unwrap();
        let lead = a.at(0.0, Side::Plus).unwrap();
        let [x, dx] = to_zeta(&c, 0.0, b.y_plus);
        assert!((x - lead.y.value).abs() <= lead.y.env_value, "hbar {hbar}: {x} vs {:?}", lead.y);
        assert!((dx - lead.y.deriv).abs() <= lead.y.env_deriv);
    }
}

#[test]
fn well_solution_lies_inside_its_envelope() {
    let w = middle_well();
    let a = Approximants::new(&w, 0.1).unwrap();
    let b = a.basis().unwrap();
    let lead = a.at(0.0, Side::Plus).unwrap();
    let [x, _] = to_zeta(&w, 0.0, b.z_plus);
    assert!((x - lead.z.value).abs() <= lead.z.env_value, "{x} vs {:?}", lead.z);
}

#[test]
fn sigma_approaches_its_limit() {
    let c = sech_chart(0.5);
    // Away from the exact levels 1 - (n + 1/2) hbar = 0.5.
    let gaps: Vec<f64> = [0.3, 0.15, 0.075]
        .iter()
        .map(|&h| Approximants::new(&c, h).unwrap().connection().unwrap().gap())
        .collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    assert!(gaps[2] < 0.05, "{gaps:?}");
}

#[test]
fn sigma_determinant_is_minus_one() {
    let c = sech_chart(0.5);
    let m = Approximants::new(&c, 0.1).unwrap().connection().unwrap();
    assert!((m.det + 1.0).abs() < 1e-2, "{m:?}");
    let l = m.leading;
    assert!((l[0][0] * l[1][1] - l[0][1] * l[1][0] + 1.0).abs() < 1e-10);
}

#[test]
fn tau_matches_k_on_two_hump_well() {
    let w = middle_well();
    let m = Approximants::new(&w, 0.1).unwrap().connection().unwrap();
    let k = m.asymptotic[0][1];
    assert!((m.numeric[0][1] / k - 1.0).abs() < 0.05, "{m:?}");
    assert!((m.numeric[1][0] * k - 1.0).abs() < 0.05, "{m:?}");
    assert!((m.det + 1.0).abs() < 0.05, "{m:?}");
}

#[test]
fn decaying_solution_has_zero_right_phase() {
    let c = sech_chart(0.5);
    let a = Approximants::new(&c, 0.1).unwrap();
    let b = a.basis().unwrap();
    let p = a.phases(&b, a.decaying_state(true).unwrap()).unwrap();
    assert!(p.xi[0].sin().abs() < 1e-6, "{p:?}");
}

#[test]
fn fixing_phase_trivial_cases() {
    let p = PhaseDecomposition { gamma: [1.0, 2.0], delta: [0.0, 0.0], v: [1.0, 2.0], xi: [0.0, 0.0] };
    let r = fixing_phases(&p, 0.1, 1.0).unwrap();
    assert!(r.holds && r.product == 0.0);
    let q = PhaseDecomposition { v: [0.0, 1.0], ..p };
    assert!(matches!(fixing_phases(&q, 0.1, 1.0), Err(Error::UndefinedPhase(_))));
    let q = PhaseDecomposition { xi: [1.0, 1.0], ..p };
    assert!(!fixing_phases(&q, 0.1, 1.0).unwrap().holds);
}

#[test]
fn csv_has_header_and_both_sides() {
    let c = sech_chart(0.5);
    let a = Approximants::new(&c, 0.2).unwrap();
    let csv = a.dump_csv(5).unwrap();
    assert!(csv.starts_with('#'));
    assert_eq!(csv.lines().count(), 2 + 10);
}
