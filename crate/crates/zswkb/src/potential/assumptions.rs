//! Checks of positivity, extremum structure and tail decay.

use super::{ExtremumKind, PotentialSpec};
use serde::Serialize;

/// Tail decay class fitted on log-log (or log-log-log) axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum DecayClass {
    /// A ~ |x|^{-p} with p between r (slower tail) and s (faster tail).
    Algebraic { r: f64, s: f64, tau: f64 },
    /// A ~ exp(-|x|^p) with p between r and s.
    Exponential { r: f64, s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub positive: bool,
    pub extremum_count: usize,
    pub maxima: usize,
    pub minima: usize,
    pub decay: DecayClass,
    /// Eligible for the near-zero regime (2r - s > 1/3, or exponential decay).
    pub near_zero_ok: bool,
    pub failures: Vec<String>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const FIT_LO: f64 = 10.0;
const FIT_HI: f64 = 100.0;
const FIT_POINTS: usize = 64;

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Fitted (algebraic exponent, exponential exponent, is_exponential) for one side.
fn fit_side(spec: &PotentialSpec, origin: f64, dir: f64) -> (f64, f64, bool) {
    let ts: Vec<f64> = (0..FIT_POINTS)
        .map(|i| FIT_LO * (FIT_HI / FIT_LO).powf(i as f64 / (FIT_POINTS - 1) as f64))
        .collect();
    let la: Vec<f64> = ts.iter().map(|t| spec.ln_value(origin + dir * t)).collect();
    let local = |i: usize, j: usize| -(la[j] - la[i]) / (ts[j] / ts[i]).ln();
    let near = local(0, 4);
    let far = local(FIT_POINTS - 5, FIT_POINTS - 1);
    let alg: Vec<(f64, f64)> = ts.iter().zip(&la).map(|(t, a)| (t.ln(), *a)).collect();
    let algebraic = -least_squares_slope(&alg);
    let exponential = far > 2.0 * near;
    let expo: Vec<(f64, f64)> =
        ts.iter().zip(&la).filter(|(_, a)| **a < 0.0).map(|(t, a)| (t.ln(), (-a).ln())).collect();
    let e = if expo.len() > 2 { least_squares_slope(&expo) } else { f64::NAN };
    (algebraic, e, exponential)
}

/// Report on the standing assumptions for `spec`.
pub fn validate_assumptions(spec: &PotentialSpec) -> AssumptionReport {
    let mut failures = Vec::new();
    let ext = spec.extrema();
    let maxima = ext.iter().filter(|e| e.kind == ExtremumKind::Max).count();
    let minima = ext.len() - maxima;
    let lo = ext[0].x;
    let hi = ext[ext.len() - 1].x;
    let origin = 0.5 * (lo + hi);

    let span = (hi - lo).max(spec.length_scale()) + FIT_HI;
    let positive = (0..=4000).all(|i| {
        let x = origin - span + 2.0 * span * i as f64 / 4000.0;
        let v = spec.value(x);
        v.is_finite() && (v > 0.0 || spec.ln_value(x).is_finite())
    });
    if !positive {
        failures.push("A is not positive and finite on the sampled grid".into());
    }
    if maxima != minima + 1 {
        failures.push(format!("extrema do not alternate: {maxima} maxima, {minima} minima"));
    }

    let (al, el, xl) = fit_side(spec, origin, -1.0);
    let (ar, er, xr) = fit_side(spec, origin, 1.0);
    let decay = if xl && xr {
        DecayClass::Exponential { r: el.min(er), s: el.max(er) }
    } else {
        let (r, s) = (al.min(ar), al.max(ar));
        DecayClass::Algebraic { r, s, tau: r - 1.0 }
    };
    let near_zero_ok = match decay {
        DecayClass::Exponential { .. } => true,
        DecayClass::Algebraic { r, s, .. } => r > 1.0 && r <= s && 2.0 * r - s > 1.0 / 3.0,
    };
    match decay {
        DecayClass::Algebraic { tau, .. } if tau <= 0.0 => {
            failures.push(format!("tail decays too slowly: fitted tau = {tau:.3}"))
        }
        _ => {}
    }
    if let (Some(t), DecayClass::Algebraic { r, s, tau }) = (spec.tail, decay) {
        for (name, declared, fitted) in [("r", t.r, r), ("s", t.s, s), ("tau", t.tau, tau)] {
            if let Some(d) = declared {
                if (d - fitted).abs() > 0.1 * d.max(1.0) {
                    failures.push(format!("declared tail.{name} = {d} but fitted {fitted:.3}"));
                }
            }
        }
    }
    AssumptionReport {
        positive,
        extremum_count: ext.len(),
        maxima,
        minima,
        decay,
        near_zero_ok,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::TailSpec;

    #[test]
    fn sech_is_exponential_with_unit_rate() {
        let s = PotentialSpec::sech(1.0, 0.0, 1.0).unwrap();
        let rep = validate_assumptions(&s);
        assert!(rep.passed(), "{:?}", rep.failures);
        match rep.decay {
            DecayClass::Exponential { r, s } => {
                assert!((r - 1.0).abs() < 0.05 && (s - 1.0).abs() < 0.05, "{r} {s}")
            }
            other => panic!("expected exponential class, got {other:?}"),
        }
        assert!(rep.near_zero_ok);
    }

    #[test]
    fn lorentzian_is_algebraic_of_order_two() {
        let s = PotentialSpec::lorentzian_sum(&[(1.0, 0.0, 1.0)])
            .unwrap()
            .with_tail(TailSpec { r: Some(2.0), s: Some(2.0), tau: Some(1.0) });
        let rep = validate_assumptions(&s);
        assert!(rep.passed(), "{:?}", rep.failures);
        match rep.decay {
            DecayClass::Algebraic { r, s, tau } => {
                assert!((r - 2.0).abs() < 0.02 && (s - 2.0).abs() < 0.02);
                assert!((tau - 1.0).abs() < 0.02);
                assert!(2.0 * r - s > 1.0 / 3.0);
            }
            other => panic!("expected algebraic class, got {other:?}"),
        }
        assert!(rep.near_zero_ok);
    }

    #[test]
    fn three_lobes_have_five_extrema() {
        let s = PotentialSpec::lorentzian_sum(&[(0.8, -5.0, 1.0), (1.0, -1.0, 1.0), (2.0, 5.0, 1.0)])
            .unwrap();
        let rep = validate_assumptions(&s);
        assert_eq!((rep.extremum_count, rep.maxima, rep.minima), (5, 3, 2));
    }

    #[test]
    fn slow_tail_fails_near_zero_and_declared_mismatch_is_reported() {
        let s = PotentialSpec::rational_decay(1.0, 0.0, 1.0, 1.2).unwrap();
        let rep = validate_assumptions(&s);
        assert!(rep.passed());
        let wrong = s.with_tail(TailSpec { r: Some(3.0), s: None, tau: None });
        assert!(!validate_assumptions(&wrong).passed());
    }

    #[test]
    fn stretched_exponential_rate() {
        let s = PotentialSpec::exponential_decay(1.0, 0.0, 1.0, 2.0).unwrap();
        match validate_assumptions(&s).decay {
            DecayClass::Exponential { r, .. } => assert!((r - 2.0).abs() < 0.05),
            other => panic!("{other:?}"),
        }
    }
}
