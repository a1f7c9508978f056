//! Balancing function and the suprema l1, l2 that scale the error envelopes.

use crate::error::Result;
use crate::numerics::gamma::ln_gamma;
use crate::specfun::{Mpcf, Pcf};
use std::f64::consts::LN_2;

/// Omega(x) = 1 + |x|^{1/3}.
pub fn omega(x: f64) -> f64 {
    1.0 + x.abs().cbrt()
}

/// Sample abscissae on (0, x_max]: a log-spaced head and a uniform body.
fn grid(x_max: f64) -> Vec<f64> {
    let mut x: Vec<f64> = (0..=40).map(|i| 1e-4 * 10f64.powf(4.0 * i as f64 / 40.0)).collect();
    x.extend((1..=800).map(|i| x_max * i as f64 / 800.0));
    x
}

/// l1(c) = sup_{x > 0} Omega(x) M(x, c)^2 / Gamma(1/2 - c), c <= 0.
///
/// Beyond x_max = 2 sqrt(-c) + 30 the product decays like x^{-2/3}, so the
/// grid supremum is the supremum.
pub fn l1(c: f64) -> Result<f64> {
    if !(c <= 0.0) {
        return crate::error::domain(format!("l1 needs c <= 0, got {c}"));
    }
    let p = Pcf::new(c)?;
    let lg = ln_gamma(0.5 - c);
    let rho = p.rho();
    let mut best = 0.0f64;
    for x in grid(2.0 * (-c).sqrt() + 30.0) {
        let (u, ub) = p.pair(x);
        let ln_m2 = if x <= rho {
            let l = u.ln_scale.max(ub.ln_scale);
            let a = u.y[0] * (u.ln_scale - l).exp();
            let b = ub.y[0] * (ub.ln_scale - l).exp();
            (a * a + b * b).ln() + 2.0 * l
        } else {
            LN_2 + u.ln_scale + u.y[0].abs().ln() + ub.ln_scale + ub.y[0].abs().ln()
        };
        best = best.max(omega(x) * (ln_m2 - lg).exp());
    }
    Ok(best)
}

/// l2(c) = sup_{x > 0} Omega(x) Mbar(x, c)^2, c >= 0.
pub fn l2(c: f64) -> Result<f64> {
    if !(c >= 0.0) {
        return crate::error::domain(format!("l2 needs c >= 0, got {c}"));
    }
    let m = Mpcf::new(c)?;
    let mut best = 0.0f64;
    for x in grid(2.0 * c.sqrt() + 30.0) {
        let b = m.eval(x)?;
        best = best.max(omega(x) * b.m_bar * b.m_bar);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_values() {
        assert_eq!(omega(0.0), 1.0);
        assert!((omega(8.0) - 3.0).abs() < 1e-15);
        assert!((omega(-8.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn l1_is_finite_and_order_one() {
        for c in [0.0, -1.0, -10.0, -40.0] {
            let v = l1(c).unwrap();
            assert!(v.is_finite() && v > 0.1 && v < 50.0, "l1({c}) = {v}");
        }
    }

    #[test]
    fn l2_is_finite_and_order_one() {
        for c in [0.0, 1.0, 10.0, 40.0] {
            let v = l2(c).unwrap();
            assert!(v.is_finite() && v > 0.1 && v < 50.0, "l2({c}) = {v}");
        }
    }
}
