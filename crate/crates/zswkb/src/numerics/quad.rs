//! Adaptive Gauss-Legendre quadrature with endpoint substitutions for
//! square-root singularities and maps for infinite ranges.

use crate::error::{Error, Result};
use std::sync::OnceLock;

const GL_N: usize = 20;

/// Nodes and weights of the `GL_N`-point Gauss-Legendre rule on [-1, 1].
fn gl_rule() -> &'static [(f64, f64); GL_N] {
    static RULE: OnceLock<[(f64, f64); GL_N]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_N;
        let mut rule = [(0.0, 0.0); GL_N];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule[i] = (x, w);
        }
        rule
    })
}

/// Fixed Gauss-Legendre rule on [a, b].
pub fn gauss_legendre<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    gl_rule().iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Tolerances for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTol {
    fn default() -> Self {
        QuadTol { abs: 1e-14, rel: 1e-13, max_intervals: 4000 }
    }
}

impl QuadTol {
    pub fn new(abs: f64, rel: f64) -> Self {
        QuadTol { abs, rel, ..Default::default() }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Globally adaptive bisection driven by the difference between a panel rule
/// and the sum of its two halves.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: QuadTol) -> Result<Quad> {
    if a == b {
        return Ok(Quad { value: 0.0, error: 0.0, intervals: 0 });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Integration(format!("non-finite limits [{a}, {b}]")));
    }
    let split = |f: &mut F, a: f64, b: f64, whole: f64| -> (Panel, Panel) {
        let m = 0.5 * (a + b);
        let l = gauss_legendre(f, a, m);
        let r = gauss_legendre(f, m, b);
        let err = (whole - l - r).abs();
        (
            Panel { a, b: m, value: l, error: 0.5 * err },
            Panel { a: m, b, value: r, error: 0.5 * err },
        )
    };
    let whole = gauss_legendre(&mut f, a, b);
    let (l, r) = split(&mut f, a, b, whole);
    let mut panels = vec![l, r];
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if !total.is_finite() {
            return Err(Error::Integration(format!("non-finite integrand on [{a}, {b}]")));
        }
        let target = tol.abs.max(tol.rel * total.abs());
        if err <= target {
            return Ok(Quad { value: total, error: err, intervals: panels.len() });
        }
        if panels.len() >= tol.max_intervals {
            if err <= 1e3 * target {
                return Ok(Quad { value: total, error: err, intervals: panels.len() });
            }
            return Err(Error::Integration(format!(
                "no convergence on [{a}, {b}]: estimate {total:e}, error {err:e}"
            )));
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels.swap_remove(idx);
        if (p.b - p.a).abs() <= 1e-15 * (p.a.abs() + p.b.abs()) {
            panels.push(Panel { error: 0.0, ..p });
            continue;
        }
        let (l, r) = split(&mut f, p.a, p.b, p.value);
        panels.push(l);
        panels.push(r);
    }
}

/// Integral over [a, b] of an integrand with square-root type behaviour at the
/// flagged endpoints. The substitution x = a + (b-a)u^2 (or its mirror) makes
/// both sqrt(x-a) and 1/sqrt(x-a) behaviour smooth in u.
pub fn sqrt_endpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    sing_a: bool,
    sing_b: bool,
    tol: QuadTol,
) -> Result<Quad> {
    if a == b {
        return Ok(Quad { value: 0.0, error: 0.0, intervals: 0 });
    }
    let (sign, a, b, sing_a, sing_b) =
        if a < b { (1.0, a, b, sing_a, sing_b) } else { (-1.0, b, a, sing_b, sing_a) };
    let add = |x: Quad, y: Quad| Quad {
        value: x.value + y.value,
        error: x.error + y.error,
        intervals: x.intervals + y.intervals,
    };
    let scale = |q: Quad| Quad { value: sign * q.value, ..q };
    match (sing_a, sing_b) {
        (false, false) => adaptive(f, a, b, tol).map(scale),
        (true, false) => {
            let w = b - a;
            adaptive(|u| 2.0 * w * u * f(a + w * u * u), 0.0, 1.0, tol).map(scale)
        }
        (false, true) => {
            let w = b - a;
            adaptive(|u| 2.0 * w * u * f(b - w * u * u), 0.0, 1.0, tol).map(scale)
        }
        (true, true) => {
            let m = 0.5 * (a + b);
            let w = m - a;
            let l = adaptive(|u| 2.0 * w * u * f(a + w * u * u), 0.0, 1.0, tol)?;
            let r = adaptive(|u| 2.0 * w * u * f(b - w * u * u), 0.0, 1.0, tol)?;
            Ok(scale(add(l, r)))
        }
    }
}

/// Integral over [a, +inf) through x = a + t/(1-t).
pub fn to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: QuadTol) -> Result<Quad> {
    adaptive(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let d = 1.0 - t;
            let v = f(a + t / d);
            if v == 0.0 { 0.0 } else { v / (d * d) }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Integral over (-inf, b] through x = b - t/(1-t).
pub fn from_neg_infinity<F: FnMut(f64) -> f64>(mut f: F, b: f64, tol: QuadTol) -> Result<Quad> {
    to_infinity(|x| f(2.0 * b - x), b, tol)
}

/// Integral over the whole real line, split at `c`.
pub fn whole_line<F: FnMut(f64) -> f64>(mut f: F, c: f64, tol: QuadTol) -> Result<Quad> {
    let l = from_neg_infinity(&mut f, c, tol)?;
    let r = to_infinity(&mut f, c, tol)?;
    Ok(Quad { value: l.value + r.value, error: l.error + r.error, intervals: l.intervals + r.intervals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let v = gauss_legendre(&mut |x: f64| x.powi(38) * 39.0, 0.0, 1.0);
        assert!((v - 1.0).abs() < 1e-13);
        let w: f64 = gl_rule().iter().map(|p| p.1).sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn semicircle_area_with_endpoint_substitution() {
        let q = sqrt_endpoints(|x| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, true, true, QuadTol::default())
            .unwrap();
        assert!((q.value - PI / 2.0).abs() < 1e-13);
        let q = sqrt_endpoints(|x| 1.0 / (1.0 - x * x).sqrt(), -1.0, 1.0, true, true, QuadTol::default())
            .unwrap();
        assert!((q.value - PI).abs() < 1e-12);
    }

    #[test]
    fn infinite_ranges() {
        let q = whole_line(|x| 1.0 / (1.0 + x * x), 0.0, QuadTol::default()).unwrap();
        assert!((q.value - PI).abs() < 1e-12);
        let q = to_infinity(|x| (-x).exp(), 0.0, QuadTol::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_change_sign() {
        let q = sqrt_endpoints(|x| x, 1.0, 0.0, false, false, QuadTol::default()).unwrap();
        assert!((q.value + 0.5).abs() < 1e-15);
    }
}
