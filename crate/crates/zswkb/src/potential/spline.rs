//! Natural cubic spline for user-sampled potentials, continued beyond the
//! sample range by power-law tails matched in value and slope.

use super::jet::{Jet, ORDER};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpline {
    pub x: Vec<f64>,
    pub a: Vec<f64>,
    m: Vec<f64>,
    tails: [(f64, f64); 2],
}

impl SampledSpline {
    pub fn new(x: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        let cfg = |msg: &str| Error::Config { path: "params".into(), msg: msg.into() };
        if x.len() != a.len() || x.len() < 4 {
            return Err(cfg("`x` and `a` need equal lengths of at least 4"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(cfg("`x` must be strictly increasing"));
        }
        if a.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(cfg("samples `a` must be positive and finite"));
        }
        let n = x.len();
        // Second derivatives by the tridiagonal system with natural end conditions.
        let mut m = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let rhs = 6.0 * ((a[i + 1] - a[i]) / h1 - (a[i] - a[i - 1]) / h0);
            let diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
            c[i] = h1 / diag;
            d[i] = (rhs - h0 * d[i - 1]) / diag;
        }
        for i in (1..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        let mut s = SampledSpline { x, a, m, tails: [(0.0, 0.0); 2] };
        let left = s.interior(s.x[0]).derivatives();
        let right = s.interior(s.x[n - 1]).derivatives();
        // Tail A(x) = A_e (x_e/x)^p relative to a pole at the sample centre.
        let centre = 0.5 * (s.x[0] + s.x[n - 1]);
        let p_of = |xe: f64, v: f64, dv: f64| -> f64 {
            let p = -(xe - centre) * dv / v;
            if p.is_finite() && p > 1.0 { p } else { 2.0 }
        };
        s.tails = [
            (p_of(s.x[0], left[0], left[1]), centre),
            (p_of(s.x[n - 1], right[0], right[1]), centre),
        ];
        Ok(s)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn interior(&self, t: f64) -> Jet {
        let n = self.x.len();
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let (a0, a1, m0, m1) = (self.a[i], self.a[i + 1], self.m[i], self.m[i + 1]);
        // Cubic in u = t - x0.
        let c0 = a0;
        let c1 = (a1 - a0) / h - h * (2.0 * m0 + m1) / 6.0;
        let c2 = m0 / 2.0;
        let c3 = (m1 - m0) / (6.0 * h);
        let u = t - x0;
        let mut v = [0.0; ORDER];
        v[0] = c0 + u * (c1 + u * (c2 + u * c3));
        v[1] = c1 + u * (2.0 * c2 + 3.0 * c3 * u);
        v[2] = c2 + 3.0 * c3 * u;
        v[3] = c3;
        Jet(v)
    }

    pub fn jet(&self, t: f64) -> Jet {
        let (lo, hi) = self.range();
        if t < lo || t > hi {
            let (xe, ae, (p, c)) = if t < lo {
                (lo, self.a[0], self.tails[0])
            } else {
                (hi, self.a[self.a.len() - 1], self.tails[1])
            };
            let r = Jet::variable(t) + (-c);
            let re = (xe - c).abs();
            let rr = if t < lo { -r } else { r };
            return (rr * (1.0 / re)).powf(-p) * ae;
        }
        self.interior(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_a_smooth_function() {
        let xs: Vec<f64> = (0..=400).map(|i| -10.0 + 0.05 * i as f64).collect();
        let a: Vec<f64> = xs.iter().map(|x| 1.0 / (1.0 + x * x)).collect();
        let s = SampledSpline::new(xs, a).unwrap();
        for &t in &[-3.3, 0.0, 0.77, 5.1] {
            let v = s.jet(t).derivatives();
            assert!((v[0] - 1.0 / (1.0 + t * t)).abs() < 1e-5);
            assert!((v[1] + 2.0 * t / (1.0 + t * t).powi(2)).abs() < 1e-3);
        }
    }

    #[test]
    fn tails_are_positive_and_continuous() {
        let xs: Vec<f64> = (0..=40).map(|i| -10.0 + 0.5 * i as f64).collect();
        let a: Vec<f64> = xs.iter().map(|x| 1.0 / (1.0 + x * x)).collect();
        let s = SampledSpline::new(xs, a).unwrap();
        let inside = s.jet(10.0).value();
        let outside = s.jet(10.0 + 1e-9).value();
        assert!((inside - outside).abs() < 1e-9);
        assert!(s.jet(1e3).value() > 0.0 && s.jet(-1e3).value() > 0.0);
        assert!(s.jet(1e3).value() < 1e-4);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(SampledSpline::new(vec![0.0, 1.0, 1.0, 2.0], vec![1.0; 4]).is_err());
        assert!(SampledSpline::new(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, -1.0, 1.0, 1.0]).is_err());
    }
}
