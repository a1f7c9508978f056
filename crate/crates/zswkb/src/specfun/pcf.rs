//! Parabolic cylinder functions U(x, b), Ū(x, b) of w'' = (x^2/4 + b) w for
//! b <= 0, x >= 0, with the auxiliary functions E, M, N, theta, omega.
//!
//! U is swept backward from a far point where its asymptotic series is
//! accurate (U is dominant in that direction); Ū is swept forward from its
//! exact values at the origin. A [`Pcf`] keeps both sweeps on a grid so
//! point evaluations only take a short Taylor step.

use super::{branch_near, eta};
use crate::error::{Error, Result};
use crate::numerics::gamma::ln_gamma;
use crate::numerics::ode::Scaled;
use crate::numerics::roots;
use crate::numerics::taylor::QuadraticOde;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

const H: f64 = 0.25;

/// U, Ū, derivatives and auxiliaries at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PcfBundle {
    pub x: f64,
    pub b: f64,
    pub u: f64,
    pub du: f64,
    pub ubar: f64,
    pub dubar: f64,
    /// ln of the weight E (E itself overflows for large x).
    pub ln_e: f64,
    pub m: f64,
    pub n: f64,
    pub theta: f64,
    pub omega: f64,
    /// Largest root of U = Ū.
    pub rho: f64,
}

impl PcfBundle {
    pub fn e(&self) -> f64 {
        self.ln_e.exp()
    }

    pub fn wronskian(&self) -> f64 {
        self.u * self.dubar - self.du * self.ubar
    }
}

/// ln W[U, Ū] = ln( sqrt(2/pi) Gamma(1/2 - b) ).
pub fn ln_wronskian(b: f64) -> f64 {
    0.5 * (2.0 / PI).ln() + ln_gamma(0.5 - b)
}

/// Exact (U, U') and (Ū, Ū') at x = 0, in scaled form.
pub fn origin(b: f64) -> (Scaled<2>, Scaled<2>) {
    let l1 = ln_gamma(0.25 - 0.5 * b) - 0.5 * PI.ln() - 0.25 * (2.0 * b + 1.0) * LN_2;
    let l3 = ln_gamma(0.75 - 0.5 * b) - 0.5 * PI.ln() - 0.25 * (2.0 * b - 1.0) * LN_2;
    let l = l1.max(l3);
    let (a1, a3) = ((l1 - l).exp(), (l3 - l).exp());
    let ph = 0.5 * b * PI;
    let u = Scaled::with_scale([a1 * (FRAC_PI_4 - ph).sin(), -a3 * (3.0 * FRAC_PI_4 - ph).sin()], l);
    let ub =
        Scaled::with_scale([a1 * (3.0 * FRAC_PI_4 - ph).sin(), -a3 * (5.0 * FRAC_PI_4 - ph).sin()], l);
    (u, ub)
}

/// (U, U') from the large-x asymptotic series; `None` if the series has not
/// converged to working precision at this x.
fn u_series(x: f64, b: f64) -> Option<Scaled<2>> {
    let z = 2.0 * x * x;
    let (mut s, mut ds) = (1.0, 0.0);
    let mut t = 1.0;
    let mut prev = 1.0;
    for k in 0..400 {
        let kf = k as f64;
        t *= -(0.5 + b + 2.0 * kf) * (1.5 + b + 2.0 * kf) / ((kf + 1.0) * z);
        if t.abs() > prev && t.abs() > 1e-17 {
            return None;
        }
        prev = t.abs();
        s += t;
        ds += -2.0 * (kf + 1.0) * t / x;
        if t.abs() < 1e-17 * s.abs() {
            let ln = -0.25 * x * x + (-b - 0.5) * x.ln();
            let d = s * (-0.5 * x + (-b - 0.5) / x) + ds;
            return Some(Scaled::with_scale([s, d], ln));
        }
    }
    None
}

/// Value of a scaled pair component on a common scale.
fn diff(a: &Scaled<2>, b: &Scaled<2>, i: usize) -> f64 {
    let l = a.ln_scale.max(b.ln_scale);
    a.y[i] * (a.ln_scale - l).exp() - b.y[i] * (b.ln_scale - l).exp()
}

/// Precomputed U and Ū for one parameter b <= 0.
#[derive(Debug, Clone)]
pub struct Pcf {
    pub b: f64,
    x_far: f64,
    u_nodes: Vec<Scaled<2>>,
    ubar_nodes: Vec<Scaled<2>>,
    rho: f64,
}

impl Pcf {
    pub fn new(b: f64) -> Result<Self> {
        if !(b <= 0.0) || !b.is_finite() {
            return crate::error::domain(format!("PCF parameter must satisfy b <= 0, got {b}"));
        }
        let ode = QuadraticOde::weber(b);
        let mut x_far = (2.0 * (-b).sqrt() + 8.0).max(-b / 2f64.sqrt() + 2.0).max(10.0);
        let far = loop {
            x_far = (x_far / H).ceil() * H;
            if let Some(s) = u_series(x_far, b) {
                break s;
            }
            x_far *= 1.25;
            if x_far > 1e4 {
                return Err(Error::Integration(format!("U series does not converge for b = {b}")));
            }
        };
        let n = (x_far / H).round() as usize;
        let mut u_nodes = vec![far; n + 1];
        for i in (0..n).rev() {
            u_nodes[i] = ode.advance((i + 1) as f64 * H, u_nodes[i + 1], i as f64 * H);
        }
        let mut ubar_nodes = vec![origin(b).1; n + 1];
        for i in 1..=n {
            ubar_nodes[i] = ode.advance((i - 1) as f64 * H, ubar_nodes[i - 1], i as f64 * H);
        }
        let mut p = Pcf { b, x_far, u_nodes, ubar_nodes, rho: 0.0 };
        p.rho = p.find_rho()?;
        Ok(p)
    }

    fn find_rho(&self) -> Result<f64> {
        if self.b == 0.0 {
            return Ok(0.0);
        }
        let n = self.u_nodes.len() - 1;
        for i in (0..n).rev() {
            if diff(&self.ubar_nodes[i], &self.u_nodes[i], 0) <= 0.0 {
                let g = |x: f64| {
                    let (u, ub) = self.pair(x);
                    diff(&ub, &u, 0)
                };
                return roots::brent(g, i as f64 * H, (i + 1) as f64 * H, 1e-14);
            }
        }
        Ok(0.0)
    }

    /// Scaled (U, U') and (Ū, Ū') at x >= 0.
    pub fn pair(&self, x: f64) -> (Scaled<2>, Scaled<2>) {
        let ode = QuadraticOde::weber(self.b);
        let n = self.u_nodes.len() - 1;
        if x >= self.x_far {
            let u = u_series(x, self.b)
                .unwrap_or_else(|| ode.advance(self.x_far, self.u_nodes[n], x));
            return (u, ode.advance(self.x_far, self.ubar_nodes[n], x));
        }
        let i = ((x / H).round() as usize).min(n);
        let xi = i as f64 * H;
        (ode.advance(xi, self.u_nodes[i], x), ode.advance(xi, self.ubar_nodes[i], x))
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Rough continuous phase, exact at the turning point.
    fn theta_estimate(&self, x: f64) -> f64 {
        let nu2 = -2.0 * self.b;
        if nu2 == 0.0 {
            return FRAC_PI_4;
        }
        let y = (x / (nu2.sqrt() * 2f64.sqrt())).min(1.0);
        0.5 * nu2 * (y.acos() - y * (1.0 - y * y).sqrt()) + FRAC_PI_4
    }

    pub fn eval(&self, x: f64) -> Result<PcfBundle> {
        if !(x >= 0.0) || !x.is_finite() {
            return crate::error::domain(format!("PCF argument must satisfy x >= 0, got {x}"));
        }
        let (u, ub) = self.pair(x);
        let [uv, du] = u.values();
        let [ubv, dub] = ub.values();
        let (ln_e, m, n, theta, omega) = if x <= self.rho {
            let l = u.ln_scale.max(ub.ln_scale);
            let (a, c) = ((u.ln_scale - l).exp(), (ub.ln_scale - l).exp());
            let (p, q, dp, dq) = (u.y[0] * a, ub.y[0] * c, u.y[1] * a, ub.y[1] * c);
            let est = self.theta_estimate(x);
            (
                0.0,
                p.hypot(q) * l.exp(),
                dp.hypot(dq) * l.exp(),
                branch_near(p.atan2(q), est),
                branch_near(dp.atan2(dq), est - FRAC_PI_2),
            )
        } else {
            let (lu, lub) = (u.ln_scale + u.y[0].abs().ln(), ub.ln_scale + ub.y[0].abs().ln());
            let (ru, rub) = (u.y[1] / u.y[0], ub.y[1] / ub.y[0]);
            let m = (0.5 * (LN_2 + lu + lub)).exp();
            (
                0.5 * (lub - lu),
                m,
                m * std::f64::consts::FRAC_1_SQRT_2 * ru.hypot(rub),
                FRAC_PI_4,
                branch_near(ru.atan2(rub), -FRAC_PI_4),
            )
        };
        Ok(PcfBundle {
            x,
            b: self.b,
            u: uv,
            du,
            ubar: ubv,
            dubar: dub,
            ln_e,
            m,
            n,
            theta,
            omega,
            rho: self.rho,
        })
    }
}

/// One-shot evaluation; build a [`Pcf`] for repeated use.
pub fn pcf(x: f64, b: f64) -> Result<PcfBundle> {
    Pcf::new(b)?.eval(x)
}

/// Largest root of U(x, b) = Ū(x, b).
pub fn rho(b: f64) -> Result<f64> {
    Ok(Pcf::new(b)?.rho())
}

/// Leading term of the uniform Airy-type expansion of U(nu y sqrt 2, -nu^2/2).
pub fn u_uniform_leading(nu: f64, y: f64) -> f64 {
    let e = eta(y);
    let ratio = if (y - 1.0).abs() < 1e-6 { 2f64.powf(-2.0 / 3.0) } else { e / (y * y - 1.0) };
    let pre = 0.5 * LN_2 + 0.25 * PI.ln() + 0.5 * ln_gamma(0.5 + 0.5 * nu * nu) - nu.ln() / 6.0
        + 0.25 * ratio.ln();
    pre.exp() * super::airy::airy_values(nu.powf(4.0 / 3.0) * e)[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma::gamma;

    #[test]
    fn origin_value_and_wronskian_at_zero_parameter() {
        let p = Pcf::new(0.0).unwrap();
        let v = p.eval(0.0).unwrap();
        let want = PI.sqrt() / (2f64.powf(0.25) * gamma(0.75));
        assert!((want - 1.216_280).abs() < 1e-6);
        assert!((v.u - want).abs() < 1e-12, "{} vs {want}", v.u);
        assert!((v.wronskian() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(p.rho(), 0.0);
    }

    #[test]
    fn swept_u_reproduces_closed_form_origin() {
        for &b in &[-0.3, -2.0, -7.5, -20.0, -50.0] {
            let p = Pcf::new(b).unwrap();
            let (u, _) = p.pair(0.0);
            let (u0, _) = origin(b);
            for i in 0..2 {
                let d = diff(&u, &u0, i).abs();
                let sc = u0.y[0].abs().max(u0.y[1].abs());
                assert!(d <= 1e-9 * sc, "b = {b}, component {i}: {d:e}");
            }
        }
    }

    #[test]
    fn wronskian_is_constant() {
        for &b in &[-0.5, -5.0, -30.0] {
            let p = Pcf::new(b).unwrap();
            let lw = ln_wronskian(b);
            for i in 0..=30 {
                let x = i as f64 * (2.0 * (-b).sqrt() + 10.0) / 30.0;
                let (u, ub) = p.pair(x);
                let w = (u.y[0] * ub.y[1] - u.y[1] * ub.y[0]).abs().ln() + u.ln_scale + ub.ln_scale;
                assert!((w - lw).abs() < 1e-9, "b = {b}, x = {x}: {}", w - lw);
            }
        }
    }

    #[test]
    fn crossing_root_asymptotics() {
        let r = rho(-50.0).unwrap();
        let c = super::super::airy::c_star();
        let pred = 2.0 * 50f64.sqrt() + c * 50f64.powf(-1.0 / 6.0);
        assert!((pred - 13.952).abs() < 1e-3);
        assert!((r - pred).abs() < 0.01, "rho = {r}, predicted {pred}");
        assert!(rho(-1.0).unwrap() > 0.0);
    }

    #[test]
    fn auxiliaries_reconstruct_values() {
        let p = Pcf::new(-6.0).unwrap();
        for i in 0..=40 {
            let x = i as f64 * 0.4;
            let v = p.eval(x).unwrap();
            let e = v.e();
            let sc = v.u.abs().max(v.ubar.abs()).max(1e-300);
            let dsc = v.du.abs().max(v.dubar.abs()).max(1e-300);
            assert!((v.u - v.m / e * v.theta.sin()).abs() <= 1e-10 * sc, "x = {x}");
            assert!((v.ubar - v.m * e * v.theta.cos()).abs() <= 1e-10 * sc);
            assert!((v.du - v.n / e * v.omega.sin()).abs() <= 1e-10 * dsc);
            assert!((v.dubar - v.n * e * v.omega.cos()).abs() <= 1e-10 * dsc);
        }
    }

    #[test]
    fn modulus_asymptotics() {
        let b = -2.0;
        let p = Pcf::new(b).unwrap();
        let x = 4.0 * (-b).sqrt() + 10.0;
        let v = p.eval(x).unwrap();
        let g = gamma(0.5 - b).sqrt();
        assert!((v.m / ((8.0 / PI).powf(0.25) * g / x.sqrt()) - 1.0).abs() < 1e-2);
        assert!((v.n / (g / (2.0 * PI).powf(0.25) * x.sqrt()) - 1.0).abs() < 1e-2);
        assert!((v.omega + FRAC_PI_4).abs() < 1e-2);
    }

    #[test]
    fn uniform_expansion_cross_check() {
        let nu: f64 = 8.0;
        let y = 1.5;
        let x = nu * y * 2f64.sqrt();
        let v = pcf(x, -0.5 * nu * nu).unwrap();
        let lead = u_uniform_leading(nu, y);
        assert!((v.u / lead - 1.0).abs() < 1e-2, "{} vs {lead}", v.u);
    }
}
