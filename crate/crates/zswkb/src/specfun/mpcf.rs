//! Modified parabolic cylinder functions W(x, b), W(-x, b) of
//! w'' = (b - x^2/4) w for b >= 0, with k(b), phi(b), the crossing point
//! rho-bar and the auxiliary functions E-bar, M-bar, N-bar, theta-bar, omega-bar.
//!
//! For x > 0, W(x) is swept backward from a far point seeded by its complex
//! asymptotic series (it grows toward the origin through the exponential
//! region) and W(-x) is swept forward from its exact origin values.

use super::{branch_near, eta};
use crate::error::{Error, Result};
use crate::numerics::gamma::ln_gamma_complex;
use crate::numerics::ode::Scaled;
use crate::numerics::roots;
use crate::numerics::taylor::QuadraticOde;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

const H: f64 = 0.25;

/// W(±x), derivatives, constants and auxiliaries at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MpcfBundle {
    pub x: f64,
    pub b: f64,
    /// W(x, b) and W'(x, b).
    pub w_plus: f64,
    pub dw_plus: f64,
    /// W(-x, b) and W'(-x, b) (the derivative of W evaluated at -x).
    pub w_minus: f64,
    pub dw_minus: f64,
    pub k: f64,
    pub ln_k: f64,
    pub phi: f64,
    pub e_bar: f64,
    pub m_bar: f64,
    pub n_bar: f64,
    pub theta_bar: f64,
    pub omega_bar: f64,
    pub rho_bar: f64,
}

impl MpcfBundle {
    /// W[W(., b), W(-., b)] evaluated at x.
    pub fn wronskian(&self) -> f64 {
        // d/dx W(-x) = -W'(-x)
        -self.w_plus * self.dw_minus - self.dw_plus * self.w_minus
    }
}

/// ln k(b) with k(b) = sqrt(1 + e^{2 pi b}) - e^{pi b}.
pub fn ln_k(b: f64) -> f64 {
    if b > 0.0 {
        -PI * b - (1.0 + (1.0 + (-2.0 * PI * b).exp()).sqrt()).ln()
    } else {
        -((1.0 + (2.0 * PI * b).exp()).sqrt() + (PI * b).exp()).ln()
    }
}

pub fn k(b: f64) -> f64 {
    ln_k(b).exp()
}

/// phi(b) = pi/4 + (1/2) ph Gamma(1/2 + i b), continuous with phi(0) = pi/4.
pub fn phi(b: f64) -> f64 {
    FRAC_PI_4 + 0.5 * ln_gamma_complex(Complex64::new(0.5, b)).im
}

/// Exact (W(0), W'(0)).
pub fn origin(b: f64) -> [f64; 2] {
    let lr = ln_gamma_complex(Complex64::new(0.25, 0.5 * b)).re
        - ln_gamma_complex(Complex64::new(0.75, 0.5 * b)).re;
    [2f64.powf(-0.75) * (0.5 * lr).exp(), -(2f64.powf(-0.25)) * (-0.5 * lr).exp()]
}

/// Scaled (W(x), W'(x)) and (W(-x), d/dx W(-x)) from the asymptotic series.
fn far_series(x: f64, b: f64, lnk: f64, ph: f64) -> Option<(Scaled<2>, Scaled<2>)> {
    let i = Complex64::i();
    let z = 1.0 / (x * x);
    let mut c = Complex64::new(1.0, 0.0);
    let mut f = c;
    let mut df = Complex64::new(0.0, 0.0);
    let mut prev = 1.0;
    let mut converged = false;
    for s in 0..400 {
        let sf = s as f64;
        c *= (Complex64::new(2.0 * sf + 0.5, b) * Complex64::new(2.0 * sf + 1.5, b))
            / (2.0 * i * (sf + 1.0))
            * z;
        let t = c.norm();
        if t > prev && t > 1e-17 {
            return None;
        }
        prev = t;
        f += c;
        df += c * (-2.0 * (sf + 1.0) / x);
        if t < 1e-17 * f.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let theta = 0.25 * x * x - b * x.ln() + ph;
    let e = (2.0 / x).sqrt() * Complex64::from_polar(1.0, theta) * f;
    let de = e * (i * (0.5 * x - b / x) - 1.0 / (2.0 * x)) + (2.0 / x).sqrt() * Complex64::from_polar(1.0, theta) * df;
    let plus = Scaled::with_scale([e.re, de.re], 0.5 * lnk);
    let minus = Scaled::with_scale([e.im, de.im], -0.5 * lnk);
    Some((plus, minus))
}

fn scaled_diff(a: &Scaled<2>, la: f64, b: &Scaled<2>, lb: f64) -> f64 {
    let (sa, sb) = (a.ln_scale + la, b.ln_scale + lb);
    let l = sa.max(sb);
    a.y[0] * (sa - l).exp() - b.y[0] * (sb - l).exp()
}

/// int_{2 sqrt b}^x sqrt(t^2/4 - b) dt, zero inside the turning point.
fn outer_action(x: f64, b: f64) -> f64 {
    let u = 0.5 * x;
    if b == 0.0 {
        return u * u;
    }
    if u * u <= b {
        return 0.0;
    }
    let r = (u * u - b).sqrt();
    u * r - b * ((u + r) / b.sqrt()).ln()
}

/// Precomputed W(±x) for one parameter b >= 0.
#[derive(Debug, Clone)]
pub struct Mpcf {
    pub b: f64,
    ln_k: f64,
    phi: f64,
    x_far: f64,
    plus: Vec<Scaled<2>>,
    minus: Vec<Scaled<2>>,
    rho_bar: f64,
}

impl Mpcf {
    pub fn new(b: f64) -> Result<Self> {
        if !(b >= 0.0) || !b.is_finite() {
            return crate::error::domain(format!("mPCF parameter must satisfy b >= 0, got {b}"));
        }
        let (lnk, ph) = (ln_k(b), phi(b));
        let ode = QuadraticOde::modified_weber(b);
        let mut x_far = (2.0 * b.sqrt() + 12.0).max(1.5 * b).max(14.0);
        let (fp, _) = loop {
            x_far = (x_far / H).ceil() * H;
            if let Some(s) = far_series(x_far, b, lnk, ph) {
                break s;
            }
            x_far *= 1.25;
            if x_far > 1e4 {
                return Err(Error::Integration(format!("W series does not converge for b = {b}")));
            }
        };
        let n = (x_far / H).round() as usize;
        let mut plus = vec![fp; n + 1];
        for i in (0..n).rev() {
            plus[i] = ode.advance((i + 1) as f64 * H, plus[i + 1], i as f64 * H);
        }
        let [w0, dw0] = origin(b);
        let mut minus = vec![Scaled::new([w0, -dw0]); n + 1];
        for i in 1..=n {
            minus[i] = ode.advance((i - 1) as f64 * H, minus[i - 1], i as f64 * H);
        }
        let mut m = Mpcf { b, ln_k: lnk, phi: ph, x_far, plus, minus, rho_bar: 0.0 };
        m.rho_bar = m.find_rho_bar()?;
        Ok(m)
    }

    fn crossing(&self, p: &Scaled<2>, q: &Scaled<2>) -> f64 {
        scaled_diff(p, -0.5 * self.ln_k, q, 0.5 * self.ln_k)
    }

    fn find_rho_bar(&self) -> Result<f64> {
        for i in 1..self.plus.len() {
            if self.crossing(&self.plus[i], &self.minus[i]) <= 0.0 {
                let g = |x: f64| {
                    let (p, q) = self.pair(x);
                    self.crossing(&p, &q)
                };
                return roots::brent(g, (i - 1) as f64 * H, i as f64 * H, 1e-14);
            }
        }
        Err(Error::NoSolution(format!("no crossing of k^-1/2 W(x) and k^1/2 W(-x) for b = {}", self.b)))
    }

    /// Scaled (W(x), W'(x)) and (W(-x), d/dx W(-x)) at x >= 0.
    pub fn pair(&self, x: f64) -> (Scaled<2>, Scaled<2>) {
        let ode = QuadraticOde::modified_weber(self.b);
        let n = self.plus.len() - 1;
        if x >= self.x_far {
            if let Some(s) = far_series(x, self.b, self.ln_k, self.phi) {
                return s;
            }
            return (
                ode.advance(self.x_far, self.plus[n], x),
                ode.advance(self.x_far, self.minus[n], x),
            );
        }
        let i = ((x / H).round() as usize).min(n);
        let xi = i as f64 * H;
        (ode.advance(xi, self.plus[i], x), ode.advance(xi, self.minus[i], x))
    }

    pub fn k(&self) -> f64 {
        self.ln_k.exp()
    }

    pub fn ln_k(&self) -> f64 {
        self.ln_k
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn rho_bar(&self) -> f64 {
        self.rho_bar
    }

    /// Values and auxiliaries at any real x (auxiliaries are even in x).
    pub fn eval(&self, x: f64) -> Result<MpcfBundle> {
        if !x.is_finite() {
            return crate::error::domain(format!("non-finite mPCF argument {x}"));
        }
        let ax = x.abs();
        let (p, q) = self.pair(ax);
        let [wp, dwp] = p.values();
        let [wm, dvm] = q.values();
        let hk = 0.5 * self.ln_k;
        // P = k^-1/2 W(x), Q = k^1/2 W(-x), P' = k^-1/2 W'(x), Q' = k^1/2 W'(-x).
        let (lp, lq) = (p.ln_scale - hk, q.ln_scale + hk);
        let (pp, qq, dp, dq) = (p.y[0], q.y[0], p.y[1], -q.y[1]);
        let (e_bar, m_bar, n_bar, theta_bar, omega_bar) = if ax <= self.rho_bar {
            let e = (0.5 * ((lq - lp) + (qq / pp).ln())).exp();
            let m = (0.5 * (LN_2 + lp + lq + (pp * qq).ln())).exp();
            let (rp, rq) = (dp / pp, dq / qq);
            (e, m, m * std::f64::consts::FRAC_1_SQRT_2 * rp.hypot(rq), FRAC_PI_4, rp.atan2(-rq))
        } else {
            let l = lp.max(lq);
            let (a, c) = ((lp - l).exp(), (lq - l).exp());
            let th = branch_near((pp * a).atan2(qq * c), FRAC_PI_4 - outer_action(ax, self.b));
            let om = branch_near((dp * a).atan2(-dq * c), th - FRAC_PI_2);
            (1.0, (pp * a).hypot(qq * c) * l.exp(), (dp * a).hypot(dq * c) * l.exp(), th, om)
        };
        let (w_plus, dw_plus, w_minus, dw_minus) =
            if x >= 0.0 { (wp, dwp, wm, -dvm) } else { (wm, -dvm, wp, dwp) };
        Ok(MpcfBundle {
            x,
            b: self.b,
            w_plus,
            dw_plus,
            w_minus,
            dw_minus,
            k: self.k(),
            ln_k: self.ln_k,
            phi: self.phi,
            e_bar,
            m_bar,
            n_bar,
            theta_bar,
            omega_bar,
            rho_bar: self.rho_bar,
        })
    }
}

/// One-shot evaluation; build an [`Mpcf`] for repeated use.
pub fn mpcf(x: f64, b: f64) -> Result<MpcfBundle> {
    Mpcf::new(b)?.eval(x)
}

/// Smallest nonnegative root of k^{-1/2} W(x, b) = k^{1/2} W(-x, b).
pub fn rho_bar(b: f64) -> Result<f64> {
    Ok(Mpcf::new(b)?.rho_bar())
}

/// Leading terms of the uniform expansions of k^{-1/2} W(nu y sqrt 2, nu^2/2)
/// and k^{1/2} W(-nu y sqrt 2, nu^2/2).
pub fn w_uniform_leading(nu: f64, y: f64) -> (f64, f64) {
    let e = eta(y);
    let ratio = if (y - 1.0).abs() < 1e-6 { 2f64.powf(-2.0 / 3.0) } else { e / (y * y - 1.0) };
    let pre = 2f64.powf(0.25) * PI.sqrt() * nu.powf(-1.0 / 6.0) * ratio.powf(0.25);
    let v = super::airy::airy_values(-nu.powf(4.0 / 3.0) * e);
    (pre * v[2], pre * v[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma::gamma;

    fn bessel_j(nu: f64, z: f64) -> f64 {
        let mut sum = 0.0;
        let mut m_fact = 1.0;
        for m in 0..60 {
            if m > 0 {
                m_fact *= m as f64;
            }
            let t = (-1f64).powi(m) * (0.5 * z).powf(2.0 * m as f64 + nu) / (m_fact * gamma(m as f64 + nu + 1.0));
            sum += t;
        }
        sum
    }

    #[test]
    fn constants_at_zero() {
        assert!((k(0.0) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((phi(0.0) - FRAC_PI_4).abs() < 1e-15);
        // k(pi) evaluated without cancellation.
        let direct = (1.0 + (2.0 * PI * PI).exp()).sqrt() - (PI * PI).exp();
        assert!((k(PI) / direct - 1.0).abs() < 1e-6);
        assert!(k(-5.0) < 1.0 && k(-5.0) > k(0.0) && k(5.0) < k(0.0) && k(5.0) > 0.0);
    }

    #[test]
    fn bessel_form_at_zero_parameter() {
        let m = Mpcf::new(0.0).unwrap();
        let x: f64 = 3.0;
        let z = 0.25 * x * x;
        let pre = 2f64.powf(-1.25) * (PI * x).sqrt();
        let wp = pre * (bessel_j(-0.25, z) - bessel_j(0.25, z));
        let wm = pre * (bessel_j(-0.25, z) + bessel_j(0.25, z));
        let v = m.eval(x).unwrap();
        assert!((v.w_plus - wp).abs() < 1e-9, "{} vs {wp}", v.w_plus);
        assert!((v.w_minus - wm).abs() < 1e-9, "{} vs {wm}", v.w_minus);
    }

    #[test]
    fn backward_sweep_meets_origin_values() {
        for &b in &[0.0, 0.7, 3.0, 12.0, 40.0] {
            let m = Mpcf::new(b).unwrap();
            let (p, _) = m.pair(0.0);
            let [w0, dw0] = origin(b);
            let v = p.values();
            assert!((v[0] / w0 - 1.0).abs() < 1e-9, "b = {b}: {} vs {w0}", v[0]);
            assert!((v[1] / dw0 - 1.0).abs() < 1e-9, "b = {b}: {} vs {dw0}", v[1]);
        }
    }

    #[test]
    fn wronskian_is_one() {
        for &b in &[0.0, 1.5, 10.0] {
            let m = Mpcf::new(b).unwrap();
            for i in 0..=40 {
                let x = -15.0 + 0.75 * i as f64;
                let w = m.eval(x).unwrap().wronskian();
                assert!((w - 1.0).abs() < 1e-10, "b = {b}, x = {x}: {w}");
            }
        }
    }

    #[test]
    fn large_x_oscillatory_form() {
        let b = 2.0;
        let m = Mpcf::new(b).unwrap();
        let x: f64 = 40.0;
        let v = m.eval(x).unwrap();
        let th = 0.25 * x * x - b * x.ln() + m.phi();
        let (ap, am) = ((2.0 * m.k() / x).sqrt(), (2.0 / (m.k() * x)).sqrt());
        assert!((v.w_plus - ap * th.cos()).abs() < 1e-2 * ap);
        assert!((v.w_minus - am * th.sin()).abs() < 1e-2 * am);
    }

    #[test]
    fn crossing_and_auxiliaries() {
        let r = rho_bar(50.0).unwrap();
        let c = super::super::airy::c_star();
        let pred = 2.0 * 50f64.sqrt() - c * 50f64.powf(-1.0 / 6.0);
        assert!((pred - 14.332).abs() < 1e-3);
        assert!((r - pred).abs() < 0.01, "{r} vs {pred}");

        let m = Mpcf::new(3.0).unwrap();
        let sk = m.k().sqrt();
        let mut prev_e = 0.0;
        for i in 0..=50 {
            let x = 0.3 * i as f64;
            let v = m.eval(x).unwrap();
            let p = v.w_plus / sk;
            let q = v.w_minus * sk;
            let sc = p.abs().max(q.abs());
            assert!((p - v.m_bar / v.e_bar * v.theta_bar.sin()).abs() <= 1e-10 * sc);
            assert!((q - v.m_bar * v.e_bar * v.theta_bar.cos()).abs() <= 1e-10 * sc);
            let (dp, dq) = (v.dw_plus / sk, v.dw_minus * sk);
            let dsc = dp.abs().max(dq.abs());
            assert!((dp - v.n_bar / v.e_bar * v.omega_bar.sin()).abs() <= 1e-10 * dsc);
            assert!((dq + v.n_bar * v.e_bar * v.omega_bar.cos()).abs() <= 1e-10 * dsc);
            assert!(v.e_bar >= sk * (1.0 - 1e-12) && v.e_bar <= 1.0 + 1e-12);
            assert!(v.e_bar >= prev_e - 1e-12);
            prev_e = v.e_bar;
        }
        let far = m.eval(30.0).unwrap();
        assert!((far.m_bar / (2.0 / 30.0f64).sqrt() - 1.0).abs() < 1e-2);
        assert!((far.n_bar / (15.0f64).sqrt() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn uniform_expansion_cross_check() {
        let nu: f64 = 6.0;
        let m = Mpcf::new(0.5 * nu * nu).unwrap();
        for &y in &[0.5, 1.5] {
            let v = m.eval(nu * y * 2f64.sqrt()).unwrap();
            let (lp, lm) = w_uniform_leading(nu, y);
            let sk = m.k().sqrt();
            assert!((v.w_plus / sk / lp - 1.0).abs() < 2e-2, "y = {y}");
            if y < 1.0 {
                assert!((v.w_minus * sk / lm - 1.0).abs() < 2e-2, "y = {y}");
            }
        }
    }
}
