//! Airy functions Ai, Bi with the weight, modulus and phase functions E, M, theta.
//!
//! Values come from exact Taylor stepping of w'' = x w from the origin (or
//! backward from x = 12 for the recessive Ai), and from the standard
//! asymptotic series beyond |x| = 12.

use super::branch_near;
use crate::numerics::ode::Scaled;
use crate::numerics::roots;
use crate::numerics::taylor::QuadraticOde;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

pub const AI0: f64 = 0.355_028_053_887_817_239;
pub const DAI0: f64 = -0.258_819_403_792_806_798;
pub const BI0: f64 = 0.614_926_627_446_000_735;
pub const DBI0: f64 = 0.448_288_357_353_826_357;

const SWITCH: f64 = 12.0;

/// Ai, Bi, their derivatives and the auxiliary functions at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AiryBundle {
    pub x: f64,
    pub ai: f64,
    pub bi: f64,
    pub dai: f64,
    pub dbi: f64,
    /// Weight E: 1 for x <= c_*, sqrt(Bi/Ai) beyond.
    pub e: f64,
    /// Modulus M.
    pub m: f64,
    /// Phase theta, continuous and equal to pi/4 for x >= c_*.
    pub theta: f64,
}

impl AiryBundle {
    pub fn wronskian(&self) -> f64 {
        self.ai * self.dbi - self.dai * self.bi
    }
}

/// Coefficients u_k of the Airy asymptotic series.
fn u_coeffs() -> &'static [f64] {
    static U: OnceLock<Vec<f64>> = OnceLock::new();
    U.get_or_init(|| {
        let mut u = vec![1.0];
        for k in 1..80 {
            let kf = k as f64;
            let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            u.push(next);
        }
        u
    })
}

fn v_coeff(k: usize) -> f64 {
    let kf = k as f64;
    -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u_coeffs()[k]
}

/// Sum c_k (sign)^k / z^k truncated at the smallest term.
fn series(z: f64, alternating: bool, coeff: impl Fn(usize) -> f64, parity: Option<usize>) -> f64 {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let n = u_coeffs().len();
    let mut sign = 1.0;
    for k in 0..n {
        if let Some(p) = parity {
            if k % 2 != p {
                continue;
            }
        }
        let t = coeff(k) / z.powi(k as i32);
        if t.abs() > prev {
            break;
        }
        prev = t.abs();
        sum += if alternating { sign * t } else { t };
        sign = -sign;
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// (Ai, Ai', Bi, Bi') scaled: Ai-part times exp(-zeta), Bi-part times exp(zeta),
/// with zeta = (2/3) x^{3/2}, for x >= SWITCH.
fn positive_asymptotic(x: f64) -> ([f64; 2], [f64; 2], f64) {
    let z = 2.0 / 3.0 * x.powf(1.5);
    let q = x.powf(0.25);
    let sp = PI.sqrt();
    let su = series(z, true, |k| u_coeffs()[k], None);
    let sv = series(z, true, v_coeff, None);
    let bu = series(z, false, |k| u_coeffs()[k], None);
    let bv = series(z, false, v_coeff, None);
    let ai = [su / (2.0 * sp * q), -q * sv / (2.0 * sp)];
    let bi = [bu / (sp * q), q * bv / sp];
    (ai, bi, z)
}

/// (Ai, Ai', Bi, Bi') at -x for x >= SWITCH.
fn negative_asymptotic(x: f64) -> [f64; 4] {
    let z = 2.0 / 3.0 * x.powf(1.5);
    let q = x.powf(0.25);
    let sp = PI.sqrt();
    let ue = series(z, true, |k| u_coeffs()[k], Some(0));
    let uo = series(z, true, |k| u_coeffs()[k], Some(1));
    let ve = series(z, true, v_coeff, Some(0));
    let vo = series(z, true, v_coeff, Some(1));
    let (s, c) = (z - FRAC_PI_4).sin_cos();
    [
        (c * ue + s * uo) / (sp * q),
        q * (s * ve - c * vo) / sp,
        (-s * ue + c * uo) / (sp * q),
        q * (c * ve + s * vo) / sp,
    ]
}

/// Raw values (Ai, Ai', Bi, Bi').
pub fn airy_values(x: f64) -> [f64; 4] {
    let ode = QuadraticOde::airy();
    if x >= SWITCH {
        let (ai, bi, z) = positive_asymptotic(x);
        let (d, g) = ((-z).exp(), z.exp());
        return [ai[0] * d, ai[1] * d, bi[0] * g, bi[1] * g];
    }
    if x <= -SWITCH {
        return negative_asymptotic(-x);
    }
    let bi = ode.advance(0.0, Scaled::new([BI0, DBI0]), x).values();
    let ai = if x >= 0.0 {
        let (a, _, z) = positive_asymptotic(SWITCH);
        let seed = Scaled::with_scale([a[0], a[1]], -z);
        ode.advance(SWITCH, seed, x).values()
    } else {
        ode.advance(0.0, Scaled::new([AI0, DAI0]), x).values()
    };
    [ai[0], ai[1], bi[0], bi[1]]
}

/// The largest negative root of Ai = Bi (about -0.36605).
pub fn c_star() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        roots::brent(
            |x| {
                let v = airy_values(x);
                v[0] - v[2]
            },
            -1.0,
            0.0,
            1e-15,
        )
        .expect("Ai - Bi changes sign on [-1, 0]")
    })
}

/// Airy functions with auxiliary weight, modulus and phase.
pub fn airy(x: f64) -> AiryBundle {
    let [ai, dai, bi, dbi] = airy_values(x);
    let cs = c_star();
    let (e, m, theta) = if x <= cs {
        let est = 2.0 / 3.0 * (-x).powf(1.5) + FRAC_PI_4;
        (1.0, ai.hypot(bi), branch_near(ai.atan2(bi), est))
    } else {
        ((bi / ai).sqrt(), (2.0 * ai * bi).sqrt(), FRAC_PI_4)
    };
    AiryBundle { x, ai, bi, dai, dbi, e, m, theta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma::gamma;

    #[test]
    fn origin_values() {
        let b = airy(0.0);
        let want = 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0);
        assert!((b.ai - want).abs() < 1e-15);
        assert!((b.wronskian() - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn wronskian_across_branches() {
        for &x in &[-30.0, -12.5, -11.9, -5.0, -0.2, 0.7, 5.5, 11.99, 12.0, 14.0, 25.0] {
            let b = airy(x);
            assert!((b.wronskian() * PI - 1.0).abs() < 1e-12, "x = {x}: {}", b.wronskian() * PI);
        }
    }

    #[test]
    fn stepping_agrees_with_series_at_switch_points() {
        let ode = QuadraticOde::airy();
        let bi = ode.advance(0.0, Scaled::new([BI0, DBI0]), SWITCH).values();
        let (_, b, z) = positive_asymptotic(SWITCH);
        assert!((bi[0] / (b[0] * z.exp()) - 1.0).abs() < 1e-12);
        assert!((bi[1] / (b[1] * z.exp()) - 1.0).abs() < 1e-12);
        let stepped = ode.advance(0.0, Scaled::new([AI0, DAI0]), -SWITCH).values();
        let series = negative_asymptotic(SWITCH);
        assert!((stepped[0] - series[0]).abs() < 1e-13);
        assert!((stepped[1] - series[1]).abs() < 1e-12);
    }

    #[test]
    fn known_values() {
        // Reference values of Ai and Bi.
        let v = airy_values(1.0);
        assert!((v[0] - 0.135_292_416_312_881_4).abs() < 1e-15);
        assert!((v[2] - 1.207_423_594_952_871_3).abs() < 1e-14);
        let v = airy_values(-5.0);
        assert!((v[0] - 0.350_761_009_024_114_1).abs() < 1e-14);
        assert!((v[2] - (-0.138_369_134_901_600_6)).abs() < 1e-14);
        let v = airy_values(5.0);
        assert!((v[0] / 1.083_444_281_360_744e-4 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn asymptotics_at_minus_ten() {
        let x: f64 = 10.0;
        // Full series against stepping; the leading term alone is only O(x^{-7/4}) accurate.
        assert!((airy(-x).ai - negative_asymptotic(x)[0]).abs() < 1e-4);
        assert!((airy(-x).ai - 0.040_241_238_486_443_2).abs() < 1e-14);
        let lead = (2.0 / 3.0 * x.powf(1.5) + FRAC_PI_4).sin() / (PI.sqrt() * x.powf(0.25));
        assert!((airy(-x).ai - lead).abs() < x.powf(-1.75));
    }

    #[test]
    fn c_star_and_auxiliaries() {
        assert!((c_star() + 0.36605).abs() < 5e-6);
        for &x in &[-8.0, -1.0, c_star(), 0.0, 3.0] {
            let b = airy(x);
            assert!((b.e * b.ai - b.m * b.theta.sin()).abs() < 1e-13);
            assert!((b.bi / b.e - b.m * b.theta.cos()).abs() < 1e-13);
        }
        assert!((airy(c_star()).theta - FRAC_PI_4).abs() < 1e-12);
    }
}
