//! Adaptive Dormand-Prince 5(4) integration for small linear systems, with
//! a shared logarithmic scale so exponentially growing solutions never overflow.

use crate::error::{Error, Result};

/// State vector together with a common natural-log scale factor:
/// the true state is `y * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled<const N: usize> {
    pub y: [f64; N],
    pub ln_scale: f64,
}

impl<const N: usize> Scaled<N> {
    pub fn new(y: [f64; N]) -> Self {
        Scaled { y, ln_scale: 0.0 }.normalized()
    }

    pub fn with_scale(y: [f64; N], ln_scale: f64) -> Self {
        Scaled { y, ln_scale }.normalized()
    }

    fn norm(&self) -> f64 {
        self.y.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Rescale so the largest component has unit magnitude.
    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            for v in self.y.iter_mut() {
                *v /= n;
            }
            self.ln_scale += n.ln();
        }
        self
    }

    /// Plain values; may overflow or underflow for extreme scales.
    pub fn values(&self) -> [f64; N] {
        let s = self.ln_scale.exp();
        let mut out = self.y;
        for v in out.iter_mut() {
            *v *= s;
        }
        out
    }
}

/// Step-size control parameters.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub max_steps: usize,
    /// Upper bound for the step; `None` lets the controller choose.
    pub h_max: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-11, max_steps: 2_000_000, h_max: None }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 - -92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

fn comb<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

/// Integrate a linear (or at least homogeneous-scalable) system
/// `y' = f(x, y)` from `x0` to `x1`. Linearity is what makes the shared log
/// scale legitimate: `f(x, c*y) = c*f(x, y)`.
pub fn integrate<const N: usize, F>(
    mut f: F,
    x0: f64,
    y0: Scaled<N>,
    x1: f64,
    opts: OdeOptions,
) -> Result<Scaled<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut state = y0.normalized();
    if x0 == x1 {
        return Ok(state);
    }
    let dir = (x1 - x0).signum();
    let span = (x1 - x0).abs();
    let h_max = opts.h_max.unwrap_or(span).min(span);
    let mut x = x0;
    let mut y = state.y;
    let mut k1 = f(x, &y);
    let kn = k1.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut h = if kn > 0.0 { (0.01 / kn).min(h_max) } else { h_max * 0.01 };
    h = h.max(span * 1e-12);
    let mut steps = 0usize;
    while (x1 - x) * dir > 0.0 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Integration(format!("step limit reached at x = {x}")));
        }
        let last = h >= (x1 - x).abs();
        if last {
            h = (x1 - x).abs();
        }
        let hs = h * dir;
        let k2 = f(x + C2 * hs, &comb(&y, hs, &[(A21, &k1)]));
        let k3 = f(x + C3 * hs, &comb(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * hs, &comb(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(x + C5 * hs, &comb(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(
            x + hs,
            &comb(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let ynew = comb(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(x + hs, &ynew);
        let mut errv = [0.0; N];
        for i in 0..N {
            errv[i] =
                hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let ny = y.iter().chain(ynew.iter()).fold(0.0_f64, |m, v| m.max(v.abs()));
        let sc = opts.rtol * ny.max(1e-300);
        let err = errv.iter().fold(0.0_f64, |m, v| m.max((v / sc).abs()));
        if !err.is_finite() {
            h *= 0.2;
            if h < span * 1e-15 {
                return Err(Error::Integration(format!("non-finite derivative near x = {x}")));
            }
            continue;
        }
        if err <= 1.0 {
            x = if last { x1 } else { x + hs };
            y = ynew;
            k1 = k7;
            let n = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if n > 1e100 || (n < 1e-100 && n > 0.0) {
                for v in y.iter_mut() {
                    *v /= n;
                }
                for v in k1.iter_mut() {
                    *v /= n;
                }
                state.ln_scale += n.ln();
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).min(h_max);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h < span * 1e-15 {
                return Err(Error::Integration(format!("step size underflow near x = {x}")));
            }
        }
    }
    state.y = y;
    Ok(state.normalized())
}
