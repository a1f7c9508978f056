//! Taylor-series stepping for w'' = (q0 + q1 x + q2 x^2) w, the form shared by
//! the Airy and parabolic cylinder equations. Each step re-expands the
//! solution exactly about the current point, so accuracy is limited only by
//! rounding.

use super::ode::Scaled;

/// Coefficients of the polynomial multiplier.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticOde {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
}

impl QuadraticOde {
    pub fn airy() -> Self {
        QuadraticOde { q0: 0.0, q1: 1.0, q2: 0.0 }
    }

    /// w'' = (x^2/4 + b) w.
    pub fn weber(b: f64) -> Self {
        QuadraticOde { q0: b, q1: 0.0, q2: 0.25 }
    }

    /// w'' = (b - x^2/4) w.
    pub fn modified_weber(b: f64) -> Self {
        QuadraticOde { q0: b, q1: 0.0, q2: -0.25 }
    }

    fn local(&self, x: f64) -> (f64, f64, f64) {
        (self.q0 + self.q1 * x + self.q2 * x * x, self.q1 + 2.0 * self.q2 * x, self.q2)
    }

    fn step_size(&self, x: f64) -> f64 {
        let (c0, c1, c2) = self.local(x);
        let k = c0.abs().sqrt() + c1.abs().cbrt() + c2.abs().sqrt().sqrt();
        (1.5 / k.max(1e-300)).min(1.0)
    }

    fn step(&self, x: f64, w: f64, dw: f64, h: f64) -> (f64, f64) {
        let (c0, c1, c2) = self.local(x);
        let (a0, a1, a2) = (c0 * h * h, c1 * h * h * h, c2 * h * h * h * h);
        // b[k] = a_k h^k for the Taylor coefficients a_k about x.
        let mut b: Vec<f64> = Vec::with_capacity(64);
        b.push(w);
        b.push(h * dw);
        let (mut sw, mut sd) = (w + h * dw, h * dw);
        let scale = w.abs() + (h * dw).abs();
        let mut quiet = 0;
        let mut k = 0usize;
        while k < 400 {
            let bk = b[k];
            let bk1 = if k >= 1 { b[k - 1] } else { 0.0 };
            let bk2 = if k >= 2 { b[k - 2] } else { 0.0 };
            let next = (a0 * bk + a1 * bk1 + a2 * bk2) / ((k + 2) as f64 * (k + 1) as f64);
            b.push(next);
            sw += next;
            sd += (k + 2) as f64 * next;
            quiet = if next.abs() <= 1e-18 * scale.max(sw.abs()) { quiet + 1 } else { 0 };
            k += 1;
            if quiet >= 3 && k > 6 {
                break;
            }
        }
        (sw, sd / h)
    }

    /// Advance a scaled (w, w') pair from `x0` to `x1`.
    pub fn advance(&self, x0: f64, state: Scaled<2>, x1: f64) -> Scaled<2> {
        let mut s = state.normalized();
        let mut x = x0;
        let dir = (x1 - x0).signum();
        while (x1 - x) * dir > 0.0 {
            let h = self.step_size(x).min((x1 - x).abs()) * dir;
            let (w, dw) = self.step(x, s.y[0], s.y[1], h);
            s.y = [w, dw];
            s = s.normalized();
            x = if ((x1 - x) * dir - h.abs()).abs() < 1e-15 * x1.abs().max(1.0) { x1 } else { x + h };
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weber_growing_solution() {
        // w = exp(x^2/4) solves w'' = (x^2/4 + 1/2) w.
        let ode = QuadraticOde::weber(0.5);
        let s = ode.advance(0.0, Scaled::new([1.0, 0.0]), 6.0);
        let v = s.values();
        assert!((v[0] / (9.0f64).exp() - 1.0).abs() < 1e-12, "{}", v[0]);
        assert!((v[1] / (3.0 * 9.0f64.exp()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_constant_coefficient() {
        let ode = QuadraticOde { q0: -4.0, q1: 0.0, q2: 0.0 };
        let s = ode.advance(0.0, Scaled::new([0.0, 2.0]), 10.0);
        let v = s.values();
        assert!((v[0] - 20f64.sin()).abs() < 1e-12);
        assert!((v[1] - 2.0 * 20f64.cos()).abs() < 1e-12);
    }
}
