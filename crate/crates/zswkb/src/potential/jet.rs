//! Truncated Taylor arithmetic: exact derivatives of closed-form potentials
//! up to fourth order by forward propagation.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub const ORDER: usize = 5;

/// Taylor coefficients c_k = f^(k)(x0)/k!, k = 0..ORDER-1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; ORDER]);

impl Jet {
    pub fn constant(c: f64) -> Self {
        let mut v = [0.0; ORDER];
        v[0] = c;
        Jet(v)
    }

    /// The identity function expanded about x.
    pub fn variable(x: f64) -> Self {
        let mut v = [0.0; ORDER];
        v[0] = x;
        v[1] = 1.0;
        Jet(v)
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// Derivatives f, f', f'', f''', f''''.
    pub fn derivatives(&self) -> [f64; ORDER] {
        let mut out = self.0;
        let mut fact = 1.0;
        for (k, v) in out.iter_mut().enumerate().skip(1) {
            fact *= k as f64;
            *v *= fact;
        }
        out
    }

    pub fn scale(self, s: f64) -> Self {
        let mut v = self.0;
        v.iter_mut().for_each(|c| *c *= s);
        Jet(v)
    }

    pub fn exp(self) -> Self {
        let u = self.0;
        let mut h = [0.0; ORDER];
        h[0] = u[0].exp();
        for k in 1..ORDER {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * u[j] * h[k - j];
            }
            h[k] = s / k as f64;
        }
        Jet(h)
    }

    /// u^p for u(x0) > 0.
    pub fn powf(self, p: f64) -> Self {
        let u = self.0;
        let mut h = [0.0; ORDER];
        h[0] = u[0].powf(p);
        for k in 1..ORDER {
            let mut s = 0.0;
            for j in 1..=k {
                s += (p * j as f64 - (k - j) as f64) * u[j] * h[k - j];
            }
            h[k] = s / (k as f64 * u[0]);
        }
        Jet(h)
    }

    pub fn recip(self) -> Self {
        Jet::constant(1.0) / self
    }

    /// sech(u), evaluated without overflow for large |u|.
    pub fn sech(self) -> Self {
        let a = if self.0[0] >= 0.0 { -self } else { self };
        // sech u = 2 e^{a} / (1 + e^{2a}) with a = -|u| elementwise in sign
        let e = a.exp();
        (e.scale(2.0)) / (Jet::constant(1.0) + e * e)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut v = self.0;
        for k in 0..ORDER {
            v[k] += o.0[k];
        }
        Jet(v)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut v = [0.0; ORDER];
        for i in 0..ORDER {
            for j in 0..ORDER - i {
                v[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(v)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let mut q = [0.0; ORDER];
        for k in 0..ORDER {
            let mut s = self.0[k];
            for j in 1..=k {
                s -= o.0[j] * q[k - j];
            }
            q[k] = s / o.0[0];
        }
        Jet(q)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        let mut v = self.0;
        v[0] += c;
        Jet(v)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}
