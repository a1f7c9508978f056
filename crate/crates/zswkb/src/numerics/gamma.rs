//! Log-gamma for real and complex arguments with positive real part
//! (Lanczos approximation, g = 7, nine terms).

use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(z) for Re z > 0, on the branch continuous from the positive real axis.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    if z.re < 0.5 {
        // Shift up by one and divide: ln Γ(z) = ln Γ(z+1) - ln z.
        return ln_gamma_complex(z + 1.0) - z.ln();
    }
    let zm = z - 1.0;
    let mut a = Complex64::new(COEF[0], 0.0);
    for (k, c) in COEF.iter().enumerate().skip(1) {
        a += *c / (zm + k as f64);
    }
    let t = zm + G + 0.5;
    0.5 * (2.0 * PI).ln() + (zm + 0.5) * t.ln() - t + a.ln()
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_complex(Complex64::new(x, 0.0)).re
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}
