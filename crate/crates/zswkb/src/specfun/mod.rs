//! Airy functions, parabolic cylinder functions U, Ū and modified parabolic
//! cylinder functions W(±x), with their weight, modulus and phase functions.

pub mod airy;
pub mod mpcf;
pub mod pcf;

pub use airy::{airy, c_star, AiryBundle};
pub use mpcf::{mpcf, rho_bar, Mpcf, MpcfBundle};
pub use pcf::{pcf, rho, Pcf, PcfBundle};

use std::f64::consts::PI;

/// Shift `angle` by a multiple of 2 pi to lie nearest `target`.
pub fn branch_near(angle: f64, target: f64) -> f64 {
    angle + 2.0 * PI * ((target - angle) / (2.0 * PI)).round()
}

/// Uniform-asymptotic variable eta(y) of the large-parameter expansions.
pub fn eta(y: f64) -> f64 {
    if y <= 1.0 {
        let i = 0.5 * (y.acos() - y * (1.0 - y * y).sqrt());
        -(1.5 * i).powf(2.0 / 3.0)
    } else {
        let i = 0.5 * (y * (y * y - 1.0).sqrt() - y.acosh());
        (1.5 * i).powf(2.0 / 3.0)
    }
}
