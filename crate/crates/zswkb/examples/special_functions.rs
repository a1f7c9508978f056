//! Airy, parabolic cylinder and modified parabolic cylinder functions with
//! their Wronskians and crossing points.

use zswkb::numerics::gamma::gamma;
use zswkb::specfun::{airy, c_star, mpcf, pcf, rho, rho_bar};

fn main() -> zswkb::Result<()> {
    let a = airy(-10.0);
    println!("Ai(-10) = {:.12}, Bi(-10) = {:.12}, W = {:.3e} (1/pi = {:.3e})", a.ai, a.bi, a.wronskian(), 1.0 / std::f64::consts::PI);
    println!("c_* = {:.10}", c_star());

    let b = -4.0;
    let u = pcf(1.5, b)?;
    let expect = (2.0 / std::f64::consts::PI).sqrt() * gamma(0.5 - b);
    println!("U(1.5, {b}) = {:.12}, W[U, Ubar] = {:.12} (expected {expect:.12})", u.u, u.wronskian());
    println!("largest root of U = Ubar at b = -50: {:.6}", rho(-50.0)?);

    let w = mpcf(1.5, 2.0)?;
    println!("W(1.5, 2) = {:.12}, W(-1.5, 2) = {:.12}, Wronskian = {:.12}", w.w_plus, w.w_minus, w.wronskian());
    println!("k(2) = {:.12}, smallest crossing at b = 50: {:.6}", w.k, rho_bar(50.0)?);
    Ok(())
}
