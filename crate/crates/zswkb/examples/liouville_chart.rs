//! Liouville chart of the sech barrier: anchoring, action and error term.

use zswkb::liouville::{LiouvilleChart, Region};
use zswkb::potential::{decompose, PotentialSpec};

fn main() -> zswkb::Result<()> {
    let spec = PotentialSpec::sech(1.0, 0.0, 1.0)?;
    let mu = 0.5;
    let d = decompose(&spec, mu)?;
    let c = LiouvilleChart::build(&d, Region::barrier(0), &spec)?;
    println!("alpha = {:.12}, (pi/2) alpha^2 = {:.12} (pi/2 = {:.12})", c.gamma, c.action(), std::f64::consts::FRAC_PI_2);
    println!("zeta at turning points: {:+.12}, {:+.12}", c.zeta_of_x(c.turning.0)?, c.zeta_of_x(c.turning.1)?);
    for x in [-3.0, -1.0, 0.0, 0.5, 2.0] {
        let z = c.zeta_of_x(x)?;
        let e = c.error_term(z)?;
        println!("x = {x:+.2}: zeta = {z:+.8}, psi = {:+.6e}, back = {:+.12}", e.psi, c.x_of_zeta(z)?);
    }
    println!("variation bound V(0, inf) at hbar = 0.1: {:.6e}", c.variation(0.1, 0.0, f64::INFINITY)?);
    Ok(())
}
