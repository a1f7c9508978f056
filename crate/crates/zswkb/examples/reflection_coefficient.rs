//! Jost-solution reflection coefficient: reflectionless sech and the
//! two-hump potential over an hbar sweep.

use zswkb::oracle::{reflection, ReflectionOptions};
use zswkb::potential::PotentialSpec;

fn main() -> zswkb::Result<()> {
    let opts = ReflectionOptions::default();
    let sech = PotentialSpec::sech(1.0, 0.0, 1.0)?;
    for hbar in [1.0 / 3.0, 0.3] {
        let r = reflection(&sech, hbar, 0.5, &opts)?;
        println!("sech, hbar = {hbar:.4}: |R(0.5)| = {:.3e}, cross-check {:.1e}", r.r_abs, r.cross_check);
    }
    let two = PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)])?;
    for hbar in [0.2, 0.1, 0.05] {
        let r = reflection(&two, hbar, 0.5, &opts)?;
        println!("two-hump, hbar = {hbar}: |R(0.5)| = {:.3e}, cross-check {:.1e}", r.r_abs, r.cross_check);
    }
    Ok(())
}
