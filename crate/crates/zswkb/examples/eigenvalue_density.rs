//! Limiting eigenvalue density and the counting check at small hbar.

use zswkb::potential::PotentialSpec;
use zswkb::spectrum::{counting_check, density, density_grid, enumerate_wkb};

fn main() -> zswkb::Result<()> {
    let spec = PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)])?;
    for s in density(&spec, &[0.05, 0.5, 1.5])? {
        println!("mu = {:.2}: rho = {:.8}, barriers = {}", s.mu, s.rho_imag, s.barriers);
    }
    let hbar = 0.01;
    let evs = enumerate_wkb(&spec, hbar, (0.0, spec.amax()))?;
    let r = counting_check(&spec, &evs, hbar, &density_grid(&spec, 200))?;
    println!("hbar = {hbar}: {} eigenvalues, sup gap = {:.4e} = {:.3} hbar", evs.len(), r.sup_gap, r.sup_gap / hbar);
    Ok(())
}
