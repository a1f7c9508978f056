//! Direct spectrum of the sech problem, refined by shooting.

use zswkb::oracle::{discrete_spectrum, DiscretizationParams};
use zswkb::potential::PotentialSpec;

fn main() -> zswkb::Result<()> {
    let spec = PotentialSpec::sech(1.0, 0.0, 1.0)?;
    let hbar = 0.2;
    let sp = discrete_spectrum(&spec, hbar, &DiscretizationParams::new(15.0, 256))?;
    for (k, e) in sp.eigenvalues.iter().enumerate() {
        let exact = 1.0 - (k as f64 + 0.5) * hbar;
        println!("mu = {:.12} (matrix {:.8}), error {:.1e}, residual {:.1e}", e.mu, e.matrix_mu, e.mu - exact, e.residual);
    }
    println!("conjugate-symmetry defect {:.1e}, hypothesis violations {}", sp.symmetry_defect, sp.violations.len());
    Ok(())
}
