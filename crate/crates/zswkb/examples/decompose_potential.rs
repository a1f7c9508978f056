//! Barrier/well structure of the two-hump potential at a few levels.

use zswkb::potential::{decompose, validate_assumptions, PotentialSpec};

fn main() -> zswkb::Result<()> {
    let spec = PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)])?;
    println!("A_max = {:.6}, ||A||_1 = {:.6}", spec.amax(), spec.l1_norm());
    for e in spec.extrema() {
        println!("  {:?} at x = {:+.6}: A = {:.6}", e.kind, e.x, e.value);
    }
    let report = validate_assumptions(&spec);
    println!("assumptions passed: {}, decay: {:?}", report.passed(), report.decay);
    for mu in [0.05, 0.5, 1.5] {
        let d = decompose(&spec, mu)?;
        println!("mu = {mu}: {} barrier(s)", d.barrier_count());
        for b in &d.barriers {
            println!("  turning points {:+.6} .. {:+.6}, peak {:.6}", b.left.x, b.right.x, b.peak);
        }
    }
    Ok(())
}
