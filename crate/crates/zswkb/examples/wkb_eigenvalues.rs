//! Multi-barrier Bohr-Sommerfeld eigenvalues and norming signs.

use zswkb::potential::PotentialSpec;
use zswkb::spectrum::{barrier_nodes, describe_node, enumerate_wkb};

fn main() -> zswkb::Result<()> {
    let spec = PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)])?;
    for (l, node) in barrier_nodes(&spec).iter().enumerate() {
        println!("node {l}: {}", describe_node(&spec, node));
    }
    let evs = enumerate_wkb(&spec, 0.1, (0.0, spec.amax()))?;
    println!("{} eigenvalues at hbar = 0.1", evs.len());
    for e in evs.iter().take(12) {
        println!("  l = {}, n = {:2}, mu = {:.10}, sign {:+}", e.l, e.n, e.mu, e.norming_sign);
    }
    Ok(())
}
