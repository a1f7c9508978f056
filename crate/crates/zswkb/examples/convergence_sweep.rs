//! Oracle/WKB matching on the two-hump potential with a fitted slope.

use zswkb::oracle::{discrete_spectrum, fit_slope, nearest_gaps, DiscretizationParams};
use zswkb::potential::PotentialSpec;
use zswkb::spectrum::enumerate_wkb;

fn main() -> zswkb::Result<()> {
    let spec = PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)])?;
    // From the well bottom up to the lower hump top.
    let well = spec.minima().next().map(|e| e.value).unwrap_or(0.0);
    let lower_top = spec.maxima().map(|e| e.value).fold(f64::INFINITY, f64::min);
    let window = (well, lower_top);
    let mut points = Vec::new();
    for hbar in [0.2, 0.1] {
        let sp = discrete_spectrum(&spec, hbar, &DiscretizationParams::for_spec(&spec, hbar, 20.0))?;
        let wkb = enumerate_wkb(&spec, hbar, (0.0, spec.amax()))?;
        let gaps = nearest_gaps(&sp.mus(), &wkb, window);
        let worst = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
        println!("hbar = {hbar}: {} oracle eigenvalues in {window:?}, max gap {worst:.3e}", gaps.len());
        points.push((hbar, worst));
    }
    println!("fitted slope {:?}", fit_slope(&points));
    Ok(())
}
