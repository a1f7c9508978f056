//! Barrier connection matrix sigma and well connection matrix tau against
//! their asymptotic forms over an hbar sweep.

use zswkb::liouville::{LiouvilleChart, Region};
use zswkb::potential::{decompose, PotentialSpec};
use zswkb::wkb::Approximants;

fn main() -> zswkb::Result<()> {
    let sech = PotentialSpec::sech(1.0, 0.0, 1.0)?;
    let d = decompose(&sech, 0.5)?;
    let barrier = LiouvilleChart::build(&d, Region::barrier(0), &sech)?;
    for hbar in [0.3, 0.15, 0.075] {
        let m = Approximants::new(&barrier, hbar)?.connection()?;
        println!("sigma, hbar = {hbar}: gap = {:.3e}, det = {:+.8}", m.gap(), m.det);
    }

    let two = PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)])?;
    let e = two.extrema();
    let mu = 0.5 * (e[0].value + e[1].value);
    let d = decompose(&two, mu)?;
    let well = LiouvilleChart::build(&d, Region::well(1), &two)?;
    for hbar in [0.2, 0.1, 0.05] {
        let m = Approximants::new(&well, hbar)?.connection()?;
        let k = m.asymptotic[0][1];
        println!(
            "tau, hbar = {hbar}: |tau12 - k|/k = {:.3e}, |det + 1| = {:.3e}",
            (m.numeric[0][1] - k).abs() / k,
            (m.det + 1.0).abs()
        );
    }
    Ok(())
}
