//! The `validate` suite: invariants with fixed limits, one check per line.

use std::f64::consts::PI;

use serde::Serialize;

use super::RunConfig;
use crate::error::Result;
use crate::liouville::{LiouvilleChart, Region};
use crate::oracle;
use crate::potential::{decompose, validate_assumptions, PotentialSpec};
use crate::spectrum::{self, barrier_nodes};

/// One named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, limit, passed: value < limit }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub config_hash: String,
    pub assumption_failures: Vec<String>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Assumptions, quantization residuals, interlacing, norming signs, chart
/// anchoring, the counting check and optionally oracle agreement.
pub fn validate(spec: &PotentialSpec, rc: &RunConfig, with_oracle: bool) -> Result<ValidationReport> {
    let assumptions = validate_assumptions(spec);
    let mut checks = Vec::new();
    let nodes = barrier_nodes(spec);
    let profiles = spectrum::profiles(spec)?;
    let grid = spectrum::density_grid(spec, 200);

    for (k, node) in nodes.iter().enumerate().filter(|(_, n)| n.first_max == n.last_max) {
        let mu = 0.5 * (node.lo + node.hi);
        let d = decompose(spec, mu)?;
        let peak = spec.maxima().nth(node.first_max).map(|e| e.x).unwrap_or(f64::NAN);
        let Some(b) = d.barriers.iter().position(|b| b.left.x < peak && peak < b.right.x) else {
            continue;
        };
        let c = LiouvilleChart::build(&d, Region::barrier(b), spec)?;
        let anchor = (c.zeta_of_x(c.turning.0)? + c.gamma).abs().max((c.zeta_of_x(c.turning.1)? - c.gamma).abs());
        checks.push(Check::below(format!("node {k}: turning-point anchoring"), anchor, 1e-8));
        let phi = spectrum::action(spec, node, mu)?;
        checks.push(Check::below(format!("node {k}: action = (pi/2) alpha^2"), (phi - c.action()).abs(), 1e-10));
    }

    for &h in &rc.hbar {
        let evs = spectrum::enumerate_with(spec, &profiles, h, (0.0, spec.amax()))?;
        let mut residual: f64 = 0.0;
        for e in &evs {
            let r = spectrum::action(spec, &nodes[e.l], e.mu)? - PI * (e.n as f64 + 0.5) * h;
            residual = residual.max(r.abs());
        }
        checks.push(Check::below(format!("hbar {h}: quantization residual"), residual, 1e-9));
        let mut disorder = 0.0;
        for l in 0..nodes.len() {
            let mine: Vec<_> = evs.iter().filter(|e| e.l == l).collect();
            if mine.windows(2).any(|w| !(w[0].n + 1 == w[1].n && w[0].mu > w[1].mu)) {
                disorder += 1.0;
            }
        }
        checks.push(Check::below(format!("hbar {h}: nodes with broken interlacing"), disorder, 0.5));
        let wrong = evs.iter().filter(|e| e.norming_sign != spectrum::norming_constant(e)).count();
        checks.push(Check::below(format!("hbar {h}: wrong norming signs"), wrong as f64, 0.5));
        let count = spectrum::counting_check(spec, &evs, h, &grid)?;
        checks.push(Check::below(format!("hbar {h}: counting sup gap / hbar"), count.sup_gap / h, 3.0));
        if with_oracle {
            let params = rc.oracle_params(spec, h)?;
            let sp = oracle::discrete_spectrum(spec, h, &params)?;
            let gaps = oracle::nearest_gaps(&sp.mus(), &evs, rc.window(spec));
            let worst = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
            let limit = rc.tol.unwrap_or(h.powf(5.0 / 3.0));
            checks.push(Check::below(format!("hbar {h}: oracle to WKB gap"), worst, limit));
            checks.push(Check::below(format!("hbar {h}: hypothesis violations"), sp.violations.len() as f64, 0.5));
        }
    }
    let passed = assumptions.passed() && checks.iter().all(|c| c.passed);
    Ok(ValidationReport { config_hash: rc.hash(spec), assumption_failures: assumptions.failures, checks, passed })
}
