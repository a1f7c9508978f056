//! Barrier actions, Bohr-Sommerfeld inversion, WKB eigenvalues, norming
//! signs and the limiting eigenvalue density.
//!
//! A barrier is tracked by the run of maxima it contains. The component
//! holding maxima i..=j exists for mu in a window (lo, hi): hi is the lowest
//! interior minimum (or the peak when i == j), lo the highest bounding
//! minimum (0 for an outermost side).

use crate::error::{Error, Result};
use crate::numerics::quad::{self, QuadTol};
use crate::numerics::roots;
use crate::potential::{decompose, validate_assumptions, Barrier, ExtremumKind, PotentialSpec};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;

#[cfg(test)]
mod tests;

/// Chebyshev nodes per action table.
pub const PROFILE_NODES: usize = 129;

fn tol() -> QuadTol {
    QuadTol::new(1e-14, 1e-13)
}

/// A barrier component: maxima i..=j and its existence window in mu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierNode {
    pub first_max: usize,
    pub last_max: usize,
    pub lo: f64,
    pub hi: f64,
}

/// All barrier components of `spec`, ordered by (first_max, last_max).
pub fn barrier_nodes(spec: &PotentialSpec) -> Vec<BarrierNode> {
    let maxima: Vec<f64> = spec.maxima().map(|e| e.value).collect();
    let minima: Vec<f64> = spec.minima().map(|e| e.value).collect();
    let mut out = Vec::new();
    for i in 0..maxima.len() {
        for j in i..maxima.len() {
            let hi = if i == j { maxima[i] } else { minima[i..j].iter().cloned().fold(f64::INFINITY, f64::min) };
            let left = if i > 0 { minima[i - 1] } else { 0.0 };
            let right = if j + 1 < maxima.len() { minima[j] } else { 0.0 };
            let lo = left.max(right);
            if lo < hi {
                out.push(BarrierNode { first_max: i, last_max: j, lo, hi });
            }
        }
    }
    out
}

/// Barriers of the decomposition holding any of the node's maxima (one,
/// unless the level sits within rounding of an interior minimum).
fn node_barriers<'a>(spec: &PotentialSpec, barriers: &'a [Barrier], node: &BarrierNode) -> Vec<&'a Barrier> {
    let xs: Vec<f64> = spec.maxima().skip(node.first_max).take(node.last_max - node.first_max + 1).map(|e| e.x).collect();
    barriers.iter().filter(|b| xs.iter().any(|&x| b.left.x <= x && x <= b.right.x)).collect()
}

/// Newton polish of a simple root of A - mu.
fn polish(spec: &PotentialSpec, x: f64, mu: f64) -> f64 {
    let mut x = x;
    for _ in 0..3 {
        let d = spec.derivatives(x);
        if d[1] == 0.0 {
            break;
        }
        let step = (d[0] - mu) / d[1];
        if !(step.abs() < 1e-6 * x.abs().max(1.0)) {
            break;
        }
        x -= step;
    }
    x
}

/// Taylor jet of A at a root of A - mu.
struct RootJet {
    d: [f64; 5],
    reach: f64,
}

impl RootJet {
    fn new(spec: &PotentialSpec, x0: f64) -> Self {
        RootJet { d: spec.derivatives(x0), reach: 1e-3 * spec.length_scale() }
    }

    /// A - mu at signed offset h from the root, if h is within reach.
    fn excess(&self, h: f64) -> Option<f64> {
        if h.abs() >= self.reach {
            return None;
        }
        let d = &self.d;
        Some(h * (d[1] + h * (d[2] / 2.0 + h * (d[3] / 6.0 + h * d[4] / 24.0))))
    }
}

/// Integral over the barrier at level mu of h(A, A - mu), split at interior
/// extrema. Near simple turning points the substitution x = x0 +- w u^2
/// keeps the offset w u^2 exact, and A - mu comes from the root jet there.
fn barrier_integral(spec: &PotentialSpec, b: &Barrier, mu: f64, h: impl Fn(f64, f64) -> f64) -> Result<f64> {
    let left = if b.left.double { b.left.x } else { polish(spec, b.left.x, mu) };
    let right = if b.right.double { b.right.x } else { polish(spec, b.right.x, mu) };
    let jets = [RootJet::new(spec, left), RootJet::new(spec, right)];
    let eval = |x: f64, near: Option<(usize, f64)>| {
        let e = near.and_then(|(j, off)| jets[j].excess(off)).unwrap_or_else(|| spec.value(x) - mu);
        h(mu + e, e)
    };
    let mut cuts = vec![left];
    cuts.extend(b.extrema.iter().map(|e| e.x));
    if cuts.len() == 1 {
        cuts.push(0.5 * (left + right));
    }
    cuts.push(right);
    let last = cuts.len() - 2;
    let mut total = 0.0;
    for k in 0..=last {
        let (a, c) = (cuts[k], cuts[k + 1]);
        let w = c - a;
        total += if k == 0 && !b.left.double {
            quad::adaptive(|u| 2.0 * w * u * eval(a + w * u * u, Some((0, w * u * u))), 0.0, 1.0, tol())?.value
        } else if k == last && !b.right.double {
            quad::adaptive(|u| 2.0 * w * u * eval(c - w * u * u, Some((1, -w * u * u))), 0.0, 1.0, tol())?.value
        } else {
            quad::adaptive(|x| eval(x, None), a, c, tol())?.value
        };
    }
    Ok(total)
}

fn sqrt_excess(a: f64, e: f64) -> f64 {
    (e * (a + a - e)).max(0.0).sqrt()
}

fn inv_sqrt_excess(a: f64, e: f64) -> f64 {
    1.0 / (e * (a + a - e)).abs().max(1e-300).sqrt()
}

fn check_window(node: &BarrierNode, mu: f64) -> Result<()> {
    let merged = node.first_max < node.last_max;
    if !(mu > node.lo && (mu < node.hi || (!merged && mu == node.hi))) {
        return Err(Error::OutOfWindow(format!(
            "mu = {mu} outside window ({}, {}] of barrier with maxima {}..={}",
            node.lo, node.hi, node.first_max, node.last_max
        )));
    }
    Ok(())
}

/// Phi(mu) = integral of sqrt(A^2 - mu^2) over the barrier.
pub fn action(spec: &PotentialSpec, node: &BarrierNode, mu: f64) -> Result<f64> {
    check_window(node, mu)?;
    if node.first_max == node.last_max && mu >= node.hi {
        return Ok(0.0);
    }
    let d = decompose(spec, mu)?;
    let bs = node_barriers(spec, &d.barriers, node);
    if bs.is_empty() {
        return Err(Error::NoSolution(format!("no barrier at mu = {mu}")));
    }
    let mut total = 0.0;
    for b in bs.into_iter().filter(|b| !b.critical()) {
        total += barrier_integral(spec, b, mu, sqrt_excess)?;
    }
    Ok(total)
}

/// Phi'(mu) = -mu * integral of (A^2 - mu^2)^{-1/2} over the barrier.
pub fn action_derivative(spec: &PotentialSpec, node: &BarrierNode, mu: f64) -> Result<f64> {
    check_window(node, mu)?;
    let d = decompose(spec, mu)?;
    let bs = node_barriers(spec, &d.barriers, node);
    if bs.is_empty() {
        return Err(Error::NoSolution(format!("no barrier at mu = {mu}")));
    }
    let mut total = 0.0;
    for b in bs {
        total += if b.critical() {
            // Quadratic peak: A^2 - mu^2 ~ -A A'' (x - x0)^2.
            let dd = spec.derivatives(b.peak_x);
            PI / (-dd[0] * dd[2]).sqrt()
        } else {
            barrier_integral(spec, b, mu, inv_sqrt_excess)?
        };
    }
    Ok(-mu * total)
}

/// Phi at the bottom of the window (the L1 norm when the window reaches 0).
fn action_at_lo(spec: &PotentialSpec, node: &BarrierNode) -> Result<f64> {
    if node.lo == 0.0 {
        return Ok(spec.l1_norm());
    }
    let mu = node.lo * (1.0 + 1e-9);
    action(spec, node, mu)
}

/// Monotone table mu -> Phi on Chebyshev nodes of one window.
#[derive(Debug, Clone, Serialize)]
pub struct ActionProfile {
    pub node: BarrierNode,
    /// Index of the node in [`barrier_nodes`].
    pub index: usize,
    /// Increasing mu, decreasing phi.
    pub mu: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    /// Phi at the bottom and top of the window.
    pub phi_lo: f64,
    pub phi_hi: f64,
}

impl ActionProfile {
    pub fn build(spec: &PotentialSpec, index: usize) -> Result<Self> {
        let nodes = barrier_nodes(spec);
        let node = *nodes.get(index).ok_or_else(|| Error::Range(format!("no barrier node {index}")))?;
        let (lo, hi) = (node.lo, node.hi);
        let n = PROFILE_NODES;
        let mut mu = Vec::with_capacity(n);
        for k in 1..n - 1 {
            let t = 0.5 * (1.0 - (PI * k as f64 / (n - 1) as f64).cos());
            mu.push(lo + (hi - lo) * t);
        }
        let phi = mu.iter().map(|&m| action(spec, &node, m)).collect::<Result<Vec<_>>>()?;
        let dphi = mu.iter().map(|&m| action_derivative(spec, &node, m)).collect::<Result<Vec<_>>>()?;
        let phi_hi = if node.first_max == node.last_max { 0.0 } else { action(spec, &node, hi * (1.0 - 1e-9))? };
        Ok(ActionProfile { node, index, mu, phi, dphi, phi_lo: action_at_lo(spec, &node)?, phi_hi })
    }

    /// Linear interpolation of the table (a starting guess, not a result).
    pub fn interpolate(&self, mu: f64) -> f64 {
        let k = self.mu.partition_point(|&m| m < mu).clamp(1, self.mu.len() - 1);
        let (m0, m1) = (self.mu[k - 1], self.mu[k]);
        let t = (mu - m0) / (m1 - m0);
        self.phi[k - 1] + t * (self.phi[k] - self.phi[k - 1])
    }
}

/// Solve Phi(mu) = s inside the profile's window.
pub fn invert_action(spec: &PotentialSpec, profile: &ActionProfile, s: f64) -> Result<f64> {
    if !(s > profile.phi_hi && s < profile.phi_lo) {
        return Err(Error::NoSolution(format!(
            "action {s} outside ({}, {}) for barrier node {}",
            profile.phi_hi, profile.phi_lo, profile.index
        )));
    }
    let node = &profile.node;
    let g = |m: f64| match action(spec, node, m) {
        Ok(v) => v - s,
        Err(_) => f64::NAN,
    };
    // Bracket from the table; below the first node, halve towards lo.
    let k = profile.phi.partition_point(|&p| p > s);
    let top = if node.first_max == node.last_max { node.hi } else { node.hi * (1.0 - 1e-9) };
    let b = if k >= profile.mu.len() { top } else { profile.mu[k] };
    let a = if k > 0 {
        profile.mu[k - 1]
    } else {
        let mut a = profile.mu[0];
        while g(a) < 0.0 {
            a = node.lo + 0.5 * (a - node.lo);
            if a - node.lo < 1e-14 * node.hi {
                return Err(Error::NoSolution(format!("action {s} not bracketed above mu = {}", node.lo)));
            }
        }
        a
    };
    let root = roots::brent(g, a, b, 1e-15 * b.max(1e-300))?;
    Ok(root)
}

/// One WKB eigenvalue i mu with its labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WkbEigenvalue {
    /// Index of the barrier node.
    pub l: usize,
    pub first_max: usize,
    pub last_max: usize,
    pub n: usize,
    pub mu: f64,
    pub norming_sign: i8,
    /// Below the lowest local minimum without the near-zero tail guarantee.
    pub tail_unverified: bool,
}

impl WkbEigenvalue {
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(0.0, self.mu)
    }
}

/// (-1)^n.
pub fn norming_constant(ev: &WkbEigenvalue) -> i8 {
    if ev.n.is_multiple_of(2) { 1 } else { -1 }
}

/// All profiles of a potential.
pub fn profiles(spec: &PotentialSpec) -> Result<Vec<ActionProfile>> {
    (0..barrier_nodes(spec).len()).map(|i| ActionProfile::build(spec, i)).collect()
}

/// WKB eigenvalues with mu in the window (a, b), sorted by mu descending.
pub fn enumerate_wkb(spec: &PotentialSpec, hbar: f64, window: (f64, f64)) -> Result<Vec<WkbEigenvalue>> {
    enumerate_with(spec, &profiles(spec)?, hbar, window)
}

/// As [`enumerate_wkb`] with prebuilt profiles.
pub fn enumerate_with(
    spec: &PotentialSpec,
    profiles: &[ActionProfile],
    hbar: f64,
    window: (f64, f64),
) -> Result<Vec<WkbEigenvalue>> {
    if !(hbar > 0.0) {
        return crate::error::domain(format!("hbar must be positive, got {hbar}"));
    }
    let m_tilde = spec.minima().map(|e| e.value).fold(f64::INFINITY, f64::min);
    let m_tilde = if m_tilde.is_finite() { m_tilde } else { spec.amax() };
    let near_zero_ok = validate_assumptions(spec).near_zero_ok;
    let mut out = Vec::new();
    for p in profiles {
        let lo = p.node.lo.max(window.0);
        let hi = p.node.hi.min(window.1);
        if lo >= hi {
            continue;
        }
        let s_top = if hi >= p.node.hi { p.phi_hi } else { action(spec, &p.node, hi)? };
        let s_bot = if lo <= p.node.lo { p.phi_lo } else { action(spec, &p.node, lo)? };
        let first = ((s_top / (PI * hbar)) - 0.5).max(0.0).floor() as usize;
        for n in first.. {
            let s = PI * (n as f64 + 0.5) * hbar;
            if s >= s_bot {
                break;
            }
            if s <= s_top {
                continue;
            }
            let mu = invert_action(spec, p, s)?;
            let mut ev = WkbEigenvalue {
                l: p.index,
                first_max: p.node.first_max,
                last_max: p.node.last_max,
                n,
                mu,
                norming_sign: 0,
                tail_unverified: mu < m_tilde && !near_zero_ok,
            };
            ev.norming_sign = norming_constant(&ev);
            out.push(ev);
        }
    }
    out.sort_by(|a, b| b.mu.total_cmp(&a.mu));
    Ok(out)
}

/// CSV of eigenvalues.
pub fn eigenvalues_csv(evs: &[WkbEigenvalue], header: &str) -> String {
    let mut out = format!("{header}# mu [amplitude units]\nl,n,mu,norming_sign,tail_unverified\n");
    for e in evs {
        let _ = writeln!(out, "{},{},{:.15e},{},{}", e.l, e.n, e.mu, e.norming_sign, e.tail_unverified);
    }
    out
}

/// Density rho(i mu) = (i mu / pi) sum_l int dx / sqrt(A^2 - mu^2).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensitySample {
    pub mu: f64,
    /// Im rho; rho itself is purely imaginary.
    pub rho_imag: f64,
    /// Per-barrier contributions, left to right.
    pub contributions: Vec<f64>,
    /// Number of barriers L(mu).
    pub barriers: usize,
    /// Jump of Im rho when mu sits on a critical level.
    pub discontinuity: Option<f64>,
}

fn density_at(spec: &PotentialSpec, mu: f64) -> Result<(Vec<f64>, bool)> {
    let d = decompose(spec, mu)?;
    if d.has_double_root() {
        return Ok((Vec::new(), true));
    }
    let c = d
        .barriers
        .iter()
        .map(|b| Ok(mu / PI * barrier_integral(spec, b, mu, inv_sqrt_excess)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((c, false))
}

/// Density samples at the given levels in (0, A_max).
pub fn density(spec: &PotentialSpec, mus: &[f64]) -> Result<Vec<DensitySample>> {
    mus.iter()
        .map(|&mu| {
            if !(mu > 0.0 && mu < spec.amax()) {
                return Err(Error::Range(format!("density level {mu} outside (0, {})", spec.amax())));
            }
            let (c, critical) = density_at(spec, mu)?;
            if !critical {
                let sum = c.iter().sum();
                return Ok(DensitySample { mu, rho_imag: sum, barriers: c.len(), contributions: c, discontinuity: None });
            }
            let eps = 1e-6 * mu;
            let (below, _) = density_at(spec, mu - eps)?;
            let (above, _) = density_at(spec, mu + eps)?;
            let (sb, sa): (f64, f64) = (below.iter().sum(), above.iter().sum());
            Ok(DensitySample {
                mu,
                rho_imag: 0.5 * (sa + sb),
                barriers: above.len(),
                contributions: above,
                discontinuity: Some(sa - sb),
            })
        })
        .collect()
}

/// Sum over the barriers at mu of Phi_l(mu) / pi, which is the integral of
/// Im rho from mu up to A_max.
pub fn integrated_density(spec: &PotentialSpec, mu: f64) -> Result<f64> {
    if mu >= spec.amax() {
        return Ok(0.0);
    }
    let d = decompose(spec, mu)?;
    let mut total = 0.0;
    for b in &d.barriers {
        if !b.critical() {
            total += barrier_integral(spec, b, mu, sqrt_excess)?;
        }
    }
    Ok(total / PI)
}

/// Sup-gap between hbar times the eigenvalue count above mu and the
/// integrated density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingReport {
    pub hbar: f64,
    pub sup_gap: f64,
    pub at_mu: f64,
    pub points: usize,
}

/// Compare the empirical measure of `evs` against the integrated density
/// on `grid` and on both sides of every eigenvalue.
pub fn counting_check(spec: &PotentialSpec, evs: &[WkbEigenvalue], hbar: f64, grid: &[f64]) -> Result<CountingReport> {
    let mut mus: Vec<f64> = evs.iter().map(|e| e.mu).collect();
    mus.sort_by(f64::total_cmp);
    let count_above = |m: f64, inclusive: bool| {
        mus.len() - if inclusive { mus.partition_point(|&v| v < m) } else { mus.partition_point(|&v| v <= m) }
    };
    let mut best = CountingReport { hbar, sup_gap: 0.0, at_mu: f64::NAN, points: 0 };
    let mut probe = |m: f64, counts: &[usize]| -> Result<()> {
        if !(m > 0.0 && m < spec.amax()) {
            return Ok(());
        }
        let integ = integrated_density(spec, m)?;
        for &c in counts {
            best.points += 1;
            let gap = (hbar * c as f64 - integ).abs();
            if gap > best.sup_gap {
                best.sup_gap = gap;
                best.at_mu = m;
            }
        }
        Ok(())
    };
    for &m in grid {
        probe(m, &[count_above(m, false)])?;
    }
    for &m in &mus {
        probe(m, &[count_above(m, true), count_above(m, false)])?;
    }
    Ok(best)
}

/// n equally spaced levels strictly inside (0, A_max).
pub fn density_grid(spec: &PotentialSpec, n: usize) -> Vec<f64> {
    let top = spec.amax();
    (1..=n).map(|k| top * (k as f64 / (n + 1) as f64)).collect()
}

/// CSV of density samples.
pub fn density_csv(samples: &[DensitySample], header: &str) -> String {
    let mut out = format!("{header}# mu [amplitude units], rho_imag [1/amplitude]\nmu,rho_imag,L\n");
    for s in samples {
        let _ = writeln!(out, "{:.12e},{:.12e},{}", s.mu, s.rho_imag, s.barriers);
    }
    out
}

/// Human-readable label of a barrier node.
pub fn describe_node(spec: &PotentialSpec, node: &BarrierNode) -> String {
    let xs: Vec<f64> = spec.extrema().iter().filter(|e| e.kind == ExtremumKind::Max).map(|e| e.x).collect();
    format!("maxima at x = {:?}, window ({:.6}, {:.6}]", &xs[node.first_max..=node.last_max], node.lo, node.hi)
}
