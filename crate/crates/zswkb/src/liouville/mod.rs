//! Liouville charts x <-> zeta for a barrier or a finite well at level mu,
//! the error term psi of the transformed equation, its variation and the
//! bound functions l1, l2.
//!
//! Both region kinds use F with F < 0 between the turning points and F > 0
//! outside: F = mu^2 - A^2 for a barrier, F = A^2 - mu^2 for a well. The
//! chart is fixed by xdot^2 F = zeta^2 - gamma^2, with gamma = alpha or beta.

mod bounds;

pub use bounds::{l1, l2, omega};

use crate::error::{Error, Result};
use crate::numerics::quad::{self, QuadTol};
use crate::numerics::roots;
use crate::potential::{EnergyDecomposition, PotentialSpec};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Half-width in zeta of the zone around a turning point where psi is
/// interpolated from samples outside the zone.
pub const PSI_ZONE: f64 = 2e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionKind {
    Barrier,
    Well,
}

/// Reference to a barrier or well of an [`EnergyDecomposition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Region {
    pub kind: RegionKind,
    pub index: usize,
}

impl Region {
    pub fn barrier(index: usize) -> Self {
        Region { kind: RegionKind::Barrier, index }
    }

    pub fn well(index: usize) -> Self {
        Region { kind: RegionKind::Well, index }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ChartOptions {
    /// Chebyshev nodes per monotone piece of the forward table.
    pub nodes: usize,
    /// Infinite ends of the table stop where A = tail_level * mu.
    pub tail_level: f64,
}

impl Default for ChartOptions {
    fn default() -> Self {
        ChartOptions { nodes: 257, tail_level: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    CenterLow,
    CenterHigh,
    Right,
}

/// Forward table of one monotone piece, ordered away from its turning point.
#[derive(Debug, Clone)]
struct Piece {
    side: Side,
    tp: f64,
    dir: f64,
    x: Vec<f64>,
    s: Vec<f64>,
    /// The piece continues to infinity beyond its last node.
    open: bool,
}

/// Values entering the error term at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorTermSample {
    pub zeta: f64,
    pub x: f64,
    pub psi: f64,
    /// f = mu^2 - A^2 and its x-derivatives.
    pub f: f64,
    pub df: f64,
    pub ddf: f64,
    pub g: f64,
    /// Value came from interpolation across a turning-point zone.
    pub regularized: bool,
}

/// Map between x and zeta on one region at one energy level.
#[derive(Debug, Clone)]
pub struct LiouvilleChart {
    spec: PotentialSpec,
    pub region: Region,
    pub mu: f64,
    /// alpha for a barrier, beta for a well.
    pub gamma: f64,
    pub critical: bool,
    /// Pre-images of -gamma and +gamma.
    pub turning: (f64, f64),
    /// Peak of the barrier or bottom of the well.
    pub center: f64,
    pub x_bounds: (f64, f64),
    pub zeta_bounds: (f64, f64),
    pieces: Vec<Piece>,
    zeta_center: f64,
}

fn tol() -> QuadTol {
    QuadTol::new(1e-15, 1e-14)
}

/// Integral of sqrt(gamma^2 - t^2) from -gamma to -gamma + d, 0 <= d <= 2 gamma.
fn inner_area(gamma: f64, d: f64) -> f64 {
    if gamma == 0.0 {
        return 0.0;
    }
    let e = d / gamma;
    if e < 1e-2 {
        let u = d / (2.0 * gamma);
        let c = [1.0, -0.5, -0.125, -0.0625, -0.0390625];
        let sum: f64 = c.iter().enumerate().map(|(k, ck)| ck * u.powi(k as i32) / (k as f64 + 1.5)).sum();
        return (2.0 * gamma).sqrt() * d.powf(1.5) * sum;
    }
    let z = -gamma + d;
    0.5 * gamma * gamma * (-z / gamma).clamp(-1.0, 1.0).acos()
        + 0.5 * z * (gamma * gamma - z * z).max(0.0).sqrt()
}

/// Integral of sqrt(t^2 - gamma^2) from gamma to gamma + d.
fn outer_area(gamma: f64, d: f64) -> f64 {
    if gamma == 0.0 {
        return 0.5 * d * d;
    }
    let e = d / gamma;
    if e < 1e-2 {
        let u = d / (2.0 * gamma);
        let c = [1.0, 0.5, -0.125, 0.0625, -0.0390625];
        let sum: f64 = c.iter().enumerate().map(|(k, ck)| ck * u.powi(k as i32) / (k as f64 + 1.5)).sum();
        return (2.0 * gamma).sqrt() * d.powf(1.5) * sum;
    }
    let z = gamma + d;
    0.5 * z * (z * z - gamma * gamma).sqrt() - 0.5 * gamma * gamma * (e + (e * (2.0 + e)).sqrt()).ln_1p()
}

/// Solve area(d) = s for d >= 0, with area increasing and derivative
/// bounded below by sqrt(d * (2 gamma + d)) or similar.
fn invert_area(area: impl Fn(f64) -> f64, s: f64, hi: f64) -> Result<f64> {
    if s <= 0.0 {
        return Ok(0.0);
    }
    let mut hi = hi;
    while area(hi) < s {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoSolution(format!("action {s} out of range")));
        }
    }
    roots::brent(|d| area(d) - s, 0.0, hi, 1e-15 * hi.max(1e-300))
}

impl LiouvilleChart {
    pub fn build(decomp: &EnergyDecomposition, region: Region, spec: &PotentialSpec) -> Result<Self> {
        Self::build_with(decomp, region, spec, ChartOptions::default())
    }

    pub fn build_with(
        decomp: &EnergyDecomposition,
        region: Region,
        spec: &PotentialSpec,
        opts: ChartOptions,
    ) -> Result<Self> {
        let mu = decomp.mu;
        let (tl, tr, center, x_bounds) = match region.kind {
            RegionKind::Barrier => {
                let b = decomp.barriers.get(region.index).ok_or_else(|| {
                    Error::Domain(format!("no barrier {} at mu = {mu}", region.index))
                })?;
                let left = decomp.wells[region.index].bottom_x.unwrap_or(f64::NEG_INFINITY);
                let right = decomp.wells[region.index + 1].bottom_x.unwrap_or(f64::INFINITY);
                (b.left.x, b.right.x, b.peak_x, (left, right))
            }
            RegionKind::Well => {
                let w = decomp.wells.get(region.index).ok_or_else(|| {
                    Error::Domain(format!("no well {} at mu = {mu}", region.index))
                })?;
                let (Some(l), Some(r), Some(bottom)) = (w.left, w.right, w.bottom_x) else {
                    return crate::error::domain(format!(
                        "well {} is infinite and has no turning-point pair",
                        region.index
                    ));
                };
                let left = decomp.barriers[region.index - 1].peak_x;
                let right = decomp.barriers[region.index].peak_x;
                (l.x, r.x, bottom, (left, right))
            }
        };
        let critical = tl == tr;
        let (cut_l, cut_r) = spec.cut_points(opts.tail_level * mu)?;
        let mut chart = LiouvilleChart {
            spec: spec.clone(),
            region,
            mu,
            gamma: 0.0,
            critical,
            turning: (tl, tr),
            center: if critical { tl } else { center },
            x_bounds,
            zeta_bounds: (0.0, 0.0),
            pieces: Vec::new(),
            zeta_center: 0.0,
        };
        let n = opts.nodes.max(3);
        let left_end = if x_bounds.0.is_finite() { x_bounds.0 } else { cut_l.min(tl - 1.0) };
        let right_end = if x_bounds.1.is_finite() { x_bounds.1 } else { cut_r.max(tr + 1.0) };
        let mut pieces = vec![chart.piece(Side::Left, tl, -1.0, left_end, n, !x_bounds.0.is_finite())?];
        if !critical {
            pieces.push(chart.piece(Side::CenterLow, tl, 1.0, chart.center, n, false)?);
            pieces.push(chart.piece(Side::CenterHigh, tr, -1.0, chart.center, n, false)?);
        }
        pieces.push(chart.piece(Side::Right, tr, 1.0, right_end, n, !x_bounds.1.is_finite())?);
        chart.pieces = pieces;
        if !critical {
            let low = chart.pieces[1].s.last().copied().unwrap_or(0.0);
            let high = chart.pieces[2].s.last().copied().unwrap_or(0.0);
            chart.gamma = (2.0 * (low + high) / PI).sqrt();
            chart.zeta_center = chart.zeta_from_action(Side::CenterLow, low)?;
        }
        let z1 = if x_bounds.0.is_finite() { chart.zeta_of_x(x_bounds.0)? } else { f64::NEG_INFINITY };
        let z2 = if x_bounds.1.is_finite() { chart.zeta_of_x(x_bounds.1)? } else { f64::INFINITY };
        chart.zeta_bounds = (z1, z2);
        Ok(chart)
    }

    fn sign(&self) -> f64 {
        match self.region.kind {
            RegionKind::Barrier => 1.0,
            RegionKind::Well => -1.0,
        }
    }

    /// F, F', F'', F''' at x.
    fn f_jet(&self, x: f64) -> [f64; 4] {
        let d = self.spec.derivatives(x);
        let s = self.sign();
        [
            s * (self.mu * self.mu - d[0] * d[0]),
            -2.0 * s * d[0] * d[1],
            -2.0 * s * (d[1] * d[1] + d[0] * d[2]),
            -2.0 * s * (3.0 * d[1] * d[2] + d[0] * d[3]),
        ]
    }

    fn root_abs_f(&self, x: f64) -> f64 {
        let a = self.spec.value(x);
        (self.mu * self.mu - a * a).abs().sqrt()
    }

    fn segment(&self, a: f64, b: f64, sing_a: bool) -> Result<f64> {
        let q = quad::sqrt_endpoints(|x| self.root_abs_f(x), a, b, sing_a, false, tol())?;
        Ok(q.value.abs())
    }

    fn piece(&self, side: Side, tp: f64, dir: f64, end: f64, n: usize, open: bool) -> Result<Piece> {
        let len = (end - tp).abs();
        let mut x = Vec::with_capacity(n);
        let mut s = Vec::with_capacity(n);
        if len == 0.0 {
            x.push(tp);
            s.push(0.0);
            return Ok(Piece { side, tp, dir, x, s, open });
        }
        let sing = !self.critical;
        for k in 0..n {
            let t = 0.5 * (1.0 - (PI * k as f64 / (n - 1) as f64).cos());
            let xk = if k == n - 1 { end } else { tp + dir * len * t };
            let sk = if k == 0 { 0.0 } else { s[k - 1] + self.segment(x[k - 1], xk, k == 1 && sing)? };
            x.push(xk);
            s.push(sk);
        }
        Ok(Piece { side, tp, dir, x, s, open })
    }

    fn piece_for_x(&self, x: f64) -> &Piece {
        let (tl, tr) = self.turning;
        let side = if self.critical {
            if x < tl { Side::Left } else { Side::Right }
        } else if x <= tl {
            Side::Left
        } else if x >= tr {
            Side::Right
        } else if x <= self.center {
            Side::CenterLow
        } else {
            Side::CenterHigh
        };
        self.pieces.iter().find(|p| p.side == side).expect("piece exists")
    }

    fn piece_for_zeta(&self, zeta: f64) -> &Piece {
        let g = self.gamma;
        let side = if self.critical {
            if zeta < 0.0 { Side::Left } else { Side::Right }
        } else if zeta < -g {
            Side::Left
        } else if zeta >= g {
            Side::Right
        } else if zeta <= self.zeta_center {
            Side::CenterLow
        } else {
            Side::CenterHigh
        };
        self.pieces.iter().find(|p| p.side == side).expect("piece exists")
    }

    /// Action measured from the piece's turning point out to x.
    fn action_in(&self, p: &Piece, x: f64) -> Result<f64> {
        let d = (x - p.tp) * p.dir;
        let i = p.x.iter().rposition(|&xn| (xn - p.tp) * p.dir <= d).unwrap_or_default();
        let sing = i == 0 && !self.critical;
        Ok(p.s[i] + self.segment(p.x[i], x, sing)?)
    }

    fn zeta_from_action(&self, side: Side, s: f64) -> Result<f64> {
        let g = self.gamma;
        let hi = (2.0 * s).sqrt() + g + 1.0;
        Ok(match side {
            Side::Right => g + invert_area(|d| outer_area(g, d), s, hi)?,
            Side::Left => -g - invert_area(|d| outer_area(g, d), s, hi)?,
            Side::CenterLow | Side::CenterHigh => {
                let full = inner_area(g, 2.0 * g);
                let d = invert_area(|d| inner_area(g, d), s.min(full), 2.0 * g)?.min(2.0 * g);
                if side == Side::CenterLow { -g + d } else { g - d }
            }
        })
    }

    fn action_from_zeta(&self, side: Side, zeta: f64) -> f64 {
        let g = self.gamma;
        match side {
            Side::Right => outer_area(g, zeta - g),
            Side::Left => outer_area(g, -zeta - g),
            Side::CenterLow => inner_area(g, zeta + g),
            Side::CenterHigh => inner_area(g, g - zeta),
        }
    }

    fn check_x(&self, x: f64) -> Result<()> {
        let (a, b) = self.x_bounds;
        if !x.is_finite() || x < a || x > b {
            return Err(Error::Range(format!("x = {x} outside chart domain ({a}, {b})")));
        }
        Ok(())
    }

    pub fn zeta_of_x(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let p = self.piece_for_x(x);
        let s = self.action_in(p, x)?;
        self.zeta_from_action(p.side, s)
    }

    pub fn x_of_zeta(&self, zeta: f64) -> Result<f64> {
        let (z1, z2) = self.zeta_bounds;
        if !zeta.is_finite() || zeta < z1 || zeta > z2 {
            return Err(Error::Range(format!("zeta = {zeta} outside chart range ({z1}, {z2})")));
        }
        let p = self.piece_for_zeta(zeta);
        let target = self.action_from_zeta(p.side, zeta);
        if target == 0.0 {
            return Ok(p.tp);
        }
        let dist = |x: f64| (x - p.tp) * p.dir;
        let k = p.s.partition_point(|&s| s <= target);
        let (mut lo, mut hi) = if k == 0 {
            (0.0, dist(p.x[0]))
        } else if k < p.s.len() {
            (dist(p.x[k - 1]), dist(p.x[k]))
        } else if p.open {
            let last = *p.x.last().expect("nodes");
            let ds = target - p.s[p.s.len() - 1];
            let mut hi = dist(last) + 2.0 * ds / self.root_abs_f(last).max(1e-300) + 1.0;
            while self.action_in(p, p.tp + p.dir * hi)? < target {
                hi *= 2.0;
            }
            (dist(last), hi)
        } else {
            return Ok(*p.x.last().expect("nodes"));
        };
        let at = |d: f64| p.tp + p.dir * d;
        let (s_lo, s_hi) = (self.action_in(p, at(lo))?, self.action_in(p, at(hi))?);
        let mut d = if s_hi > s_lo { lo + (hi - lo) * (target - s_lo) / (s_hi - s_lo) } else { 0.5 * (lo + hi) };
        for _ in 0..100 {
            let r = self.action_in(p, at(d))? - target;
            if r > 0.0 { hi = d } else { lo = d }
            let slope = self.root_abs_f(at(d));
            let mut next = if slope > 0.0 { d - r / slope } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let step = (next - d).abs();
            d = next;
            if step <= 1e-15 * d.abs().max(1e-3) || hi - lo <= 1e-15 * hi.abs().max(1e-3) {
                break;
            }
        }
        Ok(at(d))
    }

    /// (x, xdot, xddot) at zeta, away from simple turning points.
    pub fn jacobian(&self, zeta: f64) -> Result<(f64, f64, f64)> {
        let x = self.x_of_zeta(zeta)?;
        let g2 = self.gamma * self.gamma;
        let num = zeta * zeta - g2;
        if self.critical && zeta.abs() < 1e-5 {
            let [_, _, f2, f3] = self.f_jet(self.turning.0);
            let (a2, a3) = (0.5 * f2, f3 / 6.0);
            let q = a2.powf(0.25);
            let xd = 1.0 / q - a3 / (3.0 * a2) * zeta / (q * q);
            let xdd = -a3 / (3.0 * a2 * q * q);
            return Ok((x, xd, xdd));
        }
        let [f, f1, _, _] = self.f_jet(x);
        if num.abs() < 1e-10 * g2.max(1e-300) || f == 0.0 {
            return crate::error::domain(format!("jacobian requested at turning point zeta = {zeta}"));
        }
        let xd = (num / f).sqrt();
        let xdd = (2.0 * zeta - xd * xd * xd * f1) / (2.0 * xd * f);
        Ok((x, xd, xdd))
    }

    fn psi_direct(&self, zeta: f64) -> Result<ErrorTermSample> {
        let x = self.x_of_zeta(zeta)?;
        let d = self.spec.derivatives(x);
        let [ff, f1, f2, _] = self.f_jet(x);
        let g2 = self.gamma * self.gamma;
        let z2 = zeta * zeta - g2;
        let den = d[0] + self.mu;
        let g = 0.75 * (d[1] / den).powi(2) - 0.5 * d[2] / den;
        let psi = 0.25 * (3.0 * zeta * zeta + 2.0 * g2) / (z2 * z2)
            + z2 * (4.0 * ff * f2 - 5.0 * f1 * f1) / (16.0 * ff * ff * ff)
            + z2 * g / ff;
        let s = self.sign();
        Ok(ErrorTermSample { zeta, x, psi, f: s * ff, df: s * f1, ddf: s * f2, g, regularized: false })
    }

    /// Interpolation nodes for the zone containing zeta, if any.
    fn zone_nodes(&self, zeta: f64) -> Option<Vec<f64>> {
        let g = self.gamma;
        let w = PSI_ZONE;
        if g < 3.0 * w {
            if zeta.abs() >= g + w {
                return None;
            }
            let mut z: Vec<f64> = (1..=4).map(|k| g + w * k as f64).collect();
            z.extend((1..=4).map(|k| -(g + w * k as f64)));
            return Some(z);
        }
        for t in [-g, g] {
            if (zeta - t).abs() < w {
                let mut z: Vec<f64> = [1.0, 1.5, 2.0, 2.5].iter().map(|k| t + w * k).collect();
                z.extend([1.0, 1.5, 2.0, 2.5].iter().map(|k| t - w * k));
                return Some(z);
            }
        }
        None
    }

    /// Error term psi (or psi-bar) at zeta with its constituents.
    pub fn error_term(&self, zeta: f64) -> Result<ErrorTermSample> {
        let Some(nodes) = self.zone_nodes(zeta) else {
            return self.psi_direct(zeta);
        };
        let (z1, z2) = self.zeta_bounds;
        let nodes: Vec<f64> = nodes.into_iter().filter(|z| *z > z1 && *z < z2).collect();
        let vals = nodes.iter().map(|&z| self.psi_direct(z).map(|s| s.psi)).collect::<Result<Vec<_>>>()?;
        let mut psi = 0.0;
        for (i, zi) in nodes.iter().enumerate() {
            let mut l = 1.0;
            for (j, zj) in nodes.iter().enumerate() {
                if i != j {
                    l *= (zeta - zj) / (zi - zj);
                }
            }
            psi += l * vals[i];
        }
        let x = self.x_of_zeta(zeta)?;
        let d = self.spec.derivatives(x);
        let den = d[0] + self.mu;
        let g = 0.75 * (d[1] / den).powi(2) - 0.5 * d[2] / den;
        let [ff, f1, f2, _] = self.f_jet(x);
        let s = self.sign();
        Ok(ErrorTermSample { zeta, x, psi, f: s * ff, df: s * f1, ddf: s * f2, g, regularized: true })
    }

    /// zeta at the end of the forward table on an infinite side.
    /// zeta at the last tabulated node of the left or right outer piece.
    pub fn table_end(&self, right: bool) -> Result<f64> {
        let side = if right { Side::Right } else { Side::Left };
        let p = self.pieces.iter().find(|p| p.side == side).expect("piece exists");
        self.zeta_from_action(side, *p.s.last().expect("nodes"))
    }

    /// Variation of the error-control function over (za, zb); infinite
    /// limits use the tail estimate psi ~ psi(T) (T/zeta)^2.
    pub fn variation(&self, hbar: f64, za: f64, zb: f64) -> Result<f64> {
        if !(hbar > 0.0) {
            return crate::error::domain(format!("hbar must be positive, got {hbar}"));
        }
        if !(za < zb) {
            return crate::error::domain(format!("empty interval ({za}, {zb})"));
        }
        let s = (2.0 / hbar).sqrt();
        let (mut a, mut b) = (za.max(self.zeta_bounds.0), zb.min(self.zeta_bounds.1));
        let mut tail = 0.0;
        let tail_from = |t: f64| -> Result<f64> {
            let p = self.error_term(t)?.psi.abs();
            Ok(p * t.abs() / omega(t * s))
        };
        if a == f64::NEG_INFINITY {
            a = self.table_end(false)?;
            tail += tail_from(a)?;
        }
        if b == f64::INFINITY {
            b = self.table_end(true)?;
            tail += tail_from(b)?;
        }
        if a >= b {
            return Ok(tail);
        }
        let g = self.gamma;
        let w = PSI_ZONE;
        let mut cuts = vec![a, b];
        for c in [-g - w, -g, -g + w, 0.0, g - w, g, g + w] {
            if c > a && c < b {
                cuts.push(c);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = tail;
        let mut failure = None;
        for win in cuts.windows(2) {
            let q = quad::adaptive(
                |z| match self.error_term(z) {
                    Ok(e) => e.psi.abs() / omega(z * s),
                    Err(err) => {
                        failure.get_or_insert(err);
                        0.0
                    }
                },
                win[0],
                win[1],
                QuadTol::new(1e-12, 1e-8),
            );
            if let Some(err) = failure.take() {
                return Err(err);
            }
            total += q.map_err(|e| Error::Integration(format!("variation on ({}, {}): {e}", win[0], win[1])))?.value;
        }
        Ok(total)
    }

    /// Integral of sqrt|F| from the nearer turning point to x, for x outside
    /// the turning points.
    pub fn outer_action(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let p = self.piece_for_x(x);
        if !matches!(p.side, Side::Left | Side::Right) {
            return crate::error::domain(format!("x = {x} lies between the turning points"));
        }
        self.action_in(p, x)
    }

    /// Action over the region, (pi/2) gamma^2.
    pub fn action(&self) -> f64 {
        0.5 * PI * self.gamma * self.gamma
    }

    /// CSV table (x, zeta, psi) on n points spread over the chart.
    pub fn dump_csv(&self, n: usize) -> Result<String> {
        let (z1, z2) = self.zeta_bounds;
        let lo = if z1.is_finite() { z1 } else { self.table_end(false)? };
        let hi = if z2.is_finite() { z2 } else { self.table_end(true)? };
        let mut out = String::from("# x [length], zeta [sqrt(action)], psi [1/zeta^2]\nx,zeta,psi\n");
        for i in 1..n.max(2) {
            let z = lo + (hi - lo) * i as f64 / n as f64;
            let e = self.error_term(z)?;
            let _ = writeln!(out, "{:.12e},{:.12e},{:.12e}", e.x, z, e.psi);
        }
        Ok(out)
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }
}
