//! Splitting the line into barriers (A > mu) and wells (A < mu) at a level mu.

use super::{Extremum, ExtremumKind, PotentialSpec};
use crate::error::{Error, Result};
use crate::numerics::roots;
use serde::Serialize;

/// A zero of A - mu. Double roots sit at extrema with A = mu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoint {
    pub x: f64,
    pub double: bool,
}

/// Maximal interval where A > mu.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Barrier {
    pub left: TurningPoint,
    pub right: TurningPoint,
    /// Location and value of the highest point.
    pub peak_x: f64,
    pub peak: f64,
    /// All extrema strictly inside (several maxima when humps have merged).
    pub extrema: Vec<Extremum>,
}

impl Barrier {
    /// Turning points have coalesced (mu equals the peak value).
    pub fn critical(&self) -> bool {
        self.left.x == self.right.x
    }

    pub fn maxima_count(&self) -> usize {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Max).count()
    }
}

/// Maximal interval where A < mu; `None` ends are infinite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Well {
    pub left: Option<TurningPoint>,
    pub right: Option<TurningPoint>,
    /// Lowest interior point of a finite well.
    pub bottom_x: Option<f64>,
    pub bottom: Option<f64>,
}

impl Well {
    pub fn is_finite(&self) -> bool {
        self.left.is_some() && self.right.is_some()
    }

    pub fn critical(&self) -> bool {
        matches!((self.left, self.right), (Some(l), Some(r)) if l.x == r.x)
    }
}

/// Alternating well / barrier / ... / well structure at level mu.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyDecomposition {
    pub mu: f64,
    /// x_1^- <= x_1^+ <= ... <= x_L^+; a double root appears as both ends.
    pub roots: Vec<TurningPoint>,
    pub barriers: Vec<Barrier>,
    /// L + 1 wells; the first and last are infinite.
    pub wells: Vec<Well>,
}

impl EnergyDecomposition {
    pub fn barrier_count(&self) -> usize {
        self.barriers.len()
    }

    pub fn has_double_root(&self) -> bool {
        self.roots.iter().any(|r| r.double)
    }
}

enum Event {
    Up(f64),
    Down(f64),
    TouchMax(f64),
    TouchMin(f64),
}

/// Decompose the line at level mu.
pub fn decompose(spec: &PotentialSpec, mu: f64) -> Result<EnergyDecomposition> {
    if !(mu > 0.0) || !mu.is_finite() {
        return crate::error::domain(format!("energy level must be positive, got {mu}"));
    }
    let amax = spec.amax();
    let tol = 1e-9 * amax;
    if mu > amax + tol {
        return Err(Error::NoBarrier { mu, amax });
    }
    let ext = spec.extrema();
    let g = |x: f64| spec.value(x) - mu;
    let sign = |e: &Extremum| {
        let s = e.value - mu;
        if s.abs() < tol { 0.0 } else { s.signum() }
    };
    let signs: Vec<f64> = ext.iter().map(sign).collect();
    let refine = |a: f64, b: f64| roots::brent(g, a, b, 1e-15 * a.abs().max(b.abs()).max(1.0));

    let mut events = Vec::new();
    // Left tail: A increases from 0 to the first maximum.
    if signs[0] > 0.0 {
        let (xl, _) = spec.cut_points(0.5 * mu)?;
        events.push(Event::Up(refine(xl, ext[0].x)?));
    }
    for j in 0..ext.len() {
        if signs[j] == 0.0 {
            events.push(match ext[j].kind {
                ExtremumKind::Max => Event::TouchMax(ext[j].x),
                ExtremumKind::Min => Event::TouchMin(ext[j].x),
            });
        }
        if j + 1 < ext.len() && signs[j] * signs[j + 1] < 0.0 {
            let x = refine(ext[j].x, ext[j + 1].x)?;
            events.push(if signs[j] < 0.0 { Event::Up(x) } else { Event::Down(x) });
        }
    }
    let last = ext.len() - 1;
    if signs[last] > 0.0 {
        let (_, xr) = spec.cut_points(0.5 * mu)?;
        events.push(Event::Down(refine(ext[last].x, xr)?));
    }

    let simple = |x| TurningPoint { x, double: false };
    let double = |x| TurningPoint { x, double: true };
    let mut intervals: Vec<(TurningPoint, TurningPoint)> = Vec::new();
    let mut open: Option<TurningPoint> = None;
    for ev in events {
        match (ev, open) {
            (Event::Up(x), None) => open = Some(simple(x)),
            (Event::Down(x), Some(l)) => {
                intervals.push((l, simple(x)));
                open = None;
            }
            (Event::TouchMax(x), None) => intervals.push((double(x), double(x))),
            (Event::TouchMin(x), Some(l)) => {
                intervals.push((l, double(x)));
                open = Some(double(x));
            }
            // A touch on the wrong side of the level means neighbouring
            // extrema are themselves within tolerance of mu; skip it.
            (Event::TouchMax(_), Some(_)) | (Event::TouchMin(_), None) => {}
            _ => {
                return Err(Error::NoSolution(format!(
                    "inconsistent turning-point sequence at mu = {mu}"
                )))
            }
        }
    }
    if open.is_some() {
        return Err(Error::NoSolution(format!("unterminated barrier at mu = {mu}")));
    }

    let mut barriers = Vec::with_capacity(intervals.len());
    let mut roots_out = Vec::with_capacity(2 * intervals.len());
    for (l, r) in &intervals {
        let inside: Vec<Extremum> =
            ext.iter().filter(|e| e.x >= l.x && e.x <= r.x).copied().collect();
        let top = inside
            .iter()
            .filter(|e| e.kind == ExtremumKind::Max)
            .max_by(|a, b| a.value.total_cmp(&b.value))
            .copied()
            .unwrap_or(Extremum { x: l.x, value: mu, kind: ExtremumKind::Max });
        let interior = inside.into_iter().filter(|e| e.x > l.x && e.x < r.x).collect();
        barriers.push(Barrier { left: *l, right: *r, peak_x: top.x, peak: top.value, extrema: interior });
        roots_out.push(*l);
        roots_out.push(*r);
    }
    let mut wells = Vec::with_capacity(barriers.len() + 1);
    for i in 0..=barriers.len() {
        let left = if i == 0 { None } else { Some(barriers[i - 1].right) };
        let right = barriers.get(i).map(|b| b.left);
        let (bottom_x, bottom) = match (left, right) {
            (Some(l), Some(r)) => {
                let lowest = ext
                    .iter()
                    .filter(|e| e.kind == ExtremumKind::Min && e.x >= l.x && e.x <= r.x)
                    .min_by(|a, b| a.value.total_cmp(&b.value));
                match lowest {
                    Some(e) => (Some(e.x), Some(e.value)),
                    None => (Some(l.x), Some(mu)),
                }
            }
            _ => (None, None),
        };
        wells.push(Well { left, right, bottom_x, bottom });
    }
    Ok(EnergyDecomposition { mu, roots: roots_out, barriers, wells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_hump() -> PotentialSpec {
        PotentialSpec::lorentzian_sum(&[(1.0, -5.0, 1.0), (2.0, 5.0, 1.0)]).unwrap()
    }

    #[test]
    fn single_lorentzian_half_level() {
        let s = PotentialSpec::lorentzian_sum(&[(1.0, 0.0, 1.0)]).unwrap();
        let d = decompose(&s, 0.5).unwrap();
        assert_eq!(d.roots.len(), 2);
        assert!((d.roots[0].x + 1.0).abs() < 1e-13 && (d.roots[1].x - 1.0).abs() < 1e-13);
        assert_eq!(d.wells.len(), 2);
        assert!(!d.wells[0].is_finite() && !d.wells[1].is_finite());
    }

    #[test]
    fn sech_half_level() {
        let s = PotentialSpec::sech(1.0, 0.0, 1.0).unwrap();
        let d = decompose(&s, 0.5).unwrap();
        let x = 2f64.acosh();
        assert_eq!(d.barrier_count(), 1);
        assert!((d.roots[0].x + x).abs() < 1e-12 && (d.roots[1].x - x).abs() < 1e-12);
        for r in &d.roots {
            assert!((s.value(r.x) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn two_hump_between_min_and_lower_peak() {
        let s = two_hump();
        let m1 = s.extrema()[1].value;
        let big_m1 = s.extrema()[0].value;
        let mu = 0.5 * (m1 + big_m1);
        let d = decompose(&s, mu).unwrap();
        assert_eq!(d.roots.len(), 4);
        assert_eq!(d.barrier_count(), 2);
        assert_eq!(d.wells.len(), 3);
        assert!(d.wells[1].is_finite());
        assert!(d.roots.windows(2).all(|w| w[0].x < w[1].x));
        // Below the saddle the humps merge.
        let low = decompose(&s, 0.5 * m1).unwrap();
        assert_eq!(low.barrier_count(), 1);
        assert_eq!(low.barriers[0].maxima_count(), 2);
        // Above the lower peak only the tall hump remains.
        let high = decompose(&s, 0.5 * (big_m1 + s.amax())).unwrap();
        assert_eq!(high.barrier_count(), 1);
        assert!(high.barriers[0].peak_x > 0.0);
    }

    #[test]
    fn critical_levels_are_flagged() {
        let s = two_hump();
        let top = decompose(&s, s.amax()).unwrap();
        assert!(top.barriers[0].critical() && top.has_double_root());
        let m1 = s.extrema()[1].value;
        let saddle = decompose(&s, m1).unwrap();
        assert_eq!(saddle.barrier_count(), 2);
        assert!(saddle.wells[1].critical());
        let lower_peak = decompose(&s, s.extrema()[0].value).unwrap();
        assert_eq!(lower_peak.barrier_count(), 2);
        assert!(lower_peak.barriers[0].critical());
    }

    #[test]
    fn above_maximum_is_an_error() {
        let s = two_hump();
        assert!(matches!(decompose(&s, 3.0), Err(Error::NoBarrier { .. })));
        assert!(decompose(&s, 0.0).is_err());
    }
}
