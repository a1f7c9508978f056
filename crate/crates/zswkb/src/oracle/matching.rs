//! Pairing of oracle and WKB eigenvalues and convergence-rate fits.

use serde::Serialize;

use crate::spectrum::WkbEigenvalue;

/// Barrier node and quantum number of a WKB eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WkbLabel {
    pub l: usize,
    pub n: usize,
    pub mu: f64,
}

impl From<&WkbEigenvalue> for WkbLabel {
    fn from(e: &WkbEigenvalue) -> Self {
        WkbLabel { l: e.l, n: e.n, mu: e.mu }
    }
}

/// One greedy pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchPair {
    pub oracle_mu: f64,
    pub wkb: WkbLabel,
    pub gap: f64,
    /// Every WKB eigenvalue within hbar^{5/3} of the oracle value, nearest first.
    pub candidates: Vec<WkbLabel>,
}

/// Result of matching one (potential, hbar).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub hbar: f64,
    pub pairs: Vec<MatchPair>,
    pub unmatched_oracle: Vec<f64>,
    pub unmatched_wkb: Vec<WkbLabel>,
    pub cardinality_mismatch: bool,
    /// Largest pair gap, `None` when there are no pairs.
    pub max_gap: Option<f64>,
}

/// Greedy nearest pairing: repeatedly take the closest unused pair.
pub fn match_spectra(hbar: f64, oracle: &[f64], wkb: &[WkbEigenvalue]) -> MatchReport {
    let mut all: Vec<(f64, usize, usize)> = Vec::with_capacity(oracle.len() * wkb.len());
    for (i, o) in oracle.iter().enumerate() {
        for (j, w) in wkb.iter().enumerate() {
            all.push(((o - w.mu).abs(), i, j));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used_o = vec![false; oracle.len()];
    let mut used_w = vec![false; wkb.len()];
    let mut pairs = Vec::new();
    let reach = hbar.powf(5.0 / 3.0);
    for (gap, i, j) in all {
        if used_o[i] || used_w[j] {
            continue;
        }
        used_o[i] = true;
        used_w[j] = true;
        let mut near: Vec<&WkbEigenvalue> =
            wkb.iter().filter(|w| (w.mu - oracle[i]).abs() <= reach.max(gap)).collect();
        near.sort_by(|a, b| (a.mu - oracle[i]).abs().total_cmp(&(b.mu - oracle[i]).abs()));
        pairs.push(MatchPair {
            oracle_mu: oracle[i],
            wkb: (&wkb[j]).into(),
            gap,
            candidates: near.into_iter().map(WkbLabel::from).collect(),
        });
    }
    pairs.sort_by(|a, b| b.oracle_mu.total_cmp(&a.oracle_mu));
    let unmatched_oracle: Vec<f64> = oracle.iter().zip(&used_o).filter(|(_, u)| !**u).map(|(o, _)| *o).collect();
    let unmatched_wkb: Vec<WkbLabel> = wkb.iter().zip(&used_w).filter(|(_, u)| !**u).map(|(w, _)| w.into()).collect();
    let max_gap = pairs.iter().map(|p| p.gap).reduce(f64::max);
    MatchReport {
        hbar,
        cardinality_mismatch: oracle.len() != wkb.len(),
        pairs,
        unmatched_oracle,
        unmatched_wkb,
        max_gap,
    }
}

/// Distance from each oracle eigenvalue in `window` to the nearest WKB
/// eigenvalue of any barrier node.
pub fn nearest_gaps(oracle: &[f64], wkb: &[WkbEigenvalue], window: (f64, f64)) -> Vec<(f64, f64)> {
    oracle
        .iter()
        .filter(|o| **o > window.0 && **o < window.1)
        .map(|o| (*o, wkb.iter().map(|w| (w.mu - o).abs()).fold(f64::INFINITY, f64::min)))
        .collect()
}

/// Least-squares slope of log(gap) against log(hbar); `None` with fewer
/// than two usable points.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(h, g)| *h > 0.0 && *g > 0.0 && g.is_finite())
        .map(|(h, g)| (h.ln(), g.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
