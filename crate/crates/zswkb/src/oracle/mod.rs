//! Ground truth: the direct spectrum of the Dirac operator from a periodic
//! spectral discretization, refined by shooting on the second-order form,
//! plus Jost-solution reflection coefficients and oracle/WKB matching.
//!
//! With lambda = i mu the first-order system reads
//! hbar u' = [[mu, A], [-A, -mu]] u, so mu is an eigenvalue of the real
//! operator [[hbar d/dx, -A], [-A, -hbar d/dx]].

mod matching;
mod reflection;

pub use matching::{fit_slope, match_spectra, nearest_gaps, MatchPair, MatchReport, WkbLabel};
pub use reflection::{reflection, reflection_csv, ReflectionOptions, ReflectionSample};

use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numerics::ode::Scaled;
use crate::numerics::roots;
use crate::potential::PotentialSpec;
use crate::wkb::{far_point, propagate, recessive_state};

/// Grid and filter settings for the matrix eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscretizationParams {
    /// Half-width X of the periodic domain [-X, X).
    pub x_half: f64,
    /// Number of grid points, a power of two.
    pub n: usize,
    /// Candidates need |Re lambda| = |Im mu| below this.
    pub re_tol: f64,
    /// Eigenvalues with Im lambda = mu below this are ignored.
    pub min_im: f64,
}

impl DiscretizationParams {
    pub fn new(x_half: f64, n: usize) -> Self {
        DiscretizationParams { x_half, n, re_tol: 1e-6, min_im: 1e-3 }
    }

    /// Smallest power of two passing the resolution guard, at least 256.
    pub fn for_spec(spec: &PotentialSpec, hbar: f64, x_half: f64) -> Self {
        let n = required_points(spec, hbar, x_half).next_power_of_two().max(256);
        Self::new(x_half, n)
    }

    fn check(&self, spec: &PotentialSpec, hbar: f64) -> Result<()> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return domain(format!("hbar must be positive, got {hbar}"));
        }
        if !(self.x_half > 0.0 && self.x_half.is_finite()) {
            return domain(format!("domain half-width must be positive, got {}", self.x_half));
        }
        if !self.n.is_power_of_two() || self.n < 16 {
            return domain(format!("grid size must be a power of two >= 16, got {}", self.n));
        }
        if !(self.re_tol > 0.0 && self.min_im >= 0.0) {
            return domain("filter tolerances must be positive");
        }
        let required = required_points(spec, hbar, self.x_half);
        if self.n < required {
            return Err(Error::Resolution { n: self.n, required });
        }
        Ok(())
    }
}

/// N >= 8 X A_max / (pi hbar).
pub fn required_points(spec: &PotentialSpec, hbar: f64, x_half: f64) -> usize {
    (8.0 * x_half * spec.amax() / (std::f64::consts::PI * hbar)).ceil() as usize
}

/// Half the Nyquist limit of the grid in lambda units: hbar pi N / (4 X).
pub fn resolved_band(hbar: f64, params: &DiscretizationParams) -> f64 {
    hbar * std::f64::consts::PI * params.n as f64 / (4.0 * params.x_half)
}

/// One refined purely imaginary eigenvalue i mu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEigenvalue {
    pub mu: f64,
    /// Matrix estimate before refinement.
    pub matrix_mu: f64,
    /// |Im mu| of the matrix estimate, i.e. |Re lambda|.
    pub matrix_re_lambda: f64,
    /// Normalized mismatch Wronskian of the decaying solutions at mu.
    pub residual: f64,
    /// Fraction of eigenfunction mass within 10% of the domain edge.
    pub edge_mass: f64,
}

/// Matrix eigenvalue off the imaginary axis above the floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypothesisViolation {
    pub re_lambda: f64,
    pub im_lambda: f64,
}

/// Direct spectrum of one (potential, hbar).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    pub hbar: f64,
    pub params: DiscretizationParams,
    /// All 2N matrix eigenvalues lambda = i mu, in (Re lambda, Im lambda) pairs.
    #[serde(skip)]
    pub lambda: Vec<Complex64>,
    /// Refined eigenvalues, mu descending.
    pub eigenvalues: Vec<OracleEigenvalue>,
    /// Candidates discarded by refinement or the edge-mass filter.
    pub rejected: Vec<f64>,
    /// Off-axis eigenvalues with |Im lambda| above the floor inside the
    /// resolved band |Re lambda| < `resolved_band`.
    pub violations: Vec<HypothesisViolation>,
    /// Off-axis eigenvalues beyond the resolved band (grid artifacts near
    /// the Nyquist wavenumber).
    pub unresolved: usize,
    /// max over lambda of the distance from conj(lambda) to the spectrum.
    pub symmetry_defect: f64,
    /// A(+-X) / A_max.
    pub tail_ratio: f64,
}

impl OracleSpectrum {
    pub fn mus(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.mu).collect()
    }
}

/// Eigenvalues mu of the 2N x 2N real spectral discretization.
pub fn matrix_eigenvalues(spec: &PotentialSpec, hbar: f64, params: &DiscretizationParams) -> Result<Vec<Complex64>> {
    params.check(spec, hbar)?;
    let n = params.n;
    let len = 2.0 * params.x_half;
    let dx = len / n as f64;
    let a: Vec<f64> = (0..n).map(|j| spec.value(-params.x_half + j as f64 * dx)).collect();
    let scale = hbar * std::f64::consts::PI / len;
    let diff = |j: usize, k: usize| -> f64 {
        if j == k {
            return 0.0;
        }
        let d = j as isize - k as isize;
        let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sign * scale / (std::f64::consts::PI * d as f64 / n as f64).tan()
    };
    let m = Mat::<f64>::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => diff(i, j),
        (false, false) => -diff(i - n, j - n),
        (true, false) => {
            if i == j - n {
                -a[i]
            } else {
                0.0
            }
        }
        (false, true) => {
            if i - n == j {
                -a[j]
            } else {
                0.0
            }
        }
    });
    let ev = m
        .eigenvalues()
        .map_err(|e| Error::Integration(format!("eigensolver failed: {e:?}")))?;
    Ok(ev.into_iter().map(|z| Complex64::new(z.re, z.im)).collect())
}

/// Start of the decaying solution on one side: beyond A < 1e-3 mu and at
/// least 30 decay lengths hbar / mu past the cut, so the WKB start error is
/// damped by e^-30 at the matching point.
fn start_point(spec: &PotentialSpec, mu: f64, hbar: f64, right: bool) -> Result<f64> {
    let far = far_point(spec, mu, right)?;
    let pad = 30.0 * hbar / mu;
    Ok(if right { far + pad } else { far - pad })
}

/// Matching point: the location of the global maximum of A.
pub fn matching_point(spec: &PotentialSpec) -> f64 {
    spec.maxima().fold((f64::NEG_INFINITY, 0.0), |(v, x), e| if e.value > v { (e.value, e.x) } else { (v, x) }).1
}

/// Unit vector along (y, hbar y' / mu).
fn unit(s: Scaled<2>, mu: f64, hbar: f64) -> [f64; 2] {
    let v = [s.y[0], s.y[1] * hbar / mu];
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

/// Decaying solution integrated inward from one side to each of `stops`
/// (ordered inward), ending at the last stop.
fn inward(spec: &PotentialSpec, mu: f64, hbar: f64, right: bool, stops: &[f64]) -> Result<Vec<Scaled<2>>> {
    let mut x = start_point(spec, mu, hbar, right)?;
    let mut st = recessive_state(spec, mu, hbar, x, right, 0.0);
    let mut out = Vec::with_capacity(stops.len());
    for &to in stops {
        let inside = if right { to < x } else { to > x };
        if inside {
            st = propagate(spec, mu, hbar, x, st, to)?;
            x = to;
        }
        out.push(st);
    }
    Ok(out)
}

/// Normalized mismatch Wronskian of the decaying solutions; zero exactly at
/// eigenvalues.
pub fn mismatch(spec: &PotentialSpec, mu: f64, hbar: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < spec.amax()) {
        return Err(Error::OutOfWindow(format!("mu = {mu} outside (0, {})", spec.amax())));
    }
    let xm = matching_point(spec);
    let l = inward(spec, mu, hbar, false, &[xm])?[0];
    let r = inward(spec, mu, hbar, true, &[xm])?[0];
    let (u, v) = (unit(l, mu, hbar), unit(r, mu, hbar));
    Ok(u[0] * v[1] - u[1] * v[0])
}

/// Root of the mismatch nearest to `mu0` within `reach`.
pub fn refine(spec: &PotentialSpec, hbar: f64, mu0: f64, reach: f64) -> Result<f64> {
    let lo_limit = 0.5 * mu0;
    let hi_limit = 0.5 * (mu0 + spec.amax());
    let reach = reach.min(mu0 - lo_limit).min(hi_limit - mu0);
    if !(reach > 0.0) {
        return Err(Error::NoSolution(format!("no room to bracket near {mu0}")));
    }
    let f = |m: f64| mismatch(spec, m, hbar);
    let f0 = f(mu0)?;
    if f0 == 0.0 {
        return Ok(mu0);
    }
    let tol = 1e-15 * mu0;
    let mut step = reach / 64.0;
    let (mut lo_prev, mut hi_prev) = (mu0, mu0);
    let (mut flo, mut fhi) = (f0, f0);
    while step <= reach * (1.0 + 1e-12) {
        let (lo, hi) = (mu0 - step, mu0 + step);
        let (gl, gh) = (f(lo)?, f(hi)?);
        let left = gl.signum() != flo.signum();
        let right = gh.signum() != fhi.signum();
        match (left, right) {
            (true, true) => {
                let a = roots::brent(f_ok(spec, hbar), lo, lo_prev, tol)?;
                let b = roots::brent(f_ok(spec, hbar), hi_prev, hi, tol)?;
                return Ok(if (a - mu0).abs() <= (b - mu0).abs() { a } else { b });
            }
            (true, false) => return roots::brent(f_ok(spec, hbar), lo, lo_prev, tol),
            (false, true) => return roots::brent(f_ok(spec, hbar), hi_prev, hi, tol),
            _ => {}
        }
        (lo_prev, hi_prev, flo, fhi) = (lo, hi, gl, gh);
        step *= 2.0;
    }
    Err(Error::NoSolution(format!("no sign change of the mismatch within {reach:.3e} of {mu0}")))
}

fn f_ok(spec: &PotentialSpec, hbar: f64) -> impl FnMut(f64) -> f64 + '_ {
    move |m| mismatch(spec, m, hbar).unwrap_or(f64::NAN)
}

/// Fraction of y^2 within 10% of the edges of [-X, X], from the shooting
/// eigenfunction sampled on a uniform grid. Each half is integrated inward,
/// the stable direction for a decaying solution.
pub fn edge_mass(spec: &PotentialSpec, mu: f64, hbar: f64, x_half: f64) -> Result<f64> {
    const SAMPLES: usize = 401;
    let xm = matching_point(spec).clamp(-x_half, x_half);
    let xs: Vec<f64> = (0..SAMPLES).map(|i| -x_half + 2.0 * x_half * i as f64 / (SAMPLES - 1) as f64).collect();
    let mut lstops: Vec<f64> = xs.iter().copied().filter(|&x| x <= xm).collect();
    lstops.push(xm);
    let mut rstops: Vec<f64> = xs.iter().rev().copied().filter(|&x| x > xm).collect();
    rstops.push(xm);
    let ls = inward(spec, mu, hbar, false, &lstops)?;
    let rs = inward(spec, mu, hbar, true, &rstops)?;
    let (l, r) = (ls[ls.len() - 1], rs[rs.len() - 1]);
    let k = if l.y[0].abs() >= l.y[1].abs() { 0 } else { 1 };
    let shift = (l.y[k] / r.y[k]).abs().ln() + l.ln_scale - r.ln_scale;
    let ln_w = |s: &Scaled<2>, shift: f64| 2.0 * (s.y[0].abs().ln() + s.ln_scale + shift);
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(SAMPLES);
    samples.extend(lstops.iter().zip(&ls).take(lstops.len() - 1).map(|(x, s)| (*x, ln_w(s, 0.0))));
    samples.extend(rstops.iter().zip(&rs).take(rstops.len() - 1).map(|(x, s)| (*x, ln_w(s, shift))));
    let top = samples.iter().map(|s| s.1).filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let (mut total, mut edge) = (0.0, 0.0);
    for (x, w) in samples {
        let p = if w.is_finite() { (w - top).exp() } else { 0.0 };
        total += p;
        if x.abs() > 0.9 * x_half {
            edge += p;
        }
    }
    Ok(edge / total)
}

/// Matrix eigenvalues, imaginary-subset extraction, shooting refinement and
/// the edge-mass filter.
pub fn discrete_spectrum(spec: &PotentialSpec, hbar: f64, params: &DiscretizationParams) -> Result<OracleSpectrum> {
    let lambda: Vec<Complex64> = matrix_eigenvalues(spec, hbar, params)?
        .into_iter()
        .map(|mu| Complex64::new(0.0, 1.0) * mu)
        .collect();
    let amax = spec.amax();
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    let mut violations = Vec::new();
    let mut unresolved = 0;
    let band = resolved_band(hbar, params);
    for l in &lambda {
        if l.im <= params.min_im {
            continue;
        }
        if l.re.abs() < params.re_tol {
            if l.im < amax {
                candidates.push((l.im, l.re.abs()));
            }
        } else if l.re.abs() < band {
            violations.push(HypothesisViolation { re_lambda: l.re, im_lambda: l.im });
        } else {
            unresolved += 1;
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut eigenvalues: Vec<OracleEigenvalue> = Vec::new();
    let mut rejected = Vec::new();
    for (i, &(mu0, re)) in candidates.iter().enumerate() {
        let above = if i > 0 { candidates[i - 1].0 - mu0 } else { amax - mu0 };
        let below = candidates.get(i + 1).map_or(mu0, |c| mu0 - c.0);
        let reach = (0.45 * above.min(below)).min(0.1 * mu0).max(1e-12 * mu0);
        let mu = match refine(spec, hbar, mu0, reach) {
            Ok(mu) => mu,
            Err(_) => {
                rejected.push(mu0);
                continue;
            }
        };
        if eigenvalues.iter().any(|e| (e.mu - mu).abs() <= 1e-10 * mu) {
            rejected.push(mu0);
            continue;
        }
        let residual = mismatch(spec, mu, hbar)?.abs();
        let edge = edge_mass(spec, mu, hbar, params.x_half)?;
        if edge > 0.01 {
            rejected.push(mu0);
            continue;
        }
        eigenvalues.push(OracleEigenvalue { mu, matrix_mu: mu0, matrix_re_lambda: re, residual, edge_mass: edge });
    }
    eigenvalues.sort_by(|a, b| b.mu.total_cmp(&a.mu));
    let symmetry_defect = symmetry_defect(&lambda);
    let tail_ratio = spec.value(-params.x_half).max(spec.value(params.x_half)) / amax;
    Ok(OracleSpectrum {
        hbar,
        params: *params,
        lambda,
        eigenvalues,
        rejected,
        violations,
        unresolved,
        symmetry_defect,
        tail_ratio,
    })
}

/// max_k min_j |conj(lambda_k) - lambda_j|, with a sort by real part to
/// keep the search local.
fn symmetry_defect(lambda: &[Complex64]) -> f64 {
    let mut sorted: Vec<Complex64> = lambda.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut worst: f64 = 0.0;
    for l in lambda {
        let target = l.conj();
        let start = sorted.partition_point(|z| z.re < target.re);
        let mut best = f64::INFINITY;
        for dir in [-1isize, 1] {
            let mut i = if dir < 0 { start as isize - 1 } else { start as isize };
            while i >= 0 && (i as usize) < sorted.len() {
                let z = sorted[i as usize];
                if (z.re - target.re).abs() > best {
                    break;
                }
                best = best.min((z - target).norm());
                i += dir;
            }
        }
        worst = worst.max(best);
    }
    worst
}

/// CSV of refined eigenvalues.
pub fn spectrum_csv(s: &OracleSpectrum, header: &str) -> String {
    let mut out = format!(
        "{header}# mu [amplitude units], residual: normalized mismatch Wronskian\n\
         k,mu,matrix_mu,matrix_re_lambda,residual,edge_mass\n"
    );
    for (k, e) in s.eigenvalues.iter().enumerate() {
        out.push_str(&format!(
            "{k},{:.15e},{:.15e},{:.3e},{:.3e},{:.3e}\n",
            e.mu, e.matrix_mu, e.matrix_re_lambda, e.residual, e.edge_mass
        ));
    }
    out
}

#[cfg(test)]
mod tests;
