//! Uniform approximants on a Liouville chart, their error envelopes, the
//! connection matrices sigma (barrier) and tau (well), and the phase
//! decomposition of a solution.
//!
//! Every Wronskian is taken in x at the pre-image x0 of zeta = 0, where the
//! x-form and zeta-form Wronskians coincide. "Numeric" solutions are the
//! exact solutions singled out by the approximants' pinning points (or by
//! recessive decay at infinity), propagated with the x-space equation
//!
//!   y'' = (hbar^-2 (mu^2 - A^2) + g) y,  g = 3/4 (A'/(A+mu))^2 - 1/2 A''/(A+mu).

use crate::error::{Error, Result};
use crate::liouville::{l1, l2, LiouvilleChart, RegionKind};
use crate::numerics::ode::{self, OdeOptions, Scaled};
use crate::potential::PotentialSpec;
use crate::specfun::{Mpcf, Pcf};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;

#[cfg(test)]
mod tests;

/// Which half of the chart an approximant pair lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

/// One leading term with its zeta-derivative and the error bounds on both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Approximant {
    pub value: f64,
    pub deriv: f64,
    pub env_value: f64,
    pub env_deriv: f64,
}

/// The pair (Y, Z) on one side at one zeta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproximantSet {
    pub zeta: f64,
    pub side: Side,
    pub y: Approximant,
    pub z: Approximant,
}

/// Connection coefficients by three routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionMatrix {
    pub kind: RegionKind,
    pub hbar: f64,
    /// alpha or beta.
    pub gamma: f64,
    /// Wronskians of the propagated solutions.
    pub numeric: [[f64; 2]; 2],
    /// Wronskians of the leading terms at zeta = 0.
    pub leading: [[f64; 2]; 2],
    /// Closed-form small-hbar limit.
    pub asymptotic: [[f64; 2]; 2],
    /// det of the numeric matrix.
    pub det: f64,
}

impl ConnectionMatrix {
    /// Largest entrywise |numeric - asymptotic|.
    pub fn gap(&self) -> f64 {
        max_diff(&self.numeric, &self.asymptotic)
    }

    /// Largest entrywise |numeric - leading|.
    pub fn leading_gap(&self) -> f64 {
        max_diff(&self.numeric, &self.leading)
    }
}

fn max_diff(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> f64 {
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

/// x-space states (y, y') at x0 of the four exact solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionBasis {
    pub x0: f64,
    pub y_plus: Scaled<2>,
    pub z_plus: Scaled<2>,
    pub y_minus: Scaled<2>,
    pub z_minus: Scaled<2>,
}

/// X = gamma_j Y_j + delta_j Z_j on both sides, index 0 for side plus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseDecomposition {
    pub gamma: [f64; 2],
    pub delta: [f64; 2],
    pub v: [f64; 2],
    pub xi: [f64; 2],
}

impl PhaseDecomposition {
    pub fn xi_sum(&self) -> f64 {
        self.xi[0] + self.xi[1]
    }
}

/// Phase-fixing check for a well eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixingReport {
    pub sin_xi: [f64; 2],
    pub product: f64,
    /// C hbar^{2/3}.
    pub single_bound: f64,
    /// C hbar^{4/3}.
    pub product_bound: f64,
    pub holds: bool,
}

/// Signed Wronskian a0 b1 - a1 b0 as (mantissa, ln scale).
fn wronskian(a: &Scaled<2>, b: &Scaled<2>) -> (f64, f64) {
    (a.y[0] * b.y[1] - a.y[1] * b.y[0], a.ln_scale + b.ln_scale)
}

fn ratio(n: (f64, f64), d: (f64, f64)) -> f64 {
    n.0 / d.0 * (n.1 - d.1).exp()
}

/// (Y+, Z+, Y-, Z-) Wronskians to a 2x2 matrix.
fn connection_from(yp: &Scaled<2>, zp: &Scaled<2>, ym: &Scaled<2>, zm: &Scaled<2>) -> [[f64; 2]; 2] {
    let d = wronskian(ym, zm);
    [
        [ratio(wronskian(yp, zm), d), -ratio(wronskian(yp, ym), d)],
        [ratio(wronskian(zp, zm), d), -ratio(wronskian(zp, ym), d)],
    ]
}

/// Zeta-space data (X, dX/dzeta) to x-space (y, y').
fn to_x(state: Scaled<2>, xd: f64, xdd: f64) -> Scaled<2> {
    let [x0, x1] = state.y;
    let r = xd.sqrt();
    Scaled::with_scale([r * x0, x1 / r + 0.5 * xdd * x0 / (xd * r)], state.ln_scale)
}

/// Coefficient of y in the x-space equation.
pub fn potential_term(spec: &PotentialSpec, mu: f64, hbar: f64, x: f64) -> f64 {
    let d = spec.derivatives(x);
    let den = d[0] + mu;
    let g = 0.75 * (d[1] / den).powi(2) - 0.5 * d[2] / den;
    (mu * mu - d[0] * d[0]) / (hbar * hbar) + g
}

/// Propagate (y, y') of the x-space equation from x_from to x_to.
pub fn propagate(
    spec: &PotentialSpec,
    mu: f64,
    hbar: f64,
    x_from: f64,
    state: Scaled<2>,
    x_to: f64,
) -> Result<Scaled<2>> {
    let f = |x: f64, y: &[f64; 2]| [y[1], potential_term(spec, mu, hbar, x) * y[0]];
    ode::integrate(f, x_from, state, x_to, OdeOptions::default())
}

/// WKB recessive state K F^{-1/4} exp(-S/hbar) at x, F = mu^2 - A^2 > 0,
/// decaying towards +infinity (right) or -infinity.
pub fn recessive_state(spec: &PotentialSpec, mu: f64, hbar: f64, x: f64, right: bool, ln_amp: f64) -> Scaled<2> {
    let d = spec.derivatives(x);
    let f = mu * mu - d[0] * d[0];
    let df = -2.0 * d[0] * d[1];
    let k = f.sqrt() / hbar;
    let slope = if right { -k } else { k } - df / (4.0 * f);
    Scaled::with_scale([1.0, slope], ln_amp - 0.25 * f.ln())
}

/// A point beyond every extremum where A < 1e-3 mu.
pub fn far_point(spec: &PotentialSpec, mu: f64, right: bool) -> Result<f64> {
    let (l, r) = spec.cut_points(1e-3 * mu)?;
    Ok(if right { r } else { l })
}

/// The comparison functions fixed by one chart and one hbar.
#[derive(Debug, Clone)]
enum Comparison {
    Barrier(Pcf),
    Well(Mpcf),
}

/// Approximants and connection data for one chart at one hbar.
#[derive(Debug, Clone)]
pub struct Approximants<'a> {
    chart: &'a LiouvilleChart,
    pub hbar: f64,
    /// sqrt(2 / hbar).
    pub s: f64,
    /// Comparison-equation parameter: -alpha^2/(2 hbar) or beta^2/(2 hbar).
    pub param: f64,
    /// l1(param) or l2(param).
    pub l: f64,
    cmp: Comparison,
}

impl<'a> Approximants<'a> {
    pub fn new(chart: &'a LiouvilleChart, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return crate::error::domain(format!("hbar must be positive, got {hbar}"));
        }
        let c = chart.gamma * chart.gamma / (2.0 * hbar);
        let (param, l, cmp) = match chart.region.kind {
            RegionKind::Barrier => (-c, l1(-c)?, Comparison::Barrier(Pcf::new(-c)?)),
            RegionKind::Well => (c, l2(c)?, Comparison::Well(Mpcf::new(c)?)),
        };
        Ok(Approximants { chart, hbar, s: (2.0 / hbar).sqrt(), param, l, cmp })
    }

    pub fn chart(&self) -> &LiouvilleChart {
        self.chart
    }

    fn check(&self, zeta: f64, side: Side) -> Result<()> {
        let (z1, z2) = self.chart.zeta_bounds;
        let ok = match side {
            Side::Plus => zeta >= 0.0 && zeta <= z2,
            Side::Minus => zeta <= 0.0 && zeta >= z1,
        };
        if !ok || !zeta.is_finite() {
            return Err(Error::Range(format!("zeta = {zeta} not on side {side:?} of ({z1}, {z2})")));
        }
        Ok(())
    }

    fn var(&self, a: f64, b: f64) -> Result<f64> {
        if a >= b { Ok(0.0) } else { self.chart.variation(self.hbar, a, b) }
    }

    /// Leading terms and envelopes at zeta on the given side.
    pub fn at(&self, zeta: f64, side: Side) -> Result<ApproximantSet> {
        self.check(zeta, side)?;
        let (z1, z2) = self.chart.zeta_bounds;
        let s = self.s;
        let x = zeta.abs() * s;
        let sg = if side == Side::Plus { 1.0 } else { -1.0 };
        // Variations measured from the pinning points of Y and Z.
        let (vy, vz) = match (self.chart.region.kind, side) {
            (RegionKind::Barrier, Side::Plus) => (self.var(zeta, z2)?, self.var(0.0, zeta)?),
            (RegionKind::Barrier, Side::Minus) => (self.var(z1, zeta)?, self.var(zeta, 0.0)?),
            (RegionKind::Well, Side::Plus) => (self.var(0.0, zeta)?, self.var(zeta, z2)?),
            (RegionKind::Well, Side::Minus) => (self.var(zeta, 0.0)?, self.var(z1, zeta)?),
        };
        match &self.cmp {
            Comparison::Barrier(p) => {
                let b = p.eval(x)?;
                let k = 0.5 * (PI * self.hbar).sqrt() * self.l;
                let ey = (k * vy).exp_m1() * (-b.ln_e).exp();
                let ez = ((k * vz).exp_m1().ln() + b.ln_e).exp();
                Ok(ApproximantSet {
                    zeta,
                    side,
                    y: Approximant { value: b.u, deriv: sg * s * b.du, env_value: b.m * ey, env_deriv: s * b.n * ey },
                    z: Approximant {
                        value: b.ubar,
                        deriv: sg * s * b.dubar,
                        env_value: b.m * ez,
                        env_deriv: s * b.n * ez,
                    },
                })
            }
            Comparison::Well(m) => {
                let b = m.eval(x)?;
                let kh = (0.5 * b.ln_k).exp();
                let k = self.l / s;
                let ey = (k * vy).exp_m1() * b.e_bar;
                let ez = (k * vz).exp_m1() / b.e_bar;
                Ok(ApproximantSet {
                    zeta,
                    side,
                    y: Approximant {
                        value: kh * b.w_minus,
                        deriv: -sg * s * kh * b.dw_minus,
                        env_value: b.m_bar * ey,
                        env_deriv: s * b.n_bar * ey,
                    },
                    z: Approximant {
                        value: b.w_plus / kh,
                        deriv: sg * s * b.dw_plus / kh,
                        env_value: b.m_bar * ez,
                        env_deriv: s * b.n_bar * ez,
                    },
                })
            }
        }
    }

    /// Scaled zeta-space (Y, Y_zeta) and (Z, Z_zeta) at zeta on one side.
    fn leading_scaled(&self, zeta: f64, side: Side) -> (Scaled<2>, Scaled<2>) {
        let x = zeta.abs() * self.s;
        let ds = if side == Side::Plus { self.s } else { -self.s };
        let lift = |v: Scaled<2>, d: f64, ln: f64| Scaled::with_scale([v.y[0], d * v.y[1]], v.ln_scale + ln);
        match &self.cmp {
            Comparison::Barrier(p) => {
                let (u, ub) = p.pair(x);
                (lift(u, ds, 0.0), lift(ub, ds, 0.0))
            }
            Comparison::Well(m) => {
                let (w, wm) = m.pair(x);
                let hk = 0.5 * m.ln_k();
                (lift(wm, ds, hk), lift(w, ds, -hk))
            }
        }
    }

    /// x-space leading state at zeta for Y (first) or Z (second).
    fn leading_x(&self, zeta: f64, side: Side, want_y: bool) -> Result<(f64, Scaled<2>)> {
        let (x, xd, xdd) = self.chart.jacobian(zeta)?;
        let (y, z) = self.leading_scaled(zeta, side);
        Ok((x, to_x(if want_y { y } else { z }, xd, xdd)))
    }

    fn spec(&self) -> &PotentialSpec {
        self.chart.spec()
    }

    fn propagate(&self, x_from: f64, state: Scaled<2>, x_to: f64) -> Result<Scaled<2>> {
        propagate(self.spec(), self.chart.mu, self.hbar, x_from, state, x_to)
    }

    /// Exact barrier solution asymptotic to U at the right (or left) end.
    fn barrier_y(&self, x0: f64, right: bool) -> Result<Scaled<2>> {
        let (z1, z2) = self.chart.zeta_bounds;
        let end = if right { z2 } else { z1 };
        let side = if right { Side::Plus } else { Side::Minus };
        if end.is_finite() {
            let (x, st) = self.leading_x(end, side, true)?;
            return self.propagate(x, st, x0);
        }
        let x = self.chart.x_of_zeta(self.chart.table_end(right)?)?;
        let c = -self.param;
        let c_ln_c = if c > 0.0 { c * c.ln() } else { 0.0 };
        let ln_k = 0.5 * c_ln_c - 0.5 * c + 0.25 * (0.5 * self.hbar).ln();
        let sa = self.chart.outer_action(x)?;
        let st = recessive_state(self.spec(), self.chart.mu, self.hbar, x, right, ln_k - sa / self.hbar);
        self.propagate(x, st, x0)
    }

    /// States at x0 of the four exact solutions.
    pub fn basis(&self) -> Result<SolutionBasis> {
        let (z1, z2) = self.chart.zeta_bounds;
        let (x0, xd0, xdd0) = self.chart.jacobian(0.0)?;
        let (yp0, zp0) = self.leading_scaled(0.0, Side::Plus);
        let (ym0, zm0) = self.leading_scaled(0.0, Side::Minus);
        match self.chart.region.kind {
            RegionKind::Barrier => Ok(SolutionBasis {
                x0,
                y_plus: self.barrier_y(x0, true)?,
                z_plus: to_x(zp0, xd0, xdd0),
                y_minus: self.barrier_y(x0, false)?,
                z_minus: to_x(zm0, xd0, xdd0),
            }),
            RegionKind::Well => {
                let (xr, zr) = self.leading_x(z2, Side::Plus, false)?;
                let (xl, zl) = self.leading_x(z1, Side::Minus, false)?;
                Ok(SolutionBasis {
                    x0,
                    y_plus: to_x(yp0, xd0, xdd0),
                    z_plus: self.propagate(xr, zr, x0)?,
                    y_minus: to_x(ym0, xd0, xdd0),
                    z_minus: self.propagate(xl, zl, x0)?,
                })
            }
        }
    }

    /// Closed-form small-hbar connection matrix.
    pub fn asymptotic(&self) -> [[f64; 2]; 2] {
        match &self.cmp {
            Comparison::Barrier(_) => {
                let (sn, cs) = (0.5 * PI * self.chart.gamma * self.chart.gamma / self.hbar).sin_cos();
                [[sn, cs], [cs, -sn]]
            }
            Comparison::Well(m) => [[0.0, m.k()], [1.0 / m.k(), 0.0]],
        }
    }

    /// sigma (barrier) or tau (well).
    pub fn connection(&self) -> Result<ConnectionMatrix> {
        let b = self.basis()?;
        let numeric = connection_from(&b.y_plus, &b.z_plus, &b.y_minus, &b.z_minus);
        let (yp, zp) = self.leading_scaled(0.0, Side::Plus);
        let (ym, zm) = self.leading_scaled(0.0, Side::Minus);
        let leading = connection_from(&yp, &zp, &ym, &zm);
        let det = numeric[0][0] * numeric[1][1] - numeric[0][1] * numeric[1][0];
        Ok(ConnectionMatrix {
            kind: self.chart.region.kind,
            hbar: self.hbar,
            gamma: self.chart.gamma,
            numeric,
            leading,
            asymptotic: self.asymptotic(),
            det,
        })
    }

    /// Phase decomposition of a solution given by its state at x0; only the
    /// direction of the state matters for the phases.
    pub fn phases(&self, basis: &SolutionBasis, state: Scaled<2>) -> Result<PhaseDecomposition> {
        let x = Scaled { y: state.normalized().y, ln_scale: 0.0 };
        let mut out = PhaseDecomposition { gamma: [0.0; 2], delta: [0.0; 2], v: [0.0; 2], xi: [0.0; 2] };
        for (i, (y, z)) in [(basis.y_plus, basis.z_plus), (basis.y_minus, basis.z_minus)].iter().enumerate() {
            let d = wronskian(y, z);
            let (g, dl) = (ratio(wronskian(&x, z), d), ratio(wronskian(y, &x), d));
            if !(g.is_finite() && dl.is_finite()) || (g == 0.0 && dl == 0.0) {
                return Err(Error::UndefinedPhase(format!("coefficients ({g}, {dl}) on side {i}")));
            }
            out.gamma[i] = g;
            out.delta[i] = dl;
            out.v[i] = g.hypot(dl);
            out.xi[i] = dl.atan2(g);
        }
        Ok(out)
    }

    /// State at x0 of the solution that decays towards +infinity (right)
    /// or -infinity, started from WKB data far out.
    pub fn decaying_state(&self, right: bool) -> Result<Scaled<2>> {
        let (mu, spec) = (self.chart.mu, self.spec());
        let xf = far_point(spec, mu, right)?;
        let st = recessive_state(spec, mu, self.hbar, xf, right, 0.0);
        let x0 = self.chart.jacobian(0.0)?.0;
        self.propagate(xf, st, x0)
    }

    /// CSV of leading terms and envelopes over n points per side.
    pub fn dump_csv(&self, n: usize) -> Result<String> {
        let (z1, z2) = self.chart.zeta_bounds;
        let hi = if z2.is_finite() { z2 } else { self.chart.table_end(true)? };
        let lo = if z1.is_finite() { z1 } else { self.chart.table_end(false)? };
        let mut out = String::from(
            "# zeta [sqrt(action)], leading terms and absolute error bounds\n\
             side,zeta,y,dy,env_y,env_dy,z,dz,env_z,env_dz\n",
        );
        let n = n.max(2);
        for (side, end) in [(Side::Minus, lo), (Side::Plus, hi)] {
            for i in 0..n {
                let zeta = end * i as f64 / (n - 1) as f64;
                let a = self.at(zeta, side)?;
                let _ = writeln!(
                    out,
                    "{},{:.10e},{:.10e},{:.10e},{:.4e},{:.4e},{:.10e},{:.10e},{:.4e},{:.4e}",
                    if side == Side::Plus { "+" } else { "-" },
                    zeta,
                    a.y.value,
                    a.y.deriv,
                    a.y.env_value,
                    a.y.env_deriv,
                    a.z.value,
                    a.z.deriv,
                    a.z.env_value,
                    a.z.env_deriv
                );
            }
        }
        Ok(out)
    }
}

/// sin xi_j against C hbar^{2/3} and the product against C hbar^{4/3}.
pub fn fixing_phases(p: &PhaseDecomposition, hbar: f64, constant: f64) -> Result<FixingReport> {
    if p.v.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::UndefinedPhase(format!("amplitudes {:?}", p.v)));
    }
    let sin_xi = [p.xi[0].sin(), p.xi[1].sin()];
    let product = sin_xi[0] * sin_xi[1];
    let single_bound = constant * hbar.powf(2.0 / 3.0);
    let product_bound = constant * hbar.powf(4.0 / 3.0);
    let holds = sin_xi.iter().all(|s| s.abs() <= single_bound) && product.abs() <= product_bound;
    Ok(FixingReport { sin_xi, product, single_bound, product_bound, holds })
}

