//! Positive, decaying, multi-humped potentials A(x): closed-form families and
//! sampled data, their derivatives, extrema and norms.

pub mod assumptions;
pub mod decompose;
pub mod jet;
pub mod spline;

pub use assumptions::{validate_assumptions, AssumptionReport, DecayClass};
pub use decompose::{decompose, Barrier, EnergyDecomposition, TurningPoint, Well};

use crate::error::{Error, Result};
use crate::numerics::{quad, roots};
use jet::Jet;
use serde::{Deserialize, Serialize};
use spline::SampledSpline;
use std::path::Path;

/// One Lorentzian lobe a / (1 + ((x - c)/w)^2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lobe {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

/// Analytic families plus spline-interpolated samples.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// a sech((x - c)/w)
    Sech { amplitude: f64, center: f64, width: f64 },
    /// sum of Lorentzian lobes
    LorentzianSum(Vec<Lobe>),
    /// a (1 + ((x - c)/w)^2)^(-p/2)
    RationalDecay { amplitude: f64, center: f64, width: f64, power: f64 },
    /// a exp(1 - (1 + ((x - c)/w)^2)^(p/2))
    ExponentialDecay { amplitude: f64, center: f64, width: f64, power: f64 },
    /// natural cubic spline with power-law tails
    Sampled(SampledSpline),
}

/// Declared tail exponents: A = O(|x|^{-r}) with |x|^{-s} bounding from below,
/// and the decay margin tau of A = O(|x|^{-1-tau}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpec {
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// A validated potential with cached extrema, maximum and L1 norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub family: Family,
    pub tail: Option<TailSpec>,
    extrema: Vec<Extremum>,
    amax: f64,
    l1_norm: f64,
    scale: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    family: String,
    #[serde(default)]
    params: serde_json::Value,
    tail: Option<TailSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SingleParams {
    #[serde(default = "one")]
    amplitude: f64,
    #[serde(default)]
    center: f64,
    #[serde(default = "one")]
    width: f64,
    power: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LorentzianParams {
    amplitudes: Vec<f64>,
    centers: Vec<f64>,
    widths: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampledParams {
    x: Vec<f64>,
    a: Vec<f64>,
}

fn one() -> f64 {
    1.0
}

fn cfg_err(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Config { path: path.into(), msg: msg.into() }
}

fn params<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T> {
    let v = if v.is_null() { serde_json::Value::Object(Default::default()) } else { v };
    serde_json::from_value(v).map_err(|e| cfg_err("params", e.to_string()))
}

fn check_positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(cfg_err(path, format!("must be positive and finite, got {v}")))
    }
}

impl PotentialSpec {
    pub fn sech(amplitude: f64, center: f64, width: f64) -> Result<Self> {
        check_positive("params.amplitude", amplitude)?;
        check_positive("params.width", width)?;
        Self::build(Family::Sech { amplitude, center, width }, None)
    }

    /// Sum of lobes given as (amplitude, center, width).
    pub fn lorentzian_sum(lobes: &[(f64, f64, f64)]) -> Result<Self> {
        if lobes.is_empty() {
            return Err(cfg_err("params.amplitudes", "at least one lobe is required"));
        }
        let mut out = Vec::with_capacity(lobes.len());
        for (i, &(a, c, w)) in lobes.iter().enumerate() {
            check_positive(&format!("params.amplitudes[{i}]"), a)?;
            check_positive(&format!("params.widths[{i}]"), w)?;
            if !c.is_finite() {
                return Err(cfg_err(format!("params.centers[{i}]"), "must be finite"));
            }
            out.push(Lobe { amplitude: a, center: c, width: w });
        }
        Self::build(Family::LorentzianSum(out), None)
    }

    pub fn rational_decay(amplitude: f64, center: f64, width: f64, power: f64) -> Result<Self> {
        check_positive("params.amplitude", amplitude)?;
        check_positive("params.width", width)?;
        if !(power > 1.0) {
            return Err(cfg_err("params.power", "must exceed 1 for an integrable tail"));
        }
        Self::build(Family::RationalDecay { amplitude, center, width, power }, None)
    }

    pub fn exponential_decay(amplitude: f64, center: f64, width: f64, power: f64) -> Result<Self> {
        check_positive("params.amplitude", amplitude)?;
        check_positive("params.width", width)?;
        check_positive("params.power", power)?;
        Self::build(Family::ExponentialDecay { amplitude, center, width, power }, None)
    }

    pub fn sampled(x: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        Self::build(Family::Sampled(SampledSpline::new(x, a)?), None)
    }

    pub fn with_tail(mut self, tail: TailSpec) -> Self {
        self.tail = Some(tail);
        self
    }

    /// Parse a `{family, params, tail}` config in TOML.
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(s).map_err(|e| cfg_err("<root>", e.to_string()))?;
        Self::from_raw(raw)
    }

    /// Parse a `{family, params, tail}` config in JSON.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(s).map_err(|e| cfg_err("<root>", e.to_string()))?;
        Self::from_raw(raw)
    }

    /// Read a config file; `.json` files are JSON, anything else TOML.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let spec = match raw.family.as_str() {
            "sech" => {
                let p: SingleParams = params(raw.params)?;
                if p.power.is_some() {
                    return Err(cfg_err("params.power", "not a parameter of the sech family"));
                }
                Self::sech(p.amplitude, p.center, p.width)?
            }
            "rational-decay" | "exponential-decay" => {
                let p: SingleParams = params(raw.params)?;
                let power = p.power.ok_or_else(|| cfg_err("params.power", "missing field"))?;
                if raw.family == "rational-decay" {
                    Self::rational_decay(p.amplitude, p.center, p.width, power)?
                } else {
                    Self::exponential_decay(p.amplitude, p.center, p.width, power)?
                }
            }
            "lorentzian-sum" => {
                let p: LorentzianParams = params(raw.params)?;
                let n = p.amplitudes.len();
                if p.centers.len() != n {
                    return Err(cfg_err("params.centers", format!("expected {n} entries")));
                }
                let widths = p.widths.unwrap_or_else(|| vec![1.0; n]);
                if widths.len() != n {
                    return Err(cfg_err("params.widths", format!("expected {n} entries")));
                }
                let lobes: Vec<_> =
                    (0..n).map(|i| (p.amplitudes[i], p.centers[i], widths[i])).collect();
                Self::lorentzian_sum(&lobes)?
            }
            "sampled" => {
                let p: SampledParams = params(raw.params)?;
                Self::sampled(p.x, p.a)?
            }
            other => {
                return Err(cfg_err(
                    "family",
                    format!(
                        "unknown family `{other}`; expected sech, lorentzian-sum, \
                         rational-decay, exponential-decay or sampled"
                    ),
                ))
            }
        };
        if let Some(t) = raw.tail {
            for (name, v) in [("tail.r", t.r), ("tail.s", t.s), ("tail.tau", t.tau)] {
                if let Some(v) = v {
                    check_positive(name, v)?;
                }
            }
        }
        Ok(Self { tail: raw.tail, ..spec })
    }

    /// Canonical JSON form of the config, used for hashing and reports.
    pub fn config_json(&self) -> serde_json::Value {
        use serde_json::json;
        let (family, params) = match &self.family {
            Family::Sech { amplitude, center, width } => {
                ("sech", json!({"amplitude": amplitude, "center": center, "width": width}))
            }
            Family::LorentzianSum(lobes) => (
                "lorentzian-sum",
                json!({
                    "amplitudes": lobes.iter().map(|l| l.amplitude).collect::<Vec<_>>(),
                    "centers": lobes.iter().map(|l| l.center).collect::<Vec<_>>(),
                    "widths": lobes.iter().map(|l| l.width).collect::<Vec<_>>(),
                }),
            ),
            Family::RationalDecay { amplitude, center, width, power } => (
                "rational-decay",
                json!({"amplitude": amplitude, "center": center, "width": width, "power": power}),
            ),
            Family::ExponentialDecay { amplitude, center, width, power } => (
                "exponential-decay",
                json!({"amplitude": amplitude, "center": center, "width": width, "power": power}),
            ),
            Family::Sampled(s) => ("sampled", json!({"x": s.x, "a": s.a})),
        };
        json!({"family": family, "params": params, "tail": self.tail})
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Sech { .. } => "sech",
            Family::LorentzianSum(_) => "lorentzian-sum",
            Family::RationalDecay { .. } => "rational-decay",
            Family::ExponentialDecay { .. } => "exponential-decay",
            Family::Sampled(_) => "sampled",
        }
    }

    fn build(family: Family, tail: Option<TailSpec>) -> Result<Self> {
        let scale = match &family {
            Family::Sech { width, .. }
            | Family::RationalDecay { width, .. }
            | Family::ExponentialDecay { width, .. } => *width,
            Family::LorentzianSum(lobes) => lobes.iter().map(|l| l.width).fold(f64::INFINITY, f64::min),
            Family::Sampled(s) => {
                let (lo, hi) = s.range();
                (hi - lo) / (s.x.len() - 1) as f64 * 4.0
            }
        };
        let mut spec =
            PotentialSpec { family, tail, extrema: Vec::new(), amax: 0.0, l1_norm: 0.0, scale };
        spec.extrema = spec.find_extrema()?;
        spec.amax = spec.extrema.iter().map(|e| e.value).fold(0.0, f64::max);
        spec.l1_norm = spec.integrate_l1()?;
        Ok(spec)
    }

    /// Taylor jet of A about x (derivatives through fourth order).
    pub fn jet(&self, x: f64) -> Jet {
        let single = |c: f64, w: f64| Jet::variable(x) * (1.0 / w) + (-c / w);
        match &self.family {
            Family::Sech { amplitude, center, width } => single(*center, *width).sech() * *amplitude,
            Family::LorentzianSum(lobes) => {
                let mut acc = Jet::constant(0.0);
                for l in lobes {
                    let u = single(l.center, l.width);
                    acc = acc + (u * u + 1.0).recip() * l.amplitude;
                }
                acc
            }
            Family::RationalDecay { amplitude, center, width, power } => {
                let u = single(*center, *width);
                (u * u + 1.0).powf(-0.5 * power) * *amplitude
            }
            Family::ExponentialDecay { amplitude, center, width, power } => {
                let u = single(*center, *width);
                (-(u * u + 1.0).powf(0.5 * power) + 1.0).exp() * *amplitude
            }
            Family::Sampled(s) => s.jet(x),
        }
    }

    /// A(x).
    pub fn value(&self, x: f64) -> f64 {
        match &self.family {
            Family::Sech { amplitude, center, width } => {
                let u = ((x - center) / width).abs();
                let e = (-u).exp();
                amplitude * 2.0 * e / (1.0 + e * e)
            }
            Family::LorentzianSum(lobes) => lobes
                .iter()
                .map(|l| {
                    let u = (x - l.center) / l.width;
                    l.amplitude / (1.0 + u * u)
                })
                .sum(),
            Family::RationalDecay { amplitude, center, width, power } => {
                let u = (x - center) / width;
                amplitude * (1.0 + u * u).powf(-0.5 * power)
            }
            Family::ExponentialDecay { amplitude, center, width, power } => {
                let u = (x - center) / width;
                amplitude * (1.0 - (1.0 + u * u).powf(0.5 * power)).exp()
            }
            Family::Sampled(s) => s.jet(x).value(),
        }
    }

    /// ln A(x), accurate where A itself underflows.
    pub fn ln_value(&self, x: f64) -> f64 {
        match &self.family {
            Family::Sech { amplitude, center, width } => {
                let u = ((x - center) / width).abs();
                amplitude.ln() - u + std::f64::consts::LN_2 - (-2.0 * u).exp().ln_1p()
            }
            Family::RationalDecay { amplitude, center, width, power } => {
                let u = (x - center) / width;
                amplitude.ln() - 0.5 * power * (u * u).ln_1p()
            }
            Family::ExponentialDecay { amplitude, center, width, power } => {
                let u = (x - center) / width;
                amplitude.ln() + 1.0 - (1.0 + u * u).powf(0.5 * power)
            }
            _ => self.value(x).ln(),
        }
    }

    /// A, A', A'', A''', A'''' at x.
    pub fn derivatives(&self, x: f64) -> [f64; jet::ORDER] {
        self.jet(x).derivatives()
    }

    /// (A, A', A'') at x.
    pub fn eval_with_derivatives(&self, x: f64) -> Result<(f64, f64, f64)> {
        if !x.is_finite() {
            return crate::error::domain(format!("non-finite abscissa {x}"));
        }
        let d = self.derivatives(x);
        Ok((d[0], d[1], d[2]))
    }

    /// A'(x).
    pub fn slope(&self, x: f64) -> f64 {
        self.jet(x).0[1]
    }

    pub fn amax(&self) -> f64 {
        self.amax
    }

    pub fn l1_norm(&self) -> f64 {
        self.l1_norm
    }

    /// Characteristic length used for scan steps.
    pub fn length_scale(&self) -> f64 {
        self.scale
    }

    /// Local extrema in increasing x; maxima and minima alternate and the
    /// first and last are maxima.
    pub fn extrema(&self) -> &[Extremum] {
        &self.extrema
    }

    pub fn maxima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Max)
    }

    pub fn minima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Min)
    }

    /// Abscissae (x_l, x_r) outside which A < level on each side.
    pub fn cut_points(&self, level: f64) -> Result<(f64, f64)> {
        let first = self.extrema[0].x;
        let last = self.extrema[self.extrema.len() - 1].x;
        let g = |x: f64| self.ln_value(x) - level.ln();
        let outward = |x0: f64, dir: f64| -> Result<f64> {
            if g(x0) < 0.0 {
                return Ok(x0);
            }
            let mut step = self.scale;
            let mut inner = x0;
            loop {
                let x = x0 + dir * step;
                if g(x) < 0.0 {
                    return roots::brent(g, inner, x, 1e-12 * x.abs().max(1.0));
                }
                inner = x;
                step *= 2.0;
                if step > 1e300 {
                    return Err(Error::NoSolution(format!("A does not fall below {level}")));
                }
            }
        };
        Ok((outward(first, -1.0)?, outward(last, 1.0)?))
    }

    fn find_extrema(&self) -> Result<Vec<Extremum>> {
        let single = |c: f64| Ok(vec![Extremum { x: c, value: self.value(c), kind: ExtremumKind::Max }]);
        let (lo, hi, step) = match &self.family {
            Family::Sech { center, .. }
            | Family::RationalDecay { center, .. }
            | Family::ExponentialDecay { center, .. } => return single(*center),
            Family::LorentzianSum(lobes) if lobes.len() == 1 => return single(lobes[0].center),
            Family::LorentzianSum(lobes) => {
                let lo = lobes.iter().map(|l| l.center).fold(f64::INFINITY, f64::min);
                let hi = lobes.iter().map(|l| l.center).fold(f64::NEG_INFINITY, f64::max);
                (lo, hi, self.scale / 40.0)
            }
            Family::Sampled(s) => {
                let (lo, hi) = s.range();
                let h = s.x.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
                (lo, hi, h / 8.0)
            }
        };
        let n = ((hi - lo) / step).ceil().max(1.0) as usize;
        let d = |x: f64| self.slope(x);
        let mut out = Vec::new();
        for (a, b) in roots::scan_brackets(d, lo, hi, n) {
            let x = roots::brent(d, a, b, 1e-14 * a.abs().max(1.0))?;
            // Slope goes + to - at a maximum.
            let kind = if d(a) > 0.0 || d(b) < 0.0 { ExtremumKind::Max } else { ExtremumKind::Min };
            if out.last().is_some_and(|e: &Extremum| (e.x - x).abs() < 1e-10 * step.max(1.0)) {
                continue;
            }
            out.push(Extremum { x, value: self.value(x), kind });
        }
        // Tails of the sampled family are monotone; a maximum may sit on the
        // sample boundary when the data starts or ends rising.
        if let Family::Sampled(_) = self.family {
            if out.first().is_none_or(|e| e.kind == ExtremumKind::Min) && d(lo) < 0.0 {
                out.insert(0, Extremum { x: lo, value: self.value(lo), kind: ExtremumKind::Max });
            }
            if out.last().is_none_or(|e| e.kind == ExtremumKind::Min) && d(hi) > 0.0 {
                out.push(Extremum { x: hi, value: self.value(hi), kind: ExtremumKind::Max });
            }
        }
        let alternates = out.windows(2).all(|w| w[0].kind != w[1].kind);
        let ends_max = out.first().is_some_and(|e| e.kind == ExtremumKind::Max)
            && out.last().is_some_and(|e| e.kind == ExtremumKind::Max);
        if !alternates || !ends_max {
            return Err(cfg_err("params", "could not resolve the extremum structure of A"));
        }
        Ok(out)
    }

    fn integrate_l1(&self) -> Result<f64> {
        let f = |x: f64| self.value(x);
        let tol = quad::QuadTol::new(1e-15, 1e-13);
        let lo = self.extrema[0].x;
        let hi = self.extrema[self.extrema.len() - 1].x;
        let mut total = quad::from_neg_infinity(f, lo, tol)?.value + quad::to_infinity(f, hi, tol)?.value;
        for w in self.extrema.windows(2) {
            total += quad::adaptive(f, w[0].x, w[1].x, tol)?.value;
        }
        Ok(total)
    }
}
