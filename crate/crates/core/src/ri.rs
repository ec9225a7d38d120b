//! Rearrangement-invariant spaces on (-1, 1): Lᵖ, Lorentz L^{p,q} and weak
//! Lᵖ = L^{p,∞}; distribution functions, decreasing rearrangements,
//! dilations and Boyd indices.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{self, func, integrate_with, Func, Function, Piecewise};
use crate::grid::{Grid, GridFunction};
use crate::quadrature::{integrate_checked, Integral, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SpaceSpec {
    Lp { p: f64 },
    Lorentz { p: f64, q: f64 },
    WeakLp { p: f64 },
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::structural(format!("exponent p = {p} must satisfy 1 < p < ∞")))
    }
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(SpaceSpec::Lp { p })
    }

    pub fn lorentz(p: f64, q: f64) -> Result<Self> {
        check_exponent(p)?;
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::structural(format!("second exponent q = {q} must satisfy 1 ≤ q < ∞")));
        }
        Ok(SpaceSpec::Lorentz { p, q })
    }

    pub fn weak_lp(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(SpaceSpec::WeakLp { p })
    }

    pub fn p(&self) -> f64 {
        match *self {
            SpaceSpec::Lp { p } | SpaceSpec::Lorentz { p, .. } | SpaceSpec::WeakLp { p } => p,
        }
    }

    pub fn boyd_lower(&self) -> f64 {
        1.0 / self.p()
    }

    pub fn boyd_upper(&self) -> f64 {
        1.0 / self.p()
    }

    pub fn order_continuous(&self) -> bool {
        !matches!(self, SpaceSpec::WeakLp { .. })
    }

    /// The Köthe dual X′.
    pub fn associate(&self) -> SpaceSpec {
        let conj = |r: f64| r / (r - 1.0);
        match *self {
            SpaceSpec::Lp { p } => SpaceSpec::Lp { p: conj(p) },
            SpaceSpec::Lorentz { p, q } if q > 1.0 => SpaceSpec::Lorentz {
                p: conj(p),
                q: conj(q),
            },
            SpaceSpec::Lorentz { p, .. } => SpaceSpec::WeakLp { p: conj(p) },
            SpaceSpec::WeakLp { p } => SpaceSpec::Lorentz { p: conj(p), q: 1.0 },
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lp { p } => write!(f, "Lp:{p}"),
            SpaceSpec::Lorentz { p, q } => write!(f, "Lorentz:{p},{q}"),
            SpaceSpec::WeakLp { p } => write!(f, "WeakLp:{p}"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    /// `Lp:1.5`, `Lorentz:3,1`, `WeakLp:2`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.split_once(':').ok_or_else(|| Error::Parse {
            position: 0,
            message: format!("expected KIND:ARGS in {s:?}"),
        })?;
        let offset = kind.len() + 1;
        let nums: Vec<f64> = args
            .split(',')
            .scan(offset, |pos, a| {
                let start = *pos;
                *pos += a.len() + 1;
                Some(a.trim().parse::<f64>().map_err(|_| Error::Parse {
                    position: start,
                    message: format!("not a number: {a:?}"),
                }))
            })
            .collect::<Result<_>>()?;
        let arity = |n: usize| -> Result<()> {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::Parse {
                    position: offset,
                    message: format!("{kind} takes {n} argument(s), got {}", nums.len()),
                })
            }
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "lp" => {
                arity(1)?;
                SpaceSpec::lp(nums[0])
            }
            "lorentz" => {
                arity(2)?;
                SpaceSpec::lorentz(nums[0], nums[1])
            }
            "weaklp" => {
                arity(1)?;
                SpaceSpec::weak_lp(nums[0])
            }
            other => Err(Error::Parse {
                position: 0,
                message: format!("unknown space {other:?}; expected Lp, Lorentz or WeakLp"),
            }),
        }
    }
}

/// Decreasing rearrangement of a step function: value v_j on
/// [T_{j-1}, T_j), values strictly decreasing and positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rearrangement {
    values: Vec<f64>,
    ends: Vec<f64>,
}

const TIE: f64 = 1e-12;

impl Rearrangement {
    /// From (|value|, measure) pairs; equal values are merged.
    pub fn from_weighted<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Self {
        let mut v: Vec<(f64, f64)> = pairs
            .into_iter()
            .filter(|&(a, m)| a > 0.0 && m > 0.0)
            .collect();
        v.sort_by(|x, y| y.0.total_cmp(&x.0));
        let mut values: Vec<f64> = Vec::with_capacity(v.len());
        let mut ends: Vec<f64> = Vec::with_capacity(v.len());
        let mut total = 0.0;
        for (a, m) in v {
            total += m;
            match values.last() {
                Some(&last) if last - a <= TIE * last => {
                    *ends.last_mut().unwrap() = total;
                }
                _ => {
                    values.push(a);
                    ends.push(total);
                }
            }
        }
        Rearrangement { values, ends }
    }

    pub fn from_grid(f: &GridFunction) -> Self {
        Self::from_weighted(
            f.values()
                .iter()
                .zip(f.weights())
                .map(|(v, &w)| (v.norm(), w)),
        )
    }

    /// Exact rearrangement of a step function.
    pub fn from_steps(f: &Piecewise) -> Option<Self> {
        let cells = f.step_cells()?;
        Some(Self::from_weighted(
            cells.into_iter().map(|(a, b, v)| (v.norm(), b - a)),
        ))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Right ends T_j of the steps.
    pub fn ends(&self) -> &[f64] {
        &self.ends
    }

    /// Measure of the support.
    pub fn support(&self) -> f64 {
        self.ends.last().copied().unwrap_or(0.0)
    }

    /// f*(t), right-continuous.
    pub fn value_at(&self, t: f64) -> f64 {
        let j = self.ends.partition_point(|&e| e <= t);
        self.values.get(j).copied().unwrap_or(0.0)
    }

    /// Piecewise-linear through the step midpoints, for rearrangements of
    /// sampled continuous functions.
    pub fn interpolated(&self, t: f64) -> f64 {
        if self.values.is_empty() || t >= self.support() {
            return 0.0;
        }
        let mid = |j: usize| {
            let lo = if j == 0 { 0.0 } else { self.ends[j - 1] };
            0.5 * (lo + self.ends[j])
        };
        let n = self.values.len();
        if t <= mid(0) {
            return self.values[0];
        }
        if t >= mid(n - 1) {
            return self.values[n - 1];
        }
        let j = self.ends.partition_point(|&e| e <= t);
        // t lies between mid(k) and mid(k+1) for k = j-1 or j
        let k = if t < mid(j) { j - 1 } else { j };
        let (m0, m1) = (mid(k), mid(k + 1));
        let s = (t - m0) / (m1 - m0);
        self.values[k] * (1.0 - s) + self.values[k + 1] * s
    }

    /// μ{|f| > λ}.
    pub fn distribution(&self, lambda: f64) -> f64 {
        let j = self.values.partition_point(|&v| v > lambda);
        if j == 0 {
            0.0
        } else {
            self.ends[j - 1]
        }
    }

    fn steps(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(j, &v)| {
            let lo = if j == 0 { 0.0 } else { self.ends[j - 1] };
            (v, lo, self.ends[j])
        })
    }

    /// Norm of the step function with this rearrangement.
    pub fn norm(&self, x: &SpaceSpec) -> f64 {
        match *x {
            SpaceSpec::Lp { p } => self
                .steps()
                .map(|(v, lo, hi)| v.powf(p) * (hi - lo))
                .sum::<f64>()
                .powf(1.0 / p),
            SpaceSpec::Lorentz { p, q } => self
                .steps()
                .map(|(v, lo, hi)| v.powf(q) * (p / q) * (hi.powf(q / p) - lo.powf(q / p)))
                .sum::<f64>()
                .powf(1.0 / q),
            SpaceSpec::WeakLp { p } => self
                .steps()
                .map(|(v, _, hi)| hi.powf(1.0 / p) * v)
                .fold(0.0, f64::max),
        }
    }
}

impl Rearrangement {
    /// Norm of a function known through weighted samples. Lᵖ and Lorentz
    /// use the step norm; the weak norm pairs each T_j with the next value,
    /// max(T_j^{1/p} v_{j+1}, T_n^{1/p} v_n), since the step value on the
    /// first cells overstates f* of an unbounded function there.
    pub fn sampled_norm(&self, x: &SpaceSpec) -> f64 {
        match *x {
            SpaceSpec::WeakLp { p } => {
                let n = self.values.len();
                if n == 0 {
                    return 0.0;
                }
                let last = self.ends[n - 1].powf(1.0 / p) * self.values[n - 1];
                (0..n - 1)
                    .map(|j| self.ends[j].powf(1.0 / p) * self.values[j + 1])
                    .fold(last, f64::max)
            }
            _ => self.norm(x),
        }
    }
}

/// μ{t : |f(t)| > λ} from the node weights.
pub fn distribution(f: &GridFunction, lambda: f64) -> f64 {
    f.values()
        .iter()
        .zip(f.weights())
        .filter(|(v, _)| v.norm() > lambda)
        .map(|(_, w)| w)
        .sum()
}

pub fn rearrangement(f: &GridFunction) -> Rearrangement {
    Rearrangement::from_grid(f)
}

pub fn norm(f: &GridFunction, x: &SpaceSpec) -> f64 {
    match *x {
        SpaceSpec::Lp { p } => f
            .values()
            .iter()
            .zip(f.weights())
            .map(|(v, w)| w * v.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
        _ => Rearrangement::from_grid(f).sampled_norm(x),
    }
}

/// A norm that may be infinite; `resolved` is false when the value rests on
/// a divergence test rather than on a converged quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub resolved: bool,
}

impl NormValue {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// Nodes used to sample callables whose Lorentz norm has no closed form.
pub const SAMPLING_NODES: usize = 4096;

/// Norm of a callable: exact for step functions, adaptive quadrature with a
/// divergence test for Lᵖ, dense sampling otherwise.
pub fn norm_fn(f: &Func, x: &SpaceSpec) -> Result<NormValue> {
    if let Some(r) = f.piecewise().and_then(Rearrangement::from_steps) {
        return Ok(NormValue {
            value: r.norm(x),
            resolved: true,
        });
    }
    match *x {
        SpaceSpec::Lp { p } => lp_norm_fn(f.as_ref(), p),
        _ => {
            let grid = Arc::new(Grid::chebyshev_gauss(SAMPLING_NODES)?);
            let g = GridFunction::sample(grid, f.as_ref())?;
            Ok(NormValue {
                value: norm(&g, x),
                resolved: true,
            })
        }
    }
}

/// (∫|f|ᵖ dx)^{1/p}, +∞ when the integral diverges at an endpoint or a
/// breakpoint of f.
pub fn lp_norm_fn(f: &dyn Function, p: f64) -> Result<NormValue> {
    let angles: Vec<f64> = f.breakpoints().iter().map(|x| x.acos()).collect();
    let r = integrate_checked(
        |th| Ok(C64::new(f.eval_angle(th)?.norm().powf(p) * th.sin(), 0.0)),
        0.0,
        PI,
        &angles,
        Tolerance::with_abs(1e-14),
    )?;
    Ok(match r {
        Integral::Finite(v) => NormValue {
            value: v.re.max(0.0).powf(1.0 / p),
            resolved: true,
        },
        Integral::Divergent => NormValue {
            value: f64::INFINITY,
            resolved: false,
        },
    })
}

/// E_t f resampled on the nodes of f: f(t x) where |t x| < 1, else 0.
pub fn dilate(f: &GridFunction, t: f64) -> Result<GridFunction> {
    if !(t > 0.0) {
        return Err(Error::structural(format!("dilation factor {t} must be positive")));
    }
    Ok(f.map(|x, _| {
        let y = t * x;
        if y.abs() < 1.0 {
            f.linear_at(y)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// E_t f for a callable; exact for step functions.
pub fn dilate_fn(f: &Func, t: f64) -> Result<Func> {
    if !(t > 0.0) {
        return Err(Error::structural(format!("dilation factor {t} must be positive")));
    }
    Ok(function::dilate(f, t))
}

/// Lower estimate of ‖E_t‖ on X: max over the dictionary of ‖E_t f‖/‖f‖.
pub fn dilation_opnorm(x: &SpaceSpec, t: f64, dictionary: &[Func]) -> Result<f64> {
    if dictionary.is_empty() {
        return Err(Error::structural("empty dictionary"));
    }
    let mut best: f64 = 0.0;
    for f in dictionary {
        let n = norm_fn(f, x)?.value;
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::structural(format!(
                "dictionary entry {f:?} has norm {n} in {x}"
            )));
        }
        let d = norm_fn(&dilate_fn(f, t)?, x)?.value;
        best = best.max(d / n);
    }
    Ok(best)
}

/// Boyd index estimates from log ‖E_{1/t}‖ / log t: the sup over t < 1
/// and the inf over t > 1.
pub fn boyd_estimate(x: &SpaceSpec, t_grid: &[f64], dictionary: &[Func]) -> Result<(f64, f64)> {
    if t_grid.iter().any(|&t| !(t > 0.0) || t == 1.0) {
        return Err(Error::structural("t grid must contain positive values other than 1"));
    }
    let below: Vec<f64> = t_grid.iter().copied().filter(|&t| t < 1.0).collect();
    let above: Vec<f64> = t_grid.iter().copied().filter(|&t| t > 1.0).collect();
    if below.is_empty() || above.is_empty() {
        return Err(Error::structural("t grid must span both (0, 1) and (1, ∞)"));
    }
    let ratio = |t: f64| -> Result<f64> { Ok(dilation_opnorm(x, 1.0 / t, dictionary)?.ln() / t.ln()) };
    let mut lower = f64::NEG_INFINITY;
    for t in below {
        lower = lower.max(ratio(t)?);
    }
    let mut upper = f64::INFINITY;
    for t in above {
        upper = upper.min(ratio(t)?);
    }
    Ok((lower, upper))
}

/// Step functions concentrated near 0, so that expanding dilations down to
/// a factor 1/10 see their whole support.
pub fn step_dictionary() -> Vec<Func> {
    let c = |v: f64| C64::new(v, 0.0);
    let mut out: Vec<Func> = Vec::new();
    for h in [0.01, 0.03, 0.09] {
        out.push(func(Piecewise::steps(&[(-h, h, c(1.0))])));
    }
    out.push(func(Piecewise::steps(&[
        (-0.09, -0.03, c(1.0)),
        (-0.03, 0.0, c(3.0)),
        (0.0, 0.02, c(-2.0)),
        (0.02, 0.08, c(0.5)),
    ])));
    out.push(func(Piecewise::steps(&[
        (-0.05, -0.01, c(0.25)),
        (-0.01, 0.01, c(4.0)),
        (0.01, 0.05, c(0.25)),
    ])));
    out.push(func(Piecewise::constant(c(1.0))));
    out
}

/// Estimate of lim sup_{t→0+} t^{1/p} f*(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayEstimate {
    pub value: f64,
    /// Smallest t resolved by the samples.
    pub resolution: f64,
    /// False when the sampled t are too coarse or the extrapolation moved
    /// the raw value by more than a quarter.
    pub confident: bool,
    pub samples: Vec<(f64, f64)>,
}

/// t^{1/p} f*(t) at t = t_res·2^k, extrapolated to t → 0 by Aitken's Δ².
pub fn xa_decay(f: &GridFunction, p: f64) -> Result<DecayEstimate> {
    check_exponent(p)?;
    let r = Rearrangement::from_grid(f);
    if r.values().is_empty() {
        return Ok(DecayEstimate {
            value: 0.0,
            resolution: 0.0,
            confident: true,
            samples: Vec::new(),
        });
    }
    let k = r.values().len().min(8) - 1;
    let t_res = r.ends()[k];
    let samples: Vec<(f64, f64)> = (0..3)
        .map(|i| {
            let t = t_res * 2f64.powi(i);
            (t, t.powf(1.0 / p) * r.interpolated(t))
        })
        .collect();
    // order from coarse to fine so the sequence approaches the limit
    let (a0, a1, a2) = (samples[2].1, samples[1].1, samples[0].1);
    let d1 = a1 - a0;
    let d2 = a2 - a1;
    let den = d2 - d1;
    let raw = a2;
    let extrapolated = if den.abs() > 1e-14 * raw.abs().max(1e-300) {
        a2 - d2 * d2 / den
    } else {
        a2
    };
    let value = extrapolated.max(0.0);
    let confident = t_res < 0.01 && (value - raw).abs() <= 0.25 * raw.abs().max(1e-12);
    Ok(DecayEstimate {
        value,
        resolution: t_res,
        confident,
        samples,
    })
}

/// ⟨f, g⟩ = ∫ f g dμ on a common grid.
pub fn pairing(f: &GridFunction, g: &GridFunction) -> Result<C64> {
    Ok(f.zip_with(g, |a, b| a * b)?.integrate())
}

/// ⟨f, g⟩ for callables, by adaptive quadrature.
pub fn pairing_fn(f: &dyn Function, g: &dyn Function) -> Result<C64> {
    integrate_with(&[f, g], |v| v[0] * v[1], Tolerance::with_abs(1e-13))
}
