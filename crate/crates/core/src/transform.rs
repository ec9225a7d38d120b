//! Evaluation of T(f)(t) = (1/π) p.v.∫ f(x)/(x - t) dx on (-1, 1).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::chebyshev::{transform_series, ChebyshevSeries, ChebyshevTransform, Weighting};
use crate::error::{Error, Result};
use crate::function::{self, hilbert, pv_angle, weight_w, Func, Function};
use crate::grid::{Grid, GridFunction, IntervalSet, NodeFamily};
use crate::quadrature::{adaptive_split, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PvMethod {
    /// (1/π)[∫ (f(x) - f(t))/(x - t) dx + f(t) ln((1-t)/(1+t))].
    SubtractSingularity,
    /// x = cos θ with the Glauert-subtracted integrand.
    CosineSubstitution,
    /// Chebyshev interpolation of f, f·w or f/w followed by the exact
    /// coefficient relations.
    Spectral(Weighting),
    /// Closed forms when the structure of f allows them; for sampled
    /// functions, the spectral weighting with the fastest-decaying series.
    ClosedFormAuto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvConfig {
    /// Half-width of the band around t skipped by the subtraction method,
    /// where the difference quotient loses all digits.
    pub epsilon_floor: f64,
    pub method: PvMethod,
    pub tolerance: f64,
    /// Nodes used when a callable has to be sampled for the spectral method.
    pub nodes: usize,
}

impl Default for PvConfig {
    fn default() -> Self {
        PvConfig {
            epsilon_floor: 1e-12,
            method: PvMethod::ClosedFormAuto,
            tolerance: 1e-12,
            nodes: 512,
        }
    }
}

impl PvConfig {
    pub fn with_method(method: PvMethod) -> Self {
        PvConfig {
            method,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_floor > 0.0) || !(self.tolerance > 0.0) {
            return Err(Error::structural(
                "epsilon_floor and tolerance must be positive",
            ));
        }
        if self.nodes == 0 {
            return Err(Error::structural("nodes must be positive"));
        }
        Ok(())
    }

    fn quadrature_tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.tolerance,
            rel: self.tolerance,
            ..Default::default()
        }
    }
}

/// What the transform is applied to.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Grid(&'a GridFunction),
    Function(&'a Func),
}

impl<'a> From<&'a GridFunction> for Source<'a> {
    fn from(g: &'a GridFunction) -> Self {
        Source::Grid(g)
    }
}

impl<'a> From<&'a Func> for Source<'a> {
    fn from(f: &'a Func) -> Self {
        Source::Function(f)
    }
}

/// T(f)(t).
pub fn fht_point<'a>(f: impl Into<Source<'a>>, t: f64, cfg: &PvConfig) -> Result<C64> {
    cfg.validate()?;
    if !(t.abs() < 1.0) {
        return Err(Error::Domain { x: t });
    }
    match (f.into(), cfg.method) {
        (Source::Function(f), PvMethod::ClosedFormAuto) => hilbert(f).eval(t),
        (Source::Function(f), PvMethod::SubtractSingularity) => pv_subtract(f.as_ref(), t, cfg),
        (Source::Function(f), PvMethod::CosineSubstitution) => {
            if f.breakpoints().contains(&t) {
                return Err(Error::Singularity { x: t });
            }
            let angles: Vec<f64> = f.breakpoints().iter().map(|x| x.acos()).collect();
            pv_angle(f.as_ref(), t.acos(), &angles, cfg.quadrature_tolerance())
        }
        (Source::Function(f), PvMethod::Spectral(w)) => {
            let grid = Arc::new(Grid::chebyshev_gauss(cfg.nodes)?);
            let g = GridFunction::sample(grid, f.as_ref())?;
            Ok(spectral_transform(&g, Some(w))?.eval(t))
        }
        (Source::Grid(g), PvMethod::Spectral(w)) => Ok(spectral_transform(g, Some(w))?.eval(t)),
        (Source::Grid(g), PvMethod::ClosedFormAuto) => Ok(spectral_transform(g, None)?.eval(t)),
        (Source::Grid(g), _) => {
            let f = g.interpolant()?;
            fht_point(&f, t, cfg)
        }
    }
}

/// The subtraction method on the x axis.
pub fn pv_subtract(f: &dyn Function, t: f64, cfg: &PvConfig) -> Result<C64> {
    let breaks = f.breakpoints();
    if breaks.contains(&t) {
        return Err(Error::Method(format!(
            "f is discontinuous at t = {t}; split the integral at the discontinuity and use the closed form"
        )));
    }
    let ft = f.eval(t)?;
    let eps = cfg.epsilon_floor;
    let tol = cfg.quadrature_tolerance();
    let quotient = |x: f64| -> Result<C64> { Ok((f.eval(x)? - ft) / (x - t)) };
    let left = adaptive_split(quotient, -1.0, t - eps, &breaks, tol)?;
    let right = adaptive_split(quotient, t + eps, 1.0, &breaks, tol)?;
    if !(left.converged && right.converged) {
        return Err(Error::Divergent(format!(
            "subtracted integral did not converge at t = {t}"
        )));
    }
    let log = ((1.0 - t) / (1.0 + t)).ln();
    Ok((left.value + right.value + ft * log) / PI)
}

/// Spectral transform of samples on a Chebyshev–Gauss grid. With `None`
/// the weighting whose series decays fastest is used.
pub fn spectral_transform(g: &GridFunction, weighting: Option<Weighting>) -> Result<ChebyshevTransform> {
    if g.family() != NodeFamily::ChebyshevGauss {
        return Err(Error::Method(
            "the spectral method needs samples at Chebyshev-Gauss nodes".into(),
        ));
    }
    let fit = |w: Weighting| -> Result<ChebyshevSeries> {
        let vals: Vec<C64> = g
            .nodes()
            .iter()
            .zip(g.values())
            .map(|(&x, &v)| {
                let wx = weight_w(x)?;
                Ok(match w {
                    Weighting::Plain => v,
                    Weighting::OverW => v * wx,
                    Weighting::TimesW => v / wx,
                })
            })
            .collect::<Result<_>>()?;
        ChebyshevSeries::fit(&vals)
    };
    let (w, s) = match weighting {
        Some(w) => (w, fit(w)?),
        None => {
            let mut best: Option<(f64, Weighting, ChebyshevSeries)> = None;
            for w in [Weighting::Plain, Weighting::OverW, Weighting::TimesW] {
                let s = fit(w)?;
                let total: f64 = s.coefficients().iter().map(|c| c.norm()).sum();
                let k = (s.coefficients().len() / 4).max(1);
                let score = if total > 0.0 { s.tail(k) / total } else { 0.0 };
                if best.as_ref().map_or(true, |b| score < b.0) {
                    best = Some((score, w, s));
                }
            }
            let (_, w, s) = best.expect("three candidates");
            (w, s)
        }
    };
    Ok(transform_series(&s, w))
}

/// T(f) at every node of the grid of f.
pub fn fht_grid(f: &GridFunction, cfg: &PvConfig) -> Result<GridFunction> {
    cfg.validate()?;
    let values: Vec<C64> = match cfg.method {
        PvMethod::Spectral(w) => {
            let tr = spectral_transform(f, Some(w))?;
            f.nodes().par_iter().map(|&x| tr.eval(x)).collect()
        }
        PvMethod::ClosedFormAuto if f.family() == NodeFamily::ChebyshevGauss => {
            let tr = spectral_transform(f, None)?;
            f.nodes().par_iter().map(|&x| tr.eval(x)).collect()
        }
        _ => {
            let interp = f.interpolant()?;
            let cfg = if cfg.method == PvMethod::ClosedFormAuto {
                PvConfig {
                    method: PvMethod::SubtractSingularity,
                    ..*cfg
                }
            } else {
                *cfg
            };
            f.nodes()
                .par_iter()
                .map(|&x| fht_point(&interp, x, &cfg))
                .collect::<Result<_>>()?
        }
    };
    GridFunction::new(f.grid().clone(), values)
}

/// T(f) for a callable f, sampled at the nodes of `grid`.
pub fn fht_sample(f: &Func, grid: Arc<Grid>, cfg: &PvConfig) -> Result<GridFunction> {
    cfg.validate()?;
    let values: Vec<C64> = match cfg.method {
        PvMethod::ClosedFormAuto => {
            let tf = hilbert(f);
            grid.nodes()
                .par_iter()
                .map(|&x| tf.eval(x))
                .collect::<Result<_>>()?
        }
        PvMethod::Spectral(w) => {
            let cg = Arc::new(Grid::chebyshev_gauss(cfg.nodes)?);
            let tr = spectral_transform(&GridFunction::sample(cg, f.as_ref())?, Some(w))?;
            grid.nodes().par_iter().map(|&x| tr.eval(x)).collect()
        }
        _ => grid
            .nodes()
            .par_iter()
            .map(|&x| fht_point(f, x, cfg))
            .collect::<Result<_>>()?,
    };
    GridFunction::new(grid, values)
}

/// T(χ_A)(x) = (1/π) Σ ln|(b - x)/(a - x)| over the intervals (a, b) of A.
pub fn fht_indicator(a: &IntervalSet, x: f64) -> Result<C64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain { x });
    }
    let mut acc = 0.0;
    for &(lo, hi) in a.intervals() {
        if x == lo || x == hi {
            return Err(Error::Singularity { x });
        }
        acc += (endpoint_distance(hi, x) / endpoint_distance(lo, x)).ln();
    }
    Ok(C64::new(acc / PI, 0.0))
}

fn endpoint_distance(e: f64, x: f64) -> f64 {
    if e == 1.0 {
        1.0 - x
    } else if e == -1.0 {
        1.0 + x
    } else {
        (e - x).abs()
    }
}

/// T(f·χ_A) on a grid. Discontinuities induced at the endpoints of A are
/// split out of the quadrature.
pub fn fht_product_indicator<'a>(
    f: impl Into<Source<'a>>,
    a: &IntervalSet,
    grid: Arc<Grid>,
    cfg: &PvConfig,
) -> Result<GridFunction> {
    let f: Func = match f.into() {
        Source::Function(f) => f.clone(),
        Source::Grid(g) => g.interpolant()?,
    };
    let fa = function::restrict(&f, a);
    let cfg = match cfg.method {
        PvMethod::Spectral(_) => PvConfig {
            method: PvMethod::ClosedFormAuto,
            ..*cfg
        },
        _ => *cfg,
    };
    fht_sample(&fa, grid, &cfg)
}

/// Coefficient form of T(s), T(s·w) or T(s/w).
pub fn fht_chebyshev(s: &ChebyshevSeries, weighting: Weighting) -> ChebyshevTransform {
    transform_series(s, weighting)
}
