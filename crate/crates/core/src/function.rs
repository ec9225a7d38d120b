//! Evaluable functions on (-1, 1) and the transform T applied to them.
//!
//! Piecewise polynomials with an optional factor w or 1/w are the closed
//! family on which T is evaluated by closed forms. Everything else goes
//! through the angle substitution x = cos θ,
//!
//! ```text
//! T(f)(cos φ) = (1/π) ∫_0^π (G(θ) - G(φ)) / (cos θ - cos φ) dθ,   G(θ) = f(cos θ) sin θ,
//! ```
//!
//! which is exact because p.v.∫_0^π dθ/(cos θ - cos φ) = 0.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::chebyshev::{transform_series, ChebyshevSeries, ChebyshevTransform, Weighting};
use crate::error::{Error, Result};
use crate::grid::IntervalSet;
use crate::quadrature::{adaptive_split, Tolerance};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub type Func = Arc<dyn Function>;

/// A ℂ-valued function on (-1, 1).
pub trait Function: Send + Sync + fmt::Debug {
    fn eval(&self, x: f64) -> Result<C64>;

    /// f(cos θ). Implementations override this when they can stay accurate
    /// next to the endpoints.
    fn eval_angle(&self, theta: f64) -> Result<C64> {
        self.eval(interior_cos(theta))
    }

    /// f(cos θ)·sin θ, the integrand of ∫ f dx after x = cos θ.
    fn eval_angle_weighted(&self, theta: f64) -> Result<C64> {
        Ok(self.eval_angle(theta)? * theta.sin())
    }

    /// Interior points where f or its transform is not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn piecewise(&self) -> Option<&Piecewise> {
        None
    }

    /// A global Chebyshev expansion, when the function is one.
    fn chebyshev(&self) -> Option<&ChebyshevSeries> {
        None
    }
}

/// cos θ, pulled back inside (-1, 1) when rounding lands on ±1 for an
/// interior angle.
pub fn interior_cos(theta: f64) -> f64 {
    let x = theta.cos();
    if theta > 0.0 && theta < PI && x.abs() == 1.0 {
        x * (1.0 - f64::EPSILON / 2.0)
    } else {
        x
    }
}

fn check_domain(x: f64) -> Result<()> {
    if x.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { x })
    }
}

/// √(1 - x²) on (-1, 1).
pub fn weight_w(x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(((1.0 - x) * (1.0 + x)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    One,
    W,
    InvW,
}

impl Weight {
    fn at_angle(self, theta: f64) -> f64 {
        match self {
            Weight::One => 1.0,
            Weight::W => theta.sin(),
            Weight::InvW => 1.0 / theta.sin(),
        }
    }
}

/// poly(x)·weight(x) on [a, b), zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub poly: ChebyshevSeries,
    pub weight: Weight,
}

impl Piece {
    fn contains(&self, x: f64) -> bool {
        self.a <= x && x < self.b
    }

    fn is_full(&self) -> bool {
        self.a == -1.0 && self.b == 1.0
    }
}

/// Sum of pieces; pieces may overlap.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Piecewise {
    pieces: Vec<Piece>,
}

impl Piecewise {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            if !(p.a >= -1.0 && p.b <= 1.0 && p.a < p.b) {
                return Err(Error::structural(format!(
                    "piece [{}, {}) is not an ordered subinterval of [-1, 1]",
                    p.a, p.b
                )));
            }
        }
        Ok(Piecewise { pieces })
    }

    pub fn zero() -> Self {
        Piecewise::default()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn weighted(poly: ChebyshevSeries, weight: Weight) -> Self {
        Piecewise {
            pieces: vec![Piece {
                a: -1.0,
                b: 1.0,
                poly,
                weight,
            }],
        }
    }

    pub fn polynomial(poly: ChebyshevSeries) -> Self {
        Self::weighted(poly, Weight::One)
    }

    /// a_0 + a_1 x + a_2 x² + …
    pub fn monomial(a: &[f64]) -> Self {
        let a: Vec<C64> = a.iter().map(|&c| C64::new(c, 0.0)).collect();
        Self::polynomial(ChebyshevSeries::from_monomial(&a))
    }

    pub fn constant(c: C64) -> Self {
        Self::polynomial(ChebyshevSeries::constant(c))
    }

    pub fn w() -> Self {
        Self::weighted(ChebyshevSeries::constant(C64::new(1.0, 0.0)), Weight::W)
    }

    pub fn inv_w() -> Self {
        Self::weighted(ChebyshevSeries::constant(C64::new(1.0, 0.0)), Weight::InvW)
    }

    pub fn indicator(a: &IntervalSet) -> Self {
        Self::steps(
            &a.intervals()
                .iter()
                .map(|&(lo, hi)| (lo, hi, C64::new(1.0, 0.0)))
                .collect::<Vec<_>>(),
        )
    }

    /// Σ c_j χ_{[a_j, b_j)}.
    pub fn steps(steps: &[(f64, f64, C64)]) -> Self {
        Piecewise {
            pieces: steps
                .iter()
                .filter(|s| s.0 < s.1)
                .map(|&(a, b, c)| Piece {
                    a,
                    b,
                    poly: ChebyshevSeries::constant(c),
                    weight: Weight::One,
                })
                .collect(),
        }
    }

    /// The sign function -χ_{(-1,0)} + χ_{(0,1)}.
    pub fn sigma() -> Self {
        Self::steps(&[(-1.0, 0.0, C64::new(-1.0, 0.0)), (0.0, 1.0, C64::new(1.0, 0.0))])
    }

    pub fn scale(&self, c: C64) -> Self {
        Piecewise {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    poly: p.poly.scale(c),
                    ..p.clone()
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Piecewise) -> Self {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Piecewise { pieces }
    }

    /// f·χ_A.
    pub fn restrict(&self, a: &IntervalSet) -> Self {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for &(lo, hi) in a.intervals() {
                let (l, h) = (p.a.max(lo), p.b.min(hi));
                if l < h {
                    pieces.push(Piece {
                        a: l,
                        b: h,
                        ..p.clone()
                    });
                }
            }
        }
        Piecewise { pieces }
    }

    pub fn times_w(&self) -> Self {
        self.map_weight(|p| match p.weight {
            Weight::One => (p.poly.clone(), Weight::W),
            Weight::InvW => (p.poly.clone(), Weight::One),
            Weight::W => (p.poly.mul_one_minus_x2(), Weight::One),
        })
        .expect("multiplication by w stays piecewise")
    }

    /// f/w, when every piece stays in the family.
    pub fn over_w(&self) -> Option<Self> {
        if self.pieces.iter().any(|p| p.weight == Weight::InvW) {
            return None;
        }
        self.map_weight(|p| match p.weight {
            Weight::One => (p.poly.clone(), Weight::InvW),
            _ => (p.poly.clone(), Weight::One),
        })
    }

    fn map_weight<F: Fn(&Piece) -> (ChebyshevSeries, Weight)>(&self, f: F) -> Option<Self> {
        Some(Piecewise {
            pieces: self
                .pieces
                .iter()
                .map(|p| {
                    let (poly, weight) = f(p);
                    Piece {
                        a: p.a,
                        b: p.b,
                        poly,
                        weight,
                    }
                })
                .collect(),
        })
    }

    /// All pieces are constants without weight factor.
    pub fn is_step(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.weight == Weight::One && p.poly.degree() == 0)
    }

    /// Disjoint (a, b, value) cells of a step function, overlapping pieces
    /// summed. None unless `is_step`.
    pub fn step_cells(&self) -> Option<Vec<(f64, f64, C64)>> {
        if !self.is_step() {
            return None;
        }
        let mut cuts: Vec<f64> = self.pieces.iter().flat_map(|p| [p.a, p.b]).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let v: C64 = self
                .pieces
                .iter()
                .filter(|p| p.contains(mid))
                .map(|p| p.poly.coefficients().first().copied().unwrap_or(ZERO))
                .sum();
            out.push((w[0], w[1], v));
        }
        Some(out)
    }

    /// x ↦ f(t x) on |t x| < 1, zero elsewhere; None when a weight factor
    /// would not survive the substitution.
    pub fn dilate(&self, t: f64) -> Option<Self> {
        if self.pieces.iter().any(|p| p.weight != Weight::One) {
            return None;
        }
        let pieces = self
            .pieces
            .iter()
            .filter_map(|p| {
                let a = (p.a / t).max(-1.0);
                let b = (p.b / t).min(1.0);
                (a < b).then(|| Piece {
                    a,
                    b,
                    poly: p.poly.compose_scale(t),
                    weight: Weight::One,
                })
            })
            .collect();
        Some(Piecewise { pieces })
    }
}

impl Function for Piecewise {
    fn eval(&self, x: f64) -> Result<C64> {
        check_domain(x)?;
        let mut acc = ZERO;
        for p in self.pieces.iter().filter(|p| p.contains(x)) {
            let v = p.poly.eval(x);
            acc += match p.weight {
                Weight::One => v,
                Weight::W => v * weight_w(x)?,
                Weight::InvW => v / weight_w(x)?,
            };
        }
        Ok(acc)
    }

    fn eval_angle(&self, theta: f64) -> Result<C64> {
        let x = interior_cos(theta);
        let mut acc = ZERO;
        for p in self.pieces.iter().filter(|p| p.contains(x)) {
            acc += p.poly.eval(x) * p.weight.at_angle(theta);
        }
        Ok(acc)
    }

    fn eval_angle_weighted(&self, theta: f64) -> Result<C64> {
        let x = interior_cos(theta);
        let s = theta.sin();
        let mut acc = ZERO;
        for p in self.pieces.iter().filter(|p| p.contains(x)) {
            let f = match p.weight {
                Weight::One => s,
                Weight::W => s * s,
                Weight::InvW => 1.0,
            };
            acc += p.poly.eval(x) * f;
        }
        Ok(acc)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .pieces
            .iter()
            .flat_map(|p| [p.a, p.b])
            .filter(|x| x.abs() < 1.0)
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    fn piecewise(&self) -> Option<&Piecewise> {
        Some(self)
    }
}

/// Exact T of a piecewise function, evaluated piece by piece from the
/// closed-form antiderivatives.
#[derive(Debug, Clone)]
pub struct PiecewiseHilbert {
    // W pieces are stored as InvW with poly·(1 - x²)
    pieces: Vec<Piece>,
    breakpoints: Vec<f64>,
}

impl PiecewiseHilbert {
    pub fn new(f: &Piecewise) -> Self {
        let pieces = f
            .pieces
            .iter()
            .map(|p| match p.weight {
                Weight::W => Piece {
                    poly: p.poly.mul_one_minus_x2(),
                    weight: Weight::InvW,
                    ..p.clone()
                },
                _ => p.clone(),
            })
            .collect();
        PiecewiseHilbert {
            pieces,
            breakpoints: f.breakpoints(),
        }
    }

    /// T(f)(t) with t = cos φ; both are passed so that distances to ±1
    /// stay accurate.
    fn eval_at(&self, t: f64, phi: f64) -> Result<C64> {
        if !(phi > 0.0 && phi < PI) {
            return Err(Error::Domain { x: t });
        }
        let mut acc = ZERO;
        for p in &self.pieces {
            let (q, pt) = p.poly.divide_linear(t);
            let on_end = |e: f64| e == t && e.abs() < 1.0;
            let singular = (on_end(p.a) || on_end(p.b)) && pt != ZERO;
            if singular {
                return Err(Error::Singularity { x: t });
            }
            match p.weight {
                Weight::One => {
                    acc += q.integrate(p.a, p.b);
                    if pt != ZERO {
                        let num = distance(p.b, t, phi);
                        let den = distance(p.a, t, phi);
                        acc += pt * (num / den).ln();
                    }
                }
                Weight::InvW => {
                    let th_a = angle_of(p.a);
                    let th_b = angle_of(p.b);
                    acc += q
                        .coefficients()
                        .iter()
                        .enumerate()
                        .map(|(k, &c)| {
                            if k == 0 {
                                c * (th_a - th_b)
                            } else {
                                let kf = k as f64;
                                c * (((kf * th_a).sin() - (kf * th_b).sin()) / kf)
                            }
                        })
                        .sum::<C64>();
                    if pt != ZERO {
                        acc += pt * (glauert(th_a, phi) - glauert(th_b, phi));
                    }
                }
                Weight::W => unreachable!("W pieces are converted on construction"),
            }
        }
        Ok(acc / PI)
    }
}

fn angle_of(x: f64) -> f64 {
    if x == -1.0 {
        PI
    } else if x == 1.0 {
        0.0
    } else {
        x.acos()
    }
}

/// |e - t| for t = cos φ, exact at e = ±1.
fn distance(e: f64, t: f64, phi: f64) -> f64 {
    if e == 1.0 {
        2.0 * (0.5 * phi).sin().powi(2)
    } else if e == -1.0 {
        2.0 * (0.5 * phi).cos().powi(2)
    } else {
        (e - t).abs()
    }
}

/// Antiderivative in θ of 1/(cos θ - cos φ), vanishing at θ = 0 and θ = π.
fn glauert(theta: f64, phi: f64) -> f64 {
    if theta == 0.0 || theta == PI {
        return 0.0;
    }
    let num = (0.5 * (theta + phi)).sin();
    let den = (0.5 * (theta - phi)).sin();
    (num / den).abs().ln() / phi.sin()
}

impl Function for PiecewiseHilbert {
    fn eval(&self, x: f64) -> Result<C64> {
        check_domain(x)?;
        self.eval_at(x, x.acos())
    }

    fn eval_angle(&self, theta: f64) -> Result<C64> {
        self.eval_at(theta.cos(), theta)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

/// T of a global Chebyshev expansion.
#[derive(Debug, Clone)]
pub struct SeriesHilbert {
    transform: ChebyshevTransform,
}

impl SeriesHilbert {
    pub fn new(transform: ChebyshevTransform) -> Self {
        SeriesHilbert { transform }
    }
}

impl Function for SeriesHilbert {
    fn eval(&self, x: f64) -> Result<C64> {
        check_domain(x)?;
        Ok(self.transform.eval(x))
    }

    fn eval_angle(&self, theta: f64) -> Result<C64> {
        let t = theta.cos();
        let mut v = self.transform.regular.eval(t);
        if let Some(l) = &self.transform.log_factor {
            v += l.eval(t) * (2.0 * (0.5 * theta).tan().ln());
        }
        Ok(v)
    }
}

/// T(f) by adaptive quadrature in θ.
#[derive(Debug, Clone)]
pub struct NumericHilbert {
    inner: Func,
    tol: Tolerance,
    angles: Vec<f64>,
}

impl NumericHilbert {
    pub fn new(inner: Func) -> Self {
        Self::with_tolerance(inner, Tolerance::with_abs(1e-12))
    }

    pub fn with_tolerance(inner: Func, tol: Tolerance) -> Self {
        let angles = inner.breakpoints().iter().map(|x| x.acos()).collect();
        NumericHilbert { inner, tol, angles }
    }

    fn eval_at(&self, t: f64, phi: f64) -> Result<C64> {
        if !(phi > 0.0 && phi < PI) {
            return Err(Error::Domain { x: t });
        }
        if self.inner.breakpoints().contains(&t) {
            return Err(Error::Singularity { x: t });
        }
        pv_angle(self.inner.as_ref(), phi, &self.angles, self.tol)
    }
}

/// Error estimate, relative to max(1, |value|), up to which an unconverged
/// principal value is still returned; log singularities next to φ stall
/// the adaptive refinement around 1e-8.
pub const PV_ACCEPT: f64 = 1e-6;

/// (1/π) p.v.∫ f(x)/(x - cos φ) dx through the θ substitution, splitting
/// at φ and at the given breakpoint angles.
pub fn pv_angle(f: &dyn Function, phi: f64, angles: &[f64], tol: Tolerance) -> Result<C64> {
    let g_phi = f.eval_angle_weighted(phi)?;
    let mut cuts = angles.to_vec();
    cuts.push(phi);
    let r = adaptive_split(
        |th| {
            let g = f.eval_angle_weighted(th)?;
            let den = -2.0 * (0.5 * (th + phi)).sin() * (0.5 * (th - phi)).sin();
            Ok((g - g_phi) / den)
        },
        0.0,
        PI,
        &cuts,
        tol,
    )?;
    if !r.converged && !(r.error <= PV_ACCEPT * r.value.norm().max(1.0)) {
        return Err(Error::Divergent(format!(
            "transform integral did not converge at t = {} (error estimate {:e})",
            phi.cos(),
            r.error
        )));
    }
    Ok(r.value / PI)
}

impl Function for NumericHilbert {
    fn eval(&self, x: f64) -> Result<C64> {
        check_domain(x)?;
        self.eval_at(x, x.acos())
    }

    fn eval_angle(&self, theta: f64) -> Result<C64> {
        self.eval_at(theta.cos(), theta)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}

/// inner·w or inner/w.
#[derive(Debug, Clone)]
pub struct Weighted {
    inner: Func,
    weight: Weight,
}

impl Function for Weighted {
    fn eval(&self, x: f64) -> Result<C64> {
        let w = weight_w(x)?;
        let v = self.inner.eval(x)?;
        Ok(match self.weight {
            Weight::One => v,
            Weight::W => v * w,
            Weight::InvW => v / w,
        })
    }

    fn eval_angle(&self, theta: f64) -> Result<C64> {
        Ok(self.inner.eval_angle(theta)? * self.weight.at_angle(theta))
    }

    fn eval_angle_weighted(&self, theta: f64) -> Result<C64> {
        let v = self.inner.eval_angle(theta)?;
        let s = theta.sin();
        Ok(match self.weight {
            Weight::One => v * s,
            Weight::W => v * (s * s),
            Weight::InvW => v,
        })
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}

#[derive(Debug, Clone)]
struct Scaled {
    c: C64,
    inner: Func,
}

impl Function for Scaled {
    fn eval(&self, x: f64) -> Result<C64> {
        Ok(self.inner.eval(x)? * self.c)
    }

    fn eval_angle(&self, theta: f64) -> Result<C64> {
        Ok(self.inner.eval_angle(theta)? * self.c)
    }

    fn eval_angle_weighted(&self, theta: f64) -> Result<C64> {
        Ok(self.inner.eval_angle_weighted(theta)? * self.c)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}

#[derive(Debug, Clone)]
struct Sum {
    terms: Vec<Func>,
}

impl Function for Sum {
    fn eval(&self, x: f64) -> Result<C64> {
        self.terms.iter().map(|f| f.eval(x)).sum()
    }

    fn eval_angle(&self, theta: f64) -> Result<C64> {
        self.terms.iter().map(|f| f.eval_angle(theta)).sum()
    }

    fn eval_angle_weighted(&self, theta: f64) -> Result<C64> {
        self.terms.iter().map(|f| f.eval_angle_weighted(theta)).sum()
    }

    fn breakpoints(&self) -> Vec<f64> {
        merged_breakpoints(self.terms.iter().flat_map(|f| f.breakpoints()))
    }
}

#[derive(Debug, Clone)]
struct Restricted {
    inner: Func,
    set: IntervalSet,
}

impl Function for Restricted {
    fn eval(&self, x: f64) -> Result<C64> {
        check_domain(x)?;
        if self.set.contains(x) {
            self.inner.eval(x)
        } else {
            Ok(ZERO)
        }
    }

    fn eval_angle(&self, theta: f64) -> Result<C64> {
        if self.set.contains(interior_cos(theta)) {
            self.inner.eval_angle(theta)
        } else {
            Ok(ZERO)
        }
    }

    fn eval_angle_weighted(&self, theta: f64) -> Result<C64> {
        if self.set.contains(interior_cos(theta)) {
            self.inner.eval_angle_weighted(theta)
        } else {
            Ok(ZERO)
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        merged_breakpoints(
            self.inner
                .breakpoints()
                .into_iter()
                .chain(self.set.interior_endpoints()),
        )
    }
}

#[derive(Debug, Clone)]
struct Dilated {
    inner: Func,
    t: f64,
}

impl Function for Dilated {
    fn eval(&self, x: f64) -> Result<C64> {
        check_domain(x)?;
        let y = self.t * x;
        if y.abs() < 1.0 {
            self.inner.eval(y)
        } else {
            Ok(ZERO)
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.inner.breakpoints().iter().map(|x| x / self.t).collect();
        if self.t > 1.0 {
            b.extend([-1.0 / self.t, 1.0 / self.t]);
        }
        merged_breakpoints(b.into_iter().filter(|x| x.abs() < 1.0))
    }
}

/// A function given by a closure, with declared breakpoints.
pub struct Closure {
    f: Box<dyn Fn(f64) -> C64 + Send + Sync>,
    breakpoints: Vec<f64>,
    label: String,
}

impl Closure {
    pub fn new<F>(label: impl Into<String>, breakpoints: Vec<f64>, f: F) -> Self
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        Closure {
            f: Box::new(f),
            breakpoints,
            label: label.into(),
        }
    }

    pub fn real<F>(label: impl Into<String>, breakpoints: Vec<f64>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(label, breakpoints, move |x| C64::new(f(x), 0.0))
    }
}

impl fmt::Debug for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Closure({})", self.label)
    }
}

impl Function for Closure {
    fn eval(&self, x: f64) -> Result<C64> {
        check_domain(x)?;
        Ok((self.f)(x))
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

fn merged_breakpoints<I: IntoIterator<Item = f64>>(it: I) -> Vec<f64> {
    let mut b: Vec<f64> = it.into_iter().collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

pub fn func<F: Function + 'static>(f: F) -> Func {
    Arc::new(f)
}

pub fn scale(f: &Func, c: C64) -> Func {
    match f.piecewise() {
        Some(p) => func(p.scale(c)),
        None => func(Scaled {
            c,
            inner: f.clone(),
        }),
    }
}

pub fn sum(terms: &[Func]) -> Func {
    if terms.iter().all(|f| f.piecewise().is_some()) {
        let p = terms
            .iter()
            .fold(Piecewise::zero(), |acc, f| acc.add(f.piecewise().unwrap()));
        return func(p);
    }
    func(Sum {
        terms: terms.to_vec(),
    })
}

pub fn sub(f: &Func, g: &Func) -> Func {
    sum(&[f.clone(), scale(g, C64::new(-1.0, 0.0))])
}

/// f·χ_A.
pub fn restrict(f: &Func, a: &IntervalSet) -> Func {
    match f.piecewise() {
        Some(p) => func(p.restrict(a)),
        None => func(Restricted {
            inner: f.clone(),
            set: a.clone(),
        }),
    }
}

pub fn times_w(f: &Func) -> Func {
    match f.piecewise() {
        Some(p) => func(p.times_w()),
        None => func(Weighted {
            inner: f.clone(),
            weight: Weight::W,
        }),
    }
}

pub fn over_w(f: &Func) -> Func {
    match f.piecewise().and_then(|p| p.over_w()) {
        Some(p) => func(p),
        None => func(Weighted {
            inner: f.clone(),
            weight: Weight::InvW,
        }),
    }
}

/// E_t f: x ↦ f(t x) on |t x| < 1, zero elsewhere.
pub fn dilate(f: &Func, t: f64) -> Func {
    match f.piecewise().and_then(|p| p.dilate(t)) {
        Some(p) => func(p),
        None => func(Dilated {
            inner: f.clone(),
            t,
        }),
    }
}

/// T(f), choosing the most exact evaluation the structure of f allows.
pub fn hilbert(f: &Func) -> Func {
    if let Some(p) = f.piecewise() {
        if let Some(s) = full_weighted_series(p) {
            // T(s/w) is a polynomial
            return func(Piecewise::polynomial(
                transform_series(&s, Weighting::OverW).regular,
            ));
        }
        return func(PiecewiseHilbert::new(p));
    }
    if let Some(s) = f.chebyshev() {
        return func(SeriesHilbert::new(transform_series(s, Weighting::Plain)));
    }
    func(NumericHilbert::new(f.clone()))
}

/// T(f) always through the θ quadrature, ignoring structure.
pub fn hilbert_numeric(f: &Func) -> Func {
    func(NumericHilbert::new(f.clone()))
}

/// When every piece spans (-1, 1) and carries w or 1/w, the series s with
/// f = s/w.
fn full_weighted_series(p: &Piecewise) -> Option<ChebyshevSeries> {
    if p.pieces.is_empty() {
        return None;
    }
    let mut s = ChebyshevSeries::zero();
    for piece in &p.pieces {
        if !piece.is_full() {
            return None;
        }
        match piece.weight {
            Weight::InvW => s = s.add(&piece.poly),
            Weight::W => s = s.add(&piece.poly.mul_one_minus_x2()),
            Weight::One => return None,
        }
    }
    Some(s)
}

/// ∫_{-1}^{1} f dx through x = cos θ.
pub fn integrate(f: &dyn Function, tol: Tolerance) -> Result<C64> {
    let angles: Vec<f64> = f.breakpoints().iter().map(|x| x.acos()).collect();
    let r = adaptive_split(|th| f.eval_angle_weighted(th), 0.0, PI, &angles, tol)?;
    Ok(r.value)
}

/// ∫_a^b f dx in x, split at the breakpoints of f.
pub fn integrate_over(f: &dyn Function, a: f64, b: f64, tol: Tolerance) -> Result<C64> {
    let r = adaptive_split(|x| f.eval(x), a, b, &f.breakpoints(), tol)?;
    Ok(r.value)
}

/// ∫_{-1}^{1} of a pointwise combination of several functions, in θ.
pub fn integrate_with<F>(fs: &[&dyn Function], combine: F, tol: Tolerance) -> Result<C64>
where
    F: Fn(&[C64]) -> C64,
{
    let angles: Vec<f64> = merged_breakpoints(fs.iter().flat_map(|f| f.breakpoints()))
        .iter()
        .map(|x| x.acos())
        .collect();
    let mut buf = vec![ZERO; fs.len()];
    let r = adaptive_split(
        |th| {
            for (slot, f) in buf.iter_mut().zip(fs) {
                *slot = f.eval_angle(th)?;
            }
            Ok(combine(&buf) * th.sin())
        },
        0.0,
        PI,
        &angles,
        tol,
    )?;
    Ok(r.value)
}
