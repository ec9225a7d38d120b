//! The vector measure m_X(A) = T(χ_A), its indefinite integrals
//! ν_f(A) = T(f·χ_A), and estimators of the optimal-domain norm
//! ‖f‖_{[T,X]} = sup_{|h| ≤ |f|} ‖T(h)‖_X.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::airfoil::rybakov_g0;
use crate::error::{Error, Result};
use crate::function::{func, hilbert, integrate_over, integrate_with, restrict, Func, Piecewise};
use crate::grid::{Grid, GridFunction, IntervalSet};
use crate::quadrature::{integrate_checked, Integral, Tolerance};
use crate::ri::{lp_norm_fn, norm_fn, NormValue, Rearrangement, SpaceSpec};
use crate::transform::fht_indicator;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// m_X(A) = T(χ_A) sampled on a grid.
pub fn m_x(a: &IntervalSet, grid: Arc<Grid>) -> Result<GridFunction> {
    let values = grid
        .nodes()
        .iter()
        .map(|&x| fht_indicator(a, x))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(grid, values)
}

/// m_X(A) as an evaluable function.
pub fn m_x_fn(a: &IntervalSet) -> Func {
    hilbert(&func(Piecewise::indicator(a)))
}

/// ν_f(A) = T(f·χ_A) = ∫_A f dm_X.
pub fn indefinite_integral(f: &Func, a: &IntervalSet) -> Func {
    hilbert(&restrict(f, a))
}

/// ⟨m_X, g⟩(A) = -∫_A T(g) dμ.
pub fn scalar_measure(g: &Func, a: &IntervalSet) -> Result<C64> {
    let tg = hilbert(g);
    let tol = Tolerance::with_abs(1e-12);
    let mut acc = ZERO;
    for &(lo, hi) in a.intervals() {
        acc += integrate_over(tg.as_ref(), lo, hi, tol)?;
    }
    Ok(-acc)
}

/// Σ_j |⟨m_X, g⟩(C_j ∩ A)| over a uniform partition into `cells` cells.
pub fn total_variation_scalar(g: &Func, a: &IntervalSet, cells: usize) -> Result<f64> {
    if cells == 0 {
        return Err(Error::structural("cells must be positive"));
    }
    let tg = hilbert(g);
    let tol = Tolerance::with_abs(1e-12);
    let parts: Vec<IntervalSet> = IntervalSet::uniform_cells(cells)
        .into_iter()
        .map(|c| c.intersection(a))
        .filter(|c| !c.is_empty())
        .collect();
    let vals = parts
        .par_iter()
        .map(|c| -> Result<f64> {
            let mut acc = ZERO;
            for &(lo, hi) in c.intervals() {
                acc += integrate_over(tg.as_ref(), lo, hi, tol)?;
            }
            Ok(acc.norm())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vals.iter().sum())
}

/// Total variation over dyadic partitions with 1, 2, 4, …, 2^levels cells.
pub fn total_variation_levels(g: &Func, a: &IntervalSet, levels: u32) -> Result<Vec<f64>> {
    (0..=levels)
        .map(|k| total_variation_scalar(g, a, 1 << k))
        .collect()
}

/// A step function s = Σ a_j χ_{C_j} with |a_j| ≤ 1 on a partition of (-1, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulatingFunction {
    pub boundaries: Vec<f64>,
    pub coefficients: Vec<C64>,
}

impl ModulatingFunction {
    pub fn new(boundaries: Vec<f64>, coefficients: Vec<C64>) -> Result<Self> {
        if boundaries.len() != coefficients.len() + 1 {
            return Err(Error::structural("need one more boundary than coefficients"));
        }
        if boundaries.first() != Some(&-1.0) || boundaries.last() != Some(&1.0) {
            return Err(Error::structural("cells must partition (-1, 1)"));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::structural("cell boundaries must increase"));
        }
        if coefficients.iter().any(|c| c.norm() > 1.0 + 1e-12) {
            return Err(Error::structural("coefficients must lie in the closed unit disk"));
        }
        Ok(ModulatingFunction {
            boundaries,
            coefficients,
        })
    }

    /// Uniform cells with the given coefficients.
    pub fn uniform(coefficients: Vec<C64>) -> Result<Self> {
        let n = coefficients.len();
        let boundaries = (0..=n)
            .map(|j| if j == n { 1.0 } else { -1.0 + 2.0 * j as f64 / n as f64 })
            .collect();
        Self::new(boundaries, coefficients)
    }

    pub fn to_func(&self) -> Func {
        let steps: Vec<(f64, f64, C64)> = self
            .boundaries
            .windows(2)
            .zip(&self.coefficients)
            .map(|(w, &c)| (w[0], w[1], c))
            .collect();
        func(Piecewise::steps(&steps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Search {
    /// All 2^cells real sign patterns.
    Exhaustive,
    /// Greedy single-cell flips from the all-ones pattern.
    GreedyFlip,
    /// Greedy flips from the all-ones pattern and from `restarts` random patterns.
    RandomRestart,
}

impl std::str::FromStr for Search {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Search::Exhaustive),
            "greedy-flip" | "greedy" => Ok(Search::GreedyFlip),
            "random-restart" => Ok(Search::RandomRestart),
            _ => Err(Error::Parse {
                position: 0,
                message: format!("unknown search {s:?}"),
            }),
        }
    }
}

/// Largest cell count accepted by the exhaustive search.
pub const MAX_EXHAUSTIVE_CELLS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub cells: usize,
    pub search: Search,
    pub restarts: usize,
    pub seed: u64,
    /// Refine the best real pattern over eighth roots of unity.
    pub complex: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            cells: 12,
            search: Search::RandomRestart,
            restarts: 32,
            seed: 0,
            complex: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptNormEstimate {
    /// Lower bound of the supremum.
    pub value: f64,
    pub witness: ModulatingFunction,
    pub search: Search,
    pub cells: usize,
    /// Gain of the complex refinement over the best real pattern, when run.
    pub complex_gain: Option<f64>,
}

/// Norm in X of a vector of samples with quadrature weights.
fn sampled_norm(values: &[C64], weights: &[f64], x: &SpaceSpec) -> f64 {
    match *x {
        SpaceSpec::Lp { p } => values
            .iter()
            .zip(weights)
            .map(|(v, w)| w * v.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
        _ => Rearrangement::from_weighted(values.iter().zip(weights).map(|(v, &w)| (v.norm(), w)))
            .sampled_norm(x),
    }
}

struct Objective<'a> {
    columns: &'a [Vec<C64>],
    weights: &'a [f64],
    space: SpaceSpec,
}

impl Objective<'_> {
    fn combine(&self, coeffs: &[C64]) -> Vec<C64> {
        let n = self.weights.len();
        let mut acc = vec![ZERO; n];
        for (col, &c) in self.columns.iter().zip(coeffs) {
            for (a, v) in acc.iter_mut().zip(col) {
                *a += v * c;
            }
        }
        acc
    }

    fn value(&self, coeffs: &[C64]) -> f64 {
        sampled_norm(&self.combine(coeffs), self.weights, &self.space)
    }

    fn norm(&self, v: &[C64]) -> f64 {
        sampled_norm(v, self.weights, &self.space)
    }

    fn greedy(&self, start: Vec<f64>) -> Vec<f64> {
        let mut signs = start;
        let coeffs: Vec<C64> = signs.iter().map(|&s| C64::new(s, 0.0)).collect();
        let mut cur = self.combine(&coeffs);
        let mut best = self.norm(&cur);
        let mut trial = vec![ZERO; cur.len()];
        loop {
            let mut pick: Option<(usize, f64)> = None;
            for (j, col) in self.columns.iter().enumerate() {
                let d = -2.0 * signs[j];
                for ((t, c), v) in trial.iter_mut().zip(&cur).zip(col) {
                    *t = c + v * d;
                }
                let val = self.norm(&trial);
                if val > best * (1.0 + 1e-13) && pick.map_or(true, |(_, b)| val > b) {
                    pick = Some((j, val));
                }
            }
            let Some((j, val)) = pick else { break };
            let d = -2.0 * signs[j];
            for (c, v) in cur.iter_mut().zip(&self.columns[j]) {
                *c += v * d;
            }
            signs[j] = -signs[j];
            best = val;
        }
        signs
    }

    /// Gray-code enumeration with the first sign fixed to +1.
    fn exhaustive(&self) -> Vec<f64> {
        let k = self.columns.len();
        let mut signs = vec![1.0; k];
        let ones: Vec<C64> = signs.iter().map(|&s| C64::new(s, 0.0)).collect();
        let mut cur = self.combine(&ones);
        let mut best = (self.norm(&cur), signs.clone());
        if k <= 1 {
            return best.1;
        }
        let patterns: u64 = 1 << (k - 1);
        for i in 1..patterns {
            // flip the bit that changes in the Gray code, shifted past cell 0
            let j = i.trailing_zeros() as usize + 1;
            let d = -2.0 * signs[j];
            for (c, v) in cur.iter_mut().zip(&self.columns[j]) {
                *c += v * d;
            }
            signs[j] = -signs[j];
            let val = self.norm(&cur);
            if val > best.0 {
                best = (val, signs.clone());
            }
        }
        best.1
    }

    /// Coordinate ascent over eighth roots of unity.
    fn refine_complex(&self, start: &[f64]) -> Vec<C64> {
        let roots: Vec<C64> = (0..8).map(|k| C64::from_polar(1.0, k as f64 * PI / 4.0)).collect();
        let mut coeffs: Vec<C64> = start.iter().map(|&s| C64::new(s, 0.0)).collect();
        let mut best = self.value(&coeffs);
        loop {
            let mut improved = false;
            for j in 0..coeffs.len() {
                let mut keep = coeffs[j];
                for &r in &roots {
                    coeffs[j] = r;
                    let v = self.value(&coeffs);
                    if v > best * (1.0 + 1e-13) {
                        best = v;
                        keep = r;
                        improved = true;
                    }
                }
                coeffs[j] = keep;
            }
            if !improved {
                break;
            }
        }
        coeffs
    }
}

fn run_search(columns: &[Vec<C64>], weights: &[f64], x: &SpaceSpec, opts: &SearchOptions) -> Result<OptNormEstimate> {
    if opts.cells == 0 {
        return Err(Error::structural("cells must be positive"));
    }
    let obj = Objective {
        columns,
        weights,
        space: *x,
    };
    let signs = match opts.search {
        Search::Exhaustive => {
            if opts.cells > MAX_EXHAUSTIVE_CELLS {
                return Err(Error::Refused(format!(
                    "exhaustive search over {} cells needs 2^{} patterns; at most {MAX_EXHAUSTIVE_CELLS} cells are enumerated",
                    opts.cells,
                    opts.cells - 1
                )));
            }
            obj.exhaustive()
        }
        Search::GreedyFlip => obj.greedy(vec![1.0; opts.cells]),
        Search::RandomRestart => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut starts = vec![vec![1.0; opts.cells]];
            for _ in 0..opts.restarts {
                starts.push(
                    (0..opts.cells)
                        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                        .collect(),
                );
            }
            let results: Vec<(f64, Vec<f64>)> = starts
                .into_par_iter()
                .map(|s| {
                    let s = obj.greedy(s);
                    (obj.value(&to_complex(&s)), s)
                })
                .collect();
            let mut best = results[0].clone();
            for r in results.into_iter().skip(1) {
                if r.0 > best.0 {
                    best = r;
                }
            }
            best.1
        }
    };
    let real_value = obj.value(&to_complex(&signs));
    let (coeffs, value, gain) = if opts.complex {
        let c = obj.refine_complex(&signs);
        let v = obj.value(&c);
        (c, v, Some(v - real_value))
    } else {
        (to_complex(&signs), real_value, None)
    };
    Ok(OptNormEstimate {
        value,
        witness: ModulatingFunction::uniform(coeffs)?,
        search: opts.search,
        cells: opts.cells,
        complex_gain: gain,
    })
}

fn to_complex(s: &[f64]) -> Vec<C64> {
    s.iter().map(|&v| C64::new(v, 0.0)).collect()
}

fn sample_columns(fs: &[Func], grid: &Arc<Grid>) -> Result<Vec<Vec<C64>>> {
    fs.par_iter()
        .map(|f| {
            grid.nodes()
                .iter()
                .map(|&x| f.eval(x))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Estimate of ‖f‖_{[T,X]}: the largest ‖T(s·f)‖_X over modulations s on a
/// uniform partition, with norms computed from samples on `grid`.
pub fn optdomain_norm(f: &Func, x: &SpaceSpec, opts: &SearchOptions, grid: &Arc<Grid>) -> Result<OptNormEstimate> {
    let cells = IntervalSet::uniform_cells(opts.cells.max(1));
    let transforms: Vec<Func> = cells.iter().map(|c| hilbert(&restrict(f, c))).collect();
    let columns = sample_columns(&transforms, grid)?;
    run_search(&columns, grid.weights(), x, opts)
}

/// Semivariation ‖ν_f‖(A): sup of ‖Σ a_j ν_f(C_j ∩ A)‖_X over real signs a_j.
/// Enumerated depth-first, independently of `optdomain_norm`.
pub fn semivariation(
    f: &Func,
    a: &IntervalSet,
    x: &SpaceSpec,
    opts: &SearchOptions,
    grid: &Arc<Grid>,
) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    let nu: Vec<Func> = IntervalSet::uniform_cells(opts.cells.max(1))
        .iter()
        .map(|c| indefinite_integral(f, &c.intersection(a)))
        .collect();
    let columns = sample_columns(&nu, grid)?;
    match opts.search {
        Search::Exhaustive => {
            if opts.cells > MAX_EXHAUSTIVE_CELLS {
                return Err(Error::Refused(format!(
                    "exhaustive search over {} cells exceeds {MAX_EXHAUSTIVE_CELLS}",
                    opts.cells
                )));
            }
            let n = grid.len();
            let mut partial = vec![vec![ZERO; n]; columns.len() + 1];
            partial[1] = columns[0].clone();
            Ok(depth_first(&columns, grid.weights(), x, &mut partial, 1))
        }
        _ => Ok(run_search(&columns, grid.weights(), x, opts)?.value),
    }
}

// partial[d] holds Σ_{j<d} s_j ν_j; the sign of cell 0 is fixed.
fn depth_first(columns: &[Vec<C64>], weights: &[f64], x: &SpaceSpec, partial: &mut [Vec<C64>], depth: usize) -> f64 {
    if depth == columns.len() {
        return sampled_norm(&partial[depth], weights, x);
    }
    let mut best: f64 = 0.0;
    for sign in [1.0, -1.0] {
        let (head, tail) = partial.split_at_mut(depth + 1);
        for ((t, p), c) in tail[0].iter_mut().zip(&head[depth]).zip(&columns[depth]) {
            *t = p + c * sign;
        }
        best = best.max(depth_first(columns, weights, x, partial, depth + 1));
    }
    best
}

/// Lower estimate of ‖f‖_{m_X,w} = sup_{‖g‖_{X′} ≤ 1} ∫ |f|·|T(g)| dμ over a
/// dictionary; entries are normalized in X′ here.
pub fn weak_norm_mw(f: &Func, x: &SpaceSpec, dictionary: &[Func]) -> Result<f64> {
    if dictionary.is_empty() {
        return Err(Error::structural("empty dual dictionary"));
    }
    let dual = x.associate();
    let vals = dictionary
        .par_iter()
        .map(|g| -> Result<f64> {
            let n = norm_fn(g, &dual)?.value;
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::structural(format!(
                    "dictionary entry {g:?} has norm {n} in {dual}"
                )));
            }
            let tg = hilbert(g);
            let v = integrate_with(
                &[f.as_ref(), tg.as_ref()],
                |v| C64::new(v[0].norm() * v[1].norm(), 0.0),
                Tolerance::with_abs(1e-10),
            )?;
            Ok(v.re / n)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

/// Dual dictionary of 64 entries: T_0..T_15, g₀, dyadic indicators down to
/// eighths, and 32 seeded random sign patterns on 12 cells.
pub fn dual_dictionary(seed: u64) -> Vec<Func> {
    let mut out: Vec<Func> = Vec::with_capacity(64);
    for n in 0..16 {
        out.push(func(Piecewise::polynomial(crate::chebyshev::ChebyshevSeries::basis(n))));
    }
    out.push(rybakov_g0());
    for level in 0..4 {
        for c in IntervalSet::uniform_cells(1 << level) {
            out.push(func(Piecewise::indicator(&c)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let coeffs: Vec<C64> = (0..12)
            .map(|_| C64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0))
            .collect();
        out.push(
            ModulatingFunction::uniform(coeffs)
                .expect("unit coefficients")
                .to_func(),
        );
    }
    out
}

/// |⟨f, T(g)⟩ + ⟨g, T(f)⟩|, which vanishes by the Parseval-type formula.
pub fn parseval_defect(f: &Func, g: &Func) -> Result<f64> {
    let tol = Tolerance::with_abs(1e-12);
    let tf = hilbert(f);
    let tg = hilbert(g);
    let a = integrate_with(&[f.as_ref(), tg.as_ref()], |v| v[0] * v[1], tol)?;
    let b = integrate_with(&[g.as_ref(), tf.as_ref()], |v| v[0] * v[1], tol)?;
    Ok((a + b).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NonMember,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub in_l1: bool,
    pub indicator_checks: Vec<(IntervalSet, NormValue)>,
    pub dual_checks: Vec<(String, f64)>,
    pub verdict: Verdict,
}

/// Sampled membership test for [T, X]: f ∈ L¹, ‖T(f·χ_A)‖_X < ∞ for random
/// A, and f·T(g) ∈ L¹ for a few g ∈ X′.
pub fn membership_report(f: &Func, x: &SpaceSpec, samples: usize, seed: u64) -> Result<MembershipReport> {
    if samples == 0 {
        return Err(Error::structural("samples must be positive"));
    }
    let mut inconclusive = false;
    let angles: Vec<f64> = f.breakpoints().iter().map(|x| x.acos()).collect();
    let l1 = integrate_checked(
        |th| Ok(C64::new(f.eval_angle(th)?.norm() * th.sin(), 0.0)),
        0.0,
        PI,
        &angles,
        Tolerance::with_abs(1e-12),
    );
    let in_l1 = match l1 {
        Ok(Integral::Finite(_)) => true,
        Ok(Integral::Divergent) => false,
        Err(_) => {
            inconclusive = true;
            false
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indicator_checks = Vec::with_capacity(samples);
    for _ in 0..samples {
        let a = random_interval_set(&mut rng, 8, 64);
        let v = match norm_fn(&indefinite_integral(f, &a), x) {
            Ok(v) => v,
            Err(Error::Divergent(_)) => NormValue {
                value: f64::INFINITY,
                resolved: false,
            },
            Err(_) => {
                inconclusive = true;
                NormValue {
                    value: f64::NAN,
                    resolved: false,
                }
            }
        };
        indicator_checks.push((a, v));
    }
    let mut dual_checks = Vec::new();
    for n in 0..4 {
        let g = func(Piecewise::polynomial(crate::chebyshev::ChebyshevSeries::basis(n)));
        let tg = hilbert(&g);
        let mut ang = angles.clone();
        ang.extend(tg.breakpoints().iter().map(|x| x.acos()));
        let r = integrate_checked(
            |th| Ok(C64::new(f.eval_angle(th)?.norm() * tg.eval_angle(th)?.norm() * th.sin(), 0.0)),
            0.0,
            PI,
            &ang,
            Tolerance::with_abs(1e-12),
        );
        let v = match r {
            Ok(i) => i.re_or_inf(),
            Err(Error::Divergent(_)) => f64::INFINITY,
            Err(_) => {
                inconclusive = true;
                f64::NAN
            }
        };
        dual_checks.push((format!("T_{n}"), v));
    }
    let any_infinite = indicator_checks.iter().any(|(_, v)| v.value == f64::INFINITY)
        || dual_checks.iter().any(|(_, v)| *v == f64::INFINITY);
    let verdict = if !in_l1 && !inconclusive || any_infinite {
        Verdict::NonMember
    } else if inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::Member
    };
    Ok(MembershipReport {
        in_l1,
        indicator_checks,
        dual_checks,
        verdict,
    })
}

/// A random union of at most `max_intervals` intervals with endpoints on
/// the lattice k/`lattice`, k = -lattice..=lattice.
pub fn random_interval_set<R: Rng>(rng: &mut R, max_intervals: usize, lattice: usize) -> IntervalSet {
    let k = rng.gen_range(1..=max_intervals.max(1));
    let points = 2 * lattice + 1;
    let mut idx: Vec<usize> = sample(rng, points, (2 * k).min(points)).into_vec();
    idx.sort_unstable();
    let to_x = |i: usize| -1.0 + i as f64 / lattice as f64;
    let intervals = idx.chunks(2).filter(|c| c.len() == 2).map(|c| (to_x(c[0]), to_x(c[1]))).collect();
    IntervalSet::new(intervals).expect("lattice points are ordered inside [-1, 1]")
}

/// Witness that m_X((t,1)) is unbounded next to t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowUp {
    /// U(t) = (t - δ, t + δ).
    pub interval: (f64, f64),
    pub x: f64,
    pub value: f64,
}

/// An interval U(t) on which |m_X((t,1))| > 2M, and a point of it. On the
/// right of t the condition (1/π) ln((1-x)/(x-t)) > 2M is equivalent to
/// x - t < (1-t)·e^{-2πM}/(1 + e^{-2πM}); the left side allows more.
pub fn blowup_demo(t: f64, m: f64) -> Result<BlowUp> {
    if !(t.abs() < 1.0) {
        return Err(Error::Domain { x: t });
    }
    if !(m > 0.0) {
        return Err(Error::structural("M must be positive"));
    }
    let e = (-2.0 * PI * m).exp();
    let delta = (1.0 - t) * e / (1.0 + e);
    let x = t + 0.5 * delta;
    let a = IntervalSet::interval(t, 1.0)?;
    let value = fht_indicator(&a, x)?.norm();
    Ok(BlowUp {
        interval: (t - delta, t + delta),
        x,
        value,
    })
}

/// ‖f‖_{Lᵖ} for each p, infinite where the integral diverges.
pub fn frechet_membership(f: &Func, p_list: &[f64]) -> Result<Vec<(f64, NormValue)>> {
    if p_list.is_empty() {
        return Err(Error::structural("empty exponent list"));
    }
    p_list
        .iter()
        .map(|&p| {
            if !(p > 1.0) {
                return Err(Error::structural(format!("exponent {p} must exceed 1")));
            }
            Ok((p, lp_norm_fn(f.as_ref(), p)?))
        })
        .collect()
}
