//! The verification suite: every checkable identity, with its tolerance.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::airfoil::{
    identity_defects, inv_w, projection_p, range_defect, rybakov_g0, sigma, sup_residual, t_check, Regime, INTERIOR,
};
use crate::error::{Error, Result};
use crate::function::{func, hilbert, restrict, sub, Func, Piecewise};
use crate::grid::{Grid, GridFunction, IntervalSet};
use crate::measure::{
    blowup_demo, dual_dictionary, m_x_fn, optdomain_norm, parseval_defect, random_interval_set, scalar_measure,
    semivariation, total_variation_scalar, weak_norm_mw, Search, SearchOptions,
};
use crate::report::{CheckRecord, Report};
use crate::ri::{boyd_estimate, lp_norm_fn, norm, step_dictionary, xa_decay, Rearrangement, SpaceSpec};
use crate::transform::{fht_grid, fht_point, PvConfig, PvMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Measure,
    Norms,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u32] {
        match self {
            Suite::Identities => &[1, 2, 3, 4, 5, 6, 7],
            Suite::Measure => &[8, 11, 12, 13, 14, 15],
            Suite::Norms => &[9, 10],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Measure => "measure",
            Suite::Norms => "norms",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "measure" => Ok(Suite::Measure),
            "norms" => Ok(Suite::Norms),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse {
                position: 0,
                message: format!("unknown suite {s:?}; expected identities, measure, norms or all"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub nodes: usize,
    pub cells: usize,
    pub seed: u64,
    /// Overrides keyed by a full check id ("08-total-variation") or a
    /// criterion number ("8").
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            nodes: 512,
            cells: 12,
            seed: 0,
            tolerances: BTreeMap::new(),
        }
    }
}

impl VerifyConfig {
    fn tolerance(&self, id: &str, default: f64) -> f64 {
        if let Some(&t) = self.tolerances.get(id) {
            return t;
        }
        let criterion = id.get(..2).and_then(|c| c.parse::<u32>().ok());
        criterion
            .and_then(|c| self.tolerances.get(&c.to_string()).or_else(|| self.tolerances.get(&format!("{c:02}"))))
            .copied()
            .unwrap_or(default)
    }

    fn grid(&self) -> Result<Arc<Grid>> {
        Ok(Arc::new(Grid::chebyshev_gauss(self.nodes)?))
    }

    fn rng(&self, criterion: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(criterion))
    }
}

/// Statement checked by each criterion.
pub fn statement(criterion: u32) -> &'static str {
    match criterion {
        1 => "ker T = span{1/w}: T(1/w) = 0",
        2 => "T(χ_(t,1))(x) = (1/π) ln|(1-x)/(t-x)|",
        3 => "T T̂ f = f: T is surjective on Lp for p < 2",
        4 => "Ť T f = f: T is injective on Lp for p > 2",
        5 => "T̂ T = I - P with the bounded projection P f = ((1/π)∫ f dμ)/w",
        6 => "for p > 2 the range of T is {h : ∫ h/w dμ = 0}",
        7 => "Parseval formula ∫ f T(g) dμ = -∫ g T(f) dμ",
        8 => "g₀ = -w T(σ/w) satisfies |⟨m_X, g₀⟩| = μ",
        9 => "the Boyd indices of Lp and L^{p,q} both equal 1/p",
        10 => "decreasing rearrangements; t^{1/2}(1/w)*(t) → 1, so 1/w is not in (L^{2,∞})_a",
        11 => "‖f‖_[T,X] = sup over |h| ≤ |f| of ‖T(h)‖_X",
        12 => "‖f χ_A‖_[T,X] = ‖ν_f‖(A)",
        13 => "|m_X((t,1))(x)| > 2M on a neighbourhood of t",
        14 => "L¹(m_X) = [T,X]: the weak-integrability norm agrees with the optimal-domain norm",
        15 => "m_X is σ-additive: ‖m_X((0,ε))‖ → 0",
        _ => "",
    }
}

/// Runs the criteria of a suite; failures are recorded, never propagated.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Report {
    let checks = suite.criteria().iter().flat_map(|&c| run_criterion(c, cfg)).collect();
    Report::new(suite.name(), cfg.nodes, cfg.cells, cfg.seed, checks)
}

/// Rows of one criterion.
pub fn run_criterion(criterion: u32, cfg: &VerifyConfig) -> Vec<CheckRecord> {
    let r = match criterion {
        1 => check_kernel(cfg),
        2 => check_indicator(cfg),
        3 => check_right_inverse(cfg),
        4 => check_left_inverse(cfg),
        5 => check_projection(cfg),
        6 => check_range(cfg),
        7 => check_parseval(cfg),
        8 => check_rybakov(cfg),
        9 => check_boyd(cfg),
        10 => check_rearrangement(cfg),
        11 => check_optdomain(cfg),
        12 => check_semivariation(cfg),
        13 => check_blowup(cfg),
        14 => check_weak_norm(cfg),
        15 => check_sigma_additivity(cfg),
        _ => Err(Error::structural(format!("no criterion {criterion}"))),
    };
    r.unwrap_or_else(|e| {
        vec![CheckRecord::failed(
            &format!("{criterion:02}-error"),
            statement(criterion),
            0.0,
            0.0,
            e.to_string(),
        )]
    })
}

fn row(cfg: &VerifyConfig, id: &str, computed: f64, expected: f64, tolerance: f64) -> CheckRecord {
    let criterion = id[..2].parse().unwrap_or(0);
    CheckRecord::new(id, statement(criterion), computed, expected, cfg.tolerance(id, tolerance))
}

fn monomial(k: usize) -> Func {
    let mut a = vec![0.0; k + 1];
    a[k] = 1.0;
    func(Piecewise::monomial(&a))
}

fn lp(p: f64) -> SpaceSpec {
    SpaceSpec::Lp { p }
}

fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

fn check_kernel(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let g = GridFunction::sample(cfg.grid()?, inv_w().as_ref())?;
    let t = fht_grid(&g, &PvConfig::default())?;
    Ok(vec![row(cfg, "01-kernel", t.sup_norm_within(INTERIOR), 0.0, 1e-6)])
}

fn check_indicator(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut rng = cfg.rng(2);
    let mut pairs = Vec::with_capacity(100);
    while pairs.len() < 100 {
        let t: f64 = rng.gen_range(-0.99..0.99);
        let x: f64 = rng.gen_range(-0.99..0.99);
        if (t - x).abs() >= 0.05 {
            pairs.push((t, x));
        }
    }
    let pv = PvConfig::with_method(PvMethod::SubtractSingularity);
    let errs = pairs
        .par_iter()
        .map(|&(t, x)| -> Result<f64> {
            let f = func(Piecewise::indicator(&IntervalSet::interval(t, 1.0)?));
            let v = fht_point(&f, x, &pv)?.re;
            let exact = ((1.0 - x) / (t - x)).abs().ln() / PI;
            Ok((v - exact).abs() / exact.abs().max(1.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![row(cfg, "02-indicator-closed-form", max_of(errs), 0.0, 1e-8)])
}

fn check_right_inverse(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let d = (0..5)
        .map(|k| Ok(identity_defects(&monomial(k), &lp(1.5))?.defects[0].sup))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![row(cfg, "03-right-inverse", max_of(d), 0.0, 1e-5)])
}

fn check_left_inverse(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    Regime::of(&lp(3.0))?;
    let d = (0..5)
        .into_par_iter()
        .map(|k| {
            let f = monomial(k);
            sup_residual(&sub(&t_check(&hilbert(&f)), &f), INTERIOR)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![row(cfg, "04-left-inverse", max_of(d), 0.0, 1e-5)])
}

fn check_projection(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut d = Vec::new();
    for k in [0, 2] {
        d.push(identity_defects(&monomial(k), &lp(1.5))?.defects[1].sup);
    }
    // P(1) = (2/π)/w
    let expected = func(Piecewise::inv_w().scale(C64::new(2.0 / PI, 0.0)));
    d.push(sup_residual(&sub(&projection_p(&monomial(0))?, &expected), INTERIOR)?);
    Ok(vec![row(cfg, "05-projection", max_of(d), 0.0, 1e-5)])
}

fn check_range(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let d = (0..10)
        .map(|k| range_defect(hilbert(&monomial(k)).as_ref()))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        row(cfg, "06-range-of-transform", max_of(d), 0.0, 1e-6),
        row(cfg, "06-range-defect-of-one", range_defect(monomial(0).as_ref())?, PI, 1e-6),
    ])
}

fn check_parseval(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let dict: Vec<Func> = (0..8).map(monomial).collect();
    let pairs: Vec<(usize, usize)> = (0..8).flat_map(|i| (i + 1..8).map(move |j| (i, j))).collect();
    let d = pairs
        .par_iter()
        .map(|&(i, j)| parseval_defect(&dict[i], &dict[j]))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![row(cfg, "07-parseval", max_of(d), 0.0, 1e-6)])
}

fn check_rybakov(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let g0 = rybakov_g0();
    let tg = hilbert(&g0);
    let s = sigma();
    let xs: Vec<f64> = (0..=45)
        .map(|k| 0.05 + 0.9 * k as f64 / 45.0)
        .flat_map(|x| [x, -x])
        .collect();
    let pointwise = xs
        .par_iter()
        .map(|&x| Ok((tg.eval(x)? - s.eval(x)?).norm()))
        .collect::<Result<Vec<_>>>()?;
    let tv = total_variation_scalar(&g0, &IntervalSet::full(), 256)?;
    let sm = [0.25, 0.5, 0.75]
        .iter()
        .map(|&b| Ok((scalar_measure(&g0, &IntervalSet::interval(0.0, b)?)?.re + b).abs()))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        row(cfg, "08-pointwise", max_of(pointwise), 0.0, 1e-4),
        row(cfg, "08-total-variation", tv, 2.0, 1e-3),
        row(cfg, "08-scalar-measure", max_of(sm), 0.0, 1e-4),
    ])
}

fn check_boyd(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let dict = step_dictionary();
    let t_grid = [0.1, 0.25, 0.5, 2.0, 4.0, 10.0];
    let spaces = [
        lp(1.5),
        lp(3.0),
        SpaceSpec::Lorentz { p: 3.0, q: 1.0 },
        SpaceSpec::WeakLp { p: 2.0 },
    ];
    let d = spaces
        .par_iter()
        .map(|x| {
            let (lo, hi) = boyd_estimate(x, &t_grid, &dict)?;
            let target = 1.0 / x.p();
            Ok((lo - target).abs().max((hi - target).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![row(cfg, "09-boyd-indices", max_of(d), 0.0, 0.05)])
}

/// Sort-based rearrangement of steps: sort by |v| descending, accumulate
/// lengths.
fn sorted_steps(steps: &[(f64, f64, C64)]) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = steps.iter().map(|&(a, b, c)| (c.norm(), b - a)).collect();
    v.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut end = 0.0;
    v.into_iter()
        .filter(|&(h, _)| h > 0.0)
        .map(|(h, m)| {
            end += m;
            (h, end)
        })
        .collect()
}

fn check_rearrangement(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut rng = cfg.rng(10);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let k = rng.gen_range(2..=12);
        let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(-0.99..0.99)).collect();
        cuts.push(-1.0);
        cuts.push(1.0);
        cuts.sort_by(f64::total_cmp);
        let steps: Vec<(f64, f64, C64)> = cuts
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| (w[0], w[1], C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let r = Rearrangement::from_steps(&Piecewise::steps(&steps))
            .ok_or_else(|| Error::structural("random steps not recognised as a step function"))?;
        let oracle = sorted_steps(&steps);
        if oracle.len() != r.values().len() {
            worst = f64::INFINITY;
            continue;
        }
        for ((h, e), (v, end)) in oracle.iter().zip(r.values().iter().zip(r.ends())) {
            worst = worst.max((h - v).abs()).max((e - end).abs());
        }
    }
    let g = GridFunction::sample(cfg.grid()?, inv_w().as_ref())?;
    let star = Rearrangement::from_grid(&g);
    let inv = [0.1, 0.5, 1.0, 2.0]
        .iter()
        .map(|&t| (star.interpolated(t) - 2.0 / (t * (4.0 - t)).sqrt()).abs())
        .fold(0.0, f64::max);
    let decay = xa_decay(&g, 2.0)?;
    Ok(vec![
        row(cfg, "10-sort-oracle", worst, 0.0, 1e-12),
        row(cfg, "10-inverse-weight-rearrangement", inv, 0.0, 1e-3),
        row(cfg, "10-weak-l2-decay", decay.value, 1.0, 0.05),
    ])
}

fn test_functions() -> Result<Vec<Func>> {
    let mut out: Vec<Func> = (0..5).map(monomial).collect();
    out.push(func(Piecewise::monomial(&[1.0, 1.0])));
    out.push(crate::airfoil::w());
    out.push(inv_w());
    out.push(sigma());
    out.push(func(Piecewise::indicator(&IntervalSet::interval(-0.3, 0.6)?)));
    Ok(out)
}

fn check_optdomain(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let grid = cfg.grid()?;
    let x = lp(1.5);
    let base = SearchOptions {
        cells: 10,
        seed: cfg.seed,
        ..Default::default()
    };
    let mut gap: f64 = 0.0;
    let mut admissible: f64 = 0.0;
    for f in test_functions()? {
        let ex = optdomain_norm(&f, &x, &SearchOptions { search: Search::Exhaustive, ..base }, &grid)?;
        let rr = optdomain_norm(&f, &x, &SearchOptions { search: Search::RandomRestart, restarts: 32, ..base }, &grid)?;
        gap = gap.max((ex.value - rr.value).abs() / ex.value.max(f64::MIN_POSITIVE));
        let tf = GridFunction::sample(grid.clone(), hilbert(&f).as_ref())?;
        admissible = admissible.max(norm(&tf, &x) - ex.value.min(rr.value));
    }
    Ok(vec![
        row(cfg, "11-exhaustive-vs-greedy", gap, 0.0, 1e-9),
        row(cfg, "11-dominates-transform-norm", admissible.max(0.0), 0.0, 1e-9),
    ])
}

fn check_semivariation(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let grid = cfg.grid()?;
    let x = lp(1.5);
    let fs = test_functions()?;
    let mut rng = cfg.rng(12);
    let opts = SearchOptions {
        cells: 10,
        search: Search::Exhaustive,
        seed: cfg.seed,
        ..Default::default()
    };
    let mut gap: f64 = 0.0;
    for _ in 0..20 {
        let f = &fs[rng.gen_range(0..fs.len())];
        let a = random_interval_set(&mut rng, 8, 64);
        let sv = semivariation(f, &a, &x, &opts, &grid)?;
        let od = optdomain_norm(&restrict(f, &a), &x, &opts, &grid)?.value;
        let scale = sv.abs().max(od.abs());
        if scale > 0.0 {
            gap = gap.max((sv - od).abs() / scale);
        }
    }
    Ok(vec![row(cfg, "12-semivariation", gap, 0.0, 1e-6)])
}

fn check_blowup(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut failures = 0;
    for (t, m) in [(0.0, 1.0), (0.5, 2.0), (-0.3, 3.0)] {
        let b = blowup_demo(t, m)?;
        let x: f64 = b.x;
        let direct = ((1.0 - x) / (t - x)).abs().ln() / PI;
        let inside = b.interval.0 < x && x < b.interval.1 && x != t;
        if !(inside && direct.abs() > 2.0 * m && b.value > 2.0 * m) {
            failures += 1;
        }
    }
    Ok(vec![row(cfg, "13-blowup-witness", failures as f64, 0.0, 0.0)])
}

fn check_weak_norm(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let grid = cfg.grid()?;
    let x = lp(1.5);
    let dict = dual_dictionary(cfg.seed);
    let opts = SearchOptions {
        cells: cfg.cells.max(12),
        search: Search::RandomRestart,
        seed: cfg.seed,
        ..Default::default()
    };
    let polys: Vec<Func> = (0..10)
        .map(|k| {
            let a: Vec<f64> = (0..=k).map(|j| if j == k { 1.0 } else { 0.5 / (1 + j) as f64 }).collect();
            func(Piecewise::monomial(&a))
        })
        .collect();
    let mut gap: f64 = 0.0;
    for f in &polys {
        let weak = weak_norm_mw(f, &x, &dict)?;
        let od = optdomain_norm(f, &x, &opts, &grid)?.value;
        gap = gap.max((weak - od).abs() / weak.max(od));
    }
    Ok(vec![row(cfg, "14-weak-vs-optimal-domain", gap, 0.0, 0.25)])
}

fn check_sigma_additivity(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let eps = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let norms = eps
        .iter()
        .map(|&e| Ok(lp_norm_fn(m_x_fn(&IntervalSet::interval(0.0, e)?).as_ref(), 1.5)?.value))
        .collect::<Result<Vec<_>>>()?;
    let violations = norms.windows(2).filter(|w| !(w[1] < w[0])).count();
    Ok(vec![
        row(cfg, "15-monotone", violations as f64, 0.0, 0.0),
        row(cfg, "15-small-set", norms[eps.len() - 1], 0.0, 1e-3),
    ])
}
