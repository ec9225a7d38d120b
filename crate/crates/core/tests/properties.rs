use std::sync::Arc;

use fht_core::airfoil::{projection_p, sup_residual, INTERIOR};
use fht_core::function::{func, sub, Piecewise};
use fht_core::measure::{random_interval_set, semivariation, ModulatingFunction, Search, SearchOptions};
use fht_core::ri::{distribution, norm, norm_fn, pairing, rearrangement};
use fht_core::transform::{fht_grid, fht_indicator, fht_product_indicator, PvConfig};
use fht_core::{Func, Grid, GridFunction, IntervalSet, Rearrangement, SpaceSpec, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cheb(n: usize) -> Arc<Grid> {
    Arc::new(Grid::chebyshev_gauss(n).unwrap())
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 1..8)
}

fn interval_set() -> impl Strategy<Value = IntervalSet> {
    any::<u64>().prop_map(|seed| random_interval_set(&mut ChaCha8Rng::seed_from_u64(seed), 4, 32))
}

/// Step cells (a, b, value) over a random partition of (-1, 1).
fn steps() -> impl Strategy<Value = Vec<(f64, f64, C64)>> {
    prop::collection::vec((0.05..1.0f64, -3.0..3.0f64), 1..7).prop_map(|cells| {
        let total: f64 = cells.iter().map(|c| c.0).sum();
        let mut a = -1.0;
        let n = cells.len();
        cells
            .iter()
            .enumerate()
            .map(|(i, &(len, v))| {
                let b = if i + 1 == n { 1.0 } else { a + 2.0 * len / total };
                let cell = (a, b, C64::new(v, 0.0));
                a = b;
                cell
            })
            .collect()
    })
}

fn away_from(points: &[f64], x: f64) -> bool {
    points.iter().all(|p| (p - x).abs() > 1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transform_is_linear(a in coeffs(), b in coeffs(), alpha in -2.0..2.0f64, beta in -2.0..2.0f64) {
        let g = cheb(64);
        let f1 = GridFunction::from_real_fn(g.clone(), |x| horner(&a, x));
        let f2 = GridFunction::from_real_fn(g.clone(), |x| horner(&b, x));
        let mix = f1.scale(C64::new(alpha, 0.0)).add(&f2.scale(C64::new(beta, 0.0))).unwrap();
        let cfg = PvConfig::default();
        let lhs = fht_grid(&mix, &cfg).unwrap();
        let rhs = fht_grid(&f1, &cfg).unwrap().scale(C64::new(alpha, 0.0))
            .add(&fht_grid(&f2, &cfg).unwrap().scale(C64::new(beta, 0.0))).unwrap();
        for (u, v) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((u - v).norm() <= 1e-10 * (1.0 + u.norm()));
        }
    }

    #[test]
    fn indicator_is_additive(a in interval_set(), b in interval_set(), x in -0.99..0.99f64) {
        let b = b.intersection(&a.complement());
        let mut ends = a.interior_endpoints();
        ends.extend(b.interior_endpoints());
        prop_assume!(away_from(&ends, x));
        let whole = fht_indicator(&a.union(&b), x).unwrap();
        let parts = fht_indicator(&a, x).unwrap() + fht_indicator(&b, x).unwrap();
        prop_assert!((whole - parts).norm() <= 1e-12 * (1.0 + whole.norm()));
    }

    #[test]
    fn product_indicator_is_additive(c in coeffs(), a in interval_set(), b in interval_set()) {
        let b = b.intersection(&a.complement());
        let f: Func = func(Piecewise::monomial(&c));
        let g = Arc::new(Grid::uniform(11).unwrap());
        let mut ends = a.interior_endpoints();
        ends.extend(b.interior_endpoints());
        prop_assume!(g.nodes().iter().all(|&x| away_from(&ends, x)));
        let cfg = PvConfig::default();
        let whole = fht_product_indicator(&f, &a.union(&b), g.clone(), &cfg).unwrap();
        let pa = fht_product_indicator(&f, &a, g.clone(), &cfg).unwrap();
        let pb = fht_product_indicator(&f, &b, g, &cfg).unwrap();
        for ((w, u), v) in whole.values().iter().zip(pa.values()).zip(pb.values()) {
            prop_assert!((w - u - v).norm() <= 1e-8);
        }
    }

    #[test]
    fn restrict_is_idempotent(c in coeffs(), a in interval_set()) {
        let f = GridFunction::from_real_fn(cheb(48), |x| horner(&c, x));
        let once = f.restrict(&a);
        prop_assert_eq!(once.restrict(&a), once);
    }

    #[test]
    fn integrate_is_linear(a in coeffs(), b in coeffs(), alpha in -3.0..3.0f64) {
        let g = cheb(32);
        let f1 = GridFunction::from_real_fn(g.clone(), |x| horner(&a, x));
        let f2 = GridFunction::from_real_fn(g, |x| horner(&b, x));
        let mix = f1.scale(C64::new(alpha, 0.0)).add(&f2).unwrap();
        let lhs = mix.integrate();
        let rhs = f1.integrate() * alpha + f2.integrate();
        let scale = 1.0 + alpha.abs() * f1.integrate().norm() + f2.integrate().norm();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
    }

    #[test]
    fn interval_sets_stay_normalized(a in interval_set(), b in interval_set()) {
        for s in [a.complement(), a.intersection(&b), a.union(&b)] {
            let iv = s.intervals();
            prop_assert!(iv.iter().all(|&(lo, hi)| -1.0 <= lo && lo < hi && hi <= 1.0));
            prop_assert!(iv.windows(2).all(|w| w[0].1 < w[1].0));
        }
        prop_assert!((a.measure() + a.complement().measure() - 2.0).abs() < 1e-12);
        prop_assert!(a.intersection(&b).is_subset(&a));
    }

    #[test]
    fn norms_are_rearrangement_invariant(cells in steps(), seed in any::<u64>()) {
        // Permute the cells while keeping their lengths and values.
        let mut order: Vec<usize> = (0..cells.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let mut a = -1.0;
        let shuffled: Vec<(f64, f64, C64)> = order.iter().map(|&i| {
            let (lo, hi, v) = cells[i];
            let cell = (a, a + (hi - lo), v);
            a += hi - lo;
            cell
        }).collect();
        let f: Func = func(Piecewise::steps(&cells));
        let g: Func = func(Piecewise::steps(&shuffled));
        for x in [SpaceSpec::lp(1.7).unwrap(), SpaceSpec::lorentz(3.0, 1.5).unwrap(), SpaceSpec::weak_lp(2.5).unwrap()] {
            let u = norm_fn(&f, &x).unwrap().value;
            let v = norm_fn(&g, &x).unwrap().value;
            prop_assert!((u - v).abs() <= 1e-9 * u.max(1.0));
        }
    }

    #[test]
    fn rearrangement_is_equimeasurable(c in coeffs(), lambda in 0.0..4.0f64) {
        let f = GridFunction::from_real_fn(cheb(128), |x| horner(&c, x));
        let r = rearrangement(&f);
        prop_assert!(r.values().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((r.distribution(lambda) - distribution(&f, lambda)).abs() <= 1e-9);
    }

    #[test]
    fn lorentz_diagonal_matches_lebesgue(cells in steps(), p in 1.1..6.0f64) {
        let r = Rearrangement::from_steps(&Piecewise::steps(&cells)).unwrap();
        let a = r.norm(&SpaceSpec::lorentz(p, p).unwrap());
        let b = r.norm(&SpaceSpec::lp(p).unwrap());
        prop_assert!((a - b).abs() <= 1e-8 * b.max(1.0));
    }

    #[test]
    fn holder_inequality(a in coeffs(), b in coeffs(), p in 1.1..8.0f64) {
        let g = cheb(128);
        let f1 = GridFunction::from_real_fn(g.clone(), |x| horner(&a, x));
        let f2 = GridFunction::from_real_fn(g, |x| horner(&b, x));
        let q = p / (p - 1.0);
        let lhs = pairing(&f1, &f2).unwrap().norm();
        let rhs = norm(&f1, &SpaceSpec::lp(p).unwrap()) * norm(&f2, &SpaceSpec::lp(q).unwrap());
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn projection_is_idempotent(c in coeffs()) {
        let f: Func = func(Piecewise::monomial(&c));
        let pf = projection_p(&f).unwrap();
        let ppf = projection_p(&pf).unwrap();
        prop_assert!(sup_residual(&sub(&ppf, &pf), INTERIOR).unwrap() <= 1e-9);
    }

    #[test]
    fn modulating_coefficients_are_bounded(re in -1.5..1.5f64, im in -1.5..1.5f64) {
        let c = C64::new(re, im);
        let m = ModulatingFunction::uniform(vec![c, C64::new(1.0, 0.0)]);
        prop_assert_eq!(m.is_ok(), c.norm() <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn semivariation_is_monotone(c in coeffs(), a in interval_set(), b in interval_set()) {
        let g = cheb(96);
        let x = SpaceSpec::lp(1.5).unwrap();
        let opts = SearchOptions { cells: 6, search: Search::Exhaustive, ..SearchOptions::default() };
        let f: Func = func(Piecewise::monomial(&c));
        let small = a.intersection(&b);
        let big = a.union(&b);
        let s = semivariation(&f, &small, &x, &opts, &g).unwrap();
        let l = semivariation(&f, &big, &x, &opts, &g).unwrap();
        prop_assert!(s <= l + 1e-9, "{} > {}", s, l);
    }
}
