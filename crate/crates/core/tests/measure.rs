mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::{close, integral};
use fht_core::airfoil::rybakov_g0;
use fht_core::function::{func, hilbert, Piecewise};
use fht_core::measure::{
    blowup_demo, dual_dictionary, frechet_membership, indefinite_integral, m_x, membership_report, optdomain_norm,
    parseval_defect, random_interval_set, scalar_measure, semivariation, total_variation_levels,
    total_variation_scalar, weak_norm_mw, ModulatingFunction, Search, SearchOptions, Verdict,
};
use fht_core::ri::{norm, pairing};
use fht_core::transform::{fht_indicator, fht_sample, PvConfig};
use fht_core::{Error, Func, Function, Grid, GridFunction, IntervalSet, SpaceSpec, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly(c: &[f64]) -> Func {
    func(Piecewise::monomial(c))
}

fn grid(n: usize) -> Arc<Grid> {
    Arc::new(Grid::chebyshev_gauss(n).unwrap())
}

fn opts(cells: usize, search: Search) -> SearchOptions {
    SearchOptions {
        cells,
        search,
        ..SearchOptions::default()
    }
}

#[test]
fn vector_measure_examples() {
    let g = grid(64);
    assert!(m_x(&IntervalSet::empty(), g.clone()).unwrap().values().iter().all(|v| v.norm() == 0.0));
    let probe = Arc::new(Grid::custom(vec![-0.5], vec![1.0]).unwrap());
    let v = m_x(&IntervalSet::interval(0.0, 1.0).unwrap(), probe).unwrap().values()[0].re;
    assert!(close(v, 3f64.ln() / PI, 1e-15));

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let a = random_interval_set(&mut rng, 4, 16);
        let b = random_interval_set(&mut rng, 4, 16).intersection(&a.complement());
        let whole = m_x(&a.union(&b), g.clone()).unwrap();
        let parts = m_x(&a, g.clone()).unwrap().add(&m_x(&b, g.clone()).unwrap()).unwrap();
        for (x, y) in whole.values().iter().zip(parts.values()) {
            assert!((x - y).norm() < 1e-10);
        }
    }
}

#[test]
fn scalar_measure_examples() {
    // ⟨m_X, g⟩(A) agrees with the pairing of m_X(A) and g.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = poly(&[0.3, -1.0, 0.5, 0.7]);
    for _ in 0..5 {
        let a = random_interval_set(&mut rng, 3, 16);
        let direct = scalar_measure(&g, &a).unwrap();
        let m = hilbert(&func(Piecewise::indicator(&a)));
        let breaks: Vec<f64> = a.interior_endpoints();
        let paired = integral(&|x| m.eval(x).map(|v| v.re).unwrap_or(0.0) * (0.3 - x + 0.5 * x * x + 0.7 * x * x * x), &breaks);
        assert!(close(direct.re, paired, 1e-6), "{a:?}: {direct} {paired}");
    }
    let g0 = rybakov_g0();
    for b in [0.25, 0.5, 0.9] {
        let a = IntervalSet::interval(0.0, b).unwrap();
        assert!(close(scalar_measure(&g0, &a).unwrap().re, -b, 1e-4));
    }
    assert_eq!(scalar_measure(&poly(&[0.0]), &IntervalSet::full()).unwrap(), C64::new(0.0, 0.0));
}

#[test]
fn total_variation_examples() {
    let g0 = rybakov_g0();
    assert!(close(total_variation_scalar(&g0, &IntervalSet::full(), 256).unwrap(), 2.0, 1e-3));
    assert_eq!(total_variation_scalar(&poly(&[0.0]), &IntervalSet::full(), 16).unwrap(), 0.0);
    let levels = total_variation_levels(&poly(&[0.2, 1.0, -0.5, 0.0, 1.0]), &IntervalSet::full(), 6).unwrap();
    assert!(levels.windows(2).all(|w| w[1] >= w[0] - 1e-10), "{levels:?}");
    assert!(total_variation_scalar(&g0, &IntervalSet::full(), 0).is_err());
}

#[test]
fn indefinite_integral_examples() {
    let g = grid(48);
    let b = IntervalSet::interval(-0.3, 0.6).unwrap();
    let a = IntervalSet::new(vec![(-0.8, -0.1), (0.4, 0.9)]).unwrap();
    let chi_b = func(Piecewise::indicator(&b));
    let nu = GridFunction::sample(g.clone(), indefinite_integral(&chi_b, &a).as_ref()).unwrap();
    let inter = a.intersection(&b);
    for (x, v) in g.nodes().iter().zip(nu.values()) {
        if inter.interior_endpoints().iter().any(|e| (e - x).abs() < 1e-9) {
            continue;
        }
        assert!((v - fht_indicator(&inter, *x).unwrap()).norm() < 1e-10);
    }

    let sq = poly(&[0.0, 0.0, 1.0]);
    let full = GridFunction::sample(g.clone(), indefinite_integral(&sq, &IntervalSet::full()).as_ref()).unwrap();
    let direct = fht_sample(&sq, g, &PvConfig::default()).unwrap();
    for (u, v) in full.values().iter().zip(direct.values()) {
        assert!((u - v).norm() < 1e-9);
    }

    let half = IntervalSet::interval(0.0, 1.0).unwrap();
    let v = indefinite_integral(&poly(&[0.0, 1.0]), &half).eval(-0.5).unwrap().re;
    assert!(close(v, (1.0 - 0.5 * 3f64.ln()) / PI, 1e-10));
}

#[test]
fn optdomain_examples() {
    let g = grid(256);
    let x = SpaceSpec::lp(1.5).unwrap();
    let zero = optdomain_norm(&poly(&[0.0]), &x, &opts(6, Search::Exhaustive), &g).unwrap();
    assert_eq!(zero.value, 0.0);

    let one = poly(&[1.0]);
    let ex = optdomain_norm(&one, &x, &opts(8, Search::Exhaustive), &g).unwrap();
    let rr = optdomain_norm(&one, &x, &opts(8, Search::RandomRestart), &g).unwrap();
    assert!((ex.value - rr.value).abs() < 1e-9);
    // A single-flip local search from all ones stops at a local optimum here.
    let gr = optdomain_norm(&one, &x, &opts(8, Search::GreedyFlip), &g).unwrap();
    assert!(gr.value <= ex.value + 1e-12);
    let t1 = norm(&fht_sample(&one, g.clone(), &PvConfig::default()).unwrap(), &x);
    assert!(ex.value >= t1 - 1e-9 && gr.value >= t1 - 1e-9);
    assert!(ex.witness.coefficients.iter().all(|c| c.norm() <= 1.0 + 1e-12));

    for f in [poly(&[0.5, -1.0, 0.25]), poly(&[0.0, 0.0, 0.0, 1.0])] {
        let t = norm(&fht_sample(&f, g.clone(), &PvConfig::default()).unwrap(), &x);
        for s in [Search::Exhaustive, Search::GreedyFlip, Search::RandomRestart] {
            assert!(optdomain_norm(&f, &x, &opts(8, s), &g).unwrap().value >= t - 1e-9);
        }
    }
    let refused = optdomain_norm(&one, &x, &opts(21, Search::Exhaustive), &g);
    assert!(matches!(refused, Err(Error::Refused(_))));
}

#[test]
fn search_is_deterministic() {
    let g = grid(128);
    let x = SpaceSpec::lp(3.0).unwrap();
    let f = poly(&[0.2, 1.0, -0.4]);
    let o = SearchOptions {
        cells: 12,
        seed: 42,
        ..SearchOptions::default()
    };
    let a = optdomain_norm(&f, &x, &o, &g).unwrap();
    let b = optdomain_norm(&f, &x, &o, &g).unwrap();
    assert_eq!(a, b);
}

#[test]
fn complex_refinement_reports_gain() {
    let g = grid(128);
    let x = SpaceSpec::lp(1.5).unwrap();
    let o = SearchOptions {
        cells: 6,
        search: Search::Exhaustive,
        complex: true,
        ..SearchOptions::default()
    };
    let est = optdomain_norm(&poly(&[1.0, 0.5]), &x, &o, &g).unwrap();
    let gain = est.complex_gain.unwrap();
    assert!(gain >= 0.0);
    assert!(est.witness.coefficients.iter().all(|c| c.norm() <= 1.0 + 1e-12));
}

#[test]
fn semivariation_examples() {
    let g = grid(256);
    let x = SpaceSpec::lp(1.5).unwrap();
    let f = poly(&[0.3, 1.0, -0.6]);
    let ex = opts(10, Search::Exhaustive);
    assert_eq!(semivariation(&f, &IntervalSet::empty(), &x, &ex, &g).unwrap(), 0.0);

    let a = IntervalSet::new(vec![(-0.7, -0.2), (0.1, 0.8)]).unwrap();
    let sv = semivariation(&f, &a, &x, &ex, &g).unwrap();
    let restricted = fht_core::function::restrict(&f, &a);
    let od = optdomain_norm(&restricted, &x, &ex, &g).unwrap().value;
    assert!((sv - od).abs() <= 1e-6 * od.max(1e-12), "{sv} {od}");

    let small = IntervalSet::interval(0.1, 0.5).unwrap();
    let big = IntervalSet::interval(-0.2, 0.9).unwrap();
    let s1 = semivariation(&f, &small, &x, &ex, &g).unwrap();
    let s2 = semivariation(&f, &big, &x, &ex, &g).unwrap();
    assert!(s1 <= s2 + 1e-9);
}

#[test]
fn simple_functions_have_matching_norms() {
    // For a step function, the [T,X] estimate and the semivariation over
    // the full interval are the same supremum.
    let g = grid(256);
    let x = SpaceSpec::lp(2.5).unwrap();
    let s = ModulatingFunction::uniform(vec![C64::new(1.0, 0.0), C64::new(-0.5, 0.0), C64::new(0.25, 0.0), C64::new(1.0, 0.0)])
        .unwrap()
        .to_func();
    let ex = opts(12, Search::Exhaustive);
    let a = optdomain_norm(&s, &x, &ex, &g).unwrap().value;
    let b = semivariation(&s, &IntervalSet::full(), &x, &ex, &g).unwrap();
    assert!((a - b).abs() <= 1e-9 * a);
}

#[test]
fn weak_norm_examples() {
    let x = SpaceSpec::lp(1.5).unwrap();
    let dict = dual_dictionary(0);
    assert_eq!(dict.len(), 64);
    assert_eq!(weak_norm_mw(&poly(&[0.0]), &x, &dict).unwrap(), 0.0);
    let f = poly(&[0.5, 1.0]);
    let a = weak_norm_mw(&f, &x, &dict).unwrap();
    let b = weak_norm_mw(&poly(&[1.0, 2.0]), &x, &dict).unwrap();
    assert!((b - 2.0 * a).abs() <= 1e-10 * b.max(1.0));
    assert!(weak_norm_mw(&f, &x, &[]).is_err());
}

#[test]
fn parseval_examples() {
    assert!(parseval_defect(&poly(&[0.0, 1.0]), &poly(&[0.0, 0.0, 1.0])).unwrap() <= 1e-7);
    assert!(parseval_defect(&poly(&[0.0, 1.0]), &poly(&[0.0, 1.0])).unwrap() <= 1e-7);
    assert_eq!(parseval_defect(&poly(&[0.0]), &poly(&[0.0])).unwrap(), 0.0);
    let dict: Vec<Func> = (0..8).map(|k| {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        poly(&c)
    }).collect();
    for f in &dict {
        for g in &dict {
            assert!(parseval_defect(f, g).unwrap() <= 1e-6);
        }
    }
}

#[test]
fn membership_examples() {
    let x = SpaceSpec::lp(1.5).unwrap();
    let r = membership_report(&poly(&[1.0, -0.5, 0.25]), &x, 6, 0).unwrap();
    assert_eq!(r.verdict, Verdict::Member);
    assert!(r.in_l1 && r.indicator_checks.len() == 6);
    assert_eq!(membership_report(&poly(&[0.0]), &x, 3, 0).unwrap().verdict, Verdict::Member);

    let pole = func(Pole);
    let r = membership_report(&pole, &x, 4, 0).unwrap();
    assert_ne!(r.verdict, Verdict::Member);
    assert!(!r.in_l1);
    assert!(membership_report(&pole, &x, 0, 0).is_err());
}

/// 1/(1-x), evaluated in angle form as 1/(2 sin²(θ/2)) to stay accurate at x = 1.
#[derive(Debug)]
struct Pole;

impl Function for Pole {
    fn eval(&self, x: f64) -> fht_core::Result<C64> {
        Ok(C64::new(1.0 / (1.0 - x), 0.0))
    }

    fn eval_angle(&self, theta: f64) -> fht_core::Result<C64> {
        Ok(C64::new(0.5 / (0.5 * theta).sin().powi(2), 0.0))
    }
}

#[test]
fn blowup_examples() {
    let b = blowup_demo(0.0, 2.0).unwrap();
    assert!(b.value > 4.0);
    assert!(b.interval.1 <= (-4.0 * PI).exp());
    assert!(b.x > 0.0 && b.x < b.interval.1);
    let wide = blowup_demo(0.0, 0.01).unwrap();
    assert!(wide.value > 0.02 && wide.interval.1 - wide.interval.0 > 0.5);
    for t in [-0.9, -0.3, 0.2, 0.7, 0.99] {
        for m in [0.05, 1.0, 3.0] {
            let b = blowup_demo(t, m).unwrap();
            assert!(b.value > 2.0 * m, "t={t} m={m}");
        }
    }
    assert!(blowup_demo(1.0, 1.0).is_err());
    assert!(blowup_demo(0.0, 0.0).is_err());
}

#[test]
fn frechet_examples() {
    let one = poly(&[1.0]);
    for (p, n) in frechet_membership(&one, &[1.5, 2.0, 4.0]).unwrap() {
        assert!(close(n.value, 2f64.powf(1.0 / p), 1e-12));
    }
    let r = frechet_membership(&func(Piecewise::inv_w()), &[1.5, 1.9, 2.0]).unwrap();
    assert!(r[0].1.is_finite() && r[1].1.is_finite());
    assert!(!r[2].1.is_finite());

    let f = poly(&[0.3, -2.0, 0.0, 1.0]);
    let ps = [1.2, 1.5, 2.0, 3.0, 6.0];
    let r = frechet_membership(&f, &ps).unwrap();
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            let (p, q) = (ps[i], ps[j]);
            let bound = 2f64.powf(1.0 / p - 1.0 / q) * r[j].1.value;
            assert!(r[i].1.value <= bound + 1e-9);
        }
    }
    assert!(frechet_membership(&f, &[]).is_err());
    assert!(frechet_membership(&f, &[1.0]).is_err());
}

#[test]
fn sigma_additivity_proxy() {
    let g = grid(512);
    let x = SpaceSpec::lp(1.5).unwrap();
    let mut last = f64::INFINITY;
    for k in 1..=6 {
        let eps = 10f64.powi(-k);
        let v = norm(&m_x(&IntervalSet::interval(0.0, eps).unwrap(), g.clone()).unwrap(), &x);
        assert!(v <= last);
        last = v;
    }
    assert!(last < 1e-3);
}

#[test]
fn pairing_matches_grid_measure() {
    let g = grid(1024);
    let a = IntervalSet::interval(-0.4, 0.3).unwrap();
    let m = m_x(&a, g.clone()).unwrap();
    let p = GridFunction::from_real_fn(g, |x| 1.0 + x * x);
    let s = scalar_measure(&poly(&[1.0, 0.0, 1.0]), &a).unwrap();
    assert!((pairing(&m, &p).unwrap() - s).norm() < 1e-2);
}
