use std::sync::Arc;

use fht_core::function::{func, Piecewise};
use fht_core::ri::{
    boyd_estimate, dilate, dilate_fn, dilation_opnorm, distribution, norm, norm_fn, pairing, rearrangement,
    step_dictionary, xa_decay,
};
use fht_core::{Func, Grid, GridFunction, IntervalSet, Rearrangement, SpaceSpec, C64};

fn cheb(n: usize) -> Arc<Grid> {
    Arc::new(Grid::chebyshev_gauss(n).unwrap())
}

fn c(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn inv_w(x: f64) -> f64 {
    1.0 / (1.0 - x * x).sqrt()
}

#[test]
fn distribution_examples() {
    let g = cheb(2048);
    let one = GridFunction::from_real_fn(g.clone(), |_| 1.0);
    assert!((distribution(&one, 0.5) - 2.0).abs() < 1e-12);
    assert_eq!(distribution(&one, 1.5), 0.0);
    let f = GridFunction::from_real_fn(g, inv_w);
    let exact = 2.0 * (1.0 - (0.75f64).sqrt());
    assert!((exact - 0.267_949).abs() < 1e-6);
    assert!((distribution(&f, 2.0) - exact).abs() < 2e-3);
}

#[test]
fn rearrangement_examples() {
    let step = Piecewise::steps(&[(-1.0, 0.0, c(2.0)), (0.0, 1.0, c(1.0))]);
    let r = Rearrangement::from_steps(&step).unwrap();
    assert_eq!(r.values(), &[2.0, 1.0]);
    assert_eq!(r.ends(), &[1.0, 2.0]);
    assert_eq!(r.value_at(0.5), 2.0);
    assert_eq!(r.value_at(1.5), 1.0);

    let g = cheb(512);
    let k = GridFunction::from_real_fn(g.clone(), |_| -3.0);
    let r = rearrangement(&k);
    assert_eq!(r.values().len(), 1);
    assert!((r.values()[0] - 3.0).abs() < 1e-15 && (r.support() - 2.0).abs() < 1e-12);

    let f = GridFunction::from_real_fn(cheb(4096), inv_w);
    let r = rearrangement(&f);
    for t in [0.1f64, 0.5, 1.0, 2.0 - 1e-9] {
        let exact = 2.0 / (t * (4.0 - t)).sqrt();
        assert!((r.interpolated(t) - exact).abs() < 1e-3, "t={t}");
    }
}

#[test]
fn rearrangement_matches_sort_oracle() {
    let cells: Vec<(f64, f64, C64)> = vec![
        (-1.0, -0.6, c(0.5)),
        (-0.6, -0.1, c(-3.0)),
        (-0.1, 0.2, c(1.25)),
        (0.2, 0.7, c(3.0)),
        (0.7, 1.0, c(0.0)),
    ];
    let r = Rearrangement::from_steps(&Piecewise::steps(&cells)).unwrap();
    let mut pairs: Vec<(f64, f64)> = cells.iter().map(|&(a, b, v)| (v.norm(), b - a)).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    for t in [0.05, 0.5, 0.95, 1.05, 1.3, 1.69, 1.71] {
        let mut acc = 0.0;
        let mut want = 0.0;
        for &(v, m) in &pairs {
            acc += m;
            if t < acc {
                want = v;
                break;
            }
        }
        assert_eq!(r.value_at(t), want, "t={t}");
    }
    assert!(r.values().windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn norm_examples() {
    let one: Func = func(Piecewise::constant(c(1.0)));
    let n = norm_fn(&one, &SpaceSpec::lp(2.0).unwrap()).unwrap();
    assert!((n.value - 2f64.sqrt()).abs() < 1e-12 && n.resolved);

    let half: Func = func(Piecewise::indicator(&IntervalSet::interval(0.0, 1.0).unwrap()));
    let n = norm_fn(&half, &SpaceSpec::lorentz(2.0, 1.0).unwrap()).unwrap();
    assert!((n.value - 2.0).abs() < 1e-12);

    let f = GridFunction::from_real_fn(cheb(4096), inv_w);
    let weak = norm(&f, &SpaceSpec::weak_lp(2.0).unwrap());
    assert!((weak - 2f64.sqrt()).abs() < 1e-3, "{weak}");
    let n = norm_fn(&func(Piecewise::inv_w()), &SpaceSpec::weak_lp(2.0).unwrap()).unwrap();
    assert!((n.value - 2f64.sqrt()).abs() < 1e-3);
}

#[test]
fn lorentz_diagonal_is_lebesgue() {
    let steps: [&[(f64, f64, C64)]; 3] = [
        &[(-1.0, 1.0, c(1.0))],
        &[(-1.0, -0.2, c(2.0)), (-0.2, 0.5, c(-0.5)), (0.5, 1.0, c(4.0))],
        &[(-0.9, -0.8, c(7.0)), (0.1, 0.3, c(1.5))],
    ];
    for s in steps {
        let f: Func = func(Piecewise::steps(s));
        for p in [1.5, 2.0, 3.5] {
            let a = norm_fn(&f, &SpaceSpec::lorentz(p, p).unwrap()).unwrap().value;
            let b = norm_fn(&f, &SpaceSpec::lp(p).unwrap()).unwrap().value;
            assert!((a - b).abs() < 1e-8 * b.max(1.0), "p={p}: {a} vs {b}");
        }
    }
    let poly = GridFunction::from_real_fn(cheb(1024), |x| 1.0 + x - 2.0 * x * x * x);
    for p in [1.5, 3.0] {
        let a = norm(&poly, &SpaceSpec::lorentz(p, p).unwrap());
        let b = norm(&poly, &SpaceSpec::lp(p).unwrap());
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn dilation_examples() {
    let one: Func = func(Piecewise::constant(c(1.0)));
    let same = dilate_fn(&one, 1.0).unwrap();
    assert_eq!(same.eval(0.7).unwrap(), c(1.0));
    let shrunk = dilate_fn(&one, 2.0).unwrap();
    assert_eq!(shrunk.eval(0.4).unwrap(), c(1.0));
    assert_eq!(shrunk.eval(0.6).unwrap(), c(0.0));
    let spread = dilate_fn(&one, 0.5).unwrap();
    assert_eq!(spread.eval(0.99).unwrap(), c(1.0));
    assert!(dilate_fn(&one, 0.0).is_err());

    let g = GridFunction::from_real_fn(cheb(64), |x| x);
    assert_eq!(dilate(&g, 1.0).unwrap(), g);

    let dict = step_dictionary();
    let l2 = SpaceSpec::lp(2.0).unwrap();
    assert!((dilation_opnorm(&l2, 1.0, &dict).unwrap() - 1.0).abs() < 1e-12);
    assert!((dilation_opnorm(&l2, 2.0, &dict).unwrap() - 0.5f64.sqrt()).abs() < 0.02);
    let l4 = SpaceSpec::lp(4.0).unwrap();
    assert!((dilation_opnorm(&l4, 2.0, &dict).unwrap() - 0.5f64.powf(0.25)).abs() < 0.02);
    assert!(dilation_opnorm(&l2, 2.0, &[]).is_err());
    assert!(dilation_opnorm(&l2, 2.0, &[func(Piecewise::zero())]).is_err());
}

#[test]
fn boyd_indices() {
    let dict = step_dictionary();
    let t_grid = [0.1, 0.25, 0.5, 2.0, 4.0, 10.0];
    let cases = [
        (SpaceSpec::lp(2.0).unwrap(), 0.5),
        (SpaceSpec::lorentz(3.0, 1.0).unwrap(), 1.0 / 3.0),
        (SpaceSpec::weak_lp(2.0).unwrap(), 0.5),
        (SpaceSpec::lp(1.5).unwrap(), 2.0 / 3.0),
        (SpaceSpec::lp(3.0).unwrap(), 1.0 / 3.0),
    ];
    for (x, want) in cases {
        let (lo, hi) = boyd_estimate(&x, &t_grid, &dict).unwrap();
        assert!((lo - want).abs() < 0.05 && (hi - want).abs() < 0.05, "{x:?}: {lo} {hi}");
        assert_eq!(x.boyd_lower(), x.boyd_upper());
    }
    // Duality: the indices of X′ are 1 minus those of X.
    let x = SpaceSpec::lp(3.0).unwrap();
    let (lo, _) = boyd_estimate(&x.associate(), &t_grid, &dict).unwrap();
    assert!((lo - (1.0 - x.boyd_upper())).abs() < 0.05);
    assert!(boyd_estimate(&x, &[0.5, 1.0, 2.0], &dict).is_err());
    assert!(boyd_estimate(&x, &[2.0, 4.0], &dict).is_err());
}

#[test]
fn decay_examples() {
    let g = cheb(4096);
    let one = GridFunction::from_real_fn(g.clone(), |_| 1.0);
    assert!(xa_decay(&one, 2.0).unwrap().value < 0.05);
    let f = GridFunction::from_real_fn(g.clone(), inv_w);
    let d = xa_decay(&f, 2.0).unwrap();
    assert!((d.value - 1.0).abs() < 0.05, "{d:?}");
    let q = GridFunction::from_real_fn(g, |x| x.abs().powf(-0.25));
    assert!(xa_decay(&q, 2.0).unwrap().value < 0.05);
}

#[test]
fn pairing_examples() {
    let g = cheb(512);
    let half = GridFunction::from_real_fn(g.clone(), |x| if x > 0.0 { 1.0 } else { 0.0 });
    assert!((pairing(&half, &half).unwrap().re - 1.0).abs() < 1e-12);
    let x = GridFunction::from_real_fn(g.clone(), |x| x);
    let one = GridFunction::from_real_fn(g.clone(), |_| 1.0);
    assert!(pairing(&x, &one).unwrap().norm() < 1e-14);
    assert!((pairing(&x, &x).unwrap().re - 2.0 / 3.0).abs() < 1e-12);
    let other = GridFunction::from_real_fn(cheb(64), |x| x);
    assert!(pairing(&x, &other).is_err());
}

#[test]
fn space_validation() {
    assert!(SpaceSpec::lp(1.0).is_err());
    assert!(SpaceSpec::lp(f64::INFINITY).is_err());
    assert!(SpaceSpec::lorentz(2.0, 0.5).is_err());
    assert!(SpaceSpec::weak_lp(0.5).is_err());
    assert!(!SpaceSpec::weak_lp(2.0).unwrap().order_continuous());
    assert!(SpaceSpec::lorentz(2.0, 3.0).unwrap().order_continuous());
    assert_eq!(SpaceSpec::lp(3.0).unwrap().associate(), SpaceSpec::lp(1.5).unwrap());
}
