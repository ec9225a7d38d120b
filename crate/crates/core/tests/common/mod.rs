//! Reference values computed without the library: symmetric-exclusion
//! principal values with Richardson extrapolation in ε, and graded
//! Gauss–Legendre quadrature.

#![allow(dead_code)]

use std::f64::consts::PI;

/// n-point Gauss–Legendre rule on [-1, 1] by Newton iteration on P_n.
pub fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

fn gl(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.0.iter().zip(&rule.1).map(|(x, w)| w * f(m + h * x)).sum::<f64>() * h
}

/// ∫_a^b f with panels graded geometrically towards both ends. The last
/// 1e-15 of relative width at each end is dropped, so f must stay bounded
/// there.
pub fn graded(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rule = legendre_rule(24);
    let mid = 0.5 * (a + b);
    let mut total = 0.0;
    for (from, to) in [(a, mid), (b, mid)] {
        let mut edges = vec![1.0];
        while *edges.last().unwrap() > 1e-15 {
            edges.push(edges.last().unwrap() * 0.2);
        }
        edges.reverse();
        for k in 0..edges.len() - 1 {
            let (u, v) = (from + (to - from) * edges[k], from + (to - from) * edges[k + 1]);
            total += gl(f, u.min(v), u.max(v), &rule);
        }
    }
    total
}

/// (1/π) p.v.∫ f(x)/(x-t) dx for f given through θ ↦ f(cos θ)·sin θ,
/// which stays bounded for f with 1/w endpoint behaviour. `breaks` are
/// interior x where f jumps.
pub fn pv_angle(fs: &dyn Fn(f64) -> f64, t: f64, breaks: &[f64]) -> f64 {
    let mut gap = (1.0 - t.abs()).min(0.5);
    for b in breaks {
        gap = gap.min((b - t).abs());
    }
    let levels = 5;
    let eps0 = 0.25 * gap;
    let excluded = |eps: f64| -> f64 {
        let mut cuts: Vec<f64> = vec![0.0, PI];
        for b in breaks {
            cuts.push(b.acos());
        }
        let (lo, hi) = ((t + eps).acos(), (t - eps).acos());
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        let g = |th: f64| fs(th) / (th.cos() - t);
        let mut s = 0.0;
        for k in 0..cuts.len() - 1 {
            let (u, v) = (cuts[k], cuts[k + 1]);
            if u >= lo && v <= hi {
                continue;
            }
            s += graded(&g, u, v);
        }
        s / PI
    };
    let mut table: Vec<f64> = (0..levels).map(|k| excluded(eps0 / 2f64.powi(k as i32))).collect();
    // Error expansion in odd powers of ε.
    for j in 0..levels - 1 {
        let f = 2f64.powi(2 * j as i32 + 1);
        table = table.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    table[0]
}

/// Oracle T(f)(t) for f given on (-1, 1).
pub fn pv(f: &dyn Fn(f64) -> f64, t: f64, breaks: &[f64]) -> f64 {
    pv_angle(&|th: f64| f(th.cos()) * th.sin(), t, breaks)
}

/// ∫_{-1}^{1} f dx for f given through θ ↦ f(cos θ)·sin θ, graded at both
/// ends and at `breaks`.
pub fn integral_angle(fs: &dyn Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    let mut cuts = vec![0.0, PI];
    cuts.extend(breaks.iter().map(|b| b.acos()));
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).map(|w| graded(fs, w[0], w[1])).sum()
}

pub fn integral(f: &dyn Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    integral_angle(&|th: f64| f(th.cos()) * th.sin(), breaks)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
