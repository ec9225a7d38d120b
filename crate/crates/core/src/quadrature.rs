//! Non-singular quadrature: Gauss–Legendre rules, Fejér's first rule on
//! Chebyshev–Gauss nodes, and an adaptive Gauss–Kronrod integrator with a
//! divergence test for endpoint-singular integrands.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [-1, 1], nodes increasing.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Angles θ_j = (2j-1)π/(2N), j = 1..N, of the Chebyshev–Gauss nodes cos θ_j.
pub fn chebyshev_gauss_angles(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|j| (2 * j - 1) as f64 * PI / (2 * n) as f64)
        .collect()
}

/// Fejér's first rule: weights for ∫_{-1}^{1} f dx at the nodes cos θ_j
/// (in the order of `chebyshev_gauss_angles`). Exact for polynomials of
/// degree < N.
pub fn fejer_weights(n: usize) -> Vec<f64> {
    let angles = chebyshev_gauss_angles(n);
    angles
        .iter()
        .map(|&th| {
            let s: f64 = (1..=n / 2)
                .map(|k| {
                    let k = k as f64;
                    (2.0 * k * th).cos() / (4.0 * k * k - 1.0)
                })
                .sum();
            2.0 / n as f64 * (1.0 - 2.0 * s)
        })
        .collect()
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_734_325,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rule for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-13,
            rel: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl Tolerance {
    pub fn with_abs(abs: f64) -> Self {
        Tolerance {
            abs,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: C64,
    pub error: f64,
    pub converged: bool,
}

fn kronrod21<F>(f: &mut F, a: f64, b: f64) -> Result<(C64, f64)>
where
    F: FnMut(f64) -> Result<C64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[10];
    let mut gauss = C64::new(0.0, 0.0);
    for (i, &x) in XGK.iter().take(10).enumerate() {
        let f1 = f(c - h * x)?;
        let f2 = f(c + h * x)?;
        let s = f1 + f2;
        kron += s * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    let value = kron * h;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Divergent(format!(
            "non-finite integrand on [{a:e}, {b:e}]"
        )));
    }
    let err = ((kron - gauss) * h).norm();
    Ok((value, err))
}

struct Panel {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod (10/21) integration of `f` over [a, b].
///
/// `f` is never evaluated at `a` or `b`, so integrable endpoint
/// singularities are admissible.
pub fn adaptive<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<C64>,
{
    if a == b {
        return Ok(QuadResult {
            value: C64::new(0.0, 0.0),
            error: 0.0,
            converged: true,
        });
    }
    let (value, error) = kronrod21(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    // below this width Kronrod nodes can round onto the panel ends
    let min_width = ((b - a).abs() * 1e-15).max(4096.0 * f64::EPSILON * a.abs().max(b.abs()));
    // panels too narrow to split; their error is frozen
    let mut frozen_err = 0.0;
    let mut frozen = C64::new(0.0, 0.0);
    while heap.len() < tol.max_intervals {
        let target = tol.abs.max(tol.rel * total.norm());
        if total_err <= target {
            break;
        }
        let Some(p) = heap.pop() else { break };
        if (p.b - p.a).abs() < min_width {
            frozen += p.value;
            frozen_err += p.error;
            continue;
        }
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = kronrod21(&mut f, p.a, m)?;
        let (v2, e2) = kronrod21(&mut f, m, p.b)?;
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;
        heap.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed accumulated rounding from the running updates
    let value = heap.iter().map(|p| p.value).sum::<C64>() + frozen;
    let error = heap.iter().map(|p| p.error).sum::<f64>() + frozen_err;
    let target = tol.abs.max(tol.rel * value.norm());
    Ok(QuadResult {
        value,
        error,
        converged: error <= target.max(1e3 * f64::EPSILON * value.norm()),
    })
}

/// Adaptive integration over [a, b] split at the interior `breakpoints`.
pub fn adaptive_split<F>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<C64>,
{
    let pts = split_points(a, b, breakpoints);
    let mut out = QuadResult {
        value: C64::new(0.0, 0.0),
        error: 0.0,
        converged: true,
    };
    for w in pts.windows(2) {
        let r = adaptive(&mut f, w[0], w[1], tol)?;
        out.value += r.value;
        out.error += r.error;
        out.converged &= r.converged;
    }
    Ok(out)
}

/// Sorted, deduplicated {a} ∪ (breakpoints ∩ (a,b)) ∪ {b}.
pub fn split_points(a: f64, b: f64, breakpoints: &[f64]) -> Vec<f64> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let mut pts = vec![lo];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&c| c > lo && c < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(hi);
    if a > b {
        pts.reverse();
    }
    pts
}

/// Outcome of an integral whose convergence is in question.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integral {
    Finite(C64),
    Divergent,
}

impl Integral {
    pub fn is_finite(&self) -> bool {
        matches!(self, Integral::Finite(_))
    }

    pub fn value(&self) -> Option<C64> {
        match self {
            Integral::Finite(v) => Some(*v),
            Integral::Divergent => None,
        }
    }

    /// Real part, or +∞ when divergent.
    pub fn re_or_inf(&self) -> f64 {
        match self {
            Integral::Finite(v) => v.re,
            Integral::Divergent => f64::INFINITY,
        }
    }
}

const SHELLS: usize = 8;
const SHELL_RATIO: f64 = 0.01;
const CORE_FRACTION: f64 = 0.25;

/// Integrates `f` over [a, b] where `f` may be singular at the ends and at the
/// `singular` points. Each singular location is approached through a sequence
/// of geometrically shrinking shells; when the shell contributions stop
/// decaying the integral is reported divergent, otherwise the remaining tail
/// is extrapolated geometrically.
pub fn integrate_checked<F>(
    mut f: F,
    a: f64,
    b: f64,
    singular: &[f64],
    tol: Tolerance,
) -> Result<Integral>
where
    F: FnMut(f64) -> Result<C64>,
{
    let pts = split_points(a, b, singular);
    let mut total = C64::new(0.0, 0.0);
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let len = hi - lo;
        let core_lo = lo + CORE_FRACTION * len;
        let core_hi = hi - CORE_FRACTION * len;
        match adaptive(&mut f, core_lo, core_hi, tol) {
            Ok(r) => total += r.value,
            Err(Error::Divergent(_)) => return Ok(Integral::Divergent),
            Err(e) => return Err(e),
        }
        for side in [-1.0, 1.0] {
            let anchor = if side < 0.0 { lo } else { hi };
            let mut shells = Vec::with_capacity(SHELLS);
            let mut outer = CORE_FRACTION * len;
            for _ in 0..SHELLS {
                let inner = outer * SHELL_RATIO;
                let (s0, s1) = if side < 0.0 {
                    (anchor + inner, anchor + outer)
                } else {
                    (anchor - outer, anchor - inner)
                };
                if s0 == anchor || s1 == anchor {
                    break;
                }
                match adaptive(&mut f, s0, s1, tol) {
                    Ok(r) => shells.push(r.value),
                    Err(Error::Divergent(_)) => return Ok(Integral::Divergent),
                    Err(e) => return Err(e),
                }
                outer = inner;
            }
            let sum: C64 = shells.iter().sum();
            let n = shells.len();
            if n < 2 {
                total += sum;
                continue;
            }
            let last = shells[n - 1].norm();
            let prev = shells[n - 2].norm();
            let scale = sum.norm().max(total.norm()).max(1.0);
            if last <= 1e-14 * scale {
                total += sum;
                continue;
            }
            let ratio = if prev > 0.0 { last / prev } else { f64::INFINITY };
            if ratio >= 0.9 {
                return Ok(Integral::Divergent);
            }
            // geometric tail beyond the innermost shell
            let tail = shells[n - 1] * (ratio / (1.0 - ratio));
            total += sum + tail;
        }
    }
    Ok(Integral::Finite(total))
}
