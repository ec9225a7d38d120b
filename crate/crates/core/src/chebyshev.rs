//! Chebyshev series on [-1, 1] and the classical transform relations
//! T(T_n/w) = U_{n-1}, T(1/w) = 0.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::chebyshev_gauss_angles;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Σ a_n T_n(x) with first-kind Chebyshev polynomials T_n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevSeries {
    coefficients: Vec<C64>,
}

impl ChebyshevSeries {
    pub fn new(coefficients: Vec<C64>) -> Self {
        ChebyshevSeries { coefficients }
    }

    pub fn from_real(coefficients: &[f64]) -> Self {
        Self::new(coefficients.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The single basis polynomial T_n.
    pub fn basis(n: usize) -> Self {
        let mut c = vec![ZERO; n + 1];
        c[n] = C64::new(1.0, 0.0);
        Self::new(c)
    }

    /// Converts monomial coefficients a_0 + a_1 x + a_2 x² + … to the
    /// Chebyshev basis.
    pub fn from_monomial(a: &[C64]) -> Self {
        let mut s = ChebyshevSeries::zero();
        for &c in a.iter().rev() {
            s = s.mul_x();
            s.add_at(0, c);
        }
        s.trimmed()
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// Number of stored coefficients minus one (the formal degree).
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| *c == ZERO)
    }

    fn add_at(&mut self, k: usize, c: C64) {
        if self.coefficients.len() <= k {
            self.coefficients.resize(k + 1, ZERO);
        }
        self.coefficients[k] += c;
    }

    /// Drops trailing exact zeros.
    pub fn trimmed(mut self) -> Self {
        while self.coefficients.last() == Some(&ZERO) {
            self.coefficients.pop();
        }
        self
    }

    /// Interpolates samples taken at the Chebyshev–Gauss nodes cos θ_j,
    /// θ_j = (2j-1)π/(2N), given in increasing node order.
    pub fn fit(samples_increasing: &[C64]) -> Result<Self> {
        let n = samples_increasing.len();
        if n == 0 {
            return Err(Error::structural("cannot fit a Chebyshev series to zero samples"));
        }
        Self::fit_degree(samples_increasing, n - 1)
    }

    /// Like `fit`, truncated to degree `degree`.
    pub fn fit_degree(samples_increasing: &[C64], degree: usize) -> Result<Self> {
        let n = samples_increasing.len();
        if degree + 1 > n {
            return Err(Error::structural(format!(
                "degree {degree} needs at least {} nodes, got {n}",
                degree + 1
            )));
        }
        // increasing node i corresponds to angle index j = n - i
        let cos_table: Vec<f64> = (0..4 * n)
            .map(|m| (m as f64 * PI / (2 * n) as f64).cos())
            .collect();
        let mut coeffs = vec![ZERO; degree + 1];
        for (k, ck) in coeffs.iter_mut().enumerate() {
            let mut acc = ZERO;
            for (i, &f) in samples_increasing.iter().enumerate() {
                let j = n - i;
                let m = (k * (2 * j - 1)) % (4 * n);
                acc += f * cos_table[m];
            }
            let scale = if k == 0 { 1.0 } else { 2.0 };
            *ck = acc * (scale / n as f64);
        }
        Ok(Self::new(coeffs))
    }

    /// Fits `f` by interpolation at `n` Chebyshev–Gauss nodes.
    pub fn approximate<F: FnMut(f64) -> C64>(mut f: F, n: usize) -> Result<Self> {
        let mut angles = chebyshev_gauss_angles(n);
        angles.reverse();
        let samples: Vec<C64> = angles.iter().map(|&th| f(th.cos())).collect();
        Self::fit(&samples)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> C64 {
        let c = &self.coefficients;
        match c.len() {
            0 => ZERO,
            1 => c[0],
            _ => {
                let mut b1 = ZERO;
                let mut b2 = ZERO;
                for &ck in c.iter().skip(1).rev() {
                    let b0 = ck + b1 * (2.0 * x) - b2;
                    b2 = b1;
                    b1 = b0;
                }
                c[0] + b1 * x - b2
            }
        }
    }

    /// Sum of absolute values of the last `k` coefficients.
    pub fn tail(&self, k: usize) -> f64 {
        let n = self.coefficients.len();
        self.coefficients[n.saturating_sub(k)..]
            .iter()
            .map(|c| c.norm())
            .sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coefficients.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coefficients.len().max(other.coefficients.len());
        let mut out = vec![ZERO; n];
        for (k, &c) in self.coefficients.iter().enumerate() {
            out[k] += c;
        }
        for (k, &c) in other.coefficients.iter().enumerate() {
            out[k] += c;
        }
        Self::new(out)
    }

    /// x · s(x), using x T_n = (T_{n+1} + T_{|n-1|})/2.
    pub fn mul_x(&self) -> Self {
        let mut out = ChebyshevSeries::new(vec![ZERO; self.coefficients.len() + 1]);
        for (n, &c) in self.coefficients.iter().enumerate() {
            if n == 0 {
                out.add_at(1, c);
            } else {
                out.add_at(n + 1, c * 0.5);
                out.add_at(n - 1, c * 0.5);
            }
        }
        out
    }

    /// (1 - x²) · s(x).
    pub fn mul_one_minus_x2(&self) -> Self {
        let mut out = ChebyshevSeries::new(vec![ZERO; self.coefficients.len() + 2]);
        for (n, &c) in self.coefficients.iter().enumerate() {
            out.add_at(n, c * 0.5);
            out.add_at(n + 2, -c * 0.25);
            out.add_at(n.abs_diff(2), -c * 0.25);
        }
        out
    }

    /// s(t·x) for a real factor t.
    pub fn compose_scale(&self, t: f64) -> Self {
        // Clenshaw in series arithmetic: T_{n+1}(tx) = 2tx T_n(tx) - T_{n-1}(tx)
        let mut prev = ChebyshevSeries::constant(C64::new(1.0, 0.0));
        let mut cur = ChebyshevSeries::from_real(&[0.0, t]);
        let mut out = prev.scale(self.coefficients.first().copied().unwrap_or(ZERO));
        for (n, &c) in self.coefficients.iter().enumerate().skip(1) {
            out = out.add(&cur.scale(c));
            if n + 1 < self.coefficients.len() {
                let next = cur.mul_x().scale(C64::new(2.0 * t, 0.0)).add(&prev.scale(C64::new(-1.0, 0.0)));
                prev = cur;
                cur = next;
            }
        }
        out
    }

    /// Antiderivative F with F(-1) = 0.
    pub fn antiderivative(&self) -> Self {
        let c = &self.coefficients;
        let mut out = ChebyshevSeries::new(vec![ZERO; c.len() + 1]);
        for (n, &a) in c.iter().enumerate() {
            match n {
                0 => out.add_at(1, a),
                1 => {
                    out.add_at(2, a * 0.25);
                    out.add_at(0, -a * 0.25);
                }
                _ => {
                    let nf = n as f64;
                    out.add_at(n + 1, a / (2.0 * (nf + 1.0)));
                    out.add_at(n - 1, -a / (2.0 * (nf - 1.0)));
                }
            }
        }
        let at_minus_one = out.eval(-1.0);
        out.add_at(0, -at_minus_one);
        out
    }

    /// ∫_a^b s(x) dx.
    pub fn integrate(&self, a: f64, b: f64) -> C64 {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    /// ∫_{-1}^{1} s(x) dx, from ∫ T_n = 2/(1-n²) for even n.
    pub fn integral(&self) -> C64 {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(n, _)| n % 2 == 0)
            .map(|(n, &a)| a * (2.0 / (1.0 - (n * n) as f64)))
            .sum()
    }

    /// Splits s(x) = s(t) + (x - t) q(x); returns (q, s(t)).
    pub fn divide_linear(&self, t: f64) -> (Self, C64) {
        let a = &self.coefficients;
        let n = a.len();
        if n <= 1 {
            return (ChebyshevSeries::zero(), a.first().copied().unwrap_or(ZERO));
        }
        // q has degree n-2; b_k are its coefficients
        let deg = n - 1;
        let mut b = vec![ZERO; deg + 1];
        b[deg - 1] = a[deg] * 2.0;
        for m in (2..deg).rev() {
            b[m - 1] = a[m] * 2.0 - b[m + 1] + b[m] * (2.0 * t);
        }
        let b0 = if deg >= 2 {
            a[1] - b[2] * 0.5 + b[1] * t
        } else {
            a[1]
        };
        b[0] = b0;
        b.truncate(deg);
        let q = ChebyshevSeries::new(b);
        let rem = self.eval(t);
        (q, rem)
    }

    /// Re-expresses Σ c_m U_m (second kind) in the first-kind basis.
    pub fn from_second_kind(c: &[C64]) -> Self {
        // U_m = 2 Σ_{k ≡ m (2), 0<k≤m} T_k + [m even] T_0
        let n = c.len();
        let mut out = vec![ZERO; n];
        // suffix sums over the same parity
        let mut acc = [ZERO; 2];
        for k in (0..n).rev() {
            acc[k % 2] += c[k];
            out[k] = if k == 0 { acc[0] } else { acc[k % 2] * 2.0 };
        }
        ChebyshevSeries::new(out)
    }
}

/// Coefficient form of T(f): T(f)(t) = regular(t) + log_factor(t)·ln((1-t)/(1+t)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevTransform {
    pub regular: ChebyshevSeries,
    pub log_factor: Option<ChebyshevSeries>,
}

impl ChebyshevTransform {
    pub fn eval(&self, t: f64) -> C64 {
        let mut v = self.regular.eval(t);
        if let Some(l) = &self.log_factor {
            v += l.eval(t) * ((1.0 - t) / (1.0 + t)).ln();
        }
        v
    }
}

/// Which factor multiplies the series before transforming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    Plain,
    TimesW,
    OverW,
}

/// T(s), T(s·w) or T(s/w) in coefficient form.
pub fn transform_series(s: &ChebyshevSeries, weighting: Weighting) -> ChebyshevTransform {
    match weighting {
        Weighting::OverW => ChebyshevTransform {
            regular: transform_over_w(s),
            log_factor: None,
        },
        Weighting::TimesW => ChebyshevTransform {
            regular: transform_over_w(&s.mul_one_minus_x2()),
            log_factor: None,
        },
        Weighting::Plain => {
            let log_factor = if s.is_zero() {
                None
            } else {
                Some(s.scale(C64::new(1.0 / PI, 0.0)))
            };
            ChebyshevTransform {
                regular: transform_plain_regular(s),
                log_factor,
            }
        }
    }
}

fn transform_over_w(s: &ChebyshevSeries) -> ChebyshevSeries {
    let a = s.coefficients();
    if a.len() <= 1 {
        return ChebyshevSeries::zero();
    }
    // T(T_n/w) = U_{n-1}
    let u: Vec<C64> = a[1..].to_vec();
    ChebyshevSeries::from_second_kind(&u)
}

fn transform_plain_regular(s: &ChebyshevSeries) -> ChebyshevSeries {
    let a = s.coefficients();
    if a.len() <= 1 {
        return ChebyshevSeries::zero();
    }
    let int_u = |m: usize| if m % 2 == 0 { 2.0 / (m as f64 + 1.0) } else { 0.0 };
    // (T_n(x) - T_n(t))/(x - t) = 2 Σ_{k<n} U_{n-1-k}(x) T_k(t) - U_{n-1}(x)
    let mut r = vec![ZERO; a.len() - 1];
    for (n, &an) in a.iter().enumerate().skip(1) {
        if an == ZERO {
            continue;
        }
        for (k, rk) in r.iter_mut().enumerate().take(n) {
            let mut c = 2.0 * int_u(n - 1 - k);
            if k == 0 {
                c -= int_u(n - 1);
            }
            *rk += an * (c / PI);
        }
    }
    ChebyshevSeries::new(r)
}
