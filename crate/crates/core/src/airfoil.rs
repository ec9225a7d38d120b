//! Inversion of T: the operators T̂(f) = -T(f·w)/w and Ť(f) = -w·T(f/w),
//! the rank-one projection P onto span{1/w}, the range condition
//! ∫ h/w dμ = 0, and the airfoil equation T(f) = g.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{
    func, hilbert, integrate, over_w, scale, sub, times_w, Func, Function, Piecewise,
};
use crate::quadrature::{gauss_legendre, integrate_checked, Integral, Tolerance};
use crate::ri::SpaceSpec;
use rayon::prelude::*;

pub use crate::function::weight_w;

/// Which inversion formula applies to X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Boyd index in (0, 1/2): T is injective with range {h : ∫ h/w = 0}.
    LowIndex,
    /// Boyd index in (1/2, 1): T is surjective with kernel span{1/w}.
    HighIndex,
}

impl Regime {
    pub fn of(x: &SpaceSpec) -> Result<Self> {
        let (lo, hi) = (x.boyd_lower(), x.boyd_upper());
        if lo > 0.5 && hi < 1.0 {
            Ok(Regime::HighIndex)
        } else if lo > 0.0 && hi < 0.5 {
            Ok(Regime::LowIndex)
        } else {
            Err(Error::CriticalIndex { p: x.p() })
        }
    }
}

const MINUS_ONE: C64 = C64 { re: -1.0, im: 0.0 };

/// T̂(f) = -T(f·w)/w.
pub fn t_hat(f: &Func) -> Func {
    scale(&over_w(&hilbert(&times_w(f))), MINUS_ONE)
}

/// Ť(f) = -w·T(f/w).
pub fn t_check(f: &Func) -> Func {
    scale(&times_w(&hilbert(&over_w(f))), MINUS_ONE)
}

/// P(f) = ((1/π) ∫ f dμ)·(1/w).
pub fn projection_p(f: &Func) -> Result<Func> {
    let c = integrate(f.as_ref(), Tolerance::default())? / PI;
    Ok(func(Piecewise::inv_w().scale(c)))
}

/// |∫ g/w dμ| = |∫_0^π g(cos θ) dθ|; +∞ when the integral diverges.
pub fn range_defect(g: &dyn Function) -> Result<f64> {
    let angles: Vec<f64> = g.breakpoints().iter().map(|x| x.acos()).collect();
    let r = integrate_checked(|th| g.eval_angle(th), 0.0, PI, &angles, Tolerance::default())?;
    Ok(match r {
        Integral::Finite(v) => v.norm(),
        Integral::Divergent => f64::INFINITY,
    })
}

/// A solution of T(f) = g.
#[derive(Debug, Clone)]
pub struct AirfoilSolution {
    pub particular: Func,
    pub regime: Regime,
    /// In the high-index regime f + c/w solves the equation for every c.
    pub kernel_coefficient_free: bool,
    /// |∫ g/w dμ|, computed in the low-index regime.
    pub range_defect: Option<f64>,
    /// sup over |x| ≤ 0.9 of |T(f) - g|.
    pub residual: f64,
}

/// Solves T(f) = g in X. The high-index regime returns T̂(g); the
/// low-index regime returns Ť(g) once g passes the range condition.
pub fn solve_airfoil(g: &Func, x: &SpaceSpec, tol: f64) -> Result<AirfoilSolution> {
    let regime = Regime::of(x)?;
    let (particular, defect) = match regime {
        Regime::HighIndex => (t_hat(g), None),
        Regime::LowIndex => {
            let d = range_defect(g.as_ref())?;
            if !(d <= tol) {
                return Err(Error::NotInRange { defect: d });
            }
            (t_check(g), Some(d))
        }
    };
    let residual = sup_residual(&sub(&hilbert(&particular), g), INTERIOR)?;
    Ok(AirfoilSolution {
        particular,
        regime,
        kernel_coefficient_free: regime == Regime::HighIndex,
        range_defect: defect,
        residual,
    })
}

/// Interior region |x| ≤ 0.9 on which residuals are measured.
pub const INTERIOR: f64 = 0.9;
const SUP_POINTS: usize = 181;

/// max |r(x)| over 181 evenly spaced points of [-r0, r0].
pub fn sup_residual(r: &Func, r0: f64) -> Result<f64> {
    let values = (0..SUP_POINTS)
        .into_par_iter()
        .map(|i| {
            let x = -r0 + 2.0 * r0 * i as f64 / (SUP_POINTS - 1) as f64;
            Ok(r.eval(x)?.norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// (∫_{|x|≤r0} |r|ᵖ dx)^{1/p} by 64-point Gauss–Legendre.
pub fn lp_residual(r: &Func, p: f64, r0: f64) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(64);
    let terms = nodes
        .par_iter()
        .zip(&weights)
        .map(|(x, w)| Ok(w * r0 * r.eval(r0 * x)?.norm().powf(p)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(terms.iter().sum::<f64>().powf(1.0 / p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defect {
    pub identity: String,
    /// sup over |x| ≤ 0.9.
    pub sup: f64,
    /// Lᵖ norm over |x| ≤ 0.9 with the exponent of X.
    pub lp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityDefects {
    pub regime: Regime,
    pub defects: Vec<Defect>,
}

/// Residuals of the inversion identities for f in the regime of X:
/// T T̂ f = f and T̂ T f = f - P f (high index), Ť T f = f and T Ť h = h
/// for h = T f (low index).
pub fn identity_defects(f: &Func, x: &SpaceSpec) -> Result<IdentityDefects> {
    let regime = Regime::of(x)?;
    let p = x.p();
    let measure = |name: &str, r: Func| -> Result<Defect> {
        Ok(Defect {
            identity: name.to_string(),
            sup: sup_residual(&r, INTERIOR)?,
            lp: lp_residual(&r, p, INTERIOR)?,
        })
    };
    let tf = hilbert(f);
    let defects = match regime {
        Regime::HighIndex => {
            let right = sub(&hilbert(&t_hat(f)), f);
            let complement = sub(&t_hat(&tf), &sub(f, &projection_p(f)?));
            vec![
                measure("T T̂ f - f", right)?,
                measure("T̂ T f - (f - P f)", complement)?,
            ]
        }
        Regime::LowIndex => {
            let left = sub(&t_check(&tf), f);
            let range = sub(&hilbert(&t_check(&tf)), &tf);
            vec![
                measure("Ť T f - f", left)?,
                measure("T Ť h - h", range)?,
            ]
        }
    };
    Ok(IdentityDefects { regime, defects })
}

/// g₀ = Ť(σ) = -w·T(σ/w) for the sign function σ.
pub fn rybakov_g0() -> Func {
    t_check(&func(Piecewise::sigma()))
}

/// σ = -χ_{(-1,0)} + χ_{(0,1)}.
pub fn sigma() -> Func {
    func(Piecewise::sigma())
}

/// 1/w.
pub fn inv_w() -> Func {
    func(Piecewise::inv_w())
}

/// w.
pub fn w() -> Func {
    func(Piecewise::w())
}
