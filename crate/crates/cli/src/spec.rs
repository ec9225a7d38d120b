//! Function specs: `poly:a0,a1,...`, `indicator:a,b[;a,b...]`, `w`, `invw`,
//! `sigma`, `g0`, `0` and `file:PATH`.

use std::fs::File;
use std::path::Path;

use fht_core::airfoil::rybakov_g0;
use fht_core::function::{func, Piecewise};
use fht_core::{Error, Func, GridFunction, IntervalSet, Result};

pub fn parse_function(spec: &str) -> Result<Func> {
    let s = spec.trim_end();
    let lead = s.len() - s.trim_start().len();
    let s = s.trim_start();
    let (head, body) = match s.split_once(':') {
        Some((h, b)) => (h, Some((b, lead + h.len() + 1))),
        None => (s, None),
    };
    match (head, body) {
        ("0", None) => Ok(func(Piecewise::zero())),
        ("w", None) => Ok(func(Piecewise::w())),
        ("invw" | "1/w", None) => Ok(func(Piecewise::inv_w())),
        ("sigma", None) => Ok(func(Piecewise::sigma())),
        ("g0", None) => Ok(rybakov_g0()),
        ("poly", Some((b, at))) => {
            let coeffs = numbers(b, at)?;
            if coeffs.is_empty() {
                return Err(parse_error(at, "poly needs at least one coefficient"));
            }
            Ok(func(Piecewise::monomial(&coeffs)))
        }
        ("indicator", Some((b, at))) => {
            let mut intervals = Vec::new();
            let mut offset = at;
            for part in b.split(';') {
                let v = numbers(part, offset)?;
                if v.len() != 2 {
                    return Err(parse_error(offset, "an interval is written a,b"));
                }
                intervals.push((v[0], v[1]));
                offset += part.len() + 1;
            }
            let set = IntervalSet::new(intervals).map_err(|e| parse_error(at, &e.to_string()))?;
            Ok(func(Piecewise::indicator(&set)))
        }
        ("file", Some((b, at))) => {
            if b.is_empty() {
                return Err(parse_error(at, "missing path"));
            }
            read_samples(Path::new(b))?.interpolant()
        }
        (h, Some(_)) if ["0", "w", "invw", "1/w", "sigma", "g0"].contains(&h) => {
            Err(parse_error(lead + h.len(), &format!("{h} takes no arguments")))
        }
        (h, None) if ["poly", "indicator", "file"].contains(&h) => {
            Err(parse_error(lead + h.len(), &format!("{h} needs ':' and arguments")))
        }
        (h, _) => Err(parse_error(
            lead,
            &format!("unknown function {h:?}; expected poly, indicator, w, invw, sigma, g0, 0 or file"),
        )),
    }
}

/// Samples from CSV (node,re,im,weight) or, for `.json`, the JSON mirror.
pub fn read_samples(path: &Path) -> Result<GridFunction> {
    if path.extension().is_some_and(|e| e == "json") {
        GridFunction::from_json(&std::fs::read_to_string(path)?)
    } else {
        GridFunction::read_csv(File::open(path)?)
    }
}

fn numbers(s: &str, at: usize) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut offset = at;
    for tok in s.split(',') {
        let t = tok.trim();
        let pos = offset + (tok.len() - tok.trim_start().len());
        let v: f64 = t
            .parse()
            .map_err(|_| parse_error(pos, &format!("expected a number, found {t:?}")))?;
        if !v.is_finite() {
            return Err(parse_error(pos, "numbers must be finite"));
        }
        out.push(v);
        offset += tok.len() + 1;
    }
    Ok(out)
}

fn parse_error(position: usize, message: &str) -> Error {
    Error::Parse {
        position,
        message: message.to_string(),
    }
}

/// Evaluation points: a comma-separated list.
pub fn parse_points(s: &str) -> Result<Vec<f64>> {
    numbers(s, 0)
}
