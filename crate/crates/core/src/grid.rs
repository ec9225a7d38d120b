//! Sampled functions on (-1, 1), quadrature grids and finite unions of
//! open intervals.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::ChebyshevSeries;
use crate::error::{Error, Result};
use crate::function::{Func, Function};
use crate::quadrature::fejer_weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeFamily {
    /// Midpoints of N equal cells, weights 2/N.
    Uniform,
    /// cos((2j-1)π/(2N)) with Fejér weights.
    ChebyshevGauss,
    Custom,
}

/// Nodes in (-1, 1), strictly increasing, with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    family: NodeFamily,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::structural("grid needs at least one node"));
        }
        let h = 2.0 / n as f64;
        let nodes = (0..n).map(|i| -1.0 + (i as f64 + 0.5) * h).collect();
        Ok(Grid {
            family: NodeFamily::Uniform,
            nodes,
            weights: vec![h; n],
        })
    }

    pub fn chebyshev_gauss(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::structural("grid needs at least one node"));
        }
        let fw = fejer_weights(n);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let j = n - i;
            nodes.push(((2 * j - 1) as f64 * PI / (2 * n) as f64).cos());
            weights.push(fw[j - 1]);
        }
        Ok(Grid {
            family: NodeFamily::ChebyshevGauss,
            nodes,
            weights,
        })
    }

    pub fn custom(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::with_family(NodeFamily::Custom, nodes, weights)
    }

    fn with_family(family: NodeFamily, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::structural(format!(
                "{} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if nodes.is_empty() {
            return Err(Error::structural("grid needs at least one node"));
        }
        if let Some(&x) = nodes.iter().find(|x| !(x.abs() < 1.0)) {
            return Err(Error::Domain { x });
        }
        if nodes.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::structural("nodes must be strictly increasing"));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::structural("weights must be nonnegative"));
        }
        Ok(Grid {
            family,
            nodes,
            weights,
        })
    }

    /// Rebuilds a grid from stored nodes, recognising the built-in families.
    pub fn recognise(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let n = nodes.len();
        for candidate in [Self::chebyshev_gauss(n), Self::uniform(n)].into_iter().flatten() {
            let same = candidate
                .nodes
                .iter()
                .zip(&nodes)
                .all(|(a, b)| (a - b).abs() < 1e-12);
            if same {
                return Ok(candidate);
            }
        }
        Self::custom(nodes, weights)
    }

    pub fn family(&self) -> NodeFamily {
        self.family
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Samples of a ℂ-valued function at the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Arc<Grid>,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::structural(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zero(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        GridFunction {
            grid,
            values: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn<F: FnMut(f64) -> C64>(grid: Arc<Grid>, mut f: F) -> Self {
        let values = grid.nodes.iter().map(|&x| f(x)).collect();
        GridFunction { grid, values }
    }

    pub fn from_real_fn<F: FnMut(f64) -> f64>(grid: Arc<Grid>, mut f: F) -> Self {
        Self::from_fn(grid, |x| C64::new(f(x), 0.0))
    }

    /// Samples an evaluable function at every node.
    pub fn sample(grid: Arc<Grid>, f: &dyn Function) -> Result<Self> {
        let values = grid
            .nodes
            .iter()
            .map(|&x| f.eval(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(GridFunction { grid, values })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        &self.grid.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.grid.weights
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn family(&self) -> NodeFamily {
        self.grid.family
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Σ weights_i · values_i.
    pub fn integrate(&self) -> C64 {
        self.values
            .iter()
            .zip(&self.grid.weights)
            .map(|(v, w)| v * w)
            .sum()
    }

    /// f·χ_A: values at nodes outside A set to zero.
    pub fn restrict(&self, a: &IntervalSet) -> GridFunction {
        let values = self
            .grid
            .nodes
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| if a.contains(x) { v } else { C64::new(0.0, 0.0) })
            .collect();
        GridFunction {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn map<F: FnMut(f64, C64) -> C64>(&self, mut f: F) -> GridFunction {
        let values = self
            .grid
            .nodes
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| f(x, v))
            .collect();
        GridFunction {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn zip_with<F: FnMut(C64, C64) -> C64>(
        &self,
        other: &GridFunction,
        mut f: F,
    ) -> Result<GridFunction> {
        self.check_same_nodes(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(GridFunction {
            grid: self.grid.clone(),
            values,
        })
    }

    pub fn check_same_nodes(&self, other: &GridFunction) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.nodes == other.grid.nodes {
            Ok(())
        } else {
            Err(Error::structural("grid functions live on different nodes"))
        }
    }

    pub fn scale(&self, s: C64) -> GridFunction {
        self.map(|_, v| v * s)
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    /// max |value| over nodes with |x| ≤ r.
    pub fn sup_norm_within(&self, r: f64) -> f64 {
        self.grid
            .nodes
            .iter()
            .zip(&self.values)
            .filter(|(x, _)| x.abs() <= r)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// An evaluable function through the samples: the Chebyshev interpolant
    /// for Chebyshev–Gauss grids, piecewise-linear otherwise.
    pub fn interpolant(&self) -> Result<Func> {
        let kind = match self.grid.family {
            NodeFamily::ChebyshevGauss => {
                Interpolation::Chebyshev(ChebyshevSeries::fit(&self.values)?)
            }
            _ => Interpolation::Linear,
        };
        Ok(Arc::new(GridInterpolant {
            samples: self.clone(),
            kind,
        }))
    }

    /// Piecewise-linear value at x, constant beyond the outermost nodes.
    pub fn linear_at(&self, x: f64) -> C64 {
        let nodes = &self.grid.nodes;
        match nodes.binary_search_by(|n| n.total_cmp(&x)) {
            Ok(i) => self.values[i],
            Err(0) => self.values[0],
            Err(i) if i == nodes.len() => self.values[i - 1],
            Err(i) => {
                let (x0, x1) = (nodes[i - 1], nodes[i]);
                let s = (x - x0) / (x1 - x0);
                self.values[i - 1] * (1.0 - s) + self.values[i] * s
            }
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for row in self.rows() {
            wr.serialize(row)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let rows = rd
            .deserialize::<SampleRow>()
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::from_rows(None, rows)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = SampleDocument {
            node_family: self.grid.family,
            rows: self.rows(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SampleDocument = serde_json::from_str(s)?;
        Self::from_rows(Some(doc.node_family), doc.rows)
    }

    fn rows(&self) -> Vec<SampleRow> {
        self.grid
            .nodes
            .iter()
            .zip(&self.grid.weights)
            .zip(&self.values)
            .map(|((&node, &weight), v)| SampleRow {
                node,
                re: v.re,
                im: v.im,
                weight,
            })
            .collect()
    }

    fn from_rows(family: Option<NodeFamily>, rows: Vec<SampleRow>) -> Result<Self> {
        let nodes: Vec<f64> = rows.iter().map(|r| r.node).collect();
        let weights: Vec<f64> = rows.iter().map(|r| r.weight).collect();
        let values = rows.iter().map(|r| C64::new(r.re, r.im)).collect();
        let grid = match family {
            Some(NodeFamily::Custom) => Grid::custom(nodes, weights)?,
            Some(f) => {
                let g = Grid::recognise(nodes, weights)?;
                if g.family != f {
                    return Err(Error::structural(format!(
                        "nodes do not match the declared {f:?} family"
                    )));
                }
                g
            }
            None => Grid::recognise(nodes, weights)?,
        };
        GridFunction::new(Arc::new(grid), values)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct SampleRow {
    node: f64,
    re: f64,
    im: f64,
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleDocument {
    node_family: NodeFamily,
    rows: Vec<SampleRow>,
}

#[derive(Debug)]
enum Interpolation {
    Chebyshev(ChebyshevSeries),
    Linear,
}

#[derive(Debug)]
struct GridInterpolant {
    samples: GridFunction,
    kind: Interpolation,
}

impl Function for GridInterpolant {
    fn eval(&self, x: f64) -> Result<C64> {
        if !(x.abs() < 1.0) {
            return Err(Error::Domain { x });
        }
        Ok(match &self.kind {
            Interpolation::Chebyshev(s) => s.eval(x),
            Interpolation::Linear => self.samples.linear_at(x),
        })
    }

    fn chebyshev(&self) -> Option<&ChebyshevSeries> {
        match &self.kind {
            Interpolation::Chebyshev(s) => Some(s),
            Interpolation::Linear => None,
        }
    }
}

/// Finite disjoint union of open subintervals of (-1, 1), sorted.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Normalises arbitrary intervals: drops empty ones, sorts, merges
    /// overlapping or abutting ones.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if !(a >= -1.0 && b <= 1.0 && a <= b) {
                return Err(Error::structural(format!(
                    "interval ({a}, {b}) is not an ordered subinterval of [-1, 1]"
                )));
            }
        }
        Ok(Self::normalized(intervals))
    }

    fn normalized(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|(a, b)| a < b);
        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn full() -> Self {
        IntervalSet {
            intervals: vec![(-1.0, 1.0)],
        }
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Membership in the open set.
    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a < x && x < b)
    }

    /// Endpoints lying strictly inside (-1, 1).
    pub fn interior_endpoints(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter(|x| x.abs() < 1.0)
            .collect()
    }

    /// (-1, 1) minus the closure of the set.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut left = -1.0;
        for &(a, b) in &self.intervals {
            if a > left {
                out.push((left, a));
            }
            left = b;
        }
        if left < 1.0 {
            out.push((left, 1.0));
        }
        IntervalSet { intervals: out }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, b0) = self.intervals[i];
            let (a1, b1) = other.intervals[j];
            let lo = a0.max(a1);
            let hi = b0.min(b1);
            if lo < hi {
                out.push((lo, hi));
            }
            if b0 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        Self::normalized(all)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        (self.measure() - self.intersection(other).measure()).abs() <= 1e-15
    }

    /// Uniform partition of (-1, 1) into `cells` open cells.
    pub fn uniform_cells(cells: usize) -> Vec<IntervalSet> {
        let h = 2.0 / cells as f64;
        (0..cells)
            .map(|j| {
                let a = -1.0 + j as f64 * h;
                let b = if j + 1 == cells { 1.0 } else { -1.0 + (j + 1) as f64 * h };
                IntervalSet {
                    intervals: vec![(a, b)],
                }
            })
            .collect()
    }
}

impl std::fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(a, b)| format!("({a}, {b})"))
            .collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_weights_sum_to_two() {
        for n in [16, 64, 257, 512] {
            for g in [Grid::uniform(n).unwrap(), Grid::chebyshev_gauss(n).unwrap()] {
                let s: f64 = g.weights().iter().sum();
                assert!((s - 2.0).abs() < 1e-10);
                assert!(g.nodes().windows(2).all(|p| p[0] < p[1]));
            }
        }
    }

    #[test]
    fn integrate_constants_and_odd() {
        let g = Arc::new(Grid::chebyshev_gauss(64).unwrap());
        let one = GridFunction::from_real_fn(g.clone(), |_| 1.0);
        assert!((one.integrate().re - 2.0).abs() < 1e-13);
        let x = GridFunction::from_real_fn(g, |x| x);
        assert!(x.integrate().norm() < 1e-14);
    }

    #[test]
    fn restrict_on_half_interval() {
        let g = Arc::new(Grid::uniform(100).unwrap());
        let one = GridFunction::from_real_fn(g, |_| 1.0);
        let a = IntervalSet::interval(0.0, 1.0).unwrap();
        assert!((one.restrict(&a).integrate().re - 1.0).abs() < 1e-13);
        assert!(one.restrict(&IntervalSet::empty()).integrate().norm() == 0.0);
        assert_eq!(one.restrict(&IntervalSet::full()), one);
    }

    #[test]
    fn interval_set_algebra() {
        let a = IntervalSet::new(vec![(0.2, 0.5), (-0.5, 0.0), (0.4, 0.6)]).unwrap();
        assert_eq!(a.intervals(), &[(-0.5, 0.0), (0.2, 0.6)]);
        let c = a.complement();
        assert_eq!(c.intervals(), &[(-1.0, -0.5), (0.0, 0.2), (0.6, 1.0)]);
        assert!(a.is_disjoint(&c));
        assert!((a.measure() + c.measure() - 2.0).abs() < 1e-15);
        let b = IntervalSet::interval(-0.1, 0.3).unwrap();
        assert_eq!(a.intersection(&b).intervals(), &[(-0.1, 0.0), (0.2, 0.3)]);
        assert!(IntervalSet::new(vec![(0.5, 0.2)]).is_err());
        assert!(IntervalSet::new(vec![(-1.5, 0.2)]).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let g = Arc::new(Grid::chebyshev_gauss(16).unwrap());
        let f = GridFunction::from_fn(g, |x| C64::new(x, x * x));
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = GridFunction::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.family(), NodeFamily::ChebyshevGauss);
        assert_eq!(back.values(), f.values());
        let back = GridFunction::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn length_mismatch_is_structural() {
        let g = Arc::new(Grid::uniform(4).unwrap());
        assert!(matches!(
            GridFunction::new(g, vec![C64::new(0.0, 0.0); 3]),
            Err(Error::Structural(_))
        ));
        assert!(Grid::custom(vec![0.1, 0.0], vec![1.0, 1.0]).is_err());
    }
}
