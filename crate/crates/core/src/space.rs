//! Finite metric spaces, cost matrices and probability distributions.
//!
//! A [`FiniteMetricSpace`] is a list of labeled points together with a
//! validated distance matrix. It is the discrete stand-in for a manifold:
//! every builder here returns a space whose matrix satisfies the metric
//! axioms up to [`METRIC_TOL`].

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used when checking the metric axioms.
pub const METRIC_TOL: f64 = 1e-12;

/// Tolerance on the total mass of a distribution.
pub const MASS_TOL: f64 = 1e-12;

/// Cap on the number of triangle witnesses kept in a report.
const MAX_TRIANGLE_WITNESSES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<f64>>,
}

impl Point {
    pub fn new(id: impl Into<String>) -> Self {
        Point { id: id.into(), coords: None }
    }

    pub fn with_coords(id: impl Into<String>, coords: Vec<f64>) -> Self {
        Point { id: id.into(), coords: Some(coords) }
    }
}

/// One failed metric axiom, with the indices that witness it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    NonzeroDiagonal { i: usize, value: f64 },
    Negative { i: usize, j: usize, value: f64 },
    NonFinite { i: usize, j: usize },
    Symmetry { i: usize, j: usize, forward: f64, backward: f64 },
    Triangle { i: usize, j: usize, k: usize, excess: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonzeroDiagonal { i, value } => write!(f, "d({i},{i}) = {value} != 0"),
            Violation::Negative { i, j, value } => write!(f, "d({i},{j}) = {value} < 0"),
            Violation::NonFinite { i, j } => write!(f, "d({i},{j}) is not finite"),
            Violation::Symmetry { i, j, forward, backward } => {
                write!(f, "symmetry at ({i},{j}): {forward} != {backward}")
            }
            Violation::Triangle { i, j, k, excess } => {
                write!(f, "triangle ({i},{j},{k}): d({i},{k}) exceeds d({i},{j}) + d({j},{k}) by {excess:e}")
            }
        }
    }
}

/// Result of [`validate_metric`]; empty iff the matrix is a metric.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MetricReport {
    pub violations: Vec<Violation>,
    /// True when more triangle violations existed than were recorded.
    pub truncated: bool,
}

impl MetricReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_symmetry_violation(&self, i: usize, j: usize) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::Symmetry { i: a, j: b, .. } if (*a, *b) == (i, j) || (*a, *b) == (j, i)))
    }

    pub fn has_triangle_violation(&self, i: usize, j: usize, k: usize) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::Triangle { i: a, j: b, k: c, .. } if (*a, *b, *c) == (i, j, k)))
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        if self.truncated {
            write!(f, "; ...")?;
        }
        Ok(())
    }
}

/// Checks the metric axioms on a square matrix.
///
/// Triangle witnesses `(i, j, k)` mean `m[i][k] > m[i][j] + m[j][k] + tol`.
pub fn validate_metric(m: &[Vec<f64>]) -> Result<MetricReport> {
    let n = m.len();
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare { rows: n, row, len: r.len() });
        }
    }
    let mut report = MetricReport::default();
    for i in 0..n {
        for j in 0..n {
            let v = m[i][j];
            if !v.is_finite() {
                report.violations.push(Violation::NonFinite { i, j });
            } else if v < -METRIC_TOL {
                report.violations.push(Violation::Negative { i, j, value: v });
            }
        }
        if m[i][i].abs() > METRIC_TOL {
            report.violations.push(Violation::NonzeroDiagonal { i, value: m[i][i] });
        }
        for j in i + 1..n {
            if (m[i][j] - m[j][i]).abs() > METRIC_TOL {
                report.violations.push(Violation::Symmetry { i, j, forward: m[i][j], backward: m[j][i] });
            }
        }
    }
    let mut triangles = 0usize;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let excess = m[i][k] - (m[i][j] + m[j][k]);
                if excess > METRIC_TOL {
                    if triangles < MAX_TRIANGLE_WITNESSES {
                        report.violations.push(Violation::Triangle { i, j, k, excess });
                    } else {
                        report.truncated = true;
                    }
                    triangles += 1;
                }
            }
        }
    }
    Ok(report)
}

/// Labeled points with a validated distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    points: Vec<Point>,
    dist: Vec<f64>,
}

impl FiniteMetricSpace {
    /// Builds a space from an explicit matrix, checking every invariant.
    pub fn new(points: Vec<Point>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        if matrix.len() != points.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), got: matrix.len() });
        }
        check_points(&points)?;
        let report = validate_metric(&matrix)?;
        if !report.is_empty() {
            return Err(Error::InvalidMetric(report));
        }
        let dist = matrix.into_iter().flatten().collect();
        Ok(FiniteMetricSpace { points, dist })
    }

    /// Distances are the Euclidean norms of coordinate differences.
    pub fn euclidean(points: Vec<Point>) -> Result<Self> {
        check_points(&points)?;
        if points.is_empty() {
            return Ok(FiniteMetricSpace { points, dist: Vec::new() });
        }
        let coords: Vec<&[f64]> = points
            .iter()
            .map(|p| p.coords.as_deref())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::UnsupportedSpace("euclidean metric needs coordinates on every point".into()))?;
        let n = points.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = euclid(coords[i], coords[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(FiniteMetricSpace { points, dist })
    }

    /// For builders whose output is a metric by construction.
    pub(crate) fn from_parts_unchecked(points: Vec<Point>, dist: Vec<f64>) -> Self {
        debug_assert_eq!(dist.len(), points.len() * points.len());
        FiniteMetricSpace { points, dist }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.points.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.points.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p.id == id)
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, len: self.len() })
        }
    }

    /// Embedding dimension, if every point carries coordinates.
    pub fn coord_dim(&self) -> Option<usize> {
        self.points.first()?.coords.as_ref().map(Vec::len)
    }

    pub fn coords(&self, i: usize) -> Option<&[f64]> {
        self.points[i].coords.as_deref()
    }

    /// True when the stored distances equal the Euclidean distances of the
    /// coordinates within `tol`.
    pub fn is_euclidean(&self, tol: f64) -> bool {
        if self.coord_dim().is_none() {
            return false;
        }
        let n = self.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let e = euclid(self.coords(i).unwrap(), self.coords(j).unwrap());
                (e - self.dist(i, j)).abs() <= tol
            })
        })
    }

    /// Sorted coordinates when the space is a subset of the real line with
    /// the induced metric.
    pub fn line_coords(&self) -> Option<Vec<f64>> {
        if self.coord_dim() != Some(1) || !self.is_euclidean(METRIC_TOL) {
            return None;
        }
        Some(self.points.iter().map(|p| p.coords.as_ref().unwrap()[0]).collect())
    }

    pub fn validate(&self) -> MetricReport {
        validate_metric(&self.matrix()).expect("stored matrix is square")
    }
}

fn check_points(points: &[Point]) -> Result<()> {
    let mut seen = HashSet::with_capacity(points.len());
    for p in points {
        if !seen.insert(p.id.as_str()) {
            return Err(Error::Parameter(format!("duplicate point id {:?}", p.id)));
        }
    }
    let with = points.iter().filter(|p| p.coords.is_some()).count();
    if with != 0 && with != points.len() {
        return Err(Error::Parameter("either all points carry coordinates or none do".into()));
    }
    if let Some(k) = points.first().and_then(|p| p.coords.as_ref()).map(Vec::len) {
        if let Some(p) = points.iter().find(|p| p.coords.as_ref().unwrap().len() != k) {
            return Err(Error::Parameter(format!("point {:?} has coordinate dimension differing from {k}", p.id)));
        }
    }
    Ok(())
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Nonnegative transport cost; need not vanish on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    cost: Vec<f64>,
    vanishing_diagonal: bool,
    metric: bool,
}

impl CostMatrix {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, row, len: r.len() });
            }
        }
        let cost: Vec<f64> = matrix.into_iter().flatten().collect();
        if let Some(pos) = cost.iter().position(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidCost(format!(
                "entry ({}, {}) = {} is not a finite nonnegative number",
                pos / n,
                pos % n,
                cost[pos]
            )));
        }
        let vanishing_diagonal = (0..n).all(|i| cost[i * n + i] == 0.0);
        Ok(CostMatrix { n, cost, vanishing_diagonal, metric: false })
    }

    /// The distance matrix of a space, flagged as a metric cost.
    pub fn from_metric(space: &FiniteMetricSpace) -> Self {
        CostMatrix { n: space.len(), cost: space.dist.clone(), vanishing_diagonal: true, metric: true }
    }

    /// Geodesic distances known to be a metric by construction.
    pub(crate) fn metric_unchecked(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let mut c = CostMatrix::new(matrix)?;
        c.metric = c.vanishing_diagonal;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.n + j]
    }

    pub fn vanishing_diagonal(&self) -> bool {
        self.vanishing_diagonal
    }

    /// Whether the cost is known to be a metric (built from a validated space).
    pub fn is_metric(&self) -> bool {
        self.metric
    }

    pub fn max(&self) -> f64 {
        self.cost.iter().copied().fold(0.0, f64::max)
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.cost.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }
}

/// Probability weights over the points of a space.
///
/// A distribution does not hold a reference to its space; operations check
/// that lengths agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no weights".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidDistribution(format!("weight {i} = {w} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        Ok(Distribution { weights })
    }

    /// Rescales nonnegative weights to unit mass.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidDistribution(format!("weight {i} = {w} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("total mass is zero".into()));
        }
        Distribution::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::IndexOutOfRange { index: at, len: n });
        }
        let mut weights = vec![0.0; n];
        weights[at] = 1.0;
        Ok(Distribution { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("no weights".into()));
        }
        Distribution::normalized(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Indices carrying positive mass, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        self.weights.iter().enumerate().filter(|(_, w)| **w > 0.0).map(|(i, _)| i).collect()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.weights.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: n, got: self.weights.len() })
        }
    }
}

/// `n` equispaced points on `[a, b]` with the distance `|x_i - x_j|`.
pub fn build_grid_line(n: usize, a: f64, b: f64) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return Err(Error::Size(format!("a line grid needs at least 2 points, got {n}")));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Parameter(format!("line grid needs finite a < b, got [{a}, {b}]")));
    }
    let step = (b - a) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { b } else { a + step * i as f64 }).collect();
    let points = xs.iter().enumerate().map(|(i, x)| Point::with_coords(format!("p{i}"), vec![*x])).collect();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = (xs[i] - xs[j]).abs();
        }
    }
    Ok(FiniteMetricSpace::from_parts_unchecked(points, dist))
}

/// `n` equispaced points on the circle of circumference one, with the arc
/// distance `min(|s_i - s_j|, 1 - |s_i - s_j|)`. Coordinates hold the arc
/// parameter `s_i = i / n`.
pub fn build_grid_circle(n: usize) -> Result<FiniteMetricSpace> {
    if n < 3 {
        return Err(Error::Size(format!("a circle grid needs at least 3 points, got {n}")));
    }
    let s: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
    let points = s.iter().enumerate().map(|(i, x)| Point::with_coords(format!("p{i}"), vec![*x])).collect();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let k = i.abs_diff(j).min(n - i.abs_diff(j));
            dist[i * n + j] = k as f64 / n as f64;
        }
    }
    Ok(FiniteMetricSpace::from_parts_unchecked(points, dist))
}

/// Component-wise mean of the coordinates under `d`.
pub fn barycenter(space: &FiniteMetricSpace, d: &Distribution) -> Result<Vec<f64>> {
    d.check_len(space.len())?;
    let k = space.coord_dim().ok_or_else(|| Error::UnsupportedSpace("barycenter needs point coordinates".into()))?;
    let mut out = vec![0.0; k];
    for (i, w) in d.weights().iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        for (o, c) in out.iter_mut().zip(space.coords(i).unwrap()) {
            *o += w * c;
        }
    }
    Ok(out)
}

/// Expected distance to the point `x0`.
pub fn first_moment(space: &FiniteMetricSpace, d: &Distribution, x0: usize) -> Result<f64> {
    d.check_len(space.len())?;
    space.check_index(x0)?;
    Ok(space.row(x0).iter().zip(d.weights()).map(|(dist, w)| dist * w).sum())
}

/// Samples a density at the nodes of a line grid and renormalizes.
pub fn discretize_density<F>(shape: F, grid: &FiniteMetricSpace) -> Result<Distribution>
where
    F: Fn(f64) -> f64,
{
    let xs =
        grid.line_coords().ok_or_else(|| Error::UnsupportedSpace("density discretization needs a line grid".into()))?;
    let mut weights = Vec::with_capacity(xs.len());
    for x in xs {
        let v = shape(x);
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Parameter(format!("density is {v} at {x}")));
        }
        weights.push(v);
    }
    if weights.iter().all(|w| *w == 0.0) {
        return Err(Error::Degenerate("density vanishes at every grid node".into()));
    }
    Distribution::normalized(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_metric_is_valid() {
        let r = validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn asymmetry_is_reported() {
        let r = validate_metric(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(r.has_symmetry_violation(0, 1));
    }

    #[test]
    fn triangle_violation_is_reported() {
        let m = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
        let r = validate_metric(&m).unwrap();
        assert!(r.has_triangle_violation(0, 1, 2));
        assert!(matches!(
            FiniteMetricSpace::new((0..3).map(|i| Point::new(i.to_string())).collect(), m),
            Err(Error::InvalidMetric(_))
        ));
    }

    #[test]
    fn non_square_is_shape_error() {
        assert!(matches!(validate_metric(&[vec![0.0, 1.0], vec![1.0]]), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn line_grid() {
        let g = build_grid_line(3, 0.0, 1.0).unwrap();
        assert_eq!(g.coords(1), Some(&[0.5][..]));
        assert_eq!(g.dist(0, 2), 1.0);
        assert_eq!(build_grid_line(2, -1.0, 1.0).unwrap().dist(0, 1), 2.0);
        assert_eq!(build_grid_line(5, 0.0, 4.0).unwrap().dist(1, 3), 2.0);
        assert!(matches!(build_grid_line(1, 0.0, 1.0), Err(Error::Size(_))));
        assert!(g.validate().is_empty());
    }

    #[test]
    fn circle_grid() {
        let c = build_grid_circle(4).unwrap();
        assert_eq!(c.dist(0, 2), 0.5);
        assert_eq!(c.dist(0, 3), 0.25);
        assert!((0..4).all(|i| c.dist(i, i) == 0.0));
        assert!(c.validate().is_empty());
        assert!(c.line_coords().is_none());
        assert!(matches!(build_grid_circle(2), Err(Error::Size(_))));
    }

    #[test]
    fn barycenters() {
        let line =
            FiniteMetricSpace::euclidean(vec![Point::with_coords("a", vec![0.0]), Point::with_coords("b", vec![4.0])])
                .unwrap();
        let d = Distribution::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(barycenter(&line, &d).unwrap(), vec![3.0]);
        let half = Distribution::uniform(2).unwrap();
        let unit = build_grid_line(2, 0.0, 1.0).unwrap();
        assert_eq!(barycenter(&unit, &half).unwrap(), vec![0.5]);
        assert_eq!(barycenter(&unit, &Distribution::point_mass(2, 1).unwrap()).unwrap(), vec![1.0]);

        let bare = FiniteMetricSpace::new(vec![Point::new("a"), Point::new("b")], vec![vec![0.0, 1.0], vec![1.0, 0.0]])
            .unwrap();
        assert!(matches!(barycenter(&bare, &half), Err(Error::UnsupportedSpace(_))));
    }

    #[test]
    fn first_moments() {
        let c = build_grid_circle(4).unwrap();
        let u = Distribution::uniform(4).unwrap();
        assert!((first_moment(&c, &u, 0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(first_moment(&c, &Distribution::point_mass(4, 2).unwrap(), 2).unwrap(), 0.0);
        let line = build_grid_line(2, 0.0, 2.0).unwrap();
        assert_eq!(first_moment(&line, &Distribution::uniform(2).unwrap(), 0).unwrap(), 1.0);
        assert!(matches!(
            first_moment(&line, &Distribution::uniform(2).unwrap(), 5),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn density_discretization() {
        let g = build_grid_line(11, 0.0, 1.0).unwrap();
        let u = discretize_density(|_| 2.0, &g).unwrap();
        assert!(u.weights().iter().all(|w| (w - 1.0 / 11.0).abs() < 1e-15));

        let spike = discretize_density(|x| if (x - 0.3).abs() < 0.05 { 1.0 } else { 0.0 }, &g).unwrap();
        assert_eq!(spike.support(), vec![3]);

        assert!(matches!(discretize_density(|_| 0.0, &g), Err(Error::Degenerate(_))));

        let wide = build_grid_line(121, -6.0, 6.0).unwrap();
        let gauss = discretize_density(|x| (-x * x / 2.0).exp(), &wide).unwrap();
        for i in 0..60 {
            assert!((gauss.weight(60 - i) - gauss.weight(60 + i)).abs() < 1e-15);
        }
        assert!(barycenter(&wide, &gauss).unwrap()[0].abs() < 1e-9);
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![1.5, -0.5]).is_err());
        assert!(Distribution::normalized(vec![0.0, 0.0]).is_err());
        assert_eq!(Distribution::normalized(vec![1.0, 3.0]).unwrap().weights(), &[0.25, 0.75]);
    }

    #[test]
    fn cost_matrix_flags() {
        let c = CostMatrix::new(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(!c.vanishing_diagonal());
        assert!(!c.is_metric());
        assert!(CostMatrix::new(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).is_err());
        let m = CostMatrix::from_metric(&build_grid_line(3, 0.0, 1.0).unwrap());
        assert!(m.vanishing_diagonal() && m.is_metric());
        assert_eq!(m.get(0, 2), 1.0);
    }

    #[test]
    fn mixed_coordinates_rejected() {
        let pts = vec![Point::with_coords("a", vec![0.0]), Point::new("b")];
        assert!(FiniteMetricSpace::new(pts, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
        let dup = vec![Point::new("a"), Point::new("a")];
        assert!(FiniteMetricSpace::new(dup, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
    }
}
