//! Product grids `M x I` approximating the two-sheet geometry.
//!
//! Nodes are `(x, level)` with `x` a base point and `level` in
//! `0..fiber_points`; node index is `level * n + x`. The fiber `I = [0, 1]`
//! has physical length `1 / norm_di`, or `1 / profile[x]` above `x` when a
//! Higgs profile is supplied.
//!
//! Edges of the grid graph:
//! - every base pair `(x, y)` at the same level, weight `d(x, y)`;
//! - every `(x, t)` to every `(y, s)` with `0 < |s - t| <= stencil`, weight
//!   `sqrt(d(x, y)^2 + v^2)` where `v` is the fiber length of the jump,
//!   averaged over the two base points.
//!
//! The stencil radius grows like `sqrt(fiber_points)`, so the set of slopes a
//! path can follow refines with the grid and shortest paths converge to the
//! product geodesic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Distribution, FiniteMetricSpace, Point, MASS_TOL};

/// Couple of measures on the two copies of the base space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSheetState {
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
}

impl TwoSheetState {
    pub fn new(mu: Vec<f64>, nu: Vec<f64>) -> Result<Self> {
        if mu.len() != nu.len() {
            return Err(Error::DimensionMismatch { expected: mu.len(), got: nu.len() });
        }
        if let Some(w) = mu.iter().chain(&nu).find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidDistribution(format!("sheet weight {w} is negative or not finite")));
        }
        let total: f64 = mu.iter().chain(&nu).sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("sheet weights sum to {total}, not 1")));
        }
        Ok(TwoSheetState { mu, nu })
    }

    /// All mass on one sheet.
    pub fn on_sheet(sheet: usize, d: &Distribution) -> Result<Self> {
        let zero = vec![0.0; d.len()];
        match sheet {
            0 => TwoSheetState::new(d.weights().to_vec(), zero),
            1 => TwoSheetState::new(zero, d.weights().to_vec()),
            _ => Err(Error::Parameter(format!("sheet must be 0 or 1, got {sheet}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct TwoSheetSpace {
    base: FiniteMetricSpace,
    norm_di: f64,
    fiber_points: usize,
    higgs: Option<Vec<f64>>,
    stencil: usize,
}

impl TwoSheetSpace {
    pub fn new(base: FiniteMetricSpace, norm_di: f64, fiber_points: usize, higgs: Option<Vec<f64>>) -> Result<Self> {
        if !(norm_di > 0.0) || !norm_di.is_finite() {
            return Err(Error::Parameter(format!("norm_di must be positive, got {norm_di}")));
        }
        if fiber_points < 2 {
            return Err(Error::Size(format!("fiber needs at least 2 points, got {fiber_points}")));
        }
        if base.is_empty() {
            return Err(Error::Size("empty base space".into()));
        }
        if let Some(h) = &higgs {
            if h.len() != base.len() {
                return Err(Error::DimensionMismatch { expected: base.len(), got: h.len() });
            }
            if let Some(v) = h.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
                return Err(Error::Parameter(format!("higgs profile must be positive, got {v}")));
            }
        }
        let stencil = ((fiber_points - 1) as f64).sqrt().ceil().max(1.0) as usize;
        Ok(TwoSheetSpace { base, norm_di, fiber_points, higgs, stencil })
    }

    pub fn base(&self) -> &FiniteMetricSpace {
        &self.base
    }

    pub fn norm_di(&self) -> f64 {
        self.norm_di
    }

    pub fn fiber_points(&self) -> usize {
        self.fiber_points
    }

    pub fn higgs(&self) -> Option<&[f64]> {
        self.higgs.as_deref()
    }

    /// Largest level offset joined by a single edge.
    pub fn stencil(&self) -> usize {
        self.stencil
    }

    pub fn len(&self) -> usize {
        self.base.len() * self.fiber_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top_level(&self) -> usize {
        self.fiber_points - 1
    }

    pub fn node(&self, base_idx: usize, level: usize) -> usize {
        level * self.base.len() + base_idx
    }

    pub fn split(&self, node: usize) -> (usize, usize) {
        (node % self.base.len(), node / self.base.len())
    }

    /// Full physical fiber length above `x`.
    pub fn fiber_length(&self, x: usize) -> f64 {
        match &self.higgs {
            Some(h) => 1.0 / h[x],
            None => 1.0 / self.norm_di,
        }
    }

    fn edge(&self, x: usize, t: usize, y: usize, s: usize) -> f64 {
        let d = self.base.dist(x, y);
        if s == t {
            return d;
        }
        let frac = s.abs_diff(t) as f64 / self.top_level() as f64;
        let v = if x == y {
            frac * self.fiber_length(x)
        } else {
            frac * 0.5 * (self.fiber_length(x) + self.fiber_length(y))
        };
        if d == 0.0 {
            v
        } else {
            d.hypot(v)
        }
    }

    /// Shortest-path distances from `source` to every grid node.
    pub fn distances_from(&self, source: usize) -> Vec<f64> {
        let n = self.base.len();
        let total = self.len();
        let mut dist = vec![f64::INFINITY; total];
        let mut done = vec![false; total];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Entry { d: 0.0, node: source });
        while let Some(Entry { d, node }) = heap.pop() {
            if done[node] {
                continue;
            }
            done[node] = true;
            let (x, t) = self.split(node);
            let lo = t.saturating_sub(self.stencil);
            let hi = (t + self.stencil).min(self.top_level());
            for s in lo..=hi {
                for y in 0..n {
                    let next = s * n + y;
                    if done[next] {
                        continue;
                    }
                    let cand = d + self.edge(x, t, y, s);
                    if cand < dist[next] {
                        dist[next] = cand;
                        heap.push(Entry { d: cand, node: next });
                    }
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.distances_from(a)[b]
    }

    /// Materializes the full distance matrix as a metric space.
    pub fn to_metric_space(&self) -> FiniteMetricSpace {
        let total = self.len();
        let mut dist = vec![0.0; total * total];
        for a in 0..total {
            let row = self.distances_from(a);
            dist[a * total..(a + 1) * total].copy_from_slice(&row);
        }
        // Dijkstra rows agree up to summation order; keep the matrix exactly symmetric.
        for a in 0..total {
            for b in a + 1..total {
                let v = dist[a * total + b].min(dist[b * total + a]);
                dist[a * total + b] = v;
                dist[b * total + a] = v;
            }
        }
        FiniteMetricSpace::from_parts_unchecked(self.points(), dist)
    }

    fn points(&self) -> Vec<Point> {
        let top = self.top_level() as f64;
        let mut out = Vec::with_capacity(self.len());
        for level in 0..self.fiber_points {
            for (x, p) in self.base.points().iter().enumerate() {
                let id = format!("{}@{}", p.id, level);
                let coords = match (&p.coords, &self.higgs) {
                    (Some(c), None) => {
                        let mut c = c.clone();
                        c.push(level as f64 / top * self.fiber_length(x));
                        Some(c)
                    }
                    _ => None,
                };
                out.push(Point { id, coords });
            }
        }
        out
    }

    /// Places sheet 0 on level 0 and sheet 1 on the top level.
    pub fn embed(&self, state: &TwoSheetState) -> Result<Distribution> {
        if state.len() != self.base.len() {
            return Err(Error::DimensionMismatch { expected: self.base.len(), got: state.len() });
        }
        let mut w = vec![0.0; self.len()];
        for x in 0..self.base.len() {
            w[self.node(x, 0)] = state.mu[x];
            w[self.node(x, self.top_level())] = state.nu[x];
        }
        Distribution::new(w)
    }

    /// Recovers a two-sheet state from a grid distribution, rejecting mass on
    /// interior fiber levels.
    pub fn restrict(&self, d: &Distribution) -> Result<TwoSheetState> {
        d.check_len(self.len())?;
        let n = self.base.len();
        for level in 1..self.top_level() {
            if let Some(x) = (0..n).find(|x| d.weight(self.node(*x, level)) > 0.0) {
                return Err(Error::Embedding(format!(
                    "mass {} at base point {x} on interior fiber level {level}",
                    d.weight(self.node(x, level))
                )));
            }
        }
        let mu = (0..n).map(|x| d.weight(self.node(x, 0))).collect();
        let nu = (0..n).map(|x| d.weight(self.node(x, self.top_level()))).collect();
        TwoSheetState::new(mu, nu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    d: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.d.total_cmp(&self.d).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graph-geodesic metric space on the product grid `base x fiber`.
pub fn build_two_sheet(
    base: FiniteMetricSpace,
    norm_di: f64,
    fiber_points: usize,
    higgs: Option<Vec<f64>>,
) -> Result<FiniteMetricSpace> {
    Ok(TwoSheetSpace::new(base, norm_di, fiber_points, higgs)?.to_metric_space())
}
