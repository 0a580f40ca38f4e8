//! Unit-mass shape densities for wave packets, and midpoint quadrature.
//!
//! A shape is a one-dimensional density `psi` with a bounded sampling range.
//! In `m` dimensions the packet shape is the product `psi(xi_1)...psi(xi_m)`;
//! for the Gaussian preset this is the isotropic `pi^{-m/2} exp(-|xi|^2)`.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};

/// Nodes used to check that a shape integrates to one.
const NORMALIZATION_NODES: usize = 4096;

/// Allowed deviation of the shape integral from one.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Default node count per axis for packet quadrature.
pub const DEFAULT_QUADRATURE_NODES: usize = 512;

/// Half-width of the Gaussian sampling range; the mass outside is below 1e-28.
const GAUSS_RANGE: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `exp(-xi^2) / sqrt(pi)`.
    Gauss,
    /// Indicator of `[0, 1]`.
    Uniform,
    /// `1 - |xi|` on `[-1, 1]`.
    Triangle,
    /// Piecewise-linear interpolation of sampled values, zero outside.
    Table(TableShape),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableShape {
    xs: Vec<f64>,
    values: Vec<f64>,
}

impl TableShape {
    pub fn new(mut rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Parse("a table shape needs at least two rows".into()));
        }
        if let Some((x, v)) = rows.iter().find(|(x, v)| !x.is_finite() || !v.is_finite() || *v < 0.0) {
            return Err(Error::Parse(format!("bad table row ({x}, {v})")));
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        if rows.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse("duplicate abscissa in table shape".into()));
        }
        let (xs, values) = rows.into_iter().unzip();
        Ok(TableShape { xs, values })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        TableShape::new(crate::io::read_pairs(path)?)
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let k = self.xs.partition_point(|&p| p <= x).clamp(1, n - 1);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }
}

impl Shape {
    /// `gauss`, `uniform`, `triangle` or `table:<path>`.
    pub fn parse(name: &str) -> Result<Shape> {
        match name {
            "gauss" => Ok(Shape::Gauss),
            "uniform" => Ok(Shape::Uniform),
            "triangle" => Ok(Shape::Triangle),
            _ => match name.strip_prefix("table:") {
                Some(path) => Ok(Shape::Table(TableShape::load(path)?)),
                None => Err(Error::Parse(format!("unknown shape {name:?}"))),
            },
        }
    }

    pub fn density(&self, xi: f64) -> f64 {
        match self {
            Shape::Gauss => (-xi * xi).exp() / PI.sqrt(),
            Shape::Uniform => {
                if (0.0..=1.0).contains(&xi) {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::Triangle => (1.0 - xi.abs()).max(0.0),
            Shape::Table(t) => t.eval(xi),
        }
    }

    /// Interval outside which the density is (numerically) zero.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Shape::Gauss => (-GAUSS_RANGE, GAUSS_RANGE),
            Shape::Uniform => (0.0, 1.0),
            Shape::Triangle => (-1.0, 1.0),
            Shape::Table(t) => (t.xs[0], t.xs[t.xs.len() - 1]),
        }
    }

    pub fn integral(&self) -> f64 {
        let (lo, hi) = self.support();
        midpoint(lo, hi, NORMALIZATION_NODES, |x| self.density(x))
    }

    pub fn check_normalized(&self) -> Result<()> {
        let integral = self.integral();
        if (integral - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization { integral });
        }
        Ok(())
    }

    /// Midpoint rule for `int g(xi) psi(xi) d^m xi` over the product support.
    pub fn expect<G>(&self, dim: usize, nodes: usize, mut g: G) -> f64
    where
        G: FnMut(&[f64]) -> f64,
    {
        let (lo, hi) = self.support();
        let h = (hi - lo) / nodes as f64;
        let axis: Vec<(f64, f64)> = (0..nodes)
            .map(|k| {
                let x = lo + (k as f64 + 0.5) * h;
                (x, self.density(x) * h)
            })
            .collect();
        let mut index = vec![0usize; dim];
        let mut xi = vec![0.0; dim];
        let mut total = 0.0;
        loop {
            let mut w = 1.0;
            for (d, &k) in index.iter().enumerate() {
                xi[d] = axis[k].0;
                w *= axis[k].1;
            }
            if w != 0.0 {
                total += w * g(&xi);
            }
            // odometer increment
            let mut d = 0;
            loop {
                if d == dim {
                    return total;
                }
                index[d] += 1;
                if index[d] < nodes {
                    break;
                }
                index[d] = 0;
                d += 1;
            }
        }
    }
}

/// Composite midpoint rule on `[lo, hi]` with `nodes` cells.
pub fn midpoint<F: Fn(f64) -> f64>(lo: f64, hi: f64, nodes: usize, f: F) -> f64 {
    let h = (hi - lo) / nodes as f64;
    (0..nodes).map(|k| f(lo + (k as f64 + 0.5) * h)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_normalized() {
        for s in [Shape::Gauss, Shape::Uniform, Shape::Triangle] {
            s.check_normalized().unwrap();
        }
    }

    #[test]
    fn unnormalized_table_rejected() {
        let t = Shape::Table(TableShape::new(vec![(0.0, 2.0), (1.0, 2.0)]).unwrap());
        assert!(matches!(t.check_normalized(), Err(Error::Normalization { .. })));
        let ok = Shape::Table(TableShape::new(vec![(0.0, 0.0), (1.0, 2.0)]).unwrap());
        ok.check_normalized().unwrap();
        assert_eq!(ok.density(0.25), 0.5);
    }

    #[test]
    fn parse_names() {
        assert_eq!(Shape::parse("gauss").unwrap(), Shape::Gauss);
        assert!(Shape::parse("cauchy").is_err());
    }

    #[test]
    fn expectation_in_two_dimensions() {
        let mean = Shape::Uniform.expect(2, 64, |xi| xi[0] + xi[1]);
        assert!((mean - 1.0).abs() < 1e-12);
    }
}
