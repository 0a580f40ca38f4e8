//! Closed-form distances, bounds and optimal potentials.
//!
//! These are evaluated without any linear programming and serve as
//! independent checks on the transport solver.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shape::Shape;
use crate::solver::Scalar;
use crate::space::{barycenter, euclid, first_moment, Distribution, FiniteMetricSpace, METRIC_TOL};

/// Minimum node count per axis accepted by [`wavepacket_distance`].
pub const MIN_QUADRATURE_NODES: usize = 64;

/// Cumulative distribution `Delta(z)` of `mu1 - mu2` on the line, as a step
/// function: `delta[k]` holds on `(breakpoints[k], breakpoints[k + 1])` and
/// `Delta` vanishes outside the breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulativeDifference {
    pub breakpoints: Vec<f64>,
    pub delta: Vec<f64>,
}

impl CumulativeDifference {
    /// Builds `Delta` from weighted atoms `(position, weight)`.
    pub fn from_atoms(mu1: &[(f64, f64)], mu2: &[(f64, f64)]) -> Result<Self> {
        if mu1.is_empty() || mu2.is_empty() {
            return Err(Error::Degenerate("empty support".into()));
        }
        let mut jumps: Vec<(f64, f64)> = mu1.iter().copied().chain(mu2.iter().map(|&(x, w)| (x, -w))).collect();
        if let Some((x, _)) = jumps.iter().find(|(x, w)| !x.is_finite() || !w.is_finite()) {
            return Err(Error::Parameter(format!("non-finite atom at {x}")));
        }
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut breakpoints: Vec<f64> = Vec::new();
        let mut delta = Vec::new();
        let mut running = 0.0;
        for (x, w) in jumps {
            if breakpoints.last() != Some(&x) {
                if !breakpoints.is_empty() {
                    delta.push(running);
                }
                breakpoints.push(x);
            }
            running += w;
        }
        Ok(CumulativeDifference { breakpoints, delta })
    }

    /// `int |Delta(z)| dz`.
    pub fn integral_abs(&self) -> f64 {
        self.breakpoints.windows(2).zip(&self.delta).map(|(w, d)| d.abs() * (w[1] - w[0])).sum()
    }

    /// Value of `Delta` at `z` (right-continuous).
    pub fn at(&self, z: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&b| b <= z);
        if k == 0 || k >= self.breakpoints.len() {
            0.0
        } else {
            self.delta[k - 1]
        }
    }
}

/// Wasserstein-1 distance between atomic measures on the line.
pub fn wasserstein_1d(mu1: &[(f64, f64)], mu2: &[(f64, f64)]) -> Result<f64> {
    Ok(CumulativeDifference::from_atoms(mu1, mu2)?.integral_abs())
}

/// [`wasserstein_1d`] for distributions on a space that embeds in the line.
pub fn wasserstein_1d_on(space: &FiniteMetricSpace, mu1: &Distribution, mu2: &Distribution) -> Result<f64> {
    mu1.check_len(space.len())?;
    mu2.check_len(space.len())?;
    let xs = space.line_coords().ok_or_else(|| {
        Error::Hypothesis("the cumulative formula needs a subset of the real line with the induced distance".into())
    })?;
    let atoms = |d: &Distribution| d.support().into_iter().map(|i| (xs[i], d.weight(i))).collect::<Vec<_>>();
    wasserstein_1d(&atoms(mu1), &atoms(mu2))
}

/// Distance from `mu` to the point mass at `x`: the expected distance to `x`.
pub fn distance_to_pure(space: &FiniteMetricSpace, x: usize, mu: &Distribution) -> Result<f64> {
    first_moment(space, mu, x)
}

/// `sum_i row[i] * weights[i]` in any scalar field.
pub fn expectation<T: Scalar>(row: &[T], weights: &[T]) -> T {
    row.iter().zip(weights).fold(T::zero(), |acc, (d, w)| acc + d.clone() * w.clone())
}

/// Expected distance under the product coupling `mu1 x mu2`.
pub fn product_upper_bound(space: &FiniteMetricSpace, mu1: &Distribution, mu2: &Distribution) -> Result<f64> {
    mu1.check_len(space.len())?;
    mu2.check_len(space.len())?;
    let mut total = 0.0;
    for i in mu1.support() {
        let row = space.row(i);
        total += mu1.weight(i) * mu2.support().iter().map(|&j| row[j] * mu2.weight(j)).sum::<f64>();
    }
    Ok(total)
}

/// Distance between barycenters. Requires the stored metric to be the
/// Euclidean distance of the coordinates.
pub fn barycenter_lower_bound(space: &FiniteMetricSpace, mu1: &Distribution, mu2: &Distribution) -> Result<f64> {
    if !space.is_euclidean(METRIC_TOL) {
        return Err(Error::Hypothesis(
            "barycenter bound needs an isometric Euclidean embedding (distances must equal coordinate distances)"
                .into(),
        ));
    }
    Ok(euclid(&barycenter(space, mu1)?, &barycenter(space, mu2)?))
}

/// Convex combination `(1 - t) mu0 + t mu1`.
pub fn interpolate(mu0: &Distribution, mu1: &Distribution, t: f64) -> Result<Distribution> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("interpolation parameter {t} outside [0, 1]")));
    }
    mu1.check_len(mu0.len())?;
    if t == 0.0 {
        return Ok(mu0.clone());
    }
    if t == 1.0 {
        return Ok(mu1.clone());
    }
    let w = mu0.weights().iter().zip(mu1.weights()).map(|(a, b)| (1.0 - t) * a + t * b).collect();
    Distribution::normalized(w)
}

/// Shape `psi` rescaled by `width` and centered at `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    pub shape: Shape,
    pub center: Vec<f64>,
    pub width: f64,
}

impl WavePacket {
    pub fn new(shape: Shape, center: Vec<f64>, width: f64) -> Result<Self> {
        if !(width >= 0.0) || !width.is_finite() {
            return Err(Error::Parameter(format!("packet width must be nonnegative, got {width}")));
        }
        shape.check_normalized()?;
        Ok(WavePacket { shape, center, width })
    }

    /// Density `psi((z - x) / sigma) / sigma` in one dimension.
    pub fn density(&self, z: f64) -> f64 {
        self.shape.density((z - self.center[0]) / self.width) / self.width
    }

    /// Samples the packet on a line grid; zero width gives a point mass,
    /// which must sit on a grid node.
    pub fn discretize(&self, grid: &FiniteMetricSpace) -> Result<Distribution> {
        if self.center.len() != 1 {
            return Err(Error::UnsupportedSpace("packets are discretized on one-dimensional grids".into()));
        }
        if self.width == 0.0 {
            let xs = grid
                .line_coords()
                .ok_or_else(|| Error::UnsupportedSpace("packet discretization needs a line grid".into()))?;
            let at = xs
                .iter()
                .position(|x| (x - self.center[0]).abs() <= METRIC_TOL)
                .ok_or_else(|| Error::Parameter(format!("point mass at {} is not a grid node", self.center[0])))?;
            return Distribution::point_mass(xs.len(), at);
        }
        crate::space::discretize_density(|z| self.density(z), grid)
    }
}

/// `int |x - y + (sigma - sigma') xi| psi(xi) d^m xi` by midpoint quadrature.
/// Equal widths short-circuit to `|x - y|`.
pub fn wavepacket_distance(
    psi: &Shape,
    sigma: f64,
    sigma_p: f64,
    x: &[f64],
    y: &[f64],
    quadrature_n: usize,
) -> Result<f64> {
    if !(sigma >= 0.0) || !(sigma_p >= 0.0) {
        return Err(Error::Parameter(format!("widths must be nonnegative, got {sigma} and {sigma_p}")));
    }
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    if quadrature_n < MIN_QUADRATURE_NODES {
        return Err(Error::Parameter(format!("need at least {MIN_QUADRATURE_NODES} quadrature nodes")));
    }
    psi.check_normalized()?;
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    if sigma == sigma_p {
        return Ok(norm(&diff));
    }
    let s = sigma - sigma_p;
    Ok(psi.expect(x.len(), quadrature_n, |xi| {
        diff.iter().zip(xi).map(|(d, e)| (d + s * e) * (d + s * e)).sum::<f64>().sqrt()
    }))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// A 1-Lipschitz function attaining the supremum between two packets.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialDescriptor {
    /// `h(z) = z . direction` with `|direction| = 1`.
    Affine { direction: Vec<f64> },
    /// `h(z) = sign * |z - apex|`.
    Cone { apex: Vec<f64>, sign: f64 },
}

impl PotentialDescriptor {
    pub fn eval(&self, z: &[f64]) -> f64 {
        match self {
            PotentialDescriptor::Affine { direction } => z.iter().zip(direction).map(|(a, b)| a * b).sum(),
            PotentialDescriptor::Cone { apex, sign } => sign * euclid(z, apex),
        }
    }

    /// `Psi_{sigma,x}(h) - Psi_{sigma',y}(h)` by midpoint quadrature.
    pub fn pairing(&self, psi: &Shape, sigma: f64, sigma_p: f64, x: &[f64], y: &[f64], quadrature_n: usize) -> f64 {
        let mut zx = vec![0.0; x.len()];
        let mut zy = vec![0.0; y.len()];
        psi.expect(x.len(), quadrature_n, |xi| {
            for k in 0..xi.len() {
                zx[k] = sigma * xi[k] + x[k];
                zy[k] = sigma_p * xi[k] + y[k];
            }
            self.eval(&zx) - self.eval(&zy)
        })
    }
}

/// Optimal potential between `Psi_{sigma,x}` and `Psi_{sigma',y}`: the
/// projection on the axis `x - y` for equal widths, otherwise the distance
/// to `alpha = (sigma' x - sigma y) / (sigma' - sigma)`.
pub fn optimal_potential(x: &[f64], y: &[f64], sigma: f64, sigma_p: f64) -> Result<PotentialDescriptor> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    if sigma == sigma_p {
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        let len = norm(&diff);
        if len == 0.0 {
            return Err(Error::Degenerate("identical packets: every potential gives zero".into()));
        }
        return Ok(PotentialDescriptor::Affine { direction: diff.into_iter().map(|d| d / len).collect() });
    }
    let apex = x.iter().zip(y).map(|(a, b)| (sigma_p * a - sigma * b) / (sigma_p - sigma)).collect();
    let sign = if sigma > sigma_p { 1.0 } else { -1.0 };
    Ok(PotentialDescriptor::Cone { apex, sign })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{build_grid_circle, build_grid_line, Point};

    #[test]
    fn one_dimensional_examples() {
        let a = [(0.0, 0.3), (2.0, 0.7)];
        assert_eq!(wasserstein_1d(&a, &a).unwrap(), 0.0);
        assert_eq!(wasserstein_1d(&[(0.0, 1.0)], &[(1.0, 1.0)]).unwrap(), 1.0);
        // Delta = -1/2 on (-1, 0) and +1/2 on (0, 1)
        let spread = [(-1.0, 0.5), (1.0, 0.5)];
        let cd = CumulativeDifference::from_atoms(&[(0.0, 1.0)], &spread).unwrap();
        assert_eq!(cd.at(-0.5), -0.5);
        assert_eq!(cd.at(0.5), 0.5);
        assert_eq!(cd.at(2.0), 0.0);
        assert_eq!(cd.integral_abs(), 1.0);
        assert!(wasserstein_1d(&[], &a).is_err());
    }

    #[test]
    fn cumulative_formula_refuses_circle() {
        let c = build_grid_circle(4).unwrap();
        let u = Distribution::uniform(4).unwrap();
        assert!(matches!(wasserstein_1d_on(&c, &u, &u), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn pure_state_distances() {
        let c = build_grid_circle(4).unwrap();
        let u = Distribution::uniform(4).unwrap();
        assert!((distance_to_pure(&c, 0, &u).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(distance_to_pure(&c, 1, &Distribution::point_mass(4, 1).unwrap()).unwrap(), 0.0);
        assert_eq!(distance_to_pure(&c, 1, &Distribution::point_mass(4, 3).unwrap()).unwrap(), 0.5);
    }

    #[test]
    fn product_bound_examples() {
        let line = build_grid_line(2, 0.0, 1.0).unwrap();
        let u = Distribution::uniform(2).unwrap();
        assert_eq!(product_upper_bound(&line, &u, &u).unwrap(), 0.5);
        let d0 = Distribution::point_mass(2, 0).unwrap();
        let d1 = Distribution::point_mass(2, 1).unwrap();
        assert_eq!(product_upper_bound(&line, &d0, &d0).unwrap(), 0.0);
        assert_eq!(product_upper_bound(&line, &d0, &d1).unwrap(), 1.0);
    }

    #[test]
    fn barycenter_bound_needs_euclidean_space() {
        let line = build_grid_line(3, 0.0, 1.0).unwrap();
        let d0 = Distribution::point_mass(3, 0).unwrap();
        let d2 = Distribution::point_mass(3, 2).unwrap();
        assert_eq!(barycenter_lower_bound(&line, &d0, &d2).unwrap(), 1.0);
        assert_eq!(barycenter_lower_bound(&line, &d2, &d2).unwrap(), 0.0);
        assert!(matches!(barycenter_lower_bound(&build_grid_circle(3).unwrap(), &d0, &d2), Err(Error::Hypothesis(_))));
        let bare = FiniteMetricSpace::new(vec![Point::new("a"), Point::new("b")], vec![vec![0.0, 1.0], vec![1.0, 0.0]])
            .unwrap();
        let u = Distribution::uniform(2).unwrap();
        assert!(barycenter_lower_bound(&bare, &u, &u).is_err());
    }

    #[test]
    fn interpolation() {
        let a = Distribution::point_mass(3, 0).unwrap();
        let b = Distribution::point_mass(3, 2).unwrap();
        assert_eq!(interpolate(&a, &b, 0.0).unwrap(), a);
        assert_eq!(interpolate(&a, &b, 1.0).unwrap(), b);
        assert_eq!(interpolate(&a, &b, 0.5).unwrap().weights(), &[0.5, 0.0, 0.5]);
        assert!(interpolate(&a, &b, 1.5).is_err());
    }

    #[test]
    fn packet_distance_examples() {
        let v = wavepacket_distance(&Shape::Gauss, 0.7, 0.7, &[3.0, 4.0], &[0.0, 0.0], 64).unwrap();
        assert_eq!(v, 5.0);
        assert_eq!(wavepacket_distance(&Shape::Triangle, 0.0, 0.0, &[1.0], &[-1.0], 64).unwrap(), 2.0);
        // int_0^1 xi dxi
        let v = wavepacket_distance(&Shape::Uniform, 1.0, 0.0, &[0.0], &[0.0], 512).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        assert!(wavepacket_distance(&Shape::Uniform, 1.0, 0.0, &[0.0], &[0.0], 10).is_err());
        assert!(wavepacket_distance(&Shape::Uniform, -1.0, 0.0, &[0.0], &[0.0], 64).is_err());
    }

    #[test]
    fn potential_descriptors() {
        match optimal_potential(&[3.0, 4.0], &[0.0, 0.0], 0.5, 0.5).unwrap() {
            PotentialDescriptor::Affine { direction } => assert_eq!(direction, vec![0.6, 0.8]),
            other => panic!("expected affine, got {other:?}"),
        }
        // second packet pure: apex at its location
        match optimal_potential(&[0.3], &[2.0], 1.0, 0.0).unwrap() {
            PotentialDescriptor::Cone { apex, sign } => {
                assert_eq!(apex, vec![2.0]);
                assert_eq!(sign, 1.0);
            }
            other => panic!("expected cone, got {other:?}"),
        }
        match optimal_potential(&[0.0], &[1.0], 2.0, 1.0).unwrap() {
            PotentialDescriptor::Cone { apex, .. } => assert_eq!(apex, vec![2.0]),
            other => panic!("expected cone, got {other:?}"),
        }
        assert!(matches!(optimal_potential(&[1.0], &[1.0], 0.2, 0.2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn cone_potential_attains_distance() {
        for (s, sp) in [(2.0, 1.0), (0.5, 1.5)] {
            let h = optimal_potential(&[0.0], &[1.0], s, sp).unwrap();
            let d = wavepacket_distance(&Shape::Gauss, s, sp, &[0.0], &[1.0], 512).unwrap();
            let p = h.pairing(&Shape::Gauss, s, sp, &[0.0], &[1.0], 512);
            assert!((p - d).abs() < 1e-9, "{p} vs {d}");
        }
    }

    #[test]
    fn packet_discretization() {
        let grid = build_grid_line(9, 0.0, 1.0).unwrap();
        let pure = WavePacket::new(Shape::Gauss, vec![0.25], 0.0).unwrap();
        assert_eq!(pure.discretize(&grid).unwrap().support(), vec![2]);
        let off = WavePacket::new(Shape::Gauss, vec![0.3], 0.0).unwrap();
        assert!(off.discretize(&grid).is_err());
        let box_ = WavePacket::new(Shape::Uniform, vec![0.25], 0.5).unwrap();
        assert_eq!(box_.discretize(&grid).unwrap().support(), vec![2, 3, 4, 5, 6]);
    }
}
