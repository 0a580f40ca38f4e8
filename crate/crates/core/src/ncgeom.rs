//! Noncommutative examples: distances on the Bloch ball, the equatorial
//! chord metric, and the two-sheet jump cost.

use std::f64::consts::{FRAC_PI_4, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::solve;
use crate::space::{CostMatrix, Distribution, FiniteMetricSpace};
use crate::twosheet::{TwoSheetSpace, TwoSheetState};

/// Slack allowed on the unit-ball constraint.
pub const BALL_TOL: f64 = 1e-12;

/// Bound on `|W_I - d'|` asserted by [`propsm_check`].
pub const PROPSM_TOL: f64 = 1e-12;

/// Barycenter coordinates of a state of 2x2 matrices; the vertical axis is
/// the one singled out by the Dirac operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochState {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r2 = x * x + y * y + z * z;
        if !r2.is_finite() || r2 > 1.0 + BALL_TOL {
            return Err(Error::Invariant(format!("({x}, {y}, {z}) lies outside the unit ball")));
        }
        Ok(BlochState { x, y, z })
    }

    fn sub(&self, other: &BlochState) -> [f64; 3] {
        [self.x - other.x, self.y - other.y, self.z - other.z]
    }
}

/// Distance between states on the horizontal circle of radius `r`:
/// `(2 r / |D1 - D2|) |sin((theta1 - theta2) / 2)|`.
pub fn equatorial_distance(theta1: f64, theta2: f64, r: f64, d_d: f64) -> Result<f64> {
    if !(d_d > 0.0) {
        return Err(Error::Parameter(format!("|D1 - D2| must be positive, got {d_d}")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Parameter(format!("radius {r} outside [0, 1]")));
    }
    Ok(2.0 * r / d_d * ((theta1 - theta2) / 2.0).sin().abs())
}

/// Smallest deviation from the two half-distance conditions over the
/// candidate midpoints `candidates`, for the metric `d` and endpoints `a`, `b`.
pub fn midpoint_defect_with<D, I>(d: D, a: f64, b: f64, candidates: I) -> f64
where
    D: Fn(f64, f64) -> f64,
    I: IntoIterator<Item = f64>,
{
    let half = 0.5 * d(a, b);
    candidates.into_iter().map(|m| (d(a, m) - half).abs().max((d(m, b) - half).abs())).fold(f64::INFINITY, f64::min)
}

/// Midpoint defect of the unit-radius equatorial metric (`r = 1`,
/// `|D1 - D2| = 1`) over `grid_n` equispaced candidate angles. A positive
/// value means no metric midpoint exists at this resolution.
pub fn midpoint_defect(theta1: f64, theta2: f64, grid_n: usize) -> Result<f64> {
    if grid_n < 1000 {
        return Err(Error::Parameter(format!("midpoint grid needs at least 1000 candidates, got {grid_n}")));
    }
    if (theta1 - theta2).rem_euclid(TAU) == 0.0 {
        return Err(Error::Degenerate("coincident angles have a trivial midpoint".into()));
    }
    let d = |p: f64, q: f64| 2.0 * ((p - q) / 2.0).sin().abs();
    Ok(midpoint_defect_with(d, theta1, theta2, (0..grid_n).map(|k| TAU * k as f64 / grid_n as f64)))
}

/// Spectral distance on the state space of the truncated Moyal algebra.
pub fn moyal_ball_distance(a: &BlochState, b: &BlochState, theta_param: f64) -> Result<f64> {
    if !(theta_param > 0.0) {
        return Err(Error::Parameter(format!("theta must be positive, got {theta_param}")));
    }
    BlochState::new(a.x, a.y, a.z)?;
    BlochState::new(b.x, b.y, b.z)?;
    let v = a.sub(b);
    let d_ec = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if d_ec == 0.0 {
        return Ok(0.0);
    }
    let alpha = (v[2].abs() / d_ec).min(1.0).asin();
    let factor = if alpha <= FRAC_PI_4 { alpha.cos() } else { 1.0 / (2.0 * alpha.sin()) };
    Ok((theta_param / 2.0).sqrt() * factor * d_ec)
}

/// Which constant is subtracted from the jump cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftMode {
    #[default]
    None,
    /// `c_I - 1 / |D_I|`, vanishing on the diagonal.
    Linear,
    /// `c_I - 1 / |D_I|^2`.
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpCostParams {
    pub norm_di: f64,
    pub shift: ShiftMode,
}

impl JumpCostParams {
    pub fn new(norm_di: f64, shift: ShiftMode) -> Result<Self> {
        if !(norm_di > 0.0) || !norm_di.is_finite() {
            return Err(Error::Parameter(format!("norm_di must be positive, got {norm_di}")));
        }
        Ok(JumpCostParams { norm_di, shift })
    }
}

/// `sqrt(d^2 + 1 / |D_I|^2)`: the distance between `x` on one sheet and `y`
/// on the other.
pub fn two_sheet_pure_distance(base_d: f64, norm_di: f64) -> Result<f64> {
    if !(base_d >= 0.0) {
        return Err(Error::Parameter(format!("base distance must be nonnegative, got {base_d}")));
    }
    if !(norm_di > 0.0) {
        return Err(Error::Parameter(format!("norm_di must be positive, got {norm_di}")));
    }
    let inv = 1.0 / norm_di;
    Ok(if base_d == 0.0 { inv } else { base_d.hypot(inv) })
}

/// Jump cost matrix over a base space, minus the selected shift.
pub fn jump_cost(base: &FiniteMetricSpace, params: JumpCostParams) -> Result<CostMatrix> {
    let params = JumpCostParams::new(params.norm_di, params.shift)?;
    let inv = 1.0 / params.norm_di;
    let shift = match params.shift {
        ShiftMode::None => 0.0,
        ShiftMode::Linear => inv,
        ShiftMode::Quadratic => inv * inv,
    };
    let n = base.len();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = two_sheet_pure_distance(base.dist(i, j), params.norm_di)?;
                    Ok(if params.shift == ShiftMode::Linear && i == j { 0.0 } else { c - shift })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    CostMatrix::new(matrix)
}

/// Wasserstein distance on the product grid between two two-sheet states.
pub fn two_sheet_state_distance(space: &TwoSheetSpace, s1: &TwoSheetState, s2: &TwoSheetState) -> Result<f64> {
    let d1 = space.embed(s1)?;
    let d2 = space.embed(s2)?;
    grid_distance(space, &d1, &d2)
}

/// As [`two_sheet_state_distance`] for distributions given on the grid;
/// mass on interior fiber levels is rejected.
pub fn two_sheet_distribution_distance(space: &TwoSheetSpace, d1: &Distribution, d2: &Distribution) -> Result<f64> {
    space.restrict(d1)?;
    space.restrict(d2)?;
    grid_distance(space, d1, d2)
}

fn grid_distance(space: &TwoSheetSpace, d1: &Distribution, d2: &Distribution) -> Result<f64> {
    let mut nodes: Vec<usize> = d1.support();
    nodes.extend(d2.support());
    nodes.sort_unstable();
    nodes.dedup();
    let matrix: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&a| {
            let row = space.distances_from(a);
            nodes.iter().map(|&b| row[b]).collect()
        })
        .collect();
    let k = nodes.len();
    // exact symmetry for the restricted metric
    let mut sym = matrix.clone();
    for i in 0..k {
        for j in 0..k {
            sym[i][j] = matrix[i][j].min(matrix[j][i]);
        }
    }
    let cost = CostMatrix::metric_unchecked(sym)?;
    let w = |d: &Distribution| Distribution::normalized(nodes.iter().map(|&i| d.weight(i)).collect());
    Ok(solve(&cost, &w(d1)?, &w(d2)?)?.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropsmReport {
    pub w_i: f64,
    pub dprime: f64,
    pub residual: f64,
}

/// Compares the minimal work under the jump cost between `δ_x` and `δ_y`
/// with the closed-form cross-sheet distance.
pub fn propsm_check(base: &FiniteMetricSpace, norm_di: f64, x: usize, y: usize) -> Result<PropsmReport> {
    base.check_index(x)?;
    base.check_index(y)?;
    let cost = jump_cost(base, JumpCostParams::new(norm_di, ShiftMode::None)?)?;
    let n = base.len();
    let w_i = solve(&cost, &Distribution::point_mass(n, x)?, &Distribution::point_mass(n, y)?)?.value();
    let dprime = two_sheet_pure_distance(base.dist(x, y), norm_di)?;
    let residual = (w_i - dprime).abs();
    if residual > PROPSM_TOL {
        return Err(Error::Invariant(format!("W_I = {w_i} differs from d' = {dprime} by {residual:e}")));
    }
    Ok(PropsmReport { w_i, dprime, residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HiggsReport {
    pub geodesic: f64,
    pub tilde_cost: f64,
}

/// Cross-sheet geodesic on the Higgs-weighted grid against the fluctuated
/// cost `sqrt(d(x, y)^2 + (1 / profile[x])^2)`. No relation is asserted.
pub fn higgs_comparison(
    base: &FiniteMetricSpace,
    profile: &[f64],
    fiber_points: usize,
    x: usize,
    y: usize,
) -> Result<HiggsReport> {
    base.check_index(x)?;
    base.check_index(y)?;
    let space = TwoSheetSpace::new(base.clone(), 1.0, fiber_points, Some(profile.to_vec()))?;
    let geodesic = space.distance(space.node(x, 0), space.node(y, space.top_level()));
    let tilde_cost = base.dist(x, y).hypot(1.0 / profile[x]);
    Ok(HiggsReport { geodesic, tilde_cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{build_grid_line, Point};
    use std::f64::consts::PI;

    #[test]
    fn equatorial_examples() {
        assert_eq!(equatorial_distance(1.0, 1.0, 0.5, 1.0).unwrap(), 0.0);
        assert_eq!(equatorial_distance(PI, 0.0, 1.0, 2.0).unwrap(), 1.0);
        let a = equatorial_distance(0.3, 1.9, 0.7, 1.3).unwrap();
        let b = equatorial_distance(0.3 + 2.0, 1.9 + 2.0, 0.7, 1.3).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(equatorial_distance(0.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn midpoint_examples() {
        assert!(midpoint_defect(0.0, PI / 2.0, 10_000).unwrap() > 0.01);
        // endpoints two grid steps apart, so the chord midpoint is a candidate
        let step = TAU / 10_000.0;
        // the chord metric still misses by about delta^3 / 32
        let small = midpoint_defect(0.0, 2.0 * step, 10_000).unwrap();
        assert!(small > 0.0 && small < 1e-10);
        assert!(midpoint_defect(1.0, 1.0, 10_000).is_err());
        assert!(midpoint_defect(0.0, 1.0, 10).is_err());
        let line = midpoint_defect_with(|a, b| (a - b).abs(), 0.0, 1.0, (0..=1000).map(|k| k as f64 / 1000.0));
        assert_eq!(line, 0.0);
    }

    #[test]
    fn moyal_branches() {
        let o = BlochState::new(0.0, 0.0, 0.0).unwrap();
        let h = BlochState::new(0.6, 0.0, 0.0).unwrap();
        let v = BlochState::new(0.0, 0.0, 0.6).unwrap();
        let theta = 2.0;
        assert_eq!(moyal_ball_distance(&o, &o, theta).unwrap(), 0.0);
        assert!((moyal_ball_distance(&o, &h, theta).unwrap() - 0.6).abs() < 1e-15);
        assert!((moyal_ball_distance(&o, &v, theta).unwrap() - 0.3).abs() < 1e-15);
        assert!(BlochState::new(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn jump_costs() {
        let base = FiniteMetricSpace::new(vec![Point::new("x"), Point::new("y")], vec![vec![0.0, 3.0], vec![3.0, 0.0]])
            .unwrap();
        let c = jump_cost(&base, JumpCostParams::new(0.25, ShiftMode::None).unwrap()).unwrap();
        assert_eq!(c.get(0, 0), 4.0);
        assert_eq!(c.get(0, 1), 5.0);
        assert!(!c.vanishing_diagonal());
        let lin = jump_cost(&base, JumpCostParams::new(0.25, ShiftMode::Linear).unwrap()).unwrap();
        assert_eq!(lin.get(1, 1), 0.0);
        assert!(lin.vanishing_diagonal());
        // quadratic shift overshoots below zero when |D_I| < 1
        assert!(jump_cost(&base, JumpCostParams::new(0.25, ShiftMode::Quadratic).unwrap()).is_err());
        let q = jump_cost(&base, JumpCostParams::new(2.0, ShiftMode::Quadratic).unwrap()).unwrap();
        assert_eq!(q.get(0, 0), 0.25);
    }

    #[test]
    fn pure_cross_sheet() {
        assert_eq!(two_sheet_pure_distance(0.0, 4.0).unwrap(), 0.25);
        assert_eq!(two_sheet_pure_distance(3.0, 0.25).unwrap(), 5.0);
        assert!((two_sheet_pure_distance(3.0, 1e12).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn propsm_examples() {
        let base = build_grid_line(4, 0.0, 3.0).unwrap();
        let r = propsm_check(&base, 0.25, 0, 3).unwrap();
        assert_eq!((r.w_i, r.dprime), (5.0, 5.0));
        let r = propsm_check(&base, 0.25, 2, 2).unwrap();
        assert_eq!(r.w_i, 4.0);
        let r = propsm_check(&base, 1.0, 0, 1).unwrap();
        assert!((r.w_i - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn uniform_against_uniform_under_jump_cost() {
        let base = build_grid_line(2, 0.0, 1.0).unwrap();
        let c = jump_cost(&base, JumpCostParams::new(1.0, ShiftMode::None).unwrap()).unwrap();
        let u = Distribution::uniform(2).unwrap();
        assert_eq!(crate::solver::oracle_enumerate(&c, &u, &u).unwrap(), 1.0);
        assert!((solve(&c, &u, &u).unwrap().value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn same_sheet_and_identical_states() {
        let base = build_grid_line(5, 0.0, 1.0).unwrap();
        let ts = TwoSheetSpace::new(base.clone(), 2.0, 5, None).unwrap();
        let a = Distribution::new(vec![0.5, 0.0, 0.5, 0.0, 0.0]).unwrap();
        let b = Distribution::new(vec![0.0, 0.25, 0.0, 0.0, 0.75]).unwrap();
        let on_base = solve(&CostMatrix::from_metric(&base), &a, &b).unwrap().value();
        for sheet in [0, 1] {
            let s1 = TwoSheetState::on_sheet(sheet, &a).unwrap();
            let s2 = TwoSheetState::on_sheet(sheet, &b).unwrap();
            assert!((two_sheet_state_distance(&ts, &s1, &s2).unwrap() - on_base).abs() < 1e-12);
            assert_eq!(two_sheet_state_distance(&ts, &s1, &s1).unwrap(), 0.0);
        }
        let x0 = TwoSheetState::on_sheet(0, &Distribution::point_mass(5, 0).unwrap()).unwrap();
        let x1 = TwoSheetState::on_sheet(1, &Distribution::point_mass(5, 0).unwrap()).unwrap();
        assert!((two_sheet_state_distance(&ts, &x0, &x1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn interior_mass_is_rejected() {
        let base = build_grid_line(2, 0.0, 1.0).unwrap();
        let ts = TwoSheetSpace::new(base, 1.0, 3, None).unwrap();
        let bad = Distribution::point_mass(ts.len(), ts.node(0, 1)).unwrap();
        let ok = Distribution::point_mass(ts.len(), ts.node(0, 0)).unwrap();
        assert!(matches!(two_sheet_distribution_distance(&ts, &bad, &ok), Err(Error::Embedding(_))));
    }

    #[test]
    fn higgs_profiles() {
        let base = build_grid_line(9, 0.0, 1.0).unwrap();
        let flat = higgs_comparison(&base, &[1.0; 9], 9, 0, 8).unwrap();
        assert!((flat.geodesic - flat.tilde_cost).abs() / flat.tilde_cost < 0.02);
        let doubled = higgs_comparison(&base, &[2.0; 9], 9, 0, 8).unwrap();
        assert!(doubled.geodesic < flat.geodesic);
        assert!(higgs_comparison(&base, &[0.0; 9], 9, 0, 8).is_err());
    }
}
