//! Kantorovich primal and dual transport problems on finite spaces.
//!
//! Both problems are solved by one network-simplex run on the balanced
//! transportation problem between the two supports. The plan is read off
//! the final flows, the dual from the spanning-tree node prices. Points
//! without mass are dropped before solving; the dual is then extended to the
//! whole space so it stays feasible everywhere.
//!
//! For metric costs the dual is a single potential `f` with
//! `f[i] - f[j] <= cost[i][j]`. For other costs (such as the two-sheet jump
//! cost) the dual keeps separate source and target potentials with
//! `f[i] - g[j] <= cost[i][j]`; for metric costs `g == f`.

mod network;
mod oracle;
mod scalar;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{CostMatrix, Distribution};

use network::{network_simplex, TransportProblem};
pub use oracle::ORACLE_SUPPORT_LIMIT;
pub use scalar::Scalar;

/// Absolute tolerance on marginals, objective values and dual feasibility.
pub const SOLVER_TOL: f64 = 1e-9;

/// Largest support accepted by the exact rational solver.
pub const EXACT_SUPPORT_LIMIT: usize = 64;

/// Coupling with prescribed marginals, stored densely.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportPlan {
    n: usize,
    pi: Vec<f64>,
    pub value: f64,
    #[serde(skip)]
    fingerprint: u64,
}

impl TransportPlan {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pi[i * self.n + j]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.pi[i * self.n..(i + 1) * self.n].iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.n).map(|j| (0..self.n).map(|i| self.get(i, j)).sum()).collect()
    }

    /// Nonzero entries `(i, j, mass)` in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        self.pi.iter().enumerate().filter(|(_, p)| **p > 0.0).map(|(k, p)| (k / self.n, k % self.n, *p)).collect()
    }

    /// Recomputes the objective against `cost`.
    pub fn cost_under(&self, cost: &CostMatrix) -> f64 {
        self.entries().iter().map(|(i, j, p)| p * cost.get(*i, *j)).sum()
    }
}

/// Dual variables of the transport problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualPotential {
    /// Potential integrated against the first distribution.
    pub f: Vec<f64>,
    /// Potential integrated against the second; equal to `f` for metric costs.
    pub g: Vec<f64>,
    pub value: f64,
    /// Index where `f` is pinned to zero.
    pub anchor: usize,
    #[serde(skip)]
    fingerprint: u64,
}

impl DualPotential {
    pub fn is_single(&self) -> bool {
        self.f == self.g
    }

    /// Largest violation of `f[i] - g[j] <= cost[i][j]` (negative when strictly feasible).
    pub fn max_violation(&self, cost: &CostMatrix) -> f64 {
        let n = self.f.len();
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max(self.f[i] - self.g[j] - cost.get(i, j));
            }
        }
        worst
    }

    pub fn evaluate(&self, mu1: &Distribution, mu2: &Distribution) -> f64 {
        dot(&self.f, mu1.weights()) - dot(&self.g, mu2.weights())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub plan: TransportPlan,
    pub potential: DualPotential,
    pub gap: f64,
    pub pivots: usize,
}

impl SolveResult {
    /// Pairs a plan and a potential, rejecting halves solved on different inputs.
    pub fn from_parts(plan: TransportPlan, potential: DualPotential) -> Result<Self> {
        if plan.fingerprint != potential.fingerprint {
            return Err(Error::Pairing);
        }
        let gap = plan.value - potential.value;
        Ok(SolveResult { plan, potential, gap, pivots: 0 })
    }

    pub fn value(&self) -> f64 {
        self.plan.value
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn fingerprint(cost: &CostMatrix, mu1: &Distribution, mu2: &Distribution) -> u64 {
    let mut h = DefaultHasher::new();
    cost.len().hash(&mut h);
    for i in 0..cost.len() {
        for j in 0..cost.len() {
            cost.get(i, j).to_bits().hash(&mut h);
        }
    }
    for w in mu1.weights().iter().chain(mu2.weights()) {
        w.to_bits().hash(&mut h);
    }
    h.finish()
}

fn check_inputs(cost: &CostMatrix, mu1: &Distribution, mu2: &Distribution) -> Result<()> {
    if cost.is_empty() {
        return Err(Error::Size("empty cost matrix".into()));
    }
    mu1.check_len(cost.len())?;
    mu2.check_len(cost.len())
}

/// Solves primal and dual together.
pub fn solve(cost: &CostMatrix, mu1: &Distribution, mu2: &Distribution) -> Result<SolveResult> {
    check_inputs(cost, mu1, mu2)?;
    let n = cost.len();
    let src = mu1.support();
    let dst = mu2.support();
    let problem = TransportProblem {
        supply: src.iter().map(|&i| mu1.weight(i)).collect(),
        demand: dst.iter().map(|&j| mu2.weight(j)).collect(),
        cost: src.iter().flat_map(|&i| dst.iter().map(move |&j| cost.get(i, j))).collect(),
    };
    let sol = network_simplex(&problem);

    let mut pi = vec![0.0; n * n];
    let mut value = 0.0;
    for (a, &i) in src.iter().enumerate() {
        for (b, &j) in dst.iter().enumerate() {
            let f = sol.flow[a * dst.len() + b];
            if f > 0.0 {
                pi[i * n + j] = f;
                value += f * cost.get(i, j);
            }
        }
    }
    let print = fingerprint(cost, mu1, mu2);
    let plan = TransportPlan { n, pi, value, fingerprint: print };

    let (f, g, anchor) = extend_potentials(cost, &src, &dst, &sol.u, &sol.v);
    let dual_value = dot(&f, mu1.weights()) - dot(&g, mu2.weights());
    let potential = DualPotential { f, g, value: dual_value, anchor, fingerprint: print };
    let gap = plan.value - potential.value;
    Ok(SolveResult { plan, potential, gap, pivots: sol.pivots })
}

/// Extends support potentials to the full space and fixes the gauge.
fn extend_potentials(
    cost: &CostMatrix,
    src: &[usize],
    dst: &[usize],
    u: &[f64],
    v: &[f64],
) -> (Vec<f64>, Vec<f64>, usize) {
    let n = cost.len();
    // smallest f reaching every target: f(x) = min_j g_j + c(x, j)
    let lower = |x: usize| dst.iter().zip(v).map(|(&j, gj)| gj + cost.get(x, j)).fold(f64::INFINITY, f64::min);
    let anchor = src[0].min(dst[0]);
    if cost.is_metric() {
        let mut h: Vec<f64> = (0..n).map(lower).collect();
        let shift = h[anchor];
        h.iter_mut().for_each(|x| *x -= shift);
        return (h.clone(), h, anchor);
    }
    let mut f: Vec<f64> = (0..n).map(lower).collect();
    for (&i, ui) in src.iter().zip(u) {
        f[i] = *ui;
    }
    let mut g: Vec<f64> =
        (0..n).map(|y| (0..n).map(|x| f[x] - cost.get(x, y)).fold(f64::NEG_INFINITY, f64::max)).collect();
    for (&j, vj) in dst.iter().zip(v) {
        g[j] = *vj;
    }
    let shift = f[anchor];
    f.iter_mut().for_each(|x| *x -= shift);
    g.iter_mut().for_each(|x| *x -= shift);
    (f, g, anchor)
}

/// Minimal transport cost and an optimal plan.
pub fn solve_primal(cost: &CostMatrix, mu1: &Distribution, mu2: &Distribution) -> Result<TransportPlan> {
    Ok(solve(cost, mu1, mu2)?.plan)
}

/// Optimal dual potential.
pub fn solve_dual(cost: &CostMatrix, mu1: &Distribution, mu2: &Distribution) -> Result<DualPotential> {
    Ok(solve(cost, mu1, mu2)?.potential)
}

/// Transport under a cost that may be positive on the diagonal.
///
/// The machinery is the same as [`solve`]; on the diagonal the dual
/// constraint reads `f[i] - g[i] <= cost[i][i]`. For identical point masses
/// the only coupling is the diagonal one, so the value is `cost[x][x]` rather
/// than zero.
pub fn solve_jump(cost: &CostMatrix, mu1: &Distribution, mu2: &Distribution) -> Result<SolveResult> {
    solve(cost, mu1, mu2)
}

/// `plan.value - potential.value`, checked against `SOLVER_TOL * max(1, value)`.
pub fn duality_gap(r: &SolveResult) -> Result<f64> {
    if r.plan.fingerprint != r.potential.fingerprint {
        return Err(Error::Pairing);
    }
    let gap = r.plan.value - r.potential.value;
    let tol = SOLVER_TOL * r.plan.value.abs().max(1.0);
    if gap.abs() > tol {
        return Err(Error::Gap { gap, tol });
    }
    Ok(gap)
}

/// Exact optimum by enumerating the vertices of the transport polytope.
pub fn oracle_enumerate(cost: &CostMatrix, mu1: &Distribution, mu2: &Distribution) -> Result<f64> {
    check_inputs(cost, mu1, mu2)?;
    let src = mu1.support();
    let dst = mu2.support();
    check_oracle_size(src.len(), dst.len())?;
    let supply: Vec<f64> = src.iter().map(|&i| mu1.weight(i)).collect();
    let demand: Vec<f64> = dst.iter().map(|&j| mu2.weight(j)).collect();
    let c: Vec<f64> = src.iter().flat_map(|&i| dst.iter().map(move |&j| cost.get(i, j))).collect();
    Ok(oracle::enumerate_min(&supply, &demand, &c))
}

fn check_oracle_size(a: usize, b: usize) -> Result<()> {
    let got = a.max(b);
    if got > ORACLE_SUPPORT_LIMIT {
        return Err(Error::SupportTooLarge { got, limit: ORACLE_SUPPORT_LIMIT });
    }
    Ok(())
}

/// A transport instance converted exactly to rationals.
///
/// Costs and weights are the exact binary values of their `f64` inputs;
/// weights are rescaled by their exact total so both sides carry mass one.
#[derive(Debug, Clone)]
pub struct ExactInstance {
    n: usize,
    cost: Vec<BigRational>,
    mu1: Vec<BigRational>,
    mu2: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub primal: BigRational,
    pub dual: BigRational,
    /// Nonzero plan entries `(i, j, mass)`.
    pub plan: Vec<(usize, usize, BigRational)>,
}

impl ExactInstance {
    pub fn new(cost: &CostMatrix, mu1: &Distribution, mu2: &Distribution) -> Result<Self> {
        check_inputs(cost, mu1, mu2)?;
        let limit = mu1.support().len().max(mu2.support().len());
        if limit > EXACT_SUPPORT_LIMIT {
            return Err(Error::SupportTooLarge { got: limit, limit: EXACT_SUPPORT_LIMIT });
        }
        let n = cost.len();
        let exact = |x: f64| BigRational::from_float(x).expect("validated inputs are finite");
        let cost = (0..n * n).map(|k| exact(cost.get(k / n, k % n))).collect();
        let normalize = |d: &Distribution| {
            let w: Vec<BigRational> = d.weights().iter().map(|x| exact(*x)).collect();
            let total: BigRational = w.iter().sum();
            w.into_iter().map(|x| x / &total).collect::<Vec<_>>()
        };
        Ok(ExactInstance { n, cost, mu1: normalize(mu1), mu2: normalize(mu2) })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn cost(&self, i: usize, j: usize) -> &BigRational {
        &self.cost[i * self.n + j]
    }

    pub fn cost_row(&self, i: usize) -> &[BigRational] {
        &self.cost[i * self.n..(i + 1) * self.n]
    }

    pub fn mu1(&self) -> &[BigRational] {
        &self.mu1
    }

    pub fn mu2(&self) -> &[BigRational] {
        &self.mu2
    }

    fn supports(&self) -> (Vec<usize>, Vec<usize>) {
        let s = |w: &[BigRational]| (0..self.n).filter(|&i| !w[i].is_zero()).collect::<Vec<_>>();
        (s(&self.mu1), s(&self.mu2))
    }

    fn problem(&self) -> (Vec<usize>, Vec<usize>, TransportProblem<BigRational>) {
        let (src, dst) = self.supports();
        let problem = TransportProblem {
            supply: src.iter().map(|&i| self.mu1[i].clone()).collect(),
            demand: dst.iter().map(|&j| self.mu2[j].clone()).collect(),
            cost: src.iter().flat_map(|&i| dst.iter().map(move |&j| self.cost(i, j).clone())).collect(),
        };
        (src, dst, problem)
    }

    /// Network simplex in exact arithmetic.
    pub fn solve(&self) -> ExactSolution {
        let (src, dst, p) = self.problem();
        let sol = network_simplex(&p);
        let mut primal = BigRational::zero();
        let mut plan = Vec::new();
        for (a, &i) in src.iter().enumerate() {
            for (b, &j) in dst.iter().enumerate() {
                let f = &sol.flow[a * dst.len() + b];
                if !f.is_zero() {
                    primal += f * self.cost(i, j);
                    plan.push((i, j, f.clone()));
                }
            }
        }
        let dual = sol.u.iter().zip(&p.supply).map(|(u, a)| u * a).sum::<BigRational>()
            - sol.v.iter().zip(&p.demand).map(|(v, b)| v * b).sum::<BigRational>();
        ExactSolution { primal, dual, plan }
    }

    /// Vertex enumeration in exact arithmetic.
    pub fn oracle(&self) -> Result<BigRational> {
        let (src, dst, p) = self.problem();
        check_oracle_size(src.len(), dst.len())?;
        Ok(oracle::enumerate_min(&p.supply, &p.demand, &p.cost))
    }
}
