//! Wasserstein-1 distances on finite metric spaces.
//!
//! The distance between two distributions is computed both as a minimal
//! transport cost and as a supremum over 1-Lipschitz potentials, and checked
//! against closed forms: distances to point masses, one-dimensional
//! cumulative formulas, barycenter and product bounds, wave packets on the
//! line, and the two-sheet and Bloch-ball examples.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod closedform;
pub mod error;
pub mod io;
pub mod ncgeom;
pub mod shape;
pub mod solver;
pub mod space;
pub mod twosheet;

pub use error::{Error, Result};
pub use solver::{
    duality_gap, oracle_enumerate, solve, solve_dual, solve_jump, solve_primal, DualPotential, ExactInstance,
    SolveResult, TransportPlan,
};
pub use space::{
    barycenter, build_grid_circle, build_grid_line, discretize_density, first_moment, validate_metric, CostMatrix,
    Distribution, FiniteMetricSpace, MetricReport, Point,
};
pub use twosheet::{build_two_sheet, TwoSheetSpace, TwoSheetState};
