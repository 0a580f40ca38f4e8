use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};

/// Ordered field the transport solvers run over: `f64` or exact rationals.
pub trait Scalar:
    Clone + Debug + PartialOrd + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// Exact conversion for rationals; `None` for non-finite input.
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn from_usize(n: usize) -> Self;
    /// Reduced costs above `-tolerance` count as nonnegative.
    fn pricing_tolerance(scale: &Self) -> Self;
    /// Flows below `-tolerance` make an enumerated basis infeasible.
    fn feasibility_tolerance() -> Self;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_usize(n: usize) -> Self {
        n as f64
    }

    fn pricing_tolerance(scale: &Self) -> Self {
        1e-12 * (1.0 + scale.abs())
    }

    fn feasibility_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for BigRational {
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_usize(n: usize) -> Self {
        <BigRational as FromPrimitive>::from_usize(n).expect("usize fits a rational")
    }

    fn pricing_tolerance(_scale: &Self) -> Self {
        BigRational::zero()
    }

    fn feasibility_tolerance() -> Self {
        BigRational::zero()
    }
}
