//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the analyses are generic over.
///
/// Besides the usual arithmetic this fixes the tolerances used by the
/// decision procedures, so that an `f32` instantiation does not inherit
/// thresholds that only make sense in double precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for feasibility and sign decisions.
    const DECISION_TOL: f64;
    /// Maximum asymmetry accepted (and then averaged away) when building even kernels.
    const SYMMETRY_TOL: f64;
    /// Smallest pivot magnitude the dense solvers accept.
    const PIVOT_TOL: f64;

    /// Converts an `f64` literal. Panics only if the target cannot represent finite values.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn decision_tol() -> Self {
        Self::lit(Self::DECISION_TOL)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::lit(n as f64)
    }

    #[inline]
    fn of_i64(n: i64) -> Self {
        Self::lit(n as f64)
    }
}

impl Real for f64 {
    const DECISION_TOL: f64 = 1e-9;
    const SYMMETRY_TOL: f64 = 1e-12;
    const PIVOT_TOL: f64 = 1e-11;
}

impl Real for f32 {
    const DECISION_TOL: f64 = 1e-4;
    const SYMMETRY_TOL: f64 = 1e-5;
    const PIVOT_TOL: f64 = 1e-5;
}

/// Golden-ratio conjugate `(sqrt(5) - 1) / 2`.
#[inline]
pub fn golden_conjugate<T: Real>() -> T {
    (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0)
}

/// `cos(2 pi k m / n)` evaluated with the index reduced modulo `n` first.
#[inline]
pub(crate) fn cos_turn<T: Real>(k: usize, m: usize, n: usize) -> T {
    let r = (k * m) % n;
    (T::TAU() * T::of_usize(r) / T::of_usize(n)).cos()
}

/// `sin(2 pi k m / n)`, index reduced modulo `n`.
#[inline]
pub(crate) fn sin_turn<T: Real>(k: usize, m: usize, n: usize) -> T {
    let r = (k * m) % n;
    (T::TAU() * T::of_usize(r) / T::of_usize(n)).sin()
}
