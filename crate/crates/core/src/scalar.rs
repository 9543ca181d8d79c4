use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the operators are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the type cannot represent finite `f64` values.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 literal")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize fits in scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Working tolerance for rank and pivot decisions.
    #[inline]
    fn tol() -> Self {
        Self::epsilon().sqrt() * Self::lit(1e-2)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for j in 0..k {
        acc = acc * T::from_usize_lossy(n - j) / T::from_usize_lossy(j + 1);
    }
    acc
}

pub(crate) fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, j| acc * T::from_usize_lossy(j))
}
