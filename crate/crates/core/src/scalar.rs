//! Scalar abstraction for the numerical kernels.

use nalgebra as na;
use num_traits as nt;

/// Floating-point scalar the solvers are generic over.
///
/// `f32` works for quick studies; the command-line tools and the
/// acceptance tolerances assume `f64`.
pub trait Scalar:
    Copy
    + Default
    + nt::FromPrimitive
    + nt::ToPrimitive
    + nt::FloatConst
    + na::RealField
    + std::fmt::LowerExp
{
    /// Lossy conversion of an `f64` constant.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    /// Conversion of a grid size or index.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("index not representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }

    /// Machine epsilon of the concrete type.
    fn machine_epsilon() -> Self;
}

impl Scalar for f32 {
    fn machine_epsilon() -> Self {
        f32::EPSILON
    }
}

impl Scalar for f64 {
    fn machine_epsilon() -> Self {
        f64::EPSILON
    }
}

/// Maximum of a non-empty slice.
pub fn slice_max<T: Scalar>(xs: &[T]) -> T {
    xs.iter().copied().fold(xs[0], T::max)
}

/// Minimum of a non-empty slice.
pub fn slice_min<T: Scalar>(xs: &[T]) -> T {
    xs.iter().copied().fold(xs[0], T::min)
}

/// Sup norm of a slice (0 for empty input).
pub fn sup_norm<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

/// Sup norm of the difference of two equally long slices.
pub fn sup_norm_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}
