//! Floating-point abstraction: every continuous computation in this crate is
//! generic over [`Scalar`], instantiated as `f32` or `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;

/// Floating-point scalar the engine computes in.
///
/// The two sampling methods exist so generic code can draw random values
/// without threading `rand` trait bounds through every signature.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Uniform draw from `[lo, hi)`. A degenerate interval returns `lo`.
    fn uniform<G: Rng + ?Sized>(rng: &mut G, lo: Self, hi: Self) -> Self;

    /// Standard normal draw.
    fn std_normal<G: Rng + ?Sized>(rng: &mut G) -> Self;

    /// Conversion from a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as scalar")
    }
}

impl Scalar for f64 {
    fn uniform<G: Rng + ?Sized>(rng: &mut G, lo: Self, hi: Self) -> Self {
        if lo < hi {
            rng.random_range(lo..hi)
        } else {
            lo
        }
    }

    fn std_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for f32 {
    fn uniform<G: Rng + ?Sized>(rng: &mut G, lo: Self, hi: Self) -> Self {
        if lo < hi {
            rng.random_range(lo..hi)
        } else {
            lo
        }
    }

    fn std_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        rng.sample(StandardNormal)
    }
}

/// Sort a slice of finite scalars ascending.
pub(crate) fn sort_scalars<R: Scalar>(values: &mut [R]) {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite scalar"));
}

/// Median of an already sorted nonempty slice (mean of the middle pair for
/// even lengths).
pub(crate) fn median_sorted<R: Scalar>(sorted: &[R]) -> R {
    let k = sorted.len();
    debug_assert!(k > 0);
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        let two = R::one() + R::one();
        (sorted[k / 2 - 1] + sorted[k / 2]) / two
    }
}
