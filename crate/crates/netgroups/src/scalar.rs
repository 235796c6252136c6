//! Scalar abstraction for criterion and statistics arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the group criterion and all derived statistics are
/// computed in. Implemented by `f32` and `f64`; the crate-level
/// [`Score`](crate::Score) alias pins the pipeline to `f64`.
pub trait Real: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {
    /// Exact conversion of a count. Panics if the count is not representable,
    /// which cannot happen for graph-sized counts in `f32`/`f64`.
    fn from_count(c: usize) -> Self {
        Self::from_usize(c).expect("count representable in scalar type")
    }

    /// `num / den` as a scalar ratio of two counts.
    fn ratio(num: usize, den: usize) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {}
