use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by the numeric kernels (distances, percentiles,
/// ROC statistics, correlation, the meta-classifier). Implemented for `f32`
/// and `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to every float type")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("counts are representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("floats convert to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
