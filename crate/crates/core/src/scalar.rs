//! Floating point abstraction shared by the dense oracle, the layout geometry
//! and the statistics helpers.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used by every floating point routine in the crate.
///
/// Implemented for `f32` and `f64`. The bit-level stabilizer machinery does not
/// depend on it.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance used for geometric predicates (collinearity, touching).
    const GEOM_EPS: Self;

    /// Lossy conversion from `f64`; literals in generic code go through this.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite value")
    }
}

impl Real for f32 {
    const GEOM_EPS: Self = 1e-4;
}

impl Real for f64 {
    const GEOM_EPS: Self = 1e-9;
}
