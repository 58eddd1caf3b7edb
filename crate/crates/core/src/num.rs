//! Scalar abstraction: the configuration-space math is generic over the
//! floating-point type, with `f64` as the working precision everywhere else.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Floating-point scalar for configuration-space arithmetic: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub fn cast<F: Scalar>(v: f64) -> F {
    F::from(v).expect("constant must be representable in the scalar type")
}

/// Tolerance that keeps its nominal `f64` value but stays usable in `f32`,
/// where the nominal value may sit below machine epsilon.
#[inline]
pub fn adaptive_tol<F: Scalar>(nominal: f64) -> F {
    let t: F = cast(nominal);
    let floor = F::epsilon() * cast(128.0);
    if t < floor {
        floor
    } else {
        t
    }
}
