//! Scalar abstraction shared by the sample-level modules.
//!
//! Waveforms, Jones matrices and detector streams are generic over [`Real`]
//! so the same chain can be run in `f64` (the default, used by every
//! acceptance check) or `f32` when memory matters more than the last few
//! digits. Physical parameters (powers, rates, temperatures) stay `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftNum;

pub trait Real:
    Float + FloatConst + FromPrimitive + FftNum + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant. Panics only if the value is not
    /// representable, which never happens for the finite constants used here.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 literal")
    }

    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// One draw from N(0, 1).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}
