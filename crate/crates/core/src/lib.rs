//! Physical-layer simulator for low-complexity, polarisation-independent
//! coherent receivers in WDM passive optical networks.
//!
//! The sample-level modules ([`sigcore`], [`txchain`], [`optics`],
//! [`frontends`], [`rxdsp`]) are generic over the sample scalar (see
//! [`Real`]); [`theory`] and [`harness`] work in `f64`. The aliases below fix
//! the scalar to `f64`, which is what the sweep engine uses.

pub mod consts;
pub mod error;
pub mod scalar;
pub mod sigcore;
pub mod theory;
pub mod txchain;
pub mod optics;
pub mod frontends;
pub mod rxdsp;
pub mod harness;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Waveform = sigcore::DualPolWaveform<f64>;
pub type Waveform32 = sigcore::DualPolWaveform<f32>;
pub type Jones = sigcore::JonesMatrix<f64>;
pub type Jones32 = sigcore::JonesMatrix<f32>;
