//! Sources, amplifier, fibre link and passive components.

mod amplifier;
mod fiber;
mod passive;
mod source;

pub use amplifier::{edfa, AmplifierParams};
pub use fiber::{propagate, LinkParams};
pub use passive::{coupler_2x2, coupler_3x3, hybrid_90, pbs};
pub use source::{laser_field, LaserParams};
