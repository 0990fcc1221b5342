use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::consts::dbm_to_watts;
use crate::error::{param, Result};
use crate::scalar::Real;
use crate::sigcore::{stream_rng, DualPolWaveform};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaserParams {
    pub power_dbm: f64,
    pub linewidth_hz: f64,
    /// Relative intensity noise; `None` disables it.
    pub rin_db_hz: Option<f64>,
    pub wavelength_nm: f64,
    /// Launch polarisation angle from the x axis.
    pub pol_angle_rad: f64,
}

impl Default for LaserParams {
    fn default() -> Self {
        Self {
            power_dbm: 20.0,
            linewidth_hz: 0.0,
            rin_db_hz: None,
            wavelength_nm: 1550.0,
            pol_angle_rad: 0.0,
        }
    }
}

impl LaserParams {
    pub fn validate(&self) -> Result<()> {
        if !self.power_dbm.is_finite() {
            return param(format!("laser power must be finite, got {}", self.power_dbm));
        }
        if !(self.linewidth_hz >= 0.0) {
            return param(format!("linewidth must be >= 0, got {}", self.linewidth_hz));
        }
        if !(1000.0..2000.0).contains(&self.wavelength_nm) {
            return param(format!("wavelength {} nm outside 1000..2000 nm", self.wavelength_nm));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength_nm * 1e-9
    }
}

/// CW laser field of mean power `P` tuned `offset_hz` from the simulation
/// centre, with Wiener phase noise (increment variance `2π·Δν/fs`) and
/// white intensity noise `P(1 + δ)`, `δ ~ N(0, 10^(RIN/10)·fs/2)`.
pub fn laser_field<T: Real>(
    p: &LaserParams,
    n_samples: usize,
    sample_rate: f64,
    offset_hz: f64,
    seed: u64,
) -> Result<DualPolWaveform<T>> {
    p.validate()?;
    if n_samples == 0 {
        return param("laser field needs at least one sample");
    }
    let power = dbm_to_watts(p.power_dbm);
    let phase_sd = (2.0 * std::f64::consts::PI * p.linewidth_hz / sample_rate).sqrt();
    let rin_sd = p.rin_db_hz.map_or(0.0, |r| (10f64.powf(r / 10.0) * sample_rate / 2.0).sqrt());
    let mut phase_rng = stream_rng(seed, "laser/phase");
    let mut rin_rng = stream_rng(seed, "laser/rin");
    let (c, s) = (p.pol_angle_rad.cos(), p.pol_angle_rad.sin());
    let step = 2.0 * std::f64::consts::PI * offset_hz / sample_rate;
    let mut x = Vec::with_capacity(n_samples);
    let mut y = Vec::with_capacity(n_samples);
    let mut walk = 0.0f64;
    for k in 0..n_samples {
        if k > 0 && phase_sd > 0.0 {
            walk += phase_sd * f64::standard_normal(&mut phase_rng);
        }
        let inst = if rin_sd > 0.0 {
            (power * (1.0 + rin_sd * f64::standard_normal(&mut rin_rng))).max(0.0)
        } else {
            power
        };
        // Keep the carrier phase argument bounded for long records.
        let theta = (step * k as f64).rem_euclid(2.0 * std::f64::consts::PI) + walk;
        let e = Complex::from_polar(inst.sqrt(), theta);
        x.push(Complex::new(T::lit(e.re * c), T::lit(e.im * c)));
        y.push(Complex::new(T::lit(e.re * s), T::lit(e.im * s)));
    }
    DualPolWaveform::new(x, y, sample_rate, offset_hz)
}
