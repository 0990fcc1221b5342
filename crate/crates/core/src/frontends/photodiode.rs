use serde::{Deserialize, Serialize};

use crate::consts::{BOLTZMANN, ELECTRON_CHARGE, LIGHT_SPEED, PLANCK};
use crate::error::{param, Result};
use crate::scalar::Real;
use crate::sigcore::{lowpass_real, stream_rng, DualPolWaveform};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PdParams {
    pub quantum_efficiency: f64,
    pub temperature_k: f64,
    pub load_ohm: f64,
    /// Electrical bandwidth; `None` keeps the whole simulated band.
    pub bandwidth_hz: Option<f64>,
    pub dark_current_a: f64,
    /// Balanced pairs only; `None` is infinite rejection.
    pub cmrr_db: Option<f64>,
    pub wavelength_nm: f64,
    pub shot_noise: bool,
    pub thermal_noise: bool,
}

impl Default for PdParams {
    fn default() -> Self {
        Self {
            quantum_efficiency: 1.0,
            temperature_k: 300.0,
            load_ohm: 50.0,
            bandwidth_hz: None,
            dark_current_a: 0.0,
            cmrr_db: None,
            wavelength_nm: 1550.0,
            shot_noise: true,
            thermal_noise: true,
        }
    }
}

impl PdParams {
    /// Noise-free detector with otherwise default parameters.
    pub fn noiseless() -> Self {
        Self { shot_noise: false, thermal_noise: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.quantum_efficiency > 0.0 && self.quantum_efficiency <= 1.0) {
            return param(format!("quantum efficiency {} outside (0, 1]", self.quantum_efficiency));
        }
        if !(self.temperature_k >= 0.0 && self.load_ohm > 0.0 && self.dark_current_a >= 0.0) {
            return param("temperature, load and dark current must be physical");
        }
        Ok(())
    }

    /// `R = η·q·λ/(h·c)` in A/W.
    pub fn responsivity(&self) -> f64 {
        self.quantum_efficiency * ELECTRON_CHARGE * self.wavelength_nm * 1e-9 / (PLANCK * LIGHT_SPEED)
    }

    /// Thermal current noise density `4kT/R_L`, A²/Hz.
    pub fn thermal_density(&self) -> f64 {
        4.0 * BOLTZMANN * self.temperature_k / self.load_ohm
    }

    /// Residual common-mode fraction `10^(−CMRR/20)`.
    pub fn common_mode_leak(&self) -> f64 {
        self.cmrr_db.map_or(0.0, |c| 10f64.powf(-c / 20.0))
    }

    fn noise_bandwidth(&self, sample_rate: f64) -> Result<f64> {
        match self.bandwidth_hz {
            Some(b) if b > sample_rate / 2.0 * (1.0 + 1e-12) => {
                param(format!("bandwidth {b} Hz exceeds Nyquist {} Hz", sample_rate / 2.0))
            }
            Some(b) if !(b > 0.0) => param(format!("bandwidth must be positive, got {b}")),
            Some(b) => Ok(b.min(sample_rate / 2.0)),
            None => Ok(sample_rate / 2.0),
        }
    }
}

fn intensity<T: Real>(w: &DualPolWaveform<T>, r: f64) -> Vec<f64> {
    w.x.iter().zip(&w.y).map(|(a, b)| r * (a.norm_sqr() + b.norm_sqr()).as_f64()).collect()
}

/// Adds white Gaussian noise whose per-sample variance is
/// `2q(ī_k + i_d)·(fs/2)` for each diode current `ī_k` (weighted by the
/// diode's gain in the output) plus one thermal term, then applies the
/// detector's electrical low-pass. Over the retained band the variance is
/// `2q(ī + i_d)Δf + 4kTΔf/R_L`.
fn finish<T: Real>(
    mut out: Vec<f64>,
    diodes: &[(&[f64], f64)],
    p: &PdParams,
    sample_rate: f64,
    seed: u64,
) -> Result<Vec<T>> {
    let band = p.noise_bandwidth(sample_rate)?;
    let half = sample_rate / 2.0;
    let thermal = if p.thermal_noise { p.thermal_density() * half } else { 0.0 };
    if p.shot_noise || thermal > 0.0 {
        let mut rng = stream_rng(seed, "pd/noise");
        let q2 = 2.0 * ELECTRON_CHARGE * half;
        for (k, v) in out.iter_mut().enumerate() {
            let mut var = thermal;
            if p.shot_noise {
                for (cur, g) in diodes {
                    var += g * g * q2 * (cur[k].max(0.0) + p.dark_current_a);
                }
            }
            *v += var.sqrt() * f64::standard_normal(&mut rng);
        }
    }
    if band < half {
        out = lowpass_real(&out, sample_rate, band);
    }
    Ok(out.into_iter().map(T::lit).collect())
}

/// Single photodiode: `i = R·(|E_x|² + |E_y|²)` plus shot and thermal noise.
pub fn photodiode<T: Real>(field: &DualPolWaveform<T>, p: &PdParams, seed: u64) -> Result<Vec<T>> {
    p.validate()?;
    let i = intensity(field, p.responsivity());
    let out = i.clone();
    finish(out, &[(&i, 1.0)], p, field.sample_rate, seed)
}

/// Balanced pair: `i₊ − (1 − ε)·i₋` with `ε` the common-mode leak. Each
/// diode contributes its own shot noise; the pair shares one load.
pub fn balanced_pd<T: Real>(
    plus: &DualPolWaveform<T>,
    minus: &DualPolWaveform<T>,
    p: &PdParams,
    seed: u64,
) -> Result<Vec<T>> {
    p.validate()?;
    if plus.len() != minus.len() {
        return param("balanced inputs differ in length");
    }
    let r = p.responsivity();
    let g = 1.0 - p.common_mode_leak();
    let ip = intensity(plus, r);
    let im = intensity(minus, r);
    let out = ip.iter().zip(&im).map(|(a, b)| a - g * b).collect();
    finish(out, &[(&ip, 1.0), (&im, g)], p, plus.sample_rate, seed)
}
