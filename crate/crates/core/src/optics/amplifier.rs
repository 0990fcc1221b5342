use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::consts::photon_energy;
use crate::error::{param, Result};
use crate::scalar::Real;
use crate::sigcore::{stream_rng, DualPolWaveform};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AmplifierParams {
    pub gain_db: f64,
    pub nf_db: f64,
}

impl Default for AmplifierParams {
    fn default() -> Self {
        Self { gain_db: 20.0, nf_db: 3.0 }
    }
}

impl AmplifierParams {
    /// Spontaneous-emission factor `n_sp = 10^(NF/10) / 2`; 3 dB gives 1.
    pub fn n_sp(&self) -> f64 {
        10f64.powf(self.nf_db / 10.0) / 2.0
    }

    /// ASE power spectral density per polarisation, W/Hz.
    pub fn ase_psd(&self, wavelength: f64) -> f64 {
        let g = 10f64.powf(self.gain_db / 10.0);
        (g - 1.0) * self.n_sp() * photon_energy(wavelength)
    }
}

/// Amplifies the field by `√G` and adds circular Gaussian ASE on each
/// polarisation over the full simulated bandwidth.
pub fn edfa<T: Real>(
    w: &DualPolWaveform<T>,
    a: &AmplifierParams,
    wavelength: f64,
    seed: u64,
) -> Result<DualPolWaveform<T>> {
    if !(a.gain_db >= 0.0) {
        return param(format!("amplifier gain must be >= 0 dB, got {}", a.gain_db));
    }
    let gain = T::lit(10f64.powf(a.gain_db / 20.0));
    let sd = T::lit((a.ase_psd(wavelength) * w.sample_rate / 2.0).sqrt());
    let mut out = w.clone();
    for (pol, stream) in [("x", &mut out.x), ("y", &mut out.y)] {
        let mut rng = stream_rng(seed, &format!("edfa/{pol}"));
        for v in stream.iter_mut() {
            *v = *v * gain;
            if sd > T::zero() {
                *v = *v + Complex::new(T::standard_normal(&mut rng), T::standard_normal(&mut rng)) * sd;
            }
        }
    }
    Ok(out)
}
