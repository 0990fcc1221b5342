use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::consts::LIGHT_SPEED;
use crate::error::Result;
use crate::scalar::Real;
use crate::sigcore::{apply_jones, fft, frequency_of_bin, ifft, jones_rotation, DualPolWaveform, JonesMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkParams {
    pub length_km: f64,
    pub atten_db_km: f64,
    pub dispersion_ps_nm_km: f64,
    /// Polarisation rotation `(α, δ)` of the static Jones matrix.
    pub rotation_alpha_rad: f64,
    pub rotation_delta_rad: f64,
}

impl Default for LinkParams {
    fn default() -> Self {
        Self {
            length_km: 0.0,
            atten_db_km: 0.25,
            dispersion_ps_nm_km: 16.0,
            rotation_alpha_rad: 0.0,
            rotation_delta_rad: 0.0,
        }
    }
}

impl LinkParams {
    pub fn rotation<T: Real>(&self) -> JonesMatrix<T> {
        jones_rotation(self.rotation_alpha_rad, self.rotation_delta_rad)
    }

    pub fn loss_db(&self) -> f64 {
        self.length_km * self.atten_db_km
    }
}

/// Fibre attenuation, chromatic dispersion `H(f) = exp(−iπλ²DLf²/c)` and
/// the static polarisation rotation.
pub fn propagate<T: Real>(w: &DualPolWaveform<T>, l: &LinkParams, wavelength: f64) -> Result<DualPolWaveform<T>> {
    let mut out = w.clone();
    out.attenuate_db(l.loss_db());
    // ps/(nm·km) → s/m²
    let dl = l.dispersion_ps_nm_km * 1e-6 * l.length_km * 1e3;
    if dl != 0.0 && !w.is_empty() {
        let k = std::f64::consts::PI * wavelength * wavelength * dl / LIGHT_SPEED;
        let n = w.len();
        let h: Vec<Complex<T>> = (0..n)
            .map(|i| {
                let f = frequency_of_bin(i, n, w.sample_rate) + w.center_offset;
                let c = Complex::from_polar(1.0, -k * f * f);
                Complex::new(T::lit(c.re), T::lit(c.im))
            })
            .collect();
        for s in [&mut out.x, &mut out.y] {
            let spec: Vec<Complex<T>> = fft(s).into_iter().zip(&h).map(|(a, b)| a * b).collect();
            *s = ifft(&spec);
        }
    }
    Ok(apply_jones(&out, &l.rotation()))
}
