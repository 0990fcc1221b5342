//! OFDM framing: subcarrier layout, IFFT, cyclic prefix, pilot tone.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::scalar::Real;
use crate::sigcore::{fft, ifft};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OfdmParams {
    pub n_fft: usize,
    pub data_subcarriers: usize,
    /// Empty subcarriers straddling DC (`−g/2 .. g/2 − 1`).
    pub dc_guard: usize,
    pub cp_fraction: f64,
    pub pilot_tone: bool,
    /// Pilot power relative to the total data power (linear).
    pub pilot_rel_power: f64,
    /// Fixed prefix length overriding `cp_fraction` when set.
    pub cp_samples: Option<usize>,
}

impl Default for OfdmParams {
    fn default() -> Self {
        Self {
            n_fft: 256,
            data_subcarriers: 250,
            dc_guard: 4,
            cp_fraction: 0.05,
            pilot_tone: true,
            pilot_rel_power: 0.02,
            cp_samples: None,
        }
    }
}

/// Resolved subcarrier map.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmLayout {
    pub n_fft: usize,
    pub cp: usize,
    /// FFT bin indices of the data subcarriers, innermost first.
    pub data_bins: Vec<usize>,
    pub pilot_bin: Option<usize>,
}

impl OfdmLayout {
    pub fn frame_len(&self) -> usize {
        self.n_fft + self.cp
    }
}

fn signed_bin(k: usize, n: usize) -> i64 {
    if k < n.div_ceil(2) {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

impl OfdmParams {
    pub fn cp_len(&self) -> usize {
        self.cp_samples
            .unwrap_or_else(|| (self.cp_fraction * self.n_fft as f64 - 1e-9).ceil().max(0.0) as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_fft < 8 || !self.n_fft.is_power_of_two() {
            return param(format!("n_fft must be a power of two >= 8, got {}", self.n_fft));
        }
        if !(0.0..0.5).contains(&self.cp_fraction) {
            return param(format!("cp_fraction {} outside [0, 0.5)", self.cp_fraction));
        }
        if self.cp_len() >= self.n_fft {
            return param("cyclic prefix longer than the FFT");
        }
        if self.data_subcarriers == 0 {
            return param("no data subcarriers");
        }
        if !(self.pilot_rel_power >= 0.0) {
            return param("pilot power must be non-negative");
        }
        // Nyquist bin is never used; it splits on resampling.
        let pilots = self.pilot_tone as usize;
        if self.data_subcarriers + self.dc_guard + pilots + 1 > self.n_fft {
            return param(format!(
                "{} data + {} guard + {pilots} pilot subcarriers exceed n_fft {} less the Nyquist bin",
                self.data_subcarriers, self.dc_guard, self.n_fft
            ));
        }
        Ok(())
    }

    pub fn layout(&self) -> Result<OfdmLayout> {
        self.validate()?;
        let n = self.n_fft;
        let g = self.dc_guard as i64;
        let guard = |s: i64| s >= -(g / 2) && s < g - g / 2;
        let nyq = n / 2;
        let pilot_bin = self.pilot_tone.then_some(nyq - 1);
        let mut free: Vec<usize> = (0..n)
            .filter(|&k| k != nyq && Some(k) != pilot_bin && !guard(signed_bin(k, n)))
            .collect();
        free.sort_by_key(|&k| (signed_bin(k, n).abs(), signed_bin(k, n)));
        free.truncate(self.data_subcarriers);
        Ok(OfdmLayout {
            n_fft: n,
            cp: self.cp_len(),
            data_bins: free,
            pilot_bin,
        })
    }
}

/// Modulates `symbols` (a multiple of the data-subcarrier count) into
/// consecutive cyclic-prefixed frames. Each data subcarrier carries its
/// symbol at unit time-domain weight, so the mean frame power is
/// `active / n_fft` for unit-power symbols; the pilot adds
/// `pilot_rel_power` times the data power as a constant tone.
pub fn ofdm_modulate_stream<T: Real>(symbols: &[Complex<T>], p: &OfdmParams) -> Result<Vec<Complex<T>>> {
    let lay = p.layout()?;
    let d = lay.data_bins.len();
    if symbols.len() % d != 0 {
        return param(format!("{} symbols do not fill {d}-subcarrier frames", symbols.len()));
    }
    let n = lay.n_fft;
    let zero = Complex::new(T::zero(), T::zero());
    let scale = T::lit((n as f64).sqrt());
    let pilot_amp = T::lit((p.pilot_rel_power * d as f64 * n as f64).sqrt());
    let mut out = Vec::with_capacity(symbols.len() / d * lay.frame_len());
    let mut spec = vec![zero; n];
    for frame in symbols.chunks_exact(d) {
        spec.iter_mut().for_each(|v| *v = zero);
        for (&k, &s) in lay.data_bins.iter().zip(frame) {
            spec[k] = s * scale;
        }
        if let Some(k) = lay.pilot_bin {
            spec[k] = Complex::new(pilot_amp, T::zero());
        }
        let t = ifft(&spec);
        out.extend_from_slice(&t[n - lay.cp..]);
        out.extend_from_slice(&t);
    }
    Ok(out)
}

/// Per-frame subcarrier values after CP removal and FFT, undoing the
/// modulator's scaling: returns `(data, pilot)` per frame.
pub fn ofdm_frames<T: Real>(
    stream: &[Complex<T>],
    p: &OfdmParams,
) -> Result<Vec<(Vec<Complex<T>>, Option<Complex<T>>)>> {
    let lay = p.layout()?;
    let fl = lay.frame_len();
    if stream.len() % fl != 0 {
        return param(format!("{} samples are not a whole number of {fl}-sample frames", stream.len()));
    }
    let inv = T::one() / T::lit((lay.n_fft as f64).sqrt());
    Ok(stream
        .chunks_exact(fl)
        .map(|f| {
            let spec = fft(&f[lay.cp..]);
            let data = lay.data_bins.iter().map(|&k| spec[k] * inv).collect();
            (data, lay.pilot_bin.map(|k| spec[k] * inv))
        })
        .collect())
}
