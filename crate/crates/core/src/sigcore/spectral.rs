use num_complex::Complex;
use num_rational::Ratio;
use rustfft::FftPlanner;

use super::DualPolWaveform;
use crate::error::{param, Result};
use crate::scalar::Real;

/// Unnormalised forward DFT.
pub fn fft<T: Real>(data: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut buf = data.to_vec();
    if !buf.is_empty() {
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    }
    buf
}

/// Inverse DFT including the `1/N` factor, so `ifft(fft(x)) == x`.
pub fn ifft<T: Real>(data: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut buf = data.to_vec();
    let n = buf.len();
    if n > 0 {
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        let s = T::one() / T::lit(n as f64);
        for v in &mut buf {
            *v = *v * s;
        }
    }
    buf
}

/// Signed frequency of DFT bin `k` for an `n`-point transform at `fs`.
pub fn frequency_of_bin(k: usize, n: usize, fs: f64) -> f64 {
    let k = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
    k * fs / n as f64
}

/// Band-limited resampling of one stream by FFT zero-padding / truncation.
///
/// The output keeps the same absolute frequencies and amplitudes. An even
/// Nyquist bin is split evenly between the two output edges when expanding
/// and re-merged when shrinking, so an up/down round trip is exact.
pub fn resample_stream<T: Real>(data: &[Complex<T>], factor: Ratio<usize>) -> Result<Vec<Complex<T>>> {
    if *factor.numer() == 0 {
        return param("resampling factor must be positive");
    }
    let n = data.len();
    if (n * factor.numer()) % factor.denom() != 0 {
        return param(format!(
            "resampling {n} samples by {factor} gives a non-integral length"
        ));
    }
    let m = n * factor.numer() / factor.denom();
    if m == n {
        return Ok(data.to_vec());
    }
    if m == 0 {
        return param("resampled length would be zero");
    }
    let spec = fft(data);
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; m];
    let half = T::lit(0.5);
    let keep = n.min(m);
    // Positive bins strictly below the shared Nyquist, then negative bins.
    let pos = keep.div_ceil(2);
    let neg = keep / 2;
    for k in 0..pos {
        out[k] = spec[k];
    }
    for k in 1..=neg {
        if keep % 2 == 0 && k == neg {
            break;
        }
        out[m - k] = spec[n - k];
    }
    if keep % 2 == 0 {
        let nyq = keep / 2;
        if m > n {
            // Input Nyquist bin splits across +nyq and -nyq.
            out[nyq] = spec[nyq] * half;
            out[m - nyq] = spec[nyq] * half;
        } else {
            // Output Nyquist collects both input edges.
            out[nyq] = spec[nyq] + spec[n - nyq];
        }
    }
    let gain = T::lit(m as f64 / n as f64);
    for v in &mut out {
        *v = *v * gain;
    }
    Ok(ifft(&out))
}

/// Resamples both polarisations of a waveform.
pub fn resample<T: Real>(w: &DualPolWaveform<T>, factor: Ratio<usize>) -> Result<DualPolWaveform<T>> {
    if *factor.numer() == *factor.denom() {
        return Ok(w.clone());
    }
    let x = resample_stream(&w.x, factor)?;
    let y = resample_stream(&w.y, factor)?;
    let rate = w.sample_rate * *factor.numer() as f64 / *factor.denom() as f64;
    DualPolWaveform::new(x, y, rate, w.center_offset)
}

/// Ideal filter keeping only bins with `lo <= f <= hi`.
pub fn bandpass_complex<T: Real>(data: &[Complex<T>], fs: f64, lo: f64, hi: f64) -> Vec<Complex<T>> {
    let n = data.len();
    let mut spec = fft(data);
    let zero = Complex::new(T::zero(), T::zero());
    for (k, v) in spec.iter_mut().enumerate() {
        let f = frequency_of_bin(k, n, fs);
        if f < lo || f > hi {
            *v = zero;
        }
    }
    ifft(&spec)
}

/// Ideal low-pass keeping `|f| <= cutoff`.
pub fn lowpass_complex<T: Real>(data: &[Complex<T>], fs: f64, cutoff: f64) -> Vec<Complex<T>> {
    bandpass_complex(data, fs, -cutoff, cutoff)
}

/// Super-Gaussian low-pass `exp(−(ln2/2)·(2f/B)^(2·order))`, 3 dB down at
/// `|f| = B/2`.
pub fn gaussian_lowpass_complex<T: Real>(data: &[Complex<T>], fs: f64, bandwidth: f64, order: u32) -> Vec<Complex<T>> {
    let n = data.len();
    let mut spec = fft(data);
    let a = std::f64::consts::LN_2 / 2.0;
    for (k, v) in spec.iter_mut().enumerate() {
        let x = 2.0 * frequency_of_bin(k, n, fs) / bandwidth;
        *v = *v * T::lit((-a * x.powi(2 * order as i32)).exp());
    }
    ifft(&spec)
}

/// Ideal low-pass of a real stream.
pub fn lowpass_real<T: Real>(data: &[T], fs: f64, cutoff: f64) -> Vec<T> {
    if cutoff >= fs / 2.0 {
        return data.to_vec();
    }
    let c: Vec<Complex<T>> = data.iter().map(|&v| Complex::new(v, T::zero())).collect();
    lowpass_complex(&c, fs, cutoff).into_iter().map(|v| v.re).collect()
}

/// Averages consecutive blocks of `sps` samples starting at `offset`
/// (the matched filter for rectangular pulses). Trailing partial blocks
/// are dropped.
pub fn integrate_and_dump<T: Real>(data: &[Complex<T>], sps: usize, offset: usize) -> Vec<Complex<T>> {
    assert!(sps > 0);
    let inv = T::one() / T::lit(sps as f64);
    data.get(offset..)
        .unwrap_or(&[])
        .chunks_exact(sps)
        .map(|c| c.iter().fold(Complex::new(T::zero(), T::zero()), |a, &b| a + b) * inv)
        .collect()
}
