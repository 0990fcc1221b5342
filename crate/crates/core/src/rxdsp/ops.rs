use num_complex::Complex;
use serde::Serialize;

use crate::error::{config, param, Error, Result};
use crate::scalar::Real;
use crate::sigcore::{gaussian_lowpass_complex, integrate_and_dump, lowpass_complex, lowpass_real, JonesMatrix};
use crate::theory::ModulationFormat;
use crate::txchain::{ofdm_frames, slice_into, OfdmParams};

type C<T> = Complex<T>;

fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// Multiplies a complex stream by `exp(−i2π·f·t)`.
pub fn mix<T: Real>(z: &[C<T>], fs: f64, f: f64) -> Vec<C<T>> {
    let step = -2.0 * std::f64::consts::PI * f / fs;
    z.iter()
        .enumerate()
        .map(|(k, &v)| {
            let ph = (step * k as f64).rem_euclid(2.0 * std::f64::consts::PI);
            v * Complex::new(T::lit(ph.cos()), T::lit(ph.sin()))
        })
        .collect()
}

/// Real passband current → complex baseband: `2·i(t)·exp(−i2π f_IF t)`,
/// then an ideal low-pass of two-sided width `bandwidth` when given.
/// A tone `A·cos(2π f_IF t + φ)` maps to `A·e^{iφ}`.
pub fn downconvert<T: Real>(current: &[T], fs: f64, if_hz: f64, bandwidth: Option<f64>) -> Result<Vec<C<T>>> {
    if let Some(b) = bandwidth {
        if !(if_hz > b / 2.0) {
            return config(format!("IF {if_hz} Hz does not clear half the {b} Hz bandwidth"));
        }
    }
    let two = T::lit(2.0);
    let z: Vec<C<T>> = current.iter().map(|&v| Complex::new(v * two, T::zero())).collect();
    let z = mix(&z, fs, if_hz);
    Ok(match bandwidth {
        Some(b) => lowpass_complex(&z, fs, b / 2.0),
        None => z,
    })
}

pub const IF_FILTER_ORDER: u32 = 4;

/// IF band-pass of 3 dB width `bandwidth` centred on the IF, applied as the
/// equivalent baseband low-pass after downconversion.
pub fn if_filter<T: Real>(z: &[C<T>], fs: f64, if_hz: f64, bandwidth: Option<f64>) -> Result<Vec<C<T>>> {
    match bandwidth {
        None => Ok(z.to_vec()),
        Some(b) if !(b > 0.0) || b / 2.0 >= if_hz => {
            config(format!("IF filter bandwidth {b} Hz must be positive and below twice the {if_hz} Hz IF"))
        }
        Some(b) => Ok(gaussian_lowpass_complex(z, fs, b, IF_FILTER_ORDER)),
    }
}

/// Effective channel from the two transmitted tributaries (x, y) into one
/// detected complex stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelEstimate<T: Real> {
    pub h1: C<T>,
    pub h2: C<T>,
}

impl<T: Real> ChannelEstimate<T> {
    pub fn energy(&self) -> f64 {
        (self.h1.norm_sqr() + self.h2.norm_sqr()).as_f64()
    }

    /// Projection of the link Jones matrix onto the LO polarisation
    /// `(cos θ, sin θ)`.
    pub fn genie(rotation: &JonesMatrix<T>, lo_angle: f64) -> Self {
        let (c, s) = (T::lit(lo_angle.cos()), T::lit(lo_angle.sin()));
        let m = &rotation.m;
        Self { h1: m[0][0] * c + m[1][0] * s, h2: m[0][1] * c + m[1][1] * s }
    }
}

/// Least-squares fit of `r = h1·x + h2·y` over known slots. A tributary
/// that is identically zero gets `h = 0` and is ignored.
pub fn estimate_channel<T: Real>(rx: &[C<T>], tx_x: &[C<T>], tx_y: &[C<T>]) -> Result<ChannelEstimate<T>> {
    let n = rx.len();
    if tx_x.len() != n || tx_y.len() != n {
        return param("training lengths differ");
    }
    if n < 4 {
        return Err(Error::Estimation(format!("need at least 2 training slot pairs, got {n} slots")));
    }
    let (mut sxx, mut syy, mut sxy, mut rx_x, mut rx_y) = (0.0, 0.0, Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
    let c64 = |v: C<T>| Complex::new(v.re.as_f64(), v.im.as_f64());
    for i in 0..n {
        let (r, x, y) = (c64(rx[i]), c64(tx_x[i]), c64(tx_y[i]));
        sxx += x.norm_sqr();
        syy += y.norm_sqr();
        sxy += x.conj() * y;
        rx_x += r * x.conj();
        rx_y += r * y.conj();
    }
    let (h1, h2) = if syy == 0.0 && sxx > 0.0 {
        (rx_x / sxx, Complex::new(0.0, 0.0))
    } else if sxx == 0.0 && syy > 0.0 {
        (Complex::new(0.0, 0.0), rx_y / syy)
    } else {
        // [sxx sxy; sxy* syy]·(h1, h2) = (Σ r·x*, Σ r·y*)
        let det = sxx * syy - sxy.norm_sqr();
        if !(det > 1e-12 * sxx * syy) {
            return Err(Error::Estimation("training symbols are singular".into()));
        }
        let h1 = (rx_x * syy - rx_y * sxy) / det;
        let h2 = (rx_y * sxx - rx_x * sxy.conj()) / det;
        (h1, h2)
    };
    let est = ChannelEstimate {
        h1: Complex::new(T::lit(h1.re), T::lit(h1.im)),
        h2: Complex::new(T::lit(h2.re), T::lit(h2.im)),
    };
    if !(est.energy() > 0.0) {
        return Err(Error::Estimation("no signal in training slots".into()));
    }
    Ok(est)
}

/// Alamouti combining over one or more detected branches. `rx[b]` is the
/// slot stream of branch `b` and `h[b]` its channel.
pub fn alamouti_decode_branches<T: Real>(rx: &[Vec<C<T>>], h: &[ChannelEstimate<T>]) -> Result<Vec<C<T>>> {
    let n = rx.first().map_or(0, |r| r.len());
    if n % 2 != 0 || rx.iter().any(|r| r.len() != n) || rx.len() != h.len() {
        return param("Alamouti decoding needs equal, even-length branch streams");
    }
    let e: f64 = h.iter().map(|c| c.energy()).sum();
    if !(e > 0.0) {
        return Err(Error::Decode("zero channel energy".into()));
    }
    let inv = T::lit(1.0 / e);
    let mut out = Vec::with_capacity(n);
    for k in (0..n).step_by(2) {
        let (mut a, mut b) = (czero::<T>(), czero::<T>());
        for (r, c) in rx.iter().zip(h) {
            let (r1, r2) = (r[k], r[k + 1]);
            a = a + c.h1.conj() * r1 + c.h2 * r2.conj();
            b = b + c.h2.conj() * r1 - c.h1 * r2.conj();
        }
        out.push(a * inv);
        out.push(b * inv);
    }
    Ok(out)
}

/// Single-branch Alamouti decoding.
pub fn alamouti_decode<T: Real>(r: &[C<T>], h: &ChannelEstimate<T>) -> Result<Vec<C<T>>> {
    alamouti_decode_branches(&[r.to_vec()], std::slice::from_ref(h))
}

/// Removes the cyclic prefix, FFTs each frame and returns the data cells
/// frame by frame. With `pilot_phase`, each frame is de-rotated by the
/// phase of its pilot tone; `one_tap` multiplies subcarrier `k` by
/// `one_tap[k]`.
pub fn ofdm_demodulate<T: Real>(
    baseband: &[C<T>],
    p: &OfdmParams,
    pilot_phase: bool,
    one_tap: Option<&[C<T>]>,
) -> Result<Vec<C<T>>> {
    let frames = ofdm_frames(baseband, p)?;
    let d = p.layout()?.data_bins.len();
    if let Some(eq) = one_tap {
        if eq.len() != d {
            return param(format!("equaliser has {} taps for {d} subcarriers", eq.len()));
        }
    }
    let mut out = Vec::with_capacity(frames.len() * d);
    for (data, pilot) in frames {
        let rot = match (pilot_phase, pilot) {
            (true, Some(pl)) if pl.norm() > T::zero() => pl.conj() / pl.norm(),
            (true, _) => return param("pilot phase correction needs a pilot tone"),
            _ => Complex::new(T::one(), T::zero()),
        };
        for (k, v) in data.into_iter().enumerate() {
            let g = one_tap.map_or(Complex::new(T::one(), T::zero()), |e| e[k]);
            out.push(v * rot * g);
        }
    }
    Ok(out)
}

/// One-tap equaliser taps `Σ t·r* / Σ |r|²` per subcarrier from known
/// cells (frame-major layout, `d` subcarriers).
pub fn one_tap_from_training<T: Real>(rx: &[C<T>], tx: &[C<T>], d: usize) -> Result<Vec<C<T>>> {
    if rx.len() != tx.len() || d == 0 || rx.len() % d != 0 {
        return param("training cells do not fill whole frames");
    }
    (0..d)
        .map(|k| {
            let (mut num, mut den) = (czero::<T>(), T::zero());
            for i in (k..rx.len()).step_by(d) {
                num = num + tx[i] * rx[i].conj();
                den = den + rx[i].norm_sqr();
            }
            if den > T::zero() {
                Ok(num / den)
            } else {
                Err(Error::Estimation(format!("subcarrier {k} received no energy")))
            }
        })
        .collect()
}

/// DC-block (exact mean removal), square and sum three photocurrents,
/// optionally low-pass filtered.
pub fn square_sum_combine<T: Real>(currents: &[Vec<T>], fs: f64, lpf_bandwidth: Option<f64>) -> Result<Vec<T>> {
    if currents.len() != 3 {
        return param(format!("square-and-sum needs 3 currents, got {}", currents.len()));
    }
    let n = currents[0].len();
    if currents.iter().any(|c| c.len() != n) {
        return param("currents differ in length");
    }
    let mut out = vec![T::zero(); n];
    for c in currents {
        let m = c.iter().copied().sum::<T>() / T::lit(n.max(1) as f64);
        for (o, &v) in out.iter_mut().zip(c) {
            let d = v - m;
            *o = *o + d * d;
        }
    }
    Ok(match lpf_bandwidth {
        Some(b) => lowpass_real(&out, fs, b),
        None => out,
    })
}

/// `Σ_k w^k·i_k` with `w = e^{i2π/3}`: cancels the direct-detection terms
/// of the DFT 3×3 coupler and returns `R·E_s·E_LO*` for the LO on port 1.
pub fn linear_combine_3x3<T: Real>(currents: &[Vec<T>]) -> Result<Vec<C<T>>> {
    if currents.len() != 3 {
        return param(format!("3x3 combination needs 3 currents, got {}", currents.len()));
    }
    let n = currents[0].len();
    if currents.iter().any(|c| c.len() != n) {
        return param("currents differ in length");
    }
    let w: Vec<C<T>> = (0..3)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            Complex::new(T::lit(a.cos()), T::lit(a.sin()))
        })
        .collect();
    Ok((0..n)
        .map(|i| w[0] * currents[0][i] + w[1] * currents[1][i] + w[2] * currents[2][i])
        .collect())
}

/// Glance dual-branch receiver: each branch is downconverted (the LO sits
/// above the signal, so the baseband is conjugated) and matched-filtered.
/// DBPSK branches are delay-and-multiplied and summed, giving differential
/// products `z_k·z*_{k−1}` (cyclic). Other formats are summed with the
/// supplied per-branch weights.
pub fn glance_dualbranch_demod<T: Real>(
    currents: &[Vec<T>],
    fs: f64,
    if_hz: f64,
    sps: usize,
    format: ModulationFormat,
    weights: Option<[C<T>; 2]>,
    if_bandwidth: Option<f64>,
) -> Result<Vec<C<T>>> {
    if currents.len() != 2 {
        return param(format!("Glance demodulation needs 2 branches, got {}", currents.len()));
    }
    let branches: Vec<Vec<C<T>>> = currents
        .iter()
        .map(|c| {
            let z = if_filter(&downconvert(c, fs, if_hz, None)?, fs, if_hz, if_bandwidth)?;
            Ok(integrate_and_dump(&z, sps, 0).into_iter().map(|v| v.conj()).collect())
        })
        .collect::<Result<_>>()?;
    let n = branches[0].len();
    if format == ModulationFormat::Dbpsk {
        return Ok((0..n)
            .map(|k| {
                let j = (k + n - 1) % n;
                branches.iter().fold(czero::<T>(), |a, b| a + b[k] * b[j].conj())
            })
            .collect());
    }
    let w = weights.ok_or_else(|| Error::Config(format!("{format} on the Glance receiver needs branch weights")))?;
    Ok((0..n).map(|k| branches[0][k] * w[0] + branches[1][k] * w[1]).collect())
}

/// Bit-error count of one tributary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct DecisionReport {
    pub bit_errors: u64,
    pub bits_compared: u64,
}

impl DecisionReport {
    pub fn ber(&self) -> f64 {
        if self.bits_compared == 0 {
            return f64::NAN;
        }
        self.bit_errors as f64 / self.bits_compared as f64
    }

    pub fn merge(self, o: DecisionReport) -> DecisionReport {
        DecisionReport { bit_errors: self.bit_errors + o.bit_errors, bits_compared: self.bits_compared + o.bits_compared }
    }
}

/// Minimum-distance hard decision, Gray demapping and exact error count.
/// For DBPSK the input must be differential products (a negative real
/// part is a `1`).
pub fn decide_and_count<T: Real>(rx: &[C<T>], tx_bits: &[u8], format: ModulationFormat) -> Result<DecisionReport> {
    let mut bits = Vec::with_capacity(tx_bits.len());
    for &z in rx {
        slice_into(z, format, &mut bits);
    }
    if bits.len() != tx_bits.len() {
        return param(format!("{} decided bits vs {} transmitted", bits.len(), tx_bits.len()));
    }
    if bits.is_empty() {
        return param("nothing to compare");
    }
    let errors = bits.iter().zip(tx_bits).filter(|(a, b)| a != b).count() as u64;
    Ok(DecisionReport { bit_errors: errors, bits_compared: bits.len() as u64 })
}
