//! Transmitter: bits → symbols → coding → pulse shaping or OFDM framing →
//! optional clipping and carrier insertion → oversampled optical field.

mod coding;
mod mapping;
mod ofdm;

pub use coding::{alamouti_encode, alamouti_encode_blocks, pol_scramble_encode, SlotPair};
pub use mapping::{bits_per_complex_symbol, map_symbols, slice_into};
pub use ofdm::{ofdm_frames, ofdm_modulate_stream, OfdmLayout, OfdmParams};

use num_complex::Complex;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{config, param, Result};
use crate::scalar::Real;
use crate::sigcore::{resample_stream, BitSequence, DualPolWaveform};
use crate::theory::ModulationFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coding {
    #[default]
    None,
    Alamouti,
    PolScramble,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TxConfig {
    pub format: ModulationFormat,
    pub bit_rate_gbps: f64,
    pub oversampling: usize,
    pub coding: Coding,
    pub ofdm: Option<OfdmParams>,
    /// Carrier-to-signal power ratio; `None` inserts no carrier.
    pub cspr_db: Option<f64>,
    /// Peak-to-RMS rail clip level; OFDM only.
    pub clipping_db: Option<f64>,
}

impl Default for TxConfig {
    fn default() -> Self {
        Self {
            format: ModulationFormat::Qpsk,
            bit_rate_gbps: 10.7,
            oversampling: 8,
            coding: Coding::None,
            ofdm: None,
            cspr_db: None,
            clipping_db: None,
        }
    }
}

impl TxConfig {
    pub fn bit_rate(&self) -> f64 {
        self.bit_rate_gbps * 1e9
    }

    /// Two tributaries for the dual-polarisation formats, one otherwise.
    pub fn tributaries(&self) -> usize {
        if self.is_dual_pol_format() {
            2
        } else {
            1
        }
    }

    pub fn is_dual_pol_format(&self) -> bool {
        matches!(self.format, ModulationFormat::DpQpsk | ModulationFormat::DpBpsk)
    }

    /// Information bits carried by one slot (one OFDM subcarrier cell).
    fn bits_per_slot(&self) -> Result<usize> {
        let k = bits_per_complex_symbol(self.format)?;
        Ok(k * self.tributaries())
    }

    pub fn validate(&self) -> Result<()> {
        use ModulationFormat::*;
        if self.oversampling < 2 {
            return config(format!("oversampling must be >= 2, got {}", self.oversampling));
        }
        if !(self.bit_rate_gbps > 0.0 && self.bit_rate_gbps.is_finite()) {
            return config(format!("bit rate must be positive, got {} Gb/s", self.bit_rate_gbps));
        }
        if bits_per_complex_symbol(self.format).is_err() {
            return config(format!("{} is analytic-only and cannot be transmitted", self.format));
        }
        match self.coding {
            Coding::PolScramble => {
                if self.is_dual_pol_format() {
                    return config("polarisation scrambling needs a single-polarisation format");
                }
                if self.ofdm.is_some() {
                    return config("polarisation scrambling is single-carrier only");
                }
                if self.oversampling % 2 != 0 {
                    return config("polarisation scrambling needs an even oversampling factor");
                }
            }
            Coding::Alamouti => {
                if self.is_dual_pol_format() || matches!(self.format, Ook | Pam4 | Dbpsk) {
                    return config(format!("Alamouti coding needs a coherent single-pol format, not {}", self.format));
                }
            }
            Coding::None => {}
        }
        if let Some(p) = &self.ofdm {
            p.validate()?;
            if matches!(self.format, Ook | Pam4 | Dbpsk) {
                return config(format!("{} is not supported on OFDM", self.format));
            }
        } else if self.clipping_db.is_some() {
            return config("clipping applies to OFDM waveforms only");
        } else if self.cspr_db.is_some() {
            return config("carrier insertion applies to OFDM waveforms only");
        }
        if let Some(c) = self.clipping_db {
            if !(c > 0.0) {
                return config(format!("clipping level must be > 0 dB, got {c}"));
            }
        }
        Ok(())
    }

    /// Rate of the slot grid: symbol rate for plain single-carrier, twice
    /// the symbol rate for polarisation scrambling, DAC sample rate for OFDM.
    pub fn slot_rate(&self) -> Result<f64> {
        let b = self.bits_per_slot()? as f64;
        Ok(match &self.ofdm {
            Some(p) => {
                let lay = p.layout()?;
                self.bit_rate() / (b * lay.data_bins.len() as f64) * lay.frame_len() as f64
            }
            None if self.coding == Coding::PolScramble => 2.0 * self.bit_rate() / b,
            None => self.bit_rate() / b,
        })
    }

    /// Baud rate of information symbols (single-carrier) or OFDM DAC rate.
    pub fn symbol_rate(&self) -> Result<f64> {
        let r = self.slot_rate()?;
        Ok(if self.coding == Coding::PolScramble { r / 2.0 } else { r })
    }

    /// Samples per slot at the simulation rate (OFDM: per DAC sample).
    pub fn samples_per_slot(&self) -> usize {
        if self.coding == Coding::PolScramble {
            self.oversampling / 2
        } else {
            self.oversampling
        }
    }

    pub fn sample_rate(&self) -> Result<f64> {
        Ok(self.slot_rate()? * self.samples_per_slot() as f64)
    }
}

/// Everything the receiver may need to know about a transmission.
#[derive(Debug, Clone)]
pub struct TxFrame<T: Real> {
    /// Unit signal power plus any inserted carrier.
    pub waveform: DualPolWaveform<T>,
    /// Information symbols per tributary, including wrap-around padding.
    pub info: Vec<Vec<Complex<T>>>,
    /// Bits per tributary; only these are counted.
    pub bits: Vec<Vec<u8>>,
    /// Counted symbols per tributary.
    pub counted: usize,
    /// Values on the slot grid (OFDM: data-cell grid, frame by frame).
    pub slots: SlotPair<T>,
    pub slot_rate: f64,
    pub samples_per_slot: usize,
    /// Amplitude of the inserted carrier per polarisation.
    pub carrier: f64,
}

fn pad_cyclic<T: Real>(v: &[Complex<T>], block: usize) -> Vec<Complex<T>> {
    let n = v.len().div_ceil(block) * block;
    v.iter().cycle().take(n).copied().collect()
}

fn hold<T: Real>(v: &[Complex<T>], sps: usize) -> Vec<Complex<T>> {
    v.iter().flat_map(|&s| std::iter::repeat_n(s, sps)).collect()
}

/// Builds the transmitted field from one bit sequence per tributary.
pub fn transmit<T: Real>(cfg: &TxConfig, tribs: &[BitSequence]) -> Result<TxFrame<T>> {
    cfg.validate()?;
    if tribs.len() != cfg.tributaries() {
        return param(format!("{} needs {} bit tributaries, got {}", cfg.format, cfg.tributaries(), tribs.len()));
    }
    let info: Vec<Vec<Complex<T>>> = tribs.iter().map(|b| map_symbols(b, cfg.format)).collect::<Result<_>>()?;
    let counted = info[0].len();
    if info.iter().any(|v| v.len() != counted) {
        return param("tributaries differ in length");
    }
    let layout = cfg.ofdm.as_ref().map(|p| p.layout()).transpose()?;
    let cell = layout.as_ref().map_or(1, |l| l.data_bins.len());
    let block = if cfg.coding == Coding::Alamouti { 2 * cell } else { cell };
    let info: Vec<_> = info.iter().map(|v| pad_cyclic(v, block)).collect();
    let zero = Complex::new(T::zero(), T::zero());
    let slots: SlotPair<T> = match (cfg.coding, info.len()) {
        (Coding::Alamouti, _) => alamouti_encode_blocks(&info[0], cell)?,
        (Coding::PolScramble, _) => pol_scramble_encode(&info[0]),
        (Coding::None, 2) => (info[0].clone(), info[1].clone()),
        (Coding::None, _) => (info[0].clone(), vec![zero; info[0].len()]),
    };
    let slot_rate = cfg.slot_rate()?;
    let sps = cfg.samples_per_slot();
    let fs = slot_rate * sps as f64;
    let mut w = match &cfg.ofdm {
        None => DualPolWaveform::new(hold(&slots.0, sps), hold(&slots.1, sps), fs, 0.0)?,
        Some(p) => {
            let dual = cfg.coding == Coding::Alamouti || info.len() == 2;
            let mut w = ofdm_modulate(&slots.0, dual.then_some(&slots.1[..]), p, slot_rate)?;
            if let Some(c) = cfg.clipping_db {
                w = clip(&w, c)?;
            }
            let f = Ratio::new(sps, 1);
            DualPolWaveform::new(resample_stream(&w.x, f)?, resample_stream(&w.y, f)?, fs, 0.0)?
        }
    };
    w.set_power(1.0);
    let carrier = cfg.cspr_db.map_or(0.0, |c| (w.power() * 10f64.powf(c / 10.0) / 2.0).sqrt());
    if let Some(c) = cfg.cspr_db {
        w = insert_carrier(&w, c)?;
    }
    Ok(TxFrame {
        waveform: w,
        info,
        bits: tribs.iter().map(|b| b.as_slice().to_vec()).collect(),
        counted,
        slots,
        slot_rate,
        samples_per_slot: sps,
        carrier,
    })
}

/// OFDM-modulates one or two polarisation symbol streams at the DAC rate.
/// The pilot tone, when enabled, is carried on every active polarisation.
pub fn ofdm_modulate<T: Real>(
    x: &[Complex<T>],
    y: Option<&[Complex<T>]>,
    p: &OfdmParams,
    sample_rate: f64,
) -> Result<DualPolWaveform<T>> {
    let tx = ofdm_modulate_stream(x, p)?;
    let ty = match y {
        Some(y) => ofdm_modulate_stream(y, p)?,
        None => vec![Complex::new(T::zero(), T::zero()); tx.len()],
    };
    DualPolWaveform::new(tx, ty, sample_rate, 0.0)
}

/// Adds a real carrier to both polarisations so that carrier power over
/// signal power equals `10^(cspr_db/10)`, split equally between x and y.
pub fn insert_carrier<T: Real>(w: &DualPolWaveform<T>, cspr_db: f64) -> Result<DualPolWaveform<T>> {
    let ps = w.power();
    if !ps.is_finite() {
        return param("signal power is not finite");
    }
    if cspr_db == f64::NEG_INFINITY {
        return Ok(w.clone());
    }
    let a = Complex::new(T::lit((ps * 10f64.powf(cspr_db / 10.0) / 2.0).sqrt()), T::zero());
    let mut out = w.clone();
    for v in out.x.iter_mut().chain(out.y.iter_mut()) {
        *v = *v + a;
    }
    Ok(out)
}

/// Hard-limits the I and Q rails of each polarisation at
/// `rail RMS · 10^(clip_db/20)`; the rail RMS is measured per polarisation.
pub fn clip<T: Real>(w: &DualPolWaveform<T>, clip_db: f64) -> Result<DualPolWaveform<T>> {
    if !(clip_db > 0.0 || clip_db == 0.0) {
        return param(format!("clip level must be >= 0 dB, got {clip_db}"));
    }
    let limit = |v: &[Complex<T>]| -> Vec<Complex<T>> {
        let ms = v.iter().map(|z| z.norm_sqr().as_f64()).sum::<f64>() / v.len().max(1) as f64;
        let a = T::lit((ms / 2.0).sqrt() * 10f64.powf(clip_db / 20.0));
        if a == T::zero() {
            return v.to_vec();
        }
        v.iter().map(|z| Complex::new(z.re.max(-a).min(a), z.im.max(-a).min(a))).collect()
    };
    DualPolWaveform::new(limit(&w.x), limit(&w.y), w.sample_rate, w.center_offset)
}
