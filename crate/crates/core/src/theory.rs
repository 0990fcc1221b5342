//! Analytic bit-error ratio of the power-efficient formats, inversion to
//! the required SNR per bit, and optical power ↔ photons-per-bit
//! conversion.
//!
//! With an ideal pre-amplifier (`n_sp = 1`) and matched filtering the SNR
//! per bit equals the received photons per bit, so [`required_ppb`] is the
//! SNR-per-bit that meets a target BER.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::consts::photon_energy;
use crate::error::{Error, Result};

/// Modulation formats with a closed-form or quadrature BER.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ModulationFormat {
    Ook,
    Pam4,
    Bpsk,
    DpBpsk,
    Qpsk,
    DpQpsk,
    Dbpsk,
    PsQpsk,
    Ppm4,
    Ppm16,
    Qam16,
}

impl ModulationFormat {
    pub const ALL: [ModulationFormat; 11] = [
        Self::Ook,
        Self::Pam4,
        Self::Bpsk,
        Self::DpBpsk,
        Self::Qpsk,
        Self::DpQpsk,
        Self::Dbpsk,
        Self::PsQpsk,
        Self::Ppm4,
        Self::Ppm16,
        Self::Qam16,
    ];

    /// Bits carried by one symbol (a 4-D symbol for the dual-polarisation
    /// formats, one PPM frame for PPM).
    pub fn bits_per_symbol(self) -> u32 {
        match self {
            Self::Ook | Self::Bpsk | Self::Dbpsk => 1,
            Self::Pam4 | Self::Qpsk | Self::DpBpsk | Self::Ppm4 => 2,
            Self::PsQpsk => 3,
            Self::DpQpsk | Self::Ppm16 | Self::Qam16 => 4,
        }
    }

    /// Achievable spectral efficiency in b/s/Hz.
    pub fn spectral_efficiency(self) -> f64 {
        match self {
            Self::Ook | Self::Bpsk | Self::Dbpsk => 1.0,
            Self::Pam4 | Self::Qpsk | Self::DpBpsk => 2.0,
            Self::PsQpsk => 3.0,
            Self::DpQpsk | Self::Qam16 => 4.0,
            Self::Ppm4 => 0.5,
            Self::Ppm16 => 0.25,
        }
    }

    /// Formats whose two symbols are antipodal per dimension.
    pub fn is_antipodal_binary(self) -> bool {
        matches!(self, Self::Bpsk | Self::DpBpsk | Self::Qpsk | Self::DpQpsk | Self::Dbpsk)
    }

    /// Field is complex-valued (phase matters at the receiver).
    pub fn needs_phase(self) -> bool {
        !matches!(self, Self::Ook | Self::Pam4)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Ook => "OOK",
            Self::Pam4 => "4-PAM",
            Self::Bpsk => "BPSK",
            Self::DpBpsk => "DP-BPSK",
            Self::Qpsk => "QPSK",
            Self::DpQpsk => "DP-QPSK",
            Self::Dbpsk => "DBPSK",
            Self::PsQpsk => "PSwitch-QPSK",
            Self::Ppm4 => "4-PPM",
            Self::Ppm16 => "16-PPM",
            Self::Qam16 => "16-QAM",
        }
    }
}

impl fmt::Display for ModulationFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModulationFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "ook" | "2pam" | "ook2pam" => Self::Ook,
            "4pam" | "pam4" => Self::Pam4,
            "bpsk" => Self::Bpsk,
            "dpbpsk" => Self::DpBpsk,
            "qpsk" => Self::Qpsk,
            "dpqpsk" => Self::DpQpsk,
            "dbpsk" | "dpsk" => Self::Dbpsk,
            "psqpsk" | "pswitchqpsk" => Self::PsQpsk,
            "4ppm" | "ppm4" => Self::Ppm4,
            "16ppm" | "ppm16" => Self::Ppm16,
            "16qam" | "qam16" => Self::Qam16,
            _ => return Err(Error::Parameter(format!("unknown modulation format '{s}'"))),
        })
    }
}

impl TryFrom<String> for ModulationFormat {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ModulationFormat> for String {
    fn from(f: ModulationFormat) -> String {
        f.label().to_string()
    }
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn normal_cdf(x: f64) -> f64 {
    1.0 - q_function(x)
}

/// Composite Simpson rule with `n` (rounded up to even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Exact BER of a one-dimensional PAM constellation with midpoint
/// thresholds and the given bit labels, in additive Gaussian noise of
/// standard deviation `sigma` (same units as `levels`).
fn pam_ber(levels: &[f64], labels: &[u32], bits: u32, sigma: f64) -> f64 {
    let m = levels.len();
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let lo = if j == 0 { f64::NEG_INFINITY } else { 0.5 * (levels[j - 1] + levels[j]) };
            let hi = if j == m - 1 { f64::INFINITY } else { 0.5 * (levels[j] + levels[j + 1]) };
            let p = normal_cdf((hi - levels[i]) / sigma) - normal_cdf((lo - levels[i]) / sigma);
            total += p * (labels[i] ^ labels[j]).count_ones() as f64;
        }
    }
    total / (m as f64 * bits as f64)
}

/// BER of coherent M-ary orthogonal signalling (PPM detected slot-wise
/// with a coherent receiver and maximum-likelihood symbol decision).
fn orthogonal_ber(m: usize, snr_per_bit: f64) -> f64 {
    let k = (m as f64).log2();
    let mu = (2.0 * k * snr_per_bit).sqrt();
    // 1 - Φ(y)^(M-1) evaluated without cancellation.
    let miss = |y: f64| -((m as f64 - 1.0) * (-q_function(y)).ln_1p()).exp_m1();
    let ser = simpson(|y| normal_pdf(y - mu) * miss(y), mu - 12.0, mu + 12.0, 4000).clamp(0.0, 1.0);
    m as f64 / (2.0 * (m as f64 - 1.0)) * ser
}

/// Exact BER of polarisation-switched QPSK with ML detection.
///
/// The eight 4-D points are `(±1, ±1, 0, 0)` and `(0, 0, ±1, ±1)`; one bit
/// selects the polarisation and two Gray bits the QPSK point. Given the
/// transmitted `(1, 1, 0, 0)`, the receiver picks the polarisation with the
/// larger `|r1| + |r2|` and the signs inside it. The probability that the
/// idle pair wins is closed-form (`|r3| + |r4| < a` is a square after a 45°
/// rotation); the remaining 2-D expectation is done by quadrature.
fn ps_qpsk_ber(snr_per_bit: f64) -> f64 {
    // Es = 2 per symbol, Eb = 2/3, noise variance N0/2 = 1/(3·γ).
    let sigma = (1.0 / (3.0 * snr_per_bit)).sqrt();
    let pdf = |r: f64| normal_pdf((r - 1.0) / sigma) / sigma;
    let idle_loses = |a: f64| {
        let p = 1.0 - 2.0 * q_function(a / (sigma * std::f64::consts::SQRT_2));
        p * p
    };
    let lo = 1.0 - 12.0 * sigma;
    let hi = 1.0 + 12.0 * sigma;
    let n = 240;
    let inner = |r1: f64| {
        let g = |r2: f64| {
            let ok = idle_loses(r1.abs() + r2.abs());
            let sign_errors = (r1 < 0.0) as u8 as f64 + (r2 < 0.0) as u8 as f64;
            pdf(r2) * ((1.0 - ok) * 2.0 + ok * sign_errors)
        };
        let mut s = simpson(&g, 0.0f64.max(lo), hi, n);
        if lo < 0.0 {
            s += simpson(&g, lo, 0.0, n);
        }
        pdf(r1) * s
    };
    let mut e = simpson(&inner, 0.0f64.max(lo), hi, n);
    if lo < 0.0 {
        e += simpson(&inner, lo, 0.0, n);
    }
    (e / 3.0).clamp(0.0, 0.5)
}

/// Theoretical BER at SNR per bit `snr_per_bit` (linear, `Eb/N0`).
pub fn ber_theory(format: ModulationFormat, snr_per_bit: f64) -> Result<f64> {
    if !(snr_per_bit >= 0.0) {
        return Err(Error::Parameter(format!("SNR per bit must be >= 0, got {snr_per_bit}")));
    }
    let g = snr_per_bit;
    use ModulationFormat::*;
    let ber = match format {
        Bpsk | DpBpsk | Qpsk | DpQpsk => q_function((2.0 * g).sqrt()),
        Dbpsk => {
            // Differentially encoded, coherently detected BPSK.
            let q = q_function((2.0 * g).sqrt());
            2.0 * q * (1.0 - q)
        }
        Ook => {
            if g == 0.0 {
                return Ok(0.5);
            }
            // Levels {0, √2}: Eb = 1, noise variance N0/2.
            pam_ber(&[0.0, 2f64.sqrt()], &[0, 1], 1, (0.5 / g).sqrt())
        }
        Pam4 => {
            if g == 0.0 {
                return Ok(0.5);
            }
            // Unipolar {0, 1, 2, 3}, Gray labelled: Eb = 3.5/2.
            pam_ber(&[0.0, 1.0, 2.0, 3.0], &[0b00, 0b01, 0b11, 0b10], 2, (1.75 / (2.0 * g)).sqrt())
        }
        Qam16 => {
            if g == 0.0 {
                return Ok(0.5);
            }
            // Gray square QAM = two independent Gray 4-PAM rails; Es = 10, Eb = 2.5.
            pam_ber(&[-3.0, -1.0, 1.0, 3.0], &[0b00, 0b01, 0b11, 0b10], 2, (2.5 / (2.0 * g)).sqrt())
        }
        PsQpsk => {
            if g == 0.0 {
                return Ok(0.5);
            }
            ps_qpsk_ber(g)
        }
        Ppm4 => orthogonal_ber(4, g),
        Ppm16 => orthogonal_ber(16, g),
    };
    Ok(ber.clamp(0.0, 0.5))
}

/// BER-vs-SNR descriptor of one format.
#[derive(Debug, Clone, Copy)]
pub struct FormatTheory {
    pub format: ModulationFormat,
}

impl FormatTheory {
    pub fn new(format: ModulationFormat) -> Self {
        Self { format }
    }

    pub fn ber(&self, snr_per_bit: f64) -> Result<f64> {
        ber_theory(self.format, snr_per_bit)
    }

    pub fn required_ppb(&self, target_ber: f64) -> Result<f64> {
        required_ppb(self.format, target_ber)
    }
}

/// Lowest/highest SNR per bit searched by [`required_snr_per_bit`], in dB.
pub const SNR_SEARCH_DB: (f64, f64) = (0.0, 40.0);

/// SNR per bit (linear) at which the theoretical BER equals `target_ber`,
/// by bisection on the dB scale to 1e-4 dB.
pub fn required_snr_per_bit(format: ModulationFormat, target_ber: f64) -> Result<f64> {
    if !(target_ber > 0.0 && target_ber < 0.5) {
        return Err(Error::Parameter(format!("target BER {target_ber} outside (0, 0.5)")));
    }
    let ber_db = |db: f64| ber_theory(format, 10f64.powf(db / 10.0));
    let (mut lo, mut hi) = SNR_SEARCH_DB;
    if ber_db(lo)? < target_ber || ber_db(hi)? > target_ber {
        return Err(Error::Convergence(format!(
            "{format}: BER {target_ber} not reachable for SNR in [{lo}, {hi}] dB"
        )));
    }
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if ber_db(mid)? > target_ber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(10f64.powf(0.5 * (lo + hi) / 10.0))
}

/// Photons per bit needed by an ideal pre-amplified receiver to reach
/// `target_ber`; equal to the required SNR per bit.
pub fn required_ppb(format: ModulationFormat, target_ber: f64) -> Result<f64> {
    required_snr_per_bit(format, target_ber)
}

/// Photons per bit `P / (h·c/λ · R_b)` for a received power in dBm.
pub fn ppb_from_power(power_dbm: f64, bit_rate: f64, wavelength: f64) -> f64 {
    crate::consts::dbm_to_watts(power_dbm) / (photon_energy(wavelength) * bit_rate)
}

/// Inverse of [`ppb_from_power`], in dBm.
pub fn power_from_ppb(ppb: f64, bit_rate: f64, wavelength: f64) -> f64 {
    crate::consts::watts_to_dbm(ppb * photon_energy(wavelength) * bit_rate)
}

/// One row of the theoretical sensitivity table.
#[derive(Debug, Clone, Serialize)]
pub struct TheoryRow {
    pub format: ModulationFormat,
    pub required_ppb: f64,
    pub spectral_efficiency: f64,
}

/// Formats in the order of the published comparison table.
pub const TABLE_FORMATS: [ModulationFormat; 8] = [
    ModulationFormat::PsQpsk,
    ModulationFormat::DpBpsk,
    ModulationFormat::DpQpsk,
    ModulationFormat::Dbpsk,
    ModulationFormat::Ppm16,
    ModulationFormat::Ppm4,
    ModulationFormat::Ook,
    ModulationFormat::Pam4,
];

pub fn theory_table(target_ber: f64, formats: &[ModulationFormat]) -> Result<Vec<TheoryRow>> {
    formats
        .iter()
        .map(|&format| {
            Ok(TheoryRow {
                format,
                required_ppb: required_ppb(format, target_ber)?,
                spectral_efficiency: format.spectral_efficiency(),
            })
        })
        .collect()
}
