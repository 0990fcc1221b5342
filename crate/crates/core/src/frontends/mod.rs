//! Receiver optical front-ends: signal and LO fields in, photocurrents out.

mod photodiode;

pub use photodiode::{balanced_pd, photodiode, PdParams};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::optics::{coupler_2x2, coupler_3x3, hybrid_90, pbs};
use crate::scalar::Real;
use crate::sigcore::{derive_seed, DualPolWaveform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FrontEndKind {
    /// Polarisation- and phase-diverse intradyne receiver (two hybrids, four BPDs).
    Ppdi,
    /// One 90° hybrid, two BPDs, single LO polarisation.
    AlamoutiInt,
    /// 3-dB coupler and one BPD at an intermediate frequency.
    AlamoutiHet,
    /// As `AlamoutiHet` with one output of the coupler on a single-ended PD.
    AlamoutiHetSinglePd,
    /// 3-dB coupler, PBS, two single-ended PDs.
    GlanceHet,
    /// 3×3 coupler on two inputs, three single-ended PDs, intradyne.
    CanoInt3x3,
    /// 3-dB coupler and one single-ended PD at an intermediate frequency.
    CanoHetSingle,
    /// PBS-split LO into a 3×3 coupler, three PDs, square-and-sum.
    CiaramellaSq,
    /// Same optics as `CiaramellaSq`, linear 3×3 combination.
    TabaresHet,
}

impl FrontEndKind {
    pub const ALL: [FrontEndKind; 9] = [
        Self::Ppdi,
        Self::AlamoutiInt,
        Self::AlamoutiHet,
        Self::AlamoutiHetSinglePd,
        Self::GlanceHet,
        Self::CanoInt3x3,
        Self::CanoHetSingle,
        Self::CiaramellaSq,
        Self::TabaresHet,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::Ppdi => "PPDI",
            Self::AlamoutiInt => "Alamouti-IntRx",
            Self::AlamoutiHet => "Alamouti-HetRx",
            Self::AlamoutiHetSinglePd => "Alamouti-HetRx-SPD",
            Self::GlanceHet => "Glance-HetRx",
            Self::CanoInt3x3 => "Cano-IntRx",
            Self::CanoHetSingle => "Cano-HetRx",
            Self::CiaramellaSq => "Ciaramella-Rx",
            Self::TabaresHet => "Tabares-HetRx",
        }
    }

    pub fn is_heterodyne(self) -> bool {
        !matches!(self, Self::Ppdi | Self::AlamoutiInt | Self::CanoInt3x3)
    }

    /// Photocurrent streams delivered to the DSP.
    pub fn stream_count(self) -> usize {
        match self {
            Self::Ppdi => 4,
            Self::AlamoutiInt | Self::GlanceHet => 2,
            Self::AlamoutiHet | Self::AlamoutiHetSinglePd | Self::CanoHetSingle => 1,
            Self::CanoInt3x3 | Self::CiaramellaSq | Self::TabaresHet => 3,
        }
    }

    /// LO launch angle the optical layout expects: 45° where the LO is
    /// split between two polarisation branches, x otherwise.
    pub fn lo_pol_angle(self) -> f64 {
        match self {
            Self::Ppdi | Self::GlanceHet | Self::CiaramellaSq | Self::TabaresHet => std::f64::consts::FRAC_PI_4,
            _ => 0.0,
        }
    }

    /// Default intermediate frequency. Ciaramella uses `0.9 ×` the symbol
    /// rate; the other heterodyne receivers sit at a quarter of the
    /// simulation rate, which puts a whole number of image cycles in every
    /// slot so the matched filter rejects the image exactly.
    pub fn default_if(self, symbol_rate: f64, sample_rate: f64) -> f64 {
        match self {
            _ if !self.is_heterodyne() => 0.0,
            Self::CiaramellaSq => 0.9 * symbol_rate,
            _ => sample_rate / 4.0,
        }
    }
}

impl fmt::Display for FrontEndKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FrontEndKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Ok(match key.as_str() {
            "ppdi" => Self::Ppdi,
            "alamoutiint" | "alamoutiintrx" => Self::AlamoutiInt,
            "alamoutihet" | "alamoutihetrx" => Self::AlamoutiHet,
            "alamoutihetspd" | "alamoutihetrxspd" | "alamoutihetsinglepd" => Self::AlamoutiHetSinglePd,
            "glancehet" | "glancehetrx" | "glance" => Self::GlanceHet,
            "canoint3x3" | "canointrx" | "canoint" => Self::CanoInt3x3,
            "canohetsingle" | "canohetrx" | "canohet" => Self::CanoHetSingle,
            "ciaramellasq" | "ciaramellarx" | "ciaramella" => Self::CiaramellaSq,
            "tabareshet" | "tabareshetrx" | "tabares" => Self::TabaresHet,
            _ => return Err(Error::Config(format!("unknown architecture '{s}'"))),
        })
    }
}

impl TryFrom<String> for FrontEndKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FrontEndKind> for String {
    fn from(k: FrontEndKind) -> String {
        k.label().to_string()
    }
}

/// Photocurrents handed to the DSP.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectricalOutputs<T: Real> {
    pub currents: Vec<Vec<T>>,
    pub sample_rate: f64,
    pub if_hz: f64,
}

/// Runs the front-end optics and photodetection for `kind`.
///
/// The LO must already carry the offset `if_hz` relative to the signal
/// (zero for intradyne receivers) and the launch polarisation the layout
/// expects (see [`FrontEndKind::lo_pol_angle`]).
pub fn detect<T: Real>(
    kind: FrontEndKind,
    signal: &DualPolWaveform<T>,
    lo: &DualPolWaveform<T>,
    p: &PdParams,
    if_hz: f64,
    seed: u64,
) -> Result<ElectricalOutputs<T>> {
    let offset = lo.center_offset - signal.center_offset;
    let tol = 1e-9 * signal.sample_rate;
    if kind.is_heterodyne() {
        if !(if_hz > 0.0) {
            return config(format!("{kind} is heterodyne and needs a positive IF, got {if_hz} Hz"));
        }
        if if_hz >= signal.sample_rate / 2.0 {
            return config(format!("IF {if_hz} Hz is above the simulation Nyquist frequency"));
        }
    } else if if_hz != 0.0 {
        return config(format!("{kind} is intradyne; IF must be 0, got {if_hz} Hz"));
    }
    if (offset - if_hz).abs() > tol {
        return config(format!("LO is offset {offset} Hz from the signal but the IF is {if_hz} Hz"));
    }
    let pd_seed = |k: usize| derive_seed(seed, &format!("{}/pd{k}", kind.label()));
    let currents = match kind {
        FrontEndKind::Ppdi => {
            let (sh, sv) = pbs(signal);
            let (lh, lv) = pbs(lo);
            let hx = hybrid_90(&sh, &lh)?;
            let hy = hybrid_90(&sv, &lv)?;
            vec![
                balanced_pd(&hx[0], &hx[1], p, pd_seed(0))?,
                balanced_pd(&hx[2], &hx[3], p, pd_seed(1))?,
                balanced_pd(&hy[0], &hy[1], p, pd_seed(2))?,
                balanced_pd(&hy[2], &hy[3], p, pd_seed(3))?,
            ]
        }
        FrontEndKind::AlamoutiInt => {
            let h = hybrid_90(signal, lo)?;
            vec![balanced_pd(&h[0], &h[1], p, pd_seed(0))?, balanced_pd(&h[2], &h[3], p, pd_seed(1))?]
        }
        FrontEndKind::AlamoutiHet => {
            let (a, b) = coupler_2x2(signal, lo)?;
            vec![balanced_pd(&a, &b, p, pd_seed(0))?]
        }
        FrontEndKind::AlamoutiHetSinglePd | FrontEndKind::CanoHetSingle => {
            let (a, _) = coupler_2x2(signal, lo)?;
            vec![photodiode(&a, p, pd_seed(0))?]
        }
        FrontEndKind::GlanceHet => {
            let (a, _) = coupler_2x2(signal, lo)?;
            let (h, v) = pbs(&a);
            vec![photodiode(&h, p, pd_seed(0))?, photodiode(&v, p, pd_seed(1))?]
        }
        FrontEndKind::CanoInt3x3 => {
            let o = coupler_3x3(Some(signal), Some(lo), None)?;
            (0..3).map(|k| photodiode(&o[k], p, pd_seed(k))).collect::<Result<_>>()?
        }
        FrontEndKind::CiaramellaSq | FrontEndKind::TabaresHet => {
            let (lh, lv) = pbs(lo);
            let o = coupler_3x3(Some(signal), Some(&lh), Some(&lv))?;
            (0..3).map(|k| photodiode(&o[k], p, pd_seed(k))).collect::<Result<_>>()?
        }
    };
    debug_assert_eq!(currents.len(), kind.stream_count());
    Ok(ElectricalOutputs { currents, sample_rate: signal.sample_rate, if_hz })
}
