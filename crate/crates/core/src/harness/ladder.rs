use super::config::ScenarioConfig;
use crate::frontends::FrontEndKind;
use crate::theory::ModulationFormat;
use crate::txchain::{Coding, OfdmParams, TxConfig};

/// Pilot power relative to data power for a 0.5 dB power overhead.
pub const LADDER_PILOT_REL_POWER: f64 = 0.122;
pub const LADDER_CP_FRACTION: f64 = 0.05;
pub const LADDER_LINK_KM: f64 = 120.0;
pub const LADDER_CLIP_DB: f64 = 5.0;
pub const LADDER_CSPR_DB: f64 = -8.0;
pub const LADDER_ETA: f64 = 0.4;
pub const LADDER_INSERTION_DB: f64 = 1.5;

fn ideal_ofdm() -> OfdmParams {
    OfdmParams { pilot_tone: false, cp_samples: Some(0), ..Default::default() }
}

/// Stage sequence from the ideal dual-polarisation receiver to the
/// practical Alamouti heterodyne receiver. Each stage adds one change to
/// the previous one; `base` supplies LO, photodiode noise, bits and seed.
pub fn ladder_stages(base: &ScenarioConfig) -> Vec<(String, ScenarioConfig)> {
    let mut stages = Vec::new();
    let mut c = base.clone();
    c.architecture = FrontEndKind::Ppdi;
    c.tx = TxConfig { format: ModulationFormat::DpQpsk, bit_rate_gbps: base.tx.bit_rate_gbps, ..Default::default() };
    c.link = Default::default();
    c.pd.quantum_efficiency = 1.0;
    c.insertion_loss_db = 0.0;
    c.if_hz = None;
    stages.push(("PPDI DP-QPSK".to_string(), c.clone()));

    c.tx.ofdm = Some(ideal_ofdm());
    stages.push(("OFDM".into(), c.clone()));

    c.architecture = FrontEndKind::AlamoutiInt;
    c.tx.format = ModulationFormat::Qpsk;
    c.tx.coding = Coding::Alamouti;
    stages.push(("Alamouti".into(), c.clone()));

    c.architecture = FrontEndKind::AlamoutiHet;
    stages.push(("heterodyne".into(), c.clone()));

    c.pd.quantum_efficiency = LADDER_ETA;
    stages.push(("quantum efficiency 0.4".into(), c.clone()));

    c.insertion_loss_db = LADDER_INSERTION_DB;
    stages.push(("insertion loss".into(), c.clone()));

    if let Some(o) = c.tx.ofdm.as_mut() {
        o.pilot_tone = true;
        o.pilot_rel_power = LADDER_PILOT_REL_POWER;
    }
    c.rx.pilot_phase = true;
    stages.push(("pilot tone".into(), c.clone()));

    if let Some(o) = c.tx.ofdm.as_mut() {
        o.cp_samples = None;
        o.cp_fraction = LADDER_CP_FRACTION;
    }
    c.link.length_km = LADDER_LINK_KM;
    stages.push(("cyclic prefix".into(), c.clone()));

    c.tx.clipping_db = Some(LADDER_CLIP_DB);
    stages.push(("clipping".into(), c.clone()));

    c.tx.cspr_db = Some(LADDER_CSPR_DB);
    stages.push(("carrier".into(), c));
    stages
}
