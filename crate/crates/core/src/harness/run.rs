use serde::Serialize;

use super::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::frontends::detect;
use crate::optics::{edfa, laser_field, propagate};
use crate::rxdsp::{demodulate, DecisionReport};
use crate::scalar::Real;
use rand::Rng;

use crate::sigcore::{de_bruijn, derive_seed, stream_rng, BitSequence};
use crate::theory::ppb_from_power;
use crate::txchain::transmit;

/// Largest simulated block, in bits over all tributaries.
pub const MAX_BLOCK_BITS: usize = 1 << 16;
/// Counted errors required at a reported sensitivity point.
pub const MIN_ERRORS: u64 = 500;
/// Upper bound on the bit count when topping up errors.
pub const MAX_TOPUP_BITS: usize = 1 << 23;
pub const SEARCH_RANGE_DBM: (f64, f64) = (-70.0, 0.0);
pub const SEARCH_RESOLUTION_DB: f64 = 0.05;
const WHITENING_SEED: u64 = 0x5eed_0fdf;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResultRow {
    pub arch: String,
    pub format: String,
    pub bitrate_gbps: f64,
    pub rx_power_dbm: f64,
    pub lo_power_dbm: f64,
    pub rin_db_hz: Option<f64>,
    pub ber: f64,
    pub errors: u64,
    pub bits: u64,
    pub ppb: f64,
    pub seed: u64,
}

/// Seed shared by every power level of one scenario, so BER-vs-power curves
/// use common random numbers.
pub fn point_seed(cfg: &ScenarioConfig) -> u64 {
    let key = format!(
        "{}/{}/{}/lo{:.4}/rin{:?}",
        cfg.architecture.label(),
        cfg.tx.format.label(),
        cfg.tx.bit_rate_gbps,
        cfg.lo.power_dbm,
        cfg.lo.rin_db_hz
    );
    derive_seed(cfg.master_seed, &key)
}

/// Bits per tributary in one block and the number of blocks covering
/// `bits`.
fn blocks(cfg: &ScenarioConfig, bits: usize) -> (u32, usize) {
    let per_block = bits.min(MAX_BLOCK_BITS) / cfg.tx.tributaries();
    let order = usize::BITS - 1 - per_block.leading_zeros();
    let block_bits = (1usize << order) * cfg.tx.tributaries();
    (order, bits.div_ceil(block_bits))
}

/// De Bruijn tributaries for one block. OFDM payloads are XOR-whitened
/// with a fixed keystream: the raw sequences hold long periodic runs that
/// would map onto adjacent subcarriers and give impulsive frames.
fn block_tributaries(order: u32, trib: usize, index: usize, whiten: bool) -> Result<Vec<BitSequence>> {
    let n = 1usize << order;
    let shift = index.wrapping_mul(0x9e37) % n;
    let seqs = if trib == 2 {
        vec![de_bruijn(order, shift)?, de_bruijn(order, shift + n / 2)?]
    } else {
        vec![de_bruijn(order, shift)?]
    };
    if !whiten {
        return Ok(seqs);
    }
    seqs.into_iter()
        .enumerate()
        .map(|(t, s)| {
            let mut rng = stream_rng(WHITENING_SEED, &format!("whiten/{index}/{t}"));
            BitSequence::new(s.as_slice().iter().map(|&b| b ^ rng.random::<bool>() as u8).collect())
        })
        .collect()
}

/// Simulates one block end to end.
pub fn simulate_block<T: Real>(cfg: &ScenarioConfig, rx_power_dbm: f64, order: u32, index: usize, seed: u64) -> Result<DecisionReport> {
    let seed = derive_seed(seed, &format!("block{index}"));
    let tribs = block_tributaries(order, cfg.tx.tributaries(), index, cfg.tx.ofdm.is_some())?;
    let frame = transmit::<T>(&cfg.tx, &tribs)?;
    let lambda = cfg.wavelength();
    let mut sig = propagate(&frame.waveform, &cfg.link, lambda)?;
    let ps = sig.power();
    if !(ps > 0.0) {
        return Err(Error::Parameter("signal vanished in the link".into()));
    }
    sig.scale((crate::consts::dbm_to_watts(rx_power_dbm) / ps).sqrt());
    if let Some(a) = &cfg.preamp {
        sig = edfa(&sig, a, lambda, derive_seed(seed, "preamp"))?;
    }
    sig.attenuate_db(cfg.insertion_loss_db);
    let f_if = cfg.intermediate_frequency()?;
    let mut lo_p = cfg.lo.clone();
    lo_p.pol_angle_rad = cfg.architecture.lo_pol_angle();
    let lo = laser_field::<T>(&lo_p, sig.len(), sig.sample_rate, f_if, derive_seed(seed, "lo"))?;
    let out = detect(cfg.architecture, &sig, &lo, &cfg.pd, f_if, derive_seed(seed, "detect"))?;
    demodulate(cfg.architecture, &out, &frame, &cfg.tx, &cfg.rx)
}

fn row(cfg: &ScenarioConfig, rx_power_dbm: f64, rep: DecisionReport, seed: u64) -> SweepResultRow {
    SweepResultRow {
        arch: cfg.architecture.label().to_string(),
        format: cfg.tx.format.label().to_string(),
        bitrate_gbps: cfg.tx.bit_rate_gbps,
        rx_power_dbm,
        lo_power_dbm: cfg.lo.power_dbm,
        rin_db_hz: cfg.lo.rin_db_hz,
        ber: rep.ber(),
        errors: rep.bit_errors,
        bits: rep.bits_compared,
        ppb: ppb_from_power(rx_power_dbm, cfg.tx.bit_rate(), cfg.wavelength()),
        seed,
    }
}

/// Counts errors over `bits` bits (rounded up to whole blocks), then keeps
/// adding blocks until `min_errors` are seen or `max_bits` are spent.
pub fn run_point_with<T: Real>(
    cfg: &ScenarioConfig,
    rx_power_dbm: f64,
    bits: usize,
    min_errors: u64,
    max_bits: usize,
) -> Result<SweepResultRow> {
    cfg.validate()?;
    let seed = point_seed(cfg);
    let (order, n) = blocks(cfg, bits);
    let mut rep = DecisionReport::default();
    let mut i = 0;
    while i < n || (rep.bit_errors < min_errors && (rep.bits_compared as usize) < max_bits) {
        rep = rep.merge(simulate_block::<T>(cfg, rx_power_dbm, order, i, seed)?);
        i += 1;
    }
    Ok(row(cfg, rx_power_dbm, rep, seed))
}

/// BER at one received power with `cfg.bits` bits.
pub fn run_point(cfg: &ScenarioConfig, rx_power_dbm: f64) -> Result<SweepResultRow> {
    run_point_with::<f64>(cfg, rx_power_dbm, cfg.bits, 0, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sensitivity {
    pub power_dbm: f64,
    pub ppb: f64,
    /// Measurement at the returned power, with at least `MIN_ERRORS` errors
    /// where the bit budget allows.
    pub row: SweepResultRow,
}

/// Bisects received power for the BER crossing of `cfg.target_ber`.
pub fn find_sensitivity(cfg: &ScenarioConfig) -> Result<Sensitivity> {
    find_sensitivity_in(cfg, SEARCH_RANGE_DBM)
}

pub fn find_sensitivity_in(cfg: &ScenarioConfig, range: (f64, f64)) -> Result<Sensitivity> {
    cfg.validate()?;
    let ber = |p: f64| run_point(cfg, p).map(|r| r.ber);
    let (mut lo, mut hi) = range;
    let (b_lo, b_hi) = (ber(lo)?, ber(hi)?);
    if !(b_lo > cfg.target_ber && b_hi <= cfg.target_ber) {
        return Err(Error::Bracket(format!(
            "{} / {}: BER {b_lo:.3e} at {lo} dBm and {b_hi:.3e} at {hi} dBm do not bracket {}",
            cfg.architecture, cfg.tx.format, cfg.target_ber
        )));
    }
    while hi - lo > SEARCH_RESOLUTION_DB {
        let mid = 0.5 * (lo + hi);
        if ber(mid)? > cfg.target_ber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let row = run_point_with::<f64>(cfg, p, cfg.bits, MIN_ERRORS, MAX_TOPUP_BITS)?;
    Ok(Sensitivity { power_dbm: p, ppb: row.ppb, row })
}
