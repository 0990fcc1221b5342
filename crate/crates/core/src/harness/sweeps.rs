use rayon::prelude::*;
use serde::Serialize;

use super::config::ScenarioConfig;
use super::run::{find_sensitivity, run_point, Sensitivity, SweepResultRow};
use crate::error::{Error, Result};
use crate::frontends::FrontEndKind;
use crate::theory::ppb_from_power;

fn map_points<I, O, F>(items: &[I], parallel: bool, f: F) -> Result<Vec<O>>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> Result<O> + Sync + Send,
{
    if parallel {
        items.par_iter().map(&f).collect()
    } else {
        items.iter().map(&f).collect()
    }
}

/// Orders rows by (rx power, LO power, RIN) so output does not depend on
/// evaluation order.
pub fn sort_rows(rows: &mut [SweepResultRow]) {
    let rin = |r: &SweepResultRow| r.rin_db_hz.unwrap_or(f64::NEG_INFINITY);
    rows.sort_by(|a, b| {
        a.rx_power_dbm
            .total_cmp(&b.rx_power_dbm)
            .then(a.lo_power_dbm.total_cmp(&b.lo_power_dbm))
            .then(rin(a).total_cmp(&rin(b)))
    });
}

/// BER at each received power.
pub fn sweep(cfg: &ScenarioConfig, powers_dbm: &[f64], parallel: bool) -> Result<Vec<SweepResultRow>> {
    cfg.validate()?;
    let mut rows = map_points(powers_dbm, parallel, |&p| run_point(cfg, p))?;
    sort_rows(&mut rows);
    Ok(rows)
}

fn with_lo(cfg: &ScenarioConfig, lo_dbm: f64, rin: Option<f64>) -> ScenarioConfig {
    let mut c = cfg.clone();
    c.lo.power_dbm = lo_dbm;
    c.lo.rin_db_hz = rin;
    c
}

/// BER versus LO power at a fixed received power; without one, the
/// sensitivity of `cfg` at its own LO power is used.
pub fn lo_sweep(cfg: &ScenarioConfig, lo_dbm: &[f64], rx_power_dbm: Option<f64>, parallel: bool) -> Result<Vec<SweepResultRow>> {
    cfg.validate()?;
    let p = match rx_power_dbm {
        Some(p) => p,
        None => find_sensitivity(cfg)?.power_dbm,
    };
    let mut rows = map_points(lo_dbm, parallel, |&l| run_point(&with_lo(cfg, l, cfg.lo.rin_db_hz), p))?;
    sort_rows(&mut rows);
    Ok(rows)
}

/// Sensitivity row of one grid cell; a missing crossing yields NaN power.
fn cell(cfg: &ScenarioConfig) -> Result<SweepResultRow> {
    match find_sensitivity(cfg) {
        Ok(Sensitivity { row, .. }) => Ok(row),
        Err(Error::Bracket(_)) => Ok(SweepResultRow {
            arch: cfg.architecture.label().to_string(),
            format: cfg.tx.format.label().to_string(),
            bitrate_gbps: cfg.tx.bit_rate_gbps,
            rx_power_dbm: f64::NAN,
            lo_power_dbm: cfg.lo.power_dbm,
            rin_db_hz: cfg.lo.rin_db_hz,
            ber: f64::NAN,
            errors: 0,
            bits: 0,
            ppb: f64::NAN,
            seed: super::run::point_seed(cfg),
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RinSummary {
    /// `None` is the RIN-free baseline.
    pub rin_db_hz: Option<f64>,
    pub optimum_lo_dbm: f64,
    pub sensitivity_dbm: f64,
    pub penalty_db: f64,
    /// Lowest LO power within `RIN_PLATEAU_DB` of this RIN's optimum.
    pub min_lo_dbm: f64,
}

pub const RIN_PLATEAU_DB: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RinMap {
    pub rows: Vec<SweepResultRow>,
    pub summary: Vec<RinSummary>,
}

/// Sensitivity over a (RIN, LO power) grid, plus a RIN-free baseline
/// over the same LO powers.
pub fn rin_map(cfg: &ScenarioConfig, rin_db_hz: &[f64], lo_dbm: &[f64], parallel: bool) -> Result<RinMap> {
    cfg.validate()?;
    if !matches!(cfg.architecture, FrontEndKind::AlamoutiHetSinglePd | FrontEndKind::CanoHetSingle) {
        return Err(Error::Config(format!(
            "the RIN study uses the single-ended heterodyne receivers, not {}",
            cfg.architecture
        )));
    }
    let rins: Vec<Option<f64>> = std::iter::once(None).chain(rin_db_hz.iter().map(|&r| Some(r))).collect();
    let grid: Vec<(Option<f64>, f64)> = rins.iter().flat_map(|&r| lo_dbm.iter().map(move |&l| (r, l))).collect();
    let mut all = map_points(&grid, parallel, |&(r, l)| cell(&with_lo(cfg, l, r)))?;
    all.sort_by(|a, b| {
        let k = |r: &SweepResultRow| r.rin_db_hz.unwrap_or(f64::NEG_INFINITY);
        k(a).total_cmp(&k(b)).then(a.lo_power_dbm.total_cmp(&b.lo_power_dbm))
    });
    let summarise = |r: Option<f64>| -> Option<(f64, f64, f64)> {
        let cells: Vec<&SweepResultRow> = all.iter().filter(|c| c.rin_db_hz == r && c.rx_power_dbm.is_finite()).collect();
        let best = cells.iter().min_by(|a, b| a.rx_power_dbm.total_cmp(&b.rx_power_dbm))?;
        let min_lo = cells
            .iter()
            .filter(|c| c.rx_power_dbm - best.rx_power_dbm <= RIN_PLATEAU_DB)
            .map(|c| c.lo_power_dbm)
            .fold(f64::INFINITY, f64::min);
        Some((best.lo_power_dbm, best.rx_power_dbm, min_lo))
    };
    let base = summarise(None).map_or(f64::NAN, |s| s.1);
    let summary = rins
        .iter()
        .filter_map(|&r| {
            summarise(r).map(|(lo, s, min_lo)| RinSummary {
                rin_db_hz: r,
                optimum_lo_dbm: lo,
                sensitivity_dbm: s,
                penalty_db: s - base,
                min_lo_dbm: min_lo,
            })
        })
        .collect();
    let rows = all.into_iter().filter(|r| r.rin_db_hz.is_some()).collect();
    Ok(RinMap { rows, summary })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderStage {
    pub name: String,
    pub sensitivity_dbm: f64,
    pub ppb: f64,
    /// Change from the previous stage.
    pub delta_db: f64,
    pub row: SweepResultRow,
}

/// Runs each named stage and reports sensitivity deltas in order.
pub fn run_stages(stages: &[(String, ScenarioConfig)], parallel: bool) -> Result<Vec<LadderStage>> {
    let found = map_points(stages, parallel, |(_, c)| find_sensitivity(c))?;
    let mut prev = None;
    Ok(stages
        .iter()
        .zip(found)
        .map(|((name, c), s)| {
            let delta = prev.map_or(0.0, |p| s.power_dbm - p);
            prev = Some(s.power_dbm);
            LadderStage {
                name: name.clone(),
                sensitivity_dbm: s.power_dbm,
                ppb: ppb_from_power(s.power_dbm, c.tx.bit_rate(), c.wavelength()),
                delta_db: delta,
                row: s.row,
            }
        })
        .collect())
}
