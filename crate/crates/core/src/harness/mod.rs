//! Scenario assembly, sensitivity search, sweeps and result output.

mod config;
mod ladder;
mod output;
mod run;
mod sweeps;

pub use config::{ScenarioConfig, DEFAULT_BITS, DEFAULT_TARGET_BER, MIN_BITS};
pub use ladder::{
    ladder_stages, LADDER_CLIP_DB, LADDER_CP_FRACTION, LADDER_CSPR_DB, LADDER_ETA, LADDER_INSERTION_DB, LADDER_LINK_KM,
    LADDER_PILOT_REL_POWER,
};
pub use output::{write_json, write_rows, OutputFormat, CSV_HEADER};
pub use run::{
    find_sensitivity, find_sensitivity_in, point_seed, run_point, run_point_with, simulate_block, Sensitivity,
    SweepResultRow, MAX_BLOCK_BITS, MAX_TOPUP_BITS, MIN_ERRORS, SEARCH_RANGE_DBM, SEARCH_RESOLUTION_DB,
};
pub use sweeps::{lo_sweep, rin_map, run_stages, sort_rows, sweep, LadderStage, RinMap, RinSummary, RIN_PLATEAU_DB};
