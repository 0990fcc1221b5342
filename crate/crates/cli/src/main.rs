use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use cohpon::harness::{
    find_sensitivity, ladder_stages, lo_sweep, rin_map, run_stages, sweep, write_json, write_rows, OutputFormat,
    ScenarioConfig,
};
use cohpon::theory::{theory_table, TABLE_FORMATS};
use cohpon::Error;

#[derive(Parser)]
#[command(name = "cohpon", version, about = "Coherent PON receiver sensitivity simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Bits per Monte-Carlo point (overrides the config).
    #[arg(long, global = true)]
    bits: Option<usize>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Evaluate sweep points one at a time.
    #[arg(long, global = true)]
    serial: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Required photons per bit for each format at the target BER.
    Theory {
        #[arg(long, default_value_t = 4e-3)]
        target_ber: f64,
    },
    /// Received power at the target BER.
    Sensitivity { config: PathBuf },
    /// Staged sensitivity from the ideal PPDI receiver to the practical Alamouti receiver.
    Ladder { config: PathBuf },
    /// BER over received power, `--power a:b:step` in dBm.
    Sweep {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        power: String,
    },
    /// BER over LO power, `--lo a:b:step` in dBm, at the config's sensitivity.
    LoSweep {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lo: String,
        /// Fixed received power instead of the sensitivity point.
        #[arg(long, allow_hyphen_values = true)]
        rx_power: Option<f64>,
    },
    /// Sensitivity over a RIN × LO power grid, comma-separated lists.
    RinMap {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        rin: String,
        #[arg(long, allow_hyphen_values = true)]
        lo: String,
    },
}

fn bad(msg: String) -> anyhow::Error {
    Error::Config(msg).into()
}

fn number(p: &str, whole: &str) -> Result<f64> {
    p.trim().parse::<f64>().map_err(|_| bad(format!("bad number '{p}' in '{whole}'")))
}

fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad(format!("range '{s}' must be a:b:step")));
    }
    let v: Vec<f64> = parts.iter().map(|p| number(p, s)).collect::<Result<_>>()?;
    let (a, b, step) = (v[0], v[1], v[2]);
    if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(bad(format!("range '{s}' needs a <= b and step > 0")));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| a + i as f64 * step).collect())
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    if s.contains(':') {
        return parse_range(s);
    }
    s.split(',').map(|p| number(p, s)).collect()
}

fn load(path: &PathBuf, c: &Common) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::load(path)?;
    if let Some(b) = c.bits {
        cfg.bits = b;
    }
    if let Some(s) = c.seed {
        cfg.master_seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sink(c: &Common) -> Result<Box<dyn Write>> {
    Ok(match &c.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    let c = &cli.common;
    let format: OutputFormat = c.format.parse()?;
    let parallel = !c.serial;
    match &cli.cmd {
        Command::Theory { target_ber } => {
            let rows = theory_table(*target_ber, &TABLE_FORMATS)?;
            let mut w = sink(c)?;
            match format {
                OutputFormat::Json => write_json(&rows, &mut w)?,
                OutputFormat::Csv => {
                    writeln!(w, "format,required_ppb,spectral_efficiency")?;
                    for r in &rows {
                        writeln!(w, "{},{:.4},{}", r.format.label(), r.required_ppb, r.spectral_efficiency)?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Sensitivity { config } => {
            let cfg = load(config, c)?;
            let s = find_sensitivity(&cfg)?;
            eprintln!("{} {}: {:.2} dBm, {:.2} PPB", cfg.architecture, cfg.tx.format, s.power_dbm, s.ppb);
            let mut w = sink(c)?;
            write_rows(&[s.row], format, &mut w)?;
        }
        Command::Ladder { config } => {
            let cfg = load(config, c)?;
            let stages = run_stages(&ladder_stages(&cfg), parallel)?;
            for s in &stages {
                eprintln!("{:24} {:8.2} dBm {:7.2} PPB {:+6.2} dB", s.name, s.sensitivity_dbm, s.ppb, s.delta_db);
            }
            let mut w = sink(c)?;
            match format {
                OutputFormat::Json => write_json(&stages, &mut w)?,
                OutputFormat::Csv => {
                    let rows: Vec<_> = stages.into_iter().map(|s| s.row).collect();
                    write_rows(&rows, format, &mut w)?;
                }
            }
        }
        Command::Sweep { config, power } => {
            let cfg = load(config, c)?;
            let rows = sweep(&cfg, &parse_range(power)?, parallel)?;
            write_rows(&rows, format, sink(c)?)?;
        }
        Command::LoSweep { config, lo, rx_power } => {
            let cfg = load(config, c)?;
            let rows = lo_sweep(&cfg, &parse_range(lo)?, *rx_power, parallel)?;
            write_rows(&rows, format, sink(c)?)?;
        }
        Command::RinMap { config, rin, lo } => {
            let cfg = load(config, c)?;
            let m = rin_map(&cfg, &parse_list(rin)?, &parse_list(lo)?, parallel)?;
            for s in &m.summary {
                let r = s.rin_db_hz.map_or("off".to_string(), |r| format!("{r} dB/Hz"));
                eprintln!(
                    "RIN {r:>12}: optimum LO {:5.1} dBm, sensitivity {:7.2} dBm, penalty {:5.2} dB, min LO {:5.1} dBm",
                    s.optimum_lo_dbm, s.sensitivity_dbm, s.penalty_db, s.min_lo_dbm
                );
            }
            let mut w = sink(c)?;
            match format {
                OutputFormat::Json => write_json(&m, &mut w)?,
                OutputFormat::Csv => write_rows(&m.rows, format, &mut w)?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Config(_)) => ExitCode::from(2),
                Some(Error::Bracket(_)) => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
