//! Acceptance suite. One PASS/FAIL line per criterion, indented details
//! below it.
//!
//! `ACCEPTANCE_BITS` sets the Monte-Carlo block size (default 2^16).
//! Below 2^19 bits the dB tolerances of Monte-Carlo criteria are widened
//! by `MC_ALLOWANCE_DB`. `ACCEPTANCE_STRICT=1` turns failures into a
//! nonzero exit status.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use cohpon::frontends::{photodiode, PdParams};
use cohpon::harness::{
    find_sensitivity, ladder_stages, lo_sweep, rin_map, run_point_with, run_stages, sweep, write_rows,
    LadderStage, OutputFormat, ScenarioConfig,
};
use cohpon::optics::{coupler_2x2, coupler_3x3, hybrid_90, laser_field, pbs, LaserParams};
use cohpon::rxdsp::{ofdm_demodulate, square_sum_combine};
use cohpon::sigcore::{apply_jones, de_bruijn, jones_rotation, DualPolWaveform};
use cohpon::theory::{ppb_from_power, theory_table, ModulationFormat, TABLE_FORMATS};
use cohpon::txchain::{ofdm_modulate_stream, OfdmParams};

type C = Complex<f64>;

const HD_FEC: f64 = 4e-3;
const DEFAULT_BITS: usize = 1 << 16;
const FULL_BITS: usize = 1 << 19;
const MC_ALLOWANCE_DB: f64 = 0.25;
const RIN_BITS: usize = 1 << 15;

struct Suite {
    bits: usize,
    allowance: f64,
    outcomes: Vec<bool>,
}

impl Suite {
    fn report(&mut self, id: usize, name: &str, checks: &[(bool, String)]) {
        let ok = !checks.is_empty() && checks.iter().all(|c| c.0);
        println!("{} {id}. {name}", if ok { "PASS" } else { "FAIL" });
        for (pass, line) in checks {
            println!("    [{}] {line}", if *pass { "ok" } else { "--" });
        }
        self.outcomes.push(ok);
    }

    fn tol(&self, db: f64) -> f64 {
        db + self.allowance
    }
}

fn config(name: &str, bits: usize) -> ScenarioConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    let mut c = ScenarioConfig::load(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
    c.bits = bits;
    c
}

fn db_ratio(a: f64, b: f64) -> f64 {
    10.0 * (a / b).log10()
}

fn theory(s: &mut Suite) {
    let expect: BTreeMap<&str, (f64, f64)> = [
        ("PSwitch-QPSK", (2.9, 0.3)),
        ("DP-BPSK", (3.5, 0.1)),
        ("DP-QPSK", (3.5, 0.1)),
        ("DBPSK", (4.1, 0.1)),
        ("16-PPM", (4.1, 0.3)),
        ("4-PPM", (6.9, 0.3)),
        ("OOK", (7.0, 0.1)),
        ("4-PAM", (23.9, 0.3)),
    ]
    .into_iter()
    .collect();
    let mut checks = Vec::new();
    let rows = theory_table(HD_FEC, &TABLE_FORMATS).unwrap();
    let qpsk = theory_table(HD_FEC, &[ModulationFormat::Qpsk]).unwrap();
    for r in rows.iter().chain(&qpsk) {
        let label = r.format.label();
        let (want, tol) = expect.get(label).copied().unwrap_or((3.5, 0.1));
        let pass = (r.required_ppb - want).abs() <= tol;
        checks.push((pass, format!("{label}: {:.3} PPB, expected {want} ± {tol}", r.required_ppb)));
    }
    s.report(1, "theory table", &checks);
}

fn ppb_anchors(s: &mut Suite) {
    let anchors = [(-41.0, 10.7e9, 58.0), (-38.0, 10e9, 123.6), (-49.0, 1.25e9, 78.5)];
    let checks: Vec<_> = anchors
        .iter()
        .map(|&(dbm, rate, want)| {
            let got = ppb_from_power(dbm, rate, 1550e-9);
            ((got - want).abs() <= 1.0, format!("{dbm} dBm at {} Gb/s: {got:.2} PPB, expected {want} ± 1", rate / 1e9))
        })
        .collect();
    s.report(2, "photons-per-bit conversions", &checks);
}

struct Measured {
    name: &'static str,
    cfg: ScenarioConfig,
    power_dbm: f64,
    ppb: f64,
}

fn measure(name: &'static str, cfg: ScenarioConfig) -> Measured {
    let r = find_sensitivity(&cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
    Measured { name, cfg, power_dbm: r.power_dbm, ppb: r.ppb }
}

fn ppb_check(s: &Suite, m: &Measured, want: f64, tol_db: f64) -> (bool, String) {
    let err = db_ratio(m.ppb, want);
    let tol = s.tol(tol_db);
    (err.abs() <= tol, format!("{}: {:.2} PPB, expected {want} ({err:+.2} dB, tolerance {tol:.2} dB)", m.name, m.ppb))
}

fn with_format(mut c: ScenarioConfig, f: ModulationFormat) -> ScenarioConfig {
    c.tx.format = f;
    c
}

fn shot_noise_comparison(s: &mut Suite) -> Measured {
    let b = s.bits;
    let cano_int = config("cano_int_ps_qpsk.toml", b);
    let cases = [
        (measure("Alamouti-IntRx QPSK", config("alamouti_int_qpsk.toml", b)), 7.0),
        (measure("Alamouti-HetRx QPSK", config("alamouti_het_qpsk.toml", b)), 14.0),
        (measure("Tabares-HetRx QPSK", config("tabares_qpsk.toml", b)), 14.0),
        (measure("Cano-IntRx PS-QPSK", cano_int), 14.0),
        (measure("Glance-HetRx QPSK", config("glance_qpsk.toml", b)), 19.5),
        (measure("Cano-HetRx PS-QPSK", config("cano_het_ps_qpsk.toml", b)), 28.0),
        (measure("Ciaramella-Rx OOK", config("ciaramella_ook.toml", b)), 28.0),
    ];
    let checks: Vec<_> = cases.iter().map(|(m, want)| ppb_check(s, m, *want, 0.5)).collect();
    s.report(3, "shot-noise-limited receiver comparison", &checks);
    cases.into_iter().last().unwrap().0
}

fn practical_formats(s: &mut Suite, ladder: &[LadderStage], stages: &[(String, ScenarioConfig)], ciaramella: Measured) -> Vec<Measured> {
    let b = s.bits;
    let from_ladder = |name: &'static str, k: usize| Measured {
        name,
        cfg: stages[k].1.clone(),
        power_dbm: ladder[k].sensitivity_dbm,
        ppb: ladder[k].ppb,
    };
    let cases = vec![
        (from_ladder("PPDI OFDM DP-QPSK", 1), 3.85),
        (from_ladder("Alamouti-IntRx OFDM", 2), 7.8),
        (from_ladder("Alamouti-HetRx OFDM", 3), 15.5),
        (measure("Cano-IntRx PS-DBPSK", with_format(config("cano_int_ps_qpsk.toml", b), ModulationFormat::Dbpsk)), 17.4),
        (measure("Tabares-HetRx DBPSK", config("tabares_dbpsk.toml", b)), 17.4),
        (measure("Glance-HetRx DBPSK", config("glance_dbpsk.toml", b)), 21.4),
        (measure("Cano-HetRx PS-DBPSK", config("rin_cano_het_ps.toml", b)), 34.7),
        (ciaramella, 28.0),
    ];
    let checks: Vec<_> = cases.iter().map(|(m, want)| ppb_check(s, m, *want, 0.5)).collect();
    s.report(4, "practical-format receiver comparison", &checks);
    cases.into_iter().skip(2).map(|c| c.0).collect()
}

fn penalty_ladder(s: &mut Suite, ladder: &[LadderStage]) {
    let want = [(0.3, 0.15), (3.0, 0.2), (3.0, 0.2), (0.9, 0.3), (1.5, 0.3), (0.5, 0.3), (0.6, 0.3), (0.7, 0.3), (0.6, 0.3)];
    let mut checks = Vec::new();
    let first = &ladder[0];
    let tol = s.tol(0.3);
    checks.push((
        (first.sensitivity_dbm + 53.1).abs() <= tol,
        format!("{}: {:.2} dBm, expected -53.1 ± {tol:.2}", first.name, first.sensitivity_dbm),
    ));
    for (st, (d, t)) in ladder[1..].iter().zip(want) {
        let tol = s.tol(t);
        checks.push((
            (st.delta_db - d).abs() <= tol,
            format!("{}: {:+.2} dB to {:.2} dBm, expected {d:+} ± {tol:.2}", st.name, st.delta_db, st.sensitivity_dbm),
        ));
    }
    let het = ladder[3].sensitivity_dbm;
    let tol = s.tol(0.4);
    checks.push(((het + 46.8).abs() <= tol, format!("cumulative after heterodyne: {het:.2} dBm, expected -46.8 ± {tol:.2}")));
    s.report(5, "penalty ladder", &checks);
}

fn lo_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(f64::from).collect()
}

/// Lowest LO power from which BER stays within `factor` of the target.
fn lowest_working_lo(m: &Measured, grid: &[f64], factor: f64) -> f64 {
    let rows = lo_sweep(&m.cfg, grid, Some(m.power_dbm), true).unwrap();
    let limit = factor * m.cfg.target_ber;
    let mut lowest = f64::INFINITY;
    for r in rows.iter().rev() {
        if r.ber > limit {
            break;
        }
        lowest = r.lo_power_dbm;
    }
    lowest
}

fn lo_study(s: &mut Suite, archs: &[Measured]) {
    let mut checks = Vec::new();
    for m in archs {
        let mut floor = m.cfg.clone();
        floor.pd.thermal_noise = false;
        let s0 = find_sensitivity(&floor).unwrap().power_dbm;
        let mut at20 = m.cfg.clone();
        at20.lo.power_dbm = s0 + 20.0;
        let tol = s.tol(0.1);
        checks.push(match find_sensitivity(&at20) {
            Ok(r) => {
                let pen = r.power_dbm - s0;
                (pen.abs() <= tol, format!("{}: shot floor {s0:.2} dBm, {pen:+.2} dB at LO {:.1} dBm (tolerance {tol:.2} dB)", m.name, at20.lo.power_dbm))
            }
            Err(e) => (false, format!("{}: shot floor {s0:.2} dBm, no sensitivity at LO {:.1} dBm: {e}", m.name, at20.lo.power_dbm)),
        });
    }
    let grid = lo_grid(-10, 20);
    let lowest: Vec<(&str, f64)> = archs.iter().map(|m| (m.name, lowest_working_lo(m, &grid, 1.25))).collect();
    let listing = lowest.iter().map(|(n, l)| format!("{n} {l}")).collect::<Vec<_>>().join(", ");
    let is_best = |n: &str| ["Alamouti-HetRx", "Cano-IntRx", "Tabares-HetRx"].iter().any(|p| n.starts_with(p));
    let worst_best = lowest.iter().filter(|(n, _)| is_best(n)).map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
    let best_rest = lowest.iter().filter(|(n, _)| !is_best(n)).map(|x| x.1).fold(f64::INFINITY, f64::min);
    let cia = lowest.iter().find(|(n, _)| n.starts_with("Ciaramella")).map_or(f64::NAN, |x| x.1);
    let others = lowest.iter().filter(|(n, _)| !n.starts_with("Ciaramella")).map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
    checks.push((cia > others, format!("lowest LO (dBm) holding BER at the sensitivity: {listing}")));
    checks.push((worst_best <= best_rest, "Alamouti-HetRx, Cano-IntRx and Tabares-HetRx need the least LO".into()));
    s.report(6, "LO power study", &checks);
}

fn rin_study(s: &mut Suite) {
    let bits = RIN_BITS.min(s.bits);
    let grid = lo_grid(-20, 20);
    let rins = [-170.0, -160.0, -150.0, -140.0, -130.0];
    let spd = config("rin_alamouti_spd.toml", bits);
    let map = rin_map(&spd, &rins, &grid, true).unwrap();
    let mut checks = Vec::new();
    let find = |r: f64| map.summary.iter().find(|x| x.rin_db_hz == Some(r)).unwrap();
    for (r, pen, lo) in [(-150.0, 1.0, 8.0), (-140.0, 2.9, 5.0), (-130.0, 5.4, 0.0)] {
        let x = find(r);
        let tol = s.tol(0.5);
        checks.push((
            (x.penalty_db - pen).abs() <= tol && (x.optimum_lo_dbm - lo).abs() <= 1.0,
            format!(
                "RIN {r} dB/Hz: penalty {:.2} dB at LO {} dBm, expected {pen} ± {tol:.2} dB at {lo} ± 1 dBm",
                x.penalty_db, x.optimum_lo_dbm
            ),
        ));
    }
    for r in [-170.0, -160.0] {
        let x = find(r);
        let tol = s.tol(0.2);
        checks.push((x.penalty_db <= tol, format!("RIN {r} dB/Hz: penalty {:.2} dB, at most {tol:.2}", x.penalty_db)));
    }
    let x = find(-170.0);
    checks.push(((x.min_lo_dbm - 10.0).abs() <= 1.0, format!("RIN -170 dB/Hz: minimum LO {} dBm, expected 10 ± 1", x.min_lo_dbm)));
    let cano = rin_map(&config("rin_cano_het_ps.toml", bits), &[], &grid, true).unwrap();
    let a = map.summary[0].sensitivity_dbm;
    let c = cano.summary[0].sensitivity_dbm;
    let tol = s.tol(0.5);
    checks.push((
        (c - a - 3.0).abs() <= tol,
        format!("without RIN: Alamouti-HetRx-SPD {a:.2} dBm, Cano-HetRx PS {c:.2} dBm, gap {:.2} dB, expected 3 ± {tol:.2}", c - a),
    ));
    s.report(7, "LO RIN study", &checks);
}

fn max_unitarity_error(m: &[Vec<C>]) -> f64 {
    // Columns of `m` must be orthonormal.
    let cols = m[0].len();
    let mut worst: f64 = 0.0;
    for a in 0..cols {
        for b in 0..cols {
            let dot: C = m.iter().map(|row| row[a].conj() * row[b]).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((dot - want).norm());
        }
    }
    worst
}

fn impulse(k: usize, n: usize) -> Vec<DualPolWaveform<f64>> {
    (0..n)
        .map(|i| {
            let v = if i == k { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) };
            DualPolWaveform::x_only(vec![v], 1.0).unwrap()
        })
        .collect()
}

fn transfer(inputs: usize, f: impl Fn(&[DualPolWaveform<f64>]) -> Vec<DualPolWaveform<f64>>) -> Vec<Vec<C>> {
    let cols: Vec<Vec<C>> = (0..inputs).map(|k| f(&impulse(k, inputs)).iter().map(|w| w.x[0]).collect()).collect();
    (0..cols[0].len()).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

fn unitarity() -> (bool, String) {
    let c2 = transfer(2, |w| {
        let (a, b) = coupler_2x2(&w[0], &w[1]).unwrap();
        vec![a, b]
    });
    let c3 = transfer(3, |w| coupler_3x3(Some(&w[0]), Some(&w[1]), Some(&w[2])).unwrap().to_vec());
    let h = transfer(2, |w| hybrid_90(&w[0], &w[1]).unwrap().to_vec());
    let mut worst = max_unitarity_error(&c2).max(max_unitarity_error(&c3)).max(max_unitarity_error(&h));
    for k in 0..64 {
        let j = jones_rotation::<f64>(0.37 * k as f64, -1.1 * k as f64);
        let m = vec![vec![j.m[0][0], j.m[0][1]], vec![j.m[1][0], j.m[1][1]]];
        worst = worst.max(max_unitarity_error(&m));
    }
    (worst < 1e-12, format!("coupler, hybrid and Jones unitarity error {worst:.1e}"))
}

fn de_bruijn_windows() -> (bool, String) {
    let mut ok = true;
    for n in 2..=12u32 {
        let s = de_bruijn(n, 0).unwrap();
        let b = s.as_slice();
        let len = b.len();
        let mut seen = vec![false; len];
        for i in 0..len {
            let w = (0..n as usize).fold(0usize, |acc, k| (acc << 1) | b[(i + k) % len] as usize);
            ok &= !std::mem::replace(&mut seen[w], true);
        }
        ok &= len == 1 << n && seen.iter().all(|&v| v);
    }
    (ok, "de Bruijn windows unique for orders 2 to 12".into())
}

fn ofdm_roundtrip() -> (bool, String) {
    let mut worst: f64 = 0.0;
    for cp in [Some(0), None] {
        let p = OfdmParams { cp_samples: cp, cp_fraction: 0.05, ..Default::default() };
        let d = p.layout().unwrap().data_bins.len();
        let sym: Vec<C> = (0..16 * d).map(|k| C::from_polar(1.0, 0.7 * (k * k) as f64)).collect();
        let bb = ofdm_modulate_stream(&sym, &p).unwrap();
        let back = ofdm_demodulate(&bb, &p, false, None).unwrap();
        worst = worst.max(sym.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
    }
    (worst < 1e-9, format!("OFDM modulate/demodulate error {worst:.1e}"))
}

fn alamouti_rotation_invariance(bits: usize) -> (bool, String) {
    let mut base = config("alamouti_het_qpsk.toml", 1 << 18);
    base.bits = bits.max(1 << 18);
    let mut errs = Vec::new();
    let mut total = Vec::new();
    for k in 0..8 {
        let mut c = base.clone();
        c.link.rotation_alpha_rad = k as f64 * std::f64::consts::PI / 8.0;
        c.link.rotation_delta_rad = 0.9 * k as f64;
        c.master_seed = 1000 + k;
        let r = run_point_with::<f64>(&c, -51.5, c.bits, 0, 0).unwrap();
        errs.push(r.errors as f64);
        total.push(r.bits as f64);
    }
    let p = errs.iter().sum::<f64>() / total.iter().sum::<f64>();
    let stat: f64 = errs
        .iter()
        .zip(&total)
        .map(|(&e, &n)| {
            let (ee, en) = (n * p, n * (1.0 - p));
            (e - ee).powi(2) / ee + ((n - e) - en).powi(2) / en
        })
        .sum();
    let pval = 1.0 - ChiSquared::new(7.0).unwrap().cdf(stat);
    let min_err = errs.iter().cloned().fold(f64::INFINITY, f64::min);
    (
        pval > 0.01 && min_err >= 2000.0,
        format!("Alamouti BER over 8 rotations: chi-square {stat:.2}, p = {pval:.3}, fewest errors {min_err}"),
    )
}

fn noise_variances() -> (bool, String) {
    let n = 1 << 17;
    let fs = 40e9;
    let power: f64 = 1e-3;
    let cw = DualPolWaveform::x_only(vec![C::new(power.sqrt(), 0.0); n], fs).unwrap();
    let var = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
    };
    let shot = PdParams { thermal_noise: false, ..Default::default() };
    let i = photodiode(&cw, &shot, 5).unwrap();
    let want = 2.0 * 1.602176634e-19 * shot.responsivity() * power * fs / 2.0;
    let e_shot = var(&i) / want - 1.0;
    let th = PdParams { shot_noise: false, ..Default::default() };
    let i = photodiode(&cw, &th, 6).unwrap();
    let want = 4.0 * 1.380649e-23 * 300.0 / 50.0 * fs / 2.0;
    let e_th = var(&i) / want - 1.0;
    (
        e_shot.abs() < 0.02 && e_th.abs() < 0.02,
        format!("shot variance off by {:+.2}%, thermal by {:+.2}%", 100.0 * e_shot, 100.0 * e_th),
    )
}

fn square_sum_polarisation() -> (bool, String) {
    // The two LO branches beat at twice the IF; the post-detection
    // low-pass removes that term.
    let n = 512;
    let fs = 8e9;
    let f_if = 1e9;
    let sig = DualPolWaveform::x_only(vec![C::new(1e-3, 0.0); n], fs).unwrap();
    let lo_p = LaserParams { pol_angle_rad: std::f64::consts::FRAC_PI_4, ..Default::default() };
    let lo = laser_field::<f64>(&lo_p, n, fs, f_if, 0).unwrap();
    let (lh, lv) = pbs(&lo);
    let out = |a: f64, d: f64| {
        let w = apply_jones(&sig, &jones_rotation(a, d));
        let o = coupler_3x3(Some(&w), Some(&lh), Some(&lv)).unwrap();
        let i: Vec<Vec<f64>> = o.iter().map(|f| photodiode(f, &PdParams::noiseless(), 0).unwrap()).collect();
        square_sum_combine(&i, fs, Some(1.5e9)).unwrap()
    };
    let r = out(0.0, 0.0);
    let scale = r.iter().cloned().fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for k in 1..8 {
        let o = out(0.4 * k as f64, 1.3 * k as f64);
        worst = worst.max(r.iter().zip(&o).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale);
    }
    (worst < 1e-9, format!("square-and-sum output change over 7 rotations {worst:.1e} (relative)"))
}

fn ciaramella_negative_control(bits: usize) -> (bool, String) {
    let mut c = config("ciaramella_ook.toml", bits);
    c.tx.format = ModulationFormat::Qpsk;
    c.rx.allow_phase_formats = true;
    let r = run_point_with::<f64>(&c, -30.0, bits, 0, 0).unwrap();
    ((r.ber - 0.5).abs() < 0.02, format!("QPSK through square-and-sum: BER {:.4} at -30 dBm", r.ber))
}

fn csv_determinism(bits: usize) -> (bool, String) {
    let c = config("alamouti_het_qpsk.toml", bits.min(1 << 15));
    let powers = [-52.0, -50.0, -48.0];
    let csv = |parallel: bool| {
        let mut out = Vec::new();
        write_rows(&sweep(&c, &powers, parallel).unwrap(), OutputFormat::Csv, &mut out).unwrap();
        out
    };
    let a = csv(true);
    let ok = a == csv(true) && a == csv(false);
    (ok, format!("sweep CSV identical across reruns and serial/parallel ({} bytes)", a.len()))
}

fn properties(s: &mut Suite) {
    let bits = s.bits;
    let checks = vec![
        unitarity(),
        de_bruijn_windows(),
        ofdm_roundtrip(),
        alamouti_rotation_invariance(bits),
        noise_variances(),
        square_sum_polarisation(),
        ciaramella_negative_control(bits),
        csv_determinism(bits),
    ];
    s.report(8, "property suite", &checks);
}

fn main() {
    let bits = std::env::var("ACCEPTANCE_BITS").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BITS);
    let allowance = if bits >= FULL_BITS { 0.0 } else { MC_ALLOWANCE_DB };
    let mut s = Suite { bits, allowance, outcomes: Vec::new() };
    println!("acceptance: {bits} bits per point, Monte-Carlo tolerance widened by {allowance} dB");
    theory(&mut s);
    ppb_anchors(&mut s);
    let ciaramella = shot_noise_comparison(&mut s);
    let base = config("ladder.toml", bits);
    let stages = ladder_stages(&base);
    let ladder = run_stages(&stages, true).expect("ladder");
    let fig7 = practical_formats(&mut s, &ladder, &stages, ciaramella);
    penalty_ladder(&mut s, &ladder);
    lo_study(&mut s, &fig7);
    rin_study(&mut s);
    properties(&mut s);
    let failed = s.outcomes.iter().filter(|&&o| !o).count();
    println!("acceptance: {} of {} criteria pass", s.outcomes.len() - failed, s.outcomes.len());
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
