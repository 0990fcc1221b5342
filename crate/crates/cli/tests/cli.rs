use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cohpon"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn theory_table() {
    let o = run(&["theory"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("format,required_ppb,spectral_efficiency"));
    let qpsk = s.lines().find(|l| l.starts_with("DP-QPSK,")).unwrap();
    let ppb: f64 = qpsk.split(',').nth(1).unwrap().parse().unwrap();
    assert!((ppb - 3.5).abs() < 0.1);
}

#[test]
fn sweep_is_reproducible_and_order_independent() {
    let cfg = config("alamouti_het_qpsk.toml");
    let cfg = cfg.to_str().unwrap();
    let args = ["sweep", cfg, "--power", "-52:-46:2", "--bits", "16384"];
    let a = run(&args);
    let b = run(&args);
    let mut serial = args.to_vec();
    serial.push("--serial");
    let c = run(&serial);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let s = stdout(&a);
    assert!(s.starts_with("arch,format,bitrate_gbps,rx_power_dbm,lo_power_dbm,rin_db_hz,ber,errors,bits,ppb,seed\n"));
    let powers: Vec<f64> = s.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(powers, vec![-52.0, -50.0, -48.0, -46.0]);
}

#[test]
fn json_rows_and_out_file() {
    let dir = std::env::temp_dir().join(format!("cohpon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("rows.json");
    let cfg = config("tabares_qpsk.toml");
    let o = run(&[
        "sweep",
        cfg.to_str().unwrap(),
        "--power",
        "-48:-48:1",
        "--bits",
        "16384",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v[0]["arch"], "Tabares-HetRx");
    assert_eq!(v[0]["bits"], 16384);
}

#[test]
fn config_errors_exit_nonzero() {
    let dir = std::env::temp_dir().join(format!("cohpon-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "architecture = \"Ciaramella-Rx\"\ntx.format = \"QPSK\"\n").unwrap();
    let o = run(&["sensitivity", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("allow_phase_formats"));

    let o = run(&["sweep", "no/such/file.toml", "--power", "-50:-40:1"]);
    assert_eq!(o.status.code(), Some(2));

    let cfg = config("tabares_qpsk.toml");
    let o = run(&["sweep", cfg.to_str().unwrap(), "--power", "-40:-50:1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["sweep", cfg.to_str().unwrap(), "--power", "-40:-50:1", "--format", "xml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_crossing_is_a_bracket_error() {
    let dir = std::env::temp_dir().join(format!("cohpon-cli-br-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("weak_lo.toml");
    std::fs::write(&cfg, "architecture = \"PPDI\"\ntx.format = \"DP-QPSK\"\nlo.power_dbm = -60\npd.shot_noise = false\n").unwrap();
    let o = run(&["sensitivity", cfg.to_str().unwrap(), "--bits", "16384"]);
    assert_eq!(o.status.code(), Some(3));
}
