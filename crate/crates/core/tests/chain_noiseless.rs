use cohpon::frontends::{FrontEndKind, PdParams};
use cohpon::harness::{run_point, ScenarioConfig};
use cohpon::theory::ModulationFormat;
use cohpon::txchain::{Coding, OfdmParams, TxConfig};

fn scenario(kind: FrontEndKind, format: ModulationFormat, coding: Coding, ofdm: bool) -> ScenarioConfig {
    ScenarioConfig {
        architecture: kind,
        tx: TxConfig {
            format,
            coding,
            ofdm: ofdm.then(OfdmParams::default),
            ..Default::default()
        },
        pd: PdParams::noiseless(),
        bits: 1 << 14,
        ..Default::default()
    }
}

fn cases() -> Vec<ScenarioConfig> {
    use Coding::*;
    use FrontEndKind::*;
    use ModulationFormat::*;
    vec![
        scenario(Ppdi, DpQpsk, None, false),
        scenario(Ppdi, DpQpsk, None, true),
        scenario(AlamoutiInt, Qpsk, Alamouti, false),
        scenario(AlamoutiInt, Qpsk, Alamouti, true),
        scenario(AlamoutiHet, Qpsk, Alamouti, false),
        scenario(AlamoutiHet, Qpsk, Alamouti, true),
        scenario(AlamoutiHetSinglePd, Qpsk, Alamouti, true),
        scenario(GlanceHet, Qpsk, None, false),
        scenario(GlanceHet, Dbpsk, None, false),
        scenario(CanoInt3x3, Qpsk, PolScramble, false),
        scenario(CanoInt3x3, Dbpsk, PolScramble, false),
        scenario(CanoHetSingle, Qpsk, PolScramble, false),
        scenario(CiaramellaSq, Ook, None, false),
        scenario(TabaresHet, Qpsk, None, false),
        scenario(TabaresHet, Dbpsk, None, false),
    ]
}

#[test]
fn noiseless_chains_are_error_free_for_any_rotation() {
    let angles = [(0.0, 0.0), (0.4, 1.0), (std::f64::consts::FRAC_PI_2, 0.0), (1.2, -2.5)];
    for base in cases() {
        for (a, d) in angles {
            let mut c = base.clone();
            c.link.rotation_alpha_rad = a;
            c.link.rotation_delta_rad = d;
            let r = run_point(&c, -40.0).unwrap_or_else(|e| panic!("{} {}: {e}", c.architecture, c.tx.format));
            assert_eq!(r.errors, 0, "{} {} {:?} at ({a}, {d})", c.architecture, c.tx.format, c.tx.coding);
            assert!(r.bits >= 1 << 14);
        }
    }
}
