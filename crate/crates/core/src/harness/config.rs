use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::frontends::{FrontEndKind, PdParams};
use crate::optics::{AmplifierParams, LaserParams, LinkParams};
use crate::rxdsp::{check_compatible, RxConfig};
use crate::txchain::TxConfig;

pub const DEFAULT_TARGET_BER: f64 = 4e-3;
pub const DEFAULT_BITS: usize = 1 << 19;
pub const MIN_BITS: usize = 1 << 14;

/// One simulated scenario. Read from TOML with dotted section keys, e.g.
/// `architecture = "Alamouti-HetRx"`, `tx.format = "QPSK"`,
/// `lo.power_dbm = 10`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub architecture: FrontEndKind,
    pub tx: TxConfig,
    pub lo: LaserParams,
    pub link: LinkParams,
    pub pd: PdParams,
    pub rx: RxConfig,
    /// Optical pre-amplifier ahead of the receiver.
    pub preamp: Option<AmplifierParams>,
    /// Receiver-internal loss after the power reference plane.
    pub insertion_loss_db: f64,
    /// Intermediate frequency; heterodyne default depends on the architecture.
    pub if_hz: Option<f64>,
    pub target_ber: f64,
    pub bits: usize,
    pub master_seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            architecture: FrontEndKind::AlamoutiHet,
            tx: TxConfig::default(),
            lo: LaserParams::default(),
            link: LinkParams::default(),
            pd: PdParams::default(),
            rx: RxConfig::default(),
            preamp: None,
            insertion_loss_db: 0.0,
            if_hz: None,
            target_ber: DEFAULT_TARGET_BER,
            bits: DEFAULT_BITS,
            master_seed: 42,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let c: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&s).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_ber > 0.0 && self.target_ber < 0.5) {
            return config(format!("target_ber must lie in (0, 0.5), got {}", self.target_ber));
        }
        if self.bits < MIN_BITS {
            return config(format!("bits must be at least {MIN_BITS}, got {}", self.bits));
        }
        if !(self.insertion_loss_db >= 0.0) {
            return config(format!("insertion_loss_db must be >= 0, got {}", self.insertion_loss_db));
        }
        self.tx.validate()?;
        self.rx.validate()?;
        self.lo.validate().map_err(|e| Error::Config(format!("lo: {e}")))?;
        self.pd.validate().map_err(|e| Error::Config(format!("pd: {e}")))?;
        check_compatible(self.architecture, &self.tx, &self.rx)?;
        let f = self.intermediate_frequency()?;
        let fs = self.tx.sample_rate()?;
        if self.architecture.is_heterodyne() && !(f > 0.0 && f < fs / 2.0) {
            return config(format!("IF {f} Hz must lie in (0, {}) Hz", fs / 2.0));
        }
        Ok(())
    }

    pub fn intermediate_frequency(&self) -> Result<f64> {
        if !self.architecture.is_heterodyne() {
            return match self.if_hz {
                Some(f) if f != 0.0 => config(format!("{} is intradyne; if_hz must be 0", self.architecture)),
                _ => Ok(0.0),
            };
        }
        let rs = self.tx.symbol_rate()?;
        let fs = self.tx.sample_rate()?;
        Ok(self.if_hz.unwrap_or_else(|| self.architecture.default_if(rs, fs)))
    }

    /// Signal laser / channel wavelength.
    pub fn wavelength(&self) -> f64 {
        self.lo.wavelength()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::ModulationFormat;

    #[test]
    fn dotted_keys() {
        let c = ScenarioConfig::from_toml_str(
            r#"
architecture = "Alamouti-HetRx"
tx.format = "QPSK"
tx.coding = "alamouti"
lo.power_dbm = 10.0
pd.quantum_efficiency = 0.4
bits = 65536
"#,
        )
        .unwrap();
        assert_eq!(c.tx.format, ModulationFormat::Qpsk);
        assert_eq!(c.lo.power_dbm, 10.0);
        assert_eq!(c.pd.quantum_efficiency, 0.4);
        assert_eq!(c.master_seed, 42);
    }

    #[test]
    fn round_trip() {
        let c = ScenarioConfig::default();
        assert_eq!(ScenarioConfig::from_toml_str(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_configs() {
        for s in [
            "target_ber = 0.7",
            "bits = 100",
            "architecture = \"nope\"",
            "tx.bogus = 1",
            "architecture = \"Ciaramella\"\ntx.format = \"QPSK\"",
            "architecture = \"Alamouti-IntRx\"\ntx.format = \"DP-QPSK\"",
            "architecture = \"PPDI\"\nif_hz = 1e9",
        ] {
            assert!(matches!(ScenarioConfig::from_toml_str(s), Err(Error::Config(_))), "{s}");
        }
    }
}
