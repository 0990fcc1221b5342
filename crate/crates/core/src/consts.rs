//! Physical constants (SI, exact CODATA 2018 definitions).

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const LIGHT_SPEED: f64 = 299_792_458.0;
pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Default carrier wavelength for all photon-count conversions.
pub const DEFAULT_WAVELENGTH: f64 = 1550e-9;

/// Photon energy `h·c/λ` in J.
pub fn photon_energy(wavelength: f64) -> f64 {
    PLANCK * LIGHT_SPEED / wavelength
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * (w / 1e-3).log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
