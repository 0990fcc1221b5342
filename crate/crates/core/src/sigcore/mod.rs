//! Sequence generation, the sampled dual-polarisation waveform container,
//! FFT utilities and Jones-space algebra used by every other module.

mod bits;
mod jones;
mod seed;
mod spectral;
mod waveform;

pub use bits::{de_bruijn, BitSequence};
pub use jones::{apply_jones, jones_rotation, JonesMatrix};
pub use seed::{derive_seed, stream_rng, StreamRng};
pub use spectral::{
    bandpass_complex, fft, frequency_of_bin, gaussian_lowpass_complex, ifft, integrate_and_dump, lowpass_complex,
    lowpass_real, resample, resample_stream,
};
pub use waveform::DualPolWaveform;
