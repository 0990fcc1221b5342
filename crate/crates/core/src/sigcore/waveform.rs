use num_complex::Complex;

use crate::error::{param, Result};
use crate::scalar::Real;

/// Sampled optical field on two polarisations.
///
/// Sample amplitudes are in √W, so `|x|² + |y|²` is instantaneous power.
/// `center_offset` is the carrier frequency of the field relative to the
/// simulation band centre; a local oscillator tuned `if_hz` above the
/// signal carries `center_offset = if_hz`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPolWaveform<T: Real> {
    pub x: Vec<Complex<T>>,
    pub y: Vec<Complex<T>>,
    pub sample_rate: f64,
    pub center_offset: f64,
}

impl<T: Real> DualPolWaveform<T> {
    pub fn new(
        x: Vec<Complex<T>>,
        y: Vec<Complex<T>>,
        sample_rate: f64,
        center_offset: f64,
    ) -> Result<Self> {
        if x.len() != y.len() {
            return param(format!("polarisation lengths differ: {} vs {}", x.len(), y.len()));
        }
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return param(format!("sample rate must be positive, got {sample_rate}"));
        }
        Ok(Self {
            x,
            y,
            sample_rate,
            center_offset,
        })
    }

    /// A waveform with the given field on x and nothing on y.
    pub fn x_only(x: Vec<Complex<T>>, sample_rate: f64) -> Result<Self> {
        let y = vec![Complex::new(T::zero(), T::zero()); x.len()];
        Self::new(x, y, sample_rate, 0.0)
    }

    pub fn zeros(len: usize, sample_rate: f64) -> Result<Self> {
        let z = vec![Complex::new(T::zero(), T::zero()); len];
        Self::new(z.clone(), z, sample_rate, 0.0)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Mean total power, `mean(|x|² + |y|²)`, in W.
    pub fn power(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let s: f64 = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).as_f64())
            .sum();
        s / self.len() as f64
    }

    /// Scales the field amplitude by `gain` (power by `gain²`).
    pub fn scale(&mut self, gain: f64) {
        let g = T::lit(gain);
        for v in self.x.iter_mut().chain(self.y.iter_mut()) {
            *v = *v * g;
        }
    }

    pub fn scaled(mut self, gain: f64) -> Self {
        self.scale(gain);
        self
    }

    /// Rescales so that `power()` equals `watts`. A zero waveform is left alone.
    pub fn set_power(&mut self, watts: f64) {
        let p = self.power();
        if p > 0.0 {
            self.scale((watts / p).sqrt());
        }
    }

    /// Applies `10^(-db/10)` power loss.
    pub fn attenuate_db(&mut self, db: f64) {
        self.scale(10f64.powf(-db / 20.0));
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len() && self.sample_rate == other.sample_rate
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 / self.sample_rate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_pols() {
        let a = vec![Complex::new(1.0, 0.0); 3];
        let b = vec![Complex::new(1.0, 0.0); 2];
        assert!(DualPolWaveform::<f64>::new(a, b, 1.0, 0.0).is_err());
    }

    #[test]
    fn power_and_rescale() {
        let x = vec![Complex::new(1.0, 1.0); 4];
        let mut w = DualPolWaveform::<f64>::x_only(x, 10.0).unwrap();
        assert!((w.power() - 2.0).abs() < 1e-15);
        w.set_power(0.5);
        assert!((w.power() - 0.5).abs() < 1e-15);
        w.attenuate_db(10.0);
        assert!((w.power() - 0.05).abs() < 1e-15);
    }
}
