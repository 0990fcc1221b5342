//! Ideal lossless couplers, 90° hybrid and polarisation beam splitter.
//!
//! The 3×3 coupler uses the DFT matrix `M_kl = w^(kl)/√3`, `w = e^(i2π/3)`;
//! any symmetric 1:1:1 coupler differs only by port phases, which the DSP
//! absorbs.

use num_complex::Complex;

use crate::error::{param, Result};
use crate::scalar::Real;
use crate::sigcore::DualPolWaveform;

fn check_grid<T: Real>(ws: &[&DualPolWaveform<T>]) -> Result<()> {
    let first = ws[0];
    for w in &ws[1..] {
        if w.len() != first.len() || w.sample_rate != first.sample_rate {
            return param(format!(
                "component inputs differ in grid: {} samples @ {} Hz vs {} @ {}",
                first.len(),
                first.sample_rate,
                w.len(),
                w.sample_rate
            ));
        }
    }
    Ok(())
}

fn combine<T: Real>(
    ins: &[&DualPolWaveform<T>],
    row: &[Complex<T>],
    center_offset: f64,
) -> DualPolWaveform<T> {
    let n = ins[0].len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut x = vec![zero; n];
    let mut y = vec![zero; n];
    for (w, &c) in ins.iter().zip(row) {
        if c == zero {
            continue;
        }
        for i in 0..n {
            x[i] = x[i] + w.x[i] * c;
            y[i] = y[i] + w.y[i] * c;
        }
    }
    DualPolWaveform { x, y, sample_rate: ins[0].sample_rate, center_offset }
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// 3-dB coupler `[[1, i], [i, 1]]/√2`, applied to both polarisations.
pub fn coupler_2x2<T: Real>(
    a: &DualPolWaveform<T>,
    b: &DualPolWaveform<T>,
) -> Result<(DualPolWaveform<T>, DualPolWaveform<T>)> {
    check_grid(&[a, b])?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let o1 = combine(&[a, b], &[c(r, 0.0), c(0.0, r)], a.center_offset);
    let o2 = combine(&[a, b], &[c(0.0, r), c(r, 0.0)], a.center_offset);
    Ok((o1, o2))
}

/// Symmetric 3×3 coupler. Pass `None` for an unused (vacuum) input port.
pub fn coupler_3x3<T: Real>(
    a: Option<&DualPolWaveform<T>>,
    b: Option<&DualPolWaveform<T>>,
    d: Option<&DualPolWaveform<T>>,
) -> Result<[DualPolWaveform<T>; 3]> {
    let ports = [a, b, d];
    let live: Vec<(usize, &DualPolWaveform<T>)> =
        ports.iter().enumerate().filter_map(|(k, w)| w.map(|w| (k, w))).collect();
    if live.is_empty() {
        return param("3x3 coupler needs at least one driven input");
    }
    check_grid(&live.iter().map(|(_, w)| *w).collect::<Vec<_>>())?;
    let s = 1.0 / 3f64.sqrt();
    let ins: Vec<&DualPolWaveform<T>> = live.iter().map(|(_, w)| *w).collect();
    let out = |k: usize| {
        let row: Vec<Complex<T>> = live
            .iter()
            .map(|(l, _)| {
                let ph = 2.0 * std::f64::consts::PI * (k * l) as f64 / 3.0;
                c(s * ph.cos(), s * ph.sin())
            })
            .collect();
        combine(&ins, &row, live[0].1.center_offset)
    };
    Ok([out(0), out(1), out(2)])
}

/// 90° hybrid: `(E_s ± E_LO)/2` and `(E_s ± iE_LO)/2`.
pub fn hybrid_90<T: Real>(
    s: &DualPolWaveform<T>,
    lo: &DualPolWaveform<T>,
) -> Result<[DualPolWaveform<T>; 4]> {
    check_grid(&[s, lo])?;
    let h = 0.5;
    Ok([
        combine(&[s, lo], &[c(h, 0.0), c(h, 0.0)], s.center_offset),
        combine(&[s, lo], &[c(h, 0.0), c(-h, 0.0)], s.center_offset),
        combine(&[s, lo], &[c(h, 0.0), c(0.0, h)], s.center_offset),
        combine(&[s, lo], &[c(h, 0.0), c(0.0, -h)], s.center_offset),
    ])
}

/// Polarisation beam splitter: projections onto the x and y axes, each
/// keeping its component in its own polarisation slot.
pub fn pbs<T: Real>(w: &DualPolWaveform<T>) -> (DualPolWaveform<T>, DualPolWaveform<T>) {
    let zero = vec![Complex::new(T::zero(), T::zero()); w.len()];
    let h = DualPolWaveform { x: w.x.clone(), y: zero.clone(), sample_rate: w.sample_rate, center_offset: w.center_offset };
    let v = DualPolWaveform { x: zero, y: w.y.clone(), sample_rate: w.sample_rate, center_offset: w.center_offset };
    (h, v)
}
