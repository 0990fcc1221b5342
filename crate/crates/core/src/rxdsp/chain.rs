//! Per-architecture receive chains: electrical outputs → decisions.

use num_complex::Complex;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::ops::{
    alamouti_decode_branches, decide_and_count, downconvert, estimate_channel, glance_dualbranch_demod, if_filter,
    linear_combine_3x3, mix, ofdm_demodulate, square_sum_combine, ChannelEstimate, DecisionReport,
};
use crate::error::{config, param, Error, Result};
use crate::frontends::{ElectricalOutputs, FrontEndKind};
use crate::scalar::Real;
use crate::sigcore::{integrate_and_dump, resample_stream};
use crate::theory::ModulationFormat;
use crate::txchain::{Coding, TxConfig, TxFrame};

type C<T> = Complex<T>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combining {
    /// Unit-magnitude, phase-aligned branch weights.
    #[default]
    Egc,
    /// Weights proportional to the conjugate branch gain.
    Mrc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RxConfig {
    pub combining: Combining,
    /// Known symbols per subcarrier (or per stream) used for channel
    /// estimation; `None` uses the whole block.
    pub training_symbols: Option<usize>,
    /// Per-frame common phase correction from the OFDM pilot tone.
    pub pilot_phase: bool,
    /// Post-detection low-pass (Hz) for the square-and-sum receiver.
    pub lpf_bandwidth_hz: Option<f64>,
    /// 3 dB width (Hz) of a 4th-order Gaussian IF band-pass ahead of
    /// heterodyne demodulation; `None` leaves only the matched filter.
    pub if_filter_bandwidth_hz: Option<f64>,
    /// Lets phase-modulated formats through the square-and-sum receiver.
    pub allow_phase_formats: bool,
}

impl Default for RxConfig {
    fn default() -> Self {
        Self {
            combining: Combining::Egc,
            training_symbols: None,
            pilot_phase: false,
            lpf_bandwidth_hz: None,
            if_filter_bandwidth_hz: None,
            allow_phase_formats: false,
        }
    }
}

impl RxConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.training_symbols {
            if t < 4 {
                return config(format!("training needs at least 4 symbols, got {t}"));
            }
        }
        if let Some(b) = self.lpf_bandwidth_hz {
            if !(b > 0.0) {
                return config(format!("low-pass bandwidth must be positive, got {b}"));
            }
        }
        if let Some(b) = self.if_filter_bandwidth_hz {
            if !(b > 0.0) {
                return config(format!("IF filter bandwidth must be positive, got {b}"));
            }
        }
        Ok(())
    }
}

/// Checks that the architecture can demodulate the transmitted format.
pub fn check_compatible(kind: FrontEndKind, tx: &TxConfig, rx: &RxConfig) -> Result<()> {
    use FrontEndKind::*;
    if kind == CiaramellaSq {
        if tx.ofdm.is_some() || tx.coding != Coding::None {
            return config("the square-and-sum receiver takes single-carrier uncoded signals only");
        }
        if tx.format != ModulationFormat::Ook && !rx.allow_phase_formats {
            return config(format!(
                "{kind} discards phase and cannot demodulate {}; set rx.allow_phase_formats to run it anyway",
                tx.format
            ));
        }
        return Ok(());
    }
    let diverse = matches!(kind, Ppdi | TabaresHet | GlanceHet);
    if tx.is_dual_pol_format() && !diverse {
        return config(format!("{kind} sees one polarisation and cannot separate {}", tx.format));
    }
    if kind == GlanceHet && tx.format == ModulationFormat::Dbpsk && tx.coding != Coding::None {
        return config("delay-and-multiply DBPSK on the Glance receiver needs uncoded signals");
    }
    Ok(())
}

/// Complex baseband branches at the simulation rate, each linear in the
/// transmitted field.
fn branches<T: Real>(kind: FrontEndKind, out: &ElectricalOutputs<T>, rc: &RxConfig) -> Result<Vec<Vec<C<T>>>> {
    use FrontEndKind::*;
    let (fs, f) = (out.sample_rate, out.if_hz);
    let c = &out.currents;
    let iq = |a: &[T], b: &[T]| a.iter().zip(b).map(|(&i, &q)| Complex::new(i, q)).collect::<Vec<_>>();
    let bw = rc.if_filter_bandwidth_hz;
    let het = |a: &[T]| -> Result<Vec<C<T>>> {
        Ok(if_filter(&downconvert(a, fs, f, None)?, fs, f, bw)?.into_iter().map(|v| v.conj()).collect())
    };
    Ok(match kind {
        Ppdi => vec![iq(&c[0], &c[1]), iq(&c[2], &c[3])],
        AlamoutiInt => vec![iq(&c[0], &c[1])],
        AlamoutiHet | AlamoutiHetSinglePd | CanoHetSingle => vec![het(&c[0])?],
        GlanceHet => vec![het(&c[0])?, het(&c[1])?],
        CanoInt3x3 => vec![linear_combine_3x3(c)?],
        TabaresHet => {
            // x beats against LO_h at −IF, y against LO_v at +IF (conjugated).
            let z = linear_combine_3x3(c)?;
            let x = if_filter(&mix(&z, fs, -f), fs, f, bw)?;
            let y = if_filter(&mix(&z, fs, f), fs, f, bw)?.into_iter().map(|v| v.conj()).collect();
            vec![x, y]
        }
        CiaramellaSq => return param("square-and-sum has no linear branches"),
    })
}

/// Reorders a frame-major cell stream into `groups` per-subcarrier streams.
fn transpose<T: Copy>(v: &[T], groups: usize) -> Vec<Vec<T>> {
    (0..groups).map(|g| v.iter().skip(g).step_by(groups).copied().collect()).collect()
}

fn untranspose<T: Copy>(g: &[Vec<T>]) -> Vec<T> {
    let n: usize = g.iter().map(|v| v.len()).sum();
    let mut out = Vec::with_capacity(n);
    let len = g.first().map_or(0, |v| v.len());
    for i in 0..len {
        for s in g {
            out.push(s[i]);
        }
    }
    out
}

fn training<T: Copy>(v: &[T], n: Option<usize>) -> &[T] {
    &v[..n.map_or(v.len(), |n| n.min(v.len()))]
}

fn weight<T: Real>(g: C<T>, mode: Combining) -> C<T> {
    match mode {
        Combining::Egc => g.conj() / g.norm(),
        Combining::Mrc => g.conj(),
    }
}

/// Coherent combining of virtual branches `r_v = g_v·s + n_v` given the
/// reference symbols `s`.
fn combine_single<T: Real>(rx: &[Vec<C<T>>], reference: &[C<T>], rc: &RxConfig) -> Result<Vec<C<T>>> {
    let n = reference.len();
    let zero = vec![Complex::new(T::zero(), T::zero()); n];
    let t = rc.training_symbols;
    let gains: Vec<C<T>> = rx
        .iter()
        .map(|r| estimate_channel(training(r, t), training(reference, t), training(&zero, t)).map(|h| h.h1))
        .collect::<Result<_>>()?;
    let ws: Vec<C<T>> = gains.iter().map(|&g| weight(g, rc.combining)).collect();
    let norm: T = gains.iter().zip(&ws).map(|(g, w)| (g * w).re).fold(T::zero(), |a, b| a + b);
    if !(norm > T::zero()) {
        return Err(Error::Decode("combined gain is zero".into()));
    }
    let inv = T::one() / norm;
    Ok((0..n)
        .map(|k| rx.iter().zip(&ws).fold(Complex::new(T::zero(), T::zero()), |a, (r, w)| a + r[k] * w) * inv)
        .collect())
}

/// Per-slot least-squares separation of two tributaries over `B >= 2`
/// branches.
fn zero_force<T: Real>(rx: &[Vec<C<T>>], x: &[C<T>], y: &[C<T>], rc: &RxConfig) -> Result<(Vec<C<T>>, Vec<C<T>>)> {
    let t = rc.training_symbols;
    let h: Vec<ChannelEstimate<T>> = rx
        .iter()
        .map(|r| estimate_channel(training(r, t), training(x, t), training(y, t)))
        .collect::<Result<_>>()?;
    let mut a = [[Complex::new(T::zero(), T::zero()); 2]; 2];
    for c in &h {
        let v = [c.h1, c.h2];
        for i in 0..2 {
            for j in 0..2 {
                a[i][j] = a[i][j] + v[i].conj() * v[j];
            }
        }
    }
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if !(det.norm() > T::lit(1e-12) * a[0][0].norm() * a[1][1].norm()) {
        return Err(Error::Decode("polarisation channel is singular".into()));
    }
    let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
    let n = x.len();
    let (mut ox, mut oy) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for k in 0..n {
        let (mut b0, mut b1) = (Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero()));
        for (c, r) in h.iter().zip(rx) {
            b0 = b0 + c.h1.conj() * r[k];
            b1 = b1 + c.h2.conj() * r[k];
        }
        ox.push(inv[0][0] * b0 + inv[0][1] * b1);
        oy.push(inv[1][0] * b0 + inv[1][1] * b1);
    }
    Ok((ox, oy))
}

/// Recovers the information symbols of every tributary from one group of
/// slot streams (one per branch).
fn recover_group<T: Real>(
    rx: &[Vec<C<T>>],
    slots: (&[C<T>], &[C<T>]),
    info: &[Vec<C<T>>],
    tx: &TxConfig,
    rc: &RxConfig,
) -> Result<Vec<Vec<C<T>>>> {
    match tx.coding {
        Coding::Alamouti => {
            let t = rc.training_symbols.map(|n| 2 * n.div_ceil(2));
            let h: Vec<_> = rx
                .iter()
                .map(|r| estimate_channel(training(r, t), training(slots.0, t), training(slots.1, t)))
                .collect::<Result<_>>()?;
            Ok(vec![alamouti_decode_branches(rx, &h)?])
        }
        Coding::PolScramble => {
            let virt: Vec<Vec<C<T>>> = rx
                .iter()
                .flat_map(|r| (0..2).map(move |p| r.iter().skip(p).step_by(2).copied().collect()))
                .collect();
            Ok(vec![combine_single(&virt, &info[0], rc)?])
        }
        Coding::None if info.len() == 2 => {
            let (x, y) = zero_force(rx, slots.0, slots.1, rc)?;
            Ok(vec![x, y])
        }
        Coding::None => Ok(vec![combine_single(rx, &info[0], rc)?]),
    }
}

/// Coherent BPSK decisions followed by differential decoding (cyclic):
/// returns `±1` products of consecutive hard decisions.
fn differential<T: Real>(s: &[C<T>]) -> Vec<C<T>> {
    let n = s.len();
    let d: Vec<T> = s.iter().map(|z| if z.re < T::zero() { -T::one() } else { T::one() }).collect();
    (0..n).map(|k| Complex::new(d[k] * d[(k + n - 1) % n], T::zero())).collect()
}

fn count<T: Real>(symbols: &[Vec<C<T>>], frame: &TxFrame<T>, format: ModulationFormat) -> Result<DecisionReport> {
    let mut rep = DecisionReport::default();
    for (s, bits) in symbols.iter().zip(&frame.bits) {
        let s = if format == ModulationFormat::Dbpsk { differential(s) } else { s.clone() };
        rep = rep.merge(decide_and_count(&s[..frame.counted], bits, format)?);
    }
    Ok(rep)
}

/// Square-and-sum OOK: integrate-and-dump the power signal, then slice at
/// the Gaussian-optimal threshold from the known bits.
fn square_law<T: Real>(out: &ElectricalOutputs<T>, frame: &TxFrame<T>, tx: &TxConfig, rc: &RxConfig) -> Result<DecisionReport> {
    let p = square_sum_combine(&out.currents, out.sample_rate, rc.lpf_bandwidth_hz)?;
    let pc: Vec<C<T>> = p.iter().map(|&v| Complex::new(v, T::zero())).collect();
    let v: Vec<f64> = integrate_and_dump(&pc, frame.samples_per_slot, 0).iter().map(|z| z.re.as_f64()).collect();
    let v = &v[..frame.counted];
    let bits = &frame.bits[0];
    if tx.format != ModulationFormat::Ook {
        // Negative control: the power carries no phase, so decide each
        // symbol as if its constellation point were real and positive.
        let z: Vec<C<T>> = v.iter().map(|&a| Complex::new(T::lit(a), T::zero())).collect();
        return decide_and_count(&z, bits, tx.format);
    }
    let stats = |b: u8| {
        let s: Vec<f64> = v.iter().zip(bits).filter(|(_, &x)| x == b).map(|(&a, _)| a).collect();
        let m = s.iter().sum::<f64>() / s.len().max(1) as f64;
        let var = s.iter().map(|a| (a - m).powi(2)).sum::<f64>() / s.len().max(1) as f64;
        (m, var.sqrt())
    };
    let ((m0, s0), (m1, s1)) = (stats(0), stats(1));
    let th = if s0 + s1 > 0.0 { (m0 * s1 + m1 * s0) / (s0 + s1) } else { (m0 + m1) / 2.0 };
    if !(m1 > m0) {
        return Err(Error::Decode("square-law levels are not separated".into()));
    }
    let g = std::f64::consts::FRAC_1_SQRT_2 / th;
    let z: Vec<C<T>> = v.iter().map(|&a| Complex::new(T::lit(a * g), T::zero())).collect();
    decide_and_count(&z, bits, ModulationFormat::Ook)
}

/// Runs the receiver DSP for `kind` and counts bit errors against the
/// transmitted frame.
pub fn demodulate<T: Real>(
    kind: FrontEndKind,
    out: &ElectricalOutputs<T>,
    frame: &TxFrame<T>,
    tx: &TxConfig,
    rc: &RxConfig,
) -> Result<DecisionReport> {
    check_compatible(kind, tx, rc)?;
    if kind == FrontEndKind::CiaramellaSq {
        return square_law(out, frame, tx, rc);
    }
    if kind == FrontEndKind::GlanceHet && tx.format == ModulationFormat::Dbpsk {
        let p = glance_dualbranch_demod(&out.currents, out.sample_rate, out.if_hz, frame.samples_per_slot, tx.format, None, rc.if_filter_bandwidth_hz)?;
        return decide_and_count(&p[..frame.counted], &frame.bits[0], tx.format);
    }
    let br = branches(kind, out, rc)?;
    let sps = frame.samples_per_slot;
    let (groups, slots): (usize, Vec<Vec<C<T>>>) = match &tx.ofdm {
        None => (1, br.iter().map(|b| integrate_and_dump(b, sps, 0)).collect()),
        Some(p) => {
            let d = p.layout()?.data_bins.len();
            let cells = br
                .iter()
                .map(|b| ofdm_demodulate(&resample_stream(b, Ratio::new(1, sps))?, p, rc.pilot_phase, None))
                .collect::<Result<_>>()?;
            (d, cells)
        }
    };
    let rx_g: Vec<Vec<Vec<C<T>>>> = slots.iter().map(|s| transpose(s, groups)).collect();
    let sx = transpose(&frame.slots.0, groups);
    let sy = transpose(&frame.slots.1, groups);
    let info_g: Vec<Vec<Vec<C<T>>>> = frame.info.iter().map(|s| transpose(s, groups)).collect();
    let mut per_trib: Vec<Vec<Vec<C<T>>>> = vec![Vec::with_capacity(groups); frame.info.len()];
    for g in 0..groups {
        let rx: Vec<Vec<C<T>>> = rx_g.iter().map(|b| b[g].clone()).collect();
        let info: Vec<Vec<C<T>>> = info_g.iter().map(|t| t[g].clone()).collect();
        let rec = recover_group(&rx, (&sx[g], &sy[g]), &info, tx, rc)?;
        for (t, s) in rec.into_iter().enumerate() {
            per_trib[t].push(s);
        }
    }
    let symbols: Vec<Vec<C<T>>> = per_trib.iter().map(|g| untranspose(g)).collect();
    count(&symbols, frame, tx.format)
}
