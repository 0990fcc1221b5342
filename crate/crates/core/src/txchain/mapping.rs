//! Gray-coded constellation mapping and the matching hard-decision slicers.
//!
//! Dual-polarisation formats map each polarisation tributary with their
//! single-polarisation constellation (DP-QPSK = QPSK per pol).

use num_complex::Complex;

use crate::error::{param, Result};
use crate::scalar::Real;
use crate::sigcore::BitSequence;
use crate::theory::ModulationFormat;

/// Bits carried by one complex symbol on one polarisation.
pub fn bits_per_complex_symbol(format: ModulationFormat) -> Result<usize> {
    use ModulationFormat::*;
    Ok(match format {
        Ook | Bpsk | DpBpsk | Dbpsk => 1,
        Pam4 | Qpsk | DpQpsk => 2,
        Qam16 => 4,
        PsQpsk | Ppm4 | Ppm16 => {
            return param(format!("{format} has no sample-level transmitter"));
        }
    })
}

/// Gray rail for 4-level formats: 00 → −3, 01 → −1, 11 → 1, 10 → 3.
fn gray4(b0: u8, b1: u8) -> f64 {
    match (b0, b1) {
        (0, 0) => -3.0,
        (0, 1) => -1.0,
        (1, 1) => 1.0,
        _ => 3.0,
    }
}

fn ungray4(v: f64) -> (u8, u8) {
    if v < -2.0 {
        (0, 0)
    } else if v < 0.0 {
        (0, 1)
    } else if v < 2.0 {
        (1, 1)
    } else {
        (1, 0)
    }
}

fn sign_bit(b: u8) -> f64 {
    1.0 - 2.0 * b as f64
}

/// Maps bits onto unit-mean-power complex symbols.
///
/// QPSK `00 → (1+i)/√2`, BPSK `0 → +1`, OOK `{0, √2}`, 4-PAM unipolar Gray
/// levels, 16-QAM square Gray. DBPSK is differentially pre-coded from a
/// `+1` reference so an all-zero input gives a constant symbol.
pub fn map_symbols<T: Real>(bits: &BitSequence, format: ModulationFormat) -> Result<Vec<Complex<T>>> {
    let k = bits_per_complex_symbol(format)?;
    let b = bits.as_slice();
    if b.len() % k != 0 {
        return param(format!("{} bits not divisible into {k}-bit {format} symbols", b.len()));
    }
    use ModulationFormat::*;
    let c = |re: f64, im: f64| Complex::new(T::lit(re), T::lit(im));
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let out = match format {
        Bpsk | DpBpsk => b.iter().map(|&v| c(sign_bit(v), 0.0)).collect(),
        Dbpsk => {
            let mut d = 0u8;
            b.iter()
                .map(|&v| {
                    d ^= v;
                    c(sign_bit(d), 0.0)
                })
                .collect()
        }
        Ook => b.iter().map(|&v| c(v as f64 * 2f64.sqrt(), 0.0)).collect(),
        Qpsk | DpQpsk => b.chunks_exact(2).map(|p| c(sign_bit(p[0]) * r2, sign_bit(p[1]) * r2)).collect(),
        Pam4 => {
            let s = 1.0 / 3.5f64.sqrt();
            b.chunks_exact(2).map(|p| c((gray4(p[0], p[1]) + 3.0) / 2.0 * s, 0.0)).collect()
        }
        Qam16 => {
            let s = 1.0 / 10f64.sqrt();
            b.chunks_exact(4)
                .map(|p| c(gray4(p[0], p[1]) * s, gray4(p[2], p[3]) * s))
                .collect()
        }
        PsQpsk | Ppm4 | Ppm16 => unreachable!(),
    };
    Ok(out)
}

/// Minimum-distance hard decision for one (coherent, unit-power) symbol,
/// appending its bits. DBPSK is sliced as BPSK; differential decoding is
/// the receiver's job.
pub fn slice_into<T: Real>(z: Complex<T>, format: ModulationFormat, out: &mut Vec<u8>) {
    use ModulationFormat::*;
    let (re, im) = (z.re.as_f64(), z.im.as_f64());
    match format {
        Bpsk | DpBpsk | Dbpsk => out.push((re < 0.0) as u8),
        Ook => out.push((re > std::f64::consts::FRAC_1_SQRT_2) as u8),
        Qpsk | DpQpsk => {
            out.push((re < 0.0) as u8);
            out.push((im < 0.0) as u8);
        }
        Pam4 => {
            let v = re * 3.5f64.sqrt() * 2.0 - 3.0;
            let (a, b) = ungray4(v);
            out.extend([a, b]);
        }
        Qam16 => {
            let s = 10f64.sqrt();
            let (a, b) = ungray4(re * s);
            let (c, d) = ungray4(im * s);
            out.extend([a, b, c, d]);
        }
        PsQpsk | Ppm4 | Ppm16 => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use ModulationFormat::*;

    type C = Complex<f64>;

    fn bits(v: &[u8]) -> BitSequence {
        BitSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn qpsk_zero_zero() {
        let s: Vec<C> = map_symbols(&bits(&[0, 0]), Qpsk).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s[0] - C::new(r, r)).norm() < 1e-15);
    }

    #[test]
    fn ook_levels() {
        let s: Vec<C> = map_symbols(&bits(&[0, 1]), Ook).unwrap();
        assert_eq!(s[0], C::new(0.0, 0.0));
        assert!((s[1].re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dbpsk_all_zero_is_constant() {
        let s: Vec<C> = map_symbols(&bits(&[0; 9]), Dbpsk).unwrap();
        assert!(s.iter().all(|&z| z == s[0]));
    }

    #[test]
    fn indivisible_length_rejected() {
        assert!(map_symbols::<f64>(&bits(&[0, 1, 1]), Qpsk).is_err());
        assert!(map_symbols::<f64>(&bits(&[0, 1]), PsQpsk).is_err());
    }

    #[test]
    fn unit_mean_power_over_all_labels() {
        for (f, k) in [(Ook, 1), (Pam4, 2), (Bpsk, 1), (Qpsk, 2), (Qam16, 4)] {
            let mut v = Vec::new();
            for label in 0..(1u32 << k) {
                for j in (0..k).rev() {
                    v.push((label >> j & 1) as u8);
                }
            }
            let s: Vec<C> = map_symbols(&bits(&v), f).unwrap();
            let p = s.iter().map(|z| z.norm_sqr()).sum::<f64>() / s.len() as f64;
            assert!((p - 1.0).abs() < 1e-12, "{f}: {p}");
        }
    }

    #[test]
    fn adjacent_levels_differ_in_one_bit() {
        // Gray property of the 4-level rails.
        let rails = [(0, 0), (0, 1), (1, 1), (1, 0)];
        for w in rails.windows(2) {
            let d = (w[0].0 ^ w[1].0) + (w[0].1 ^ w[1].1);
            assert_eq!(d, 1);
            assert!(gray4(w[0].0, w[0].1) < gray4(w[1].0, w[1].1));
        }
    }

    proptest! {
        #[test]
        fn slice_inverts_map(v in proptest::collection::vec(0u8..2, 1..64)) {
            for f in [Ook, Pam4, Bpsk, Qpsk, Qam16] {
                let k = bits_per_complex_symbol(f).unwrap();
                let n = v.len() / k * k;
                if n == 0 { continue; }
                let b = bits(&v[..n]);
                let s: Vec<C> = map_symbols(&b, f).unwrap();
                let mut out = Vec::new();
                for z in s { slice_into(z, f, &mut out); }
                prop_assert_eq!(&out[..], &v[..n]);
            }
        }
    }
}
