//! Polarisation-time block coding and synchronous polarisation scrambling.

use num_complex::Complex;

use crate::error::{param, Result};
use crate::scalar::Real;

/// Per-polarisation slot streams `(x, y)`.
pub type SlotPair<T> = (Vec<Complex<T>>, Vec<Complex<T>>);

/// Alamouti encoding of consecutive symbol pairs:
/// slot 1 carries `(s1, s2)`, slot 2 carries `(−s2*, s1*)` on `(x, y)`.
pub fn alamouti_encode<T: Real>(s: &[Complex<T>]) -> Result<SlotPair<T>> {
    alamouti_encode_blocks(s, 1)
}

/// Alamouti encoding where each "symbol" is a block of `block` parallel
/// values (one OFDM frame of subcarriers). Block pair `(A, B)` becomes
/// `(A, B)` then `(−B*, A*)` elementwise.
pub fn alamouti_encode_blocks<T: Real>(s: &[Complex<T>], block: usize) -> Result<SlotPair<T>> {
    if block == 0 || s.len() % (2 * block) != 0 {
        return param(format!(
            "Alamouti coding needs a multiple of {} symbols, got {}",
            2 * block.max(1),
            s.len()
        ));
    }
    let mut x = Vec::with_capacity(s.len());
    let mut y = Vec::with_capacity(s.len());
    for pair in s.chunks_exact(2 * block) {
        let (a, b) = pair.split_at(block);
        x.extend_from_slice(a);
        y.extend_from_slice(b);
        x.extend(b.iter().map(|v| -v.conj()));
        y.extend(a.iter().map(|v| v.conj()));
    }
    Ok((x, y))
}

/// Each symbol is sent twice: first half-slot on x, second on y.
pub fn pol_scramble_encode<T: Real>(s: &[Complex<T>]) -> SlotPair<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut x = Vec::with_capacity(2 * s.len());
    let mut y = Vec::with_capacity(2 * s.len());
    for &v in s {
        x.extend([v, zero]);
        y.extend([zero, v]);
    }
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    #[test]
    fn one_and_i() {
        let (x, y) = alamouti_encode(&[C::new(1.0, 0.0), C::new(0.0, 1.0)]).unwrap();
        assert_eq!(x, vec![C::new(1.0, 0.0), C::new(0.0, 1.0)]);
        assert_eq!(y, vec![C::new(0.0, 1.0), C::new(1.0, 0.0)]);
    }

    #[test]
    fn zero_second_symbol() {
        let s = C::new(0.3, -0.7);
        let (x, y) = alamouti_encode(&[s, C::new(0.0, 0.0)]).unwrap();
        assert_eq!((x[1], y[1]), (C::new(0.0, 0.0) * -1.0, s.conj()));
    }

    #[test]
    fn odd_length_rejected() {
        assert!(alamouti_encode(&[C::new(1.0, 0.0)]).is_err());
        assert!(alamouti_encode_blocks(&[C::new(1.0, 0.0); 6], 2).is_err());
    }

    #[test]
    fn scramble_single_symbol() {
        let s = C::new(0.5, 0.5);
        let (x, y) = pol_scramble_encode(&[s]);
        assert_eq!(x, vec![s, C::new(0.0, 0.0)]);
        assert_eq!(y, vec![C::new(0.0, 0.0), s]);
    }

    #[test]
    fn scramble_x_projection_keeps_first_half_slots() {
        let s: Vec<C> = (0..10).map(|k| C::new(k as f64, 1.0)).collect();
        let (x, _) = pol_scramble_encode(&s);
        let kept: Vec<C> = x.iter().step_by(2).copied().collect();
        assert_eq!(kept, s);
        assert!(x.iter().skip(1).step_by(2).all(|v| v.norm() == 0.0));
    }

    fn cvec() -> impl Strategy<Value = Vec<C>> {
        proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..40)
            .prop_map(|v| v.into_iter().map(|(a, b)| C::new(a, b)).collect())
    }

    fn energy(v: &[C]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum()
    }

    proptest! {
        #[test]
        fn alamouti_preserves_power_per_slot(mut s in cvec()) {
            if s.len() % 2 == 1 { s.pop(); }
            prop_assume!(!s.is_empty());
            let (x, y) = alamouti_encode(&s).unwrap();
            // Each slot carries two symbols on two pols: slot power = 2 × symbol power.
            let per_slot = (energy(&x) + energy(&y)) / x.len() as f64;
            let per_symbol = energy(&s) / s.len() as f64;
            prop_assert!((per_slot - 2.0 * per_symbol).abs() <= 1e-9 * per_symbol.max(1e-300));
        }

        #[test]
        fn scramble_preserves_energy(s in cvec()) {
            let (x, y) = pol_scramble_encode(&s);
            let e = energy(&s);
            prop_assert!((energy(&x) + energy(&y) - 2.0 * e).abs() <= 1e-9 * e.max(1e-300));
        }
    }
}
