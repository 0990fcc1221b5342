use crate::error::{param, Result};

/// An ordered binary symbol stream. Every element is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSequence(Vec<u8>);

impl BitSequence {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return param("bit sequence must not be empty");
        }
        if bits.iter().any(|&b| b > 1) {
            return param("bit sequence elements must be 0 or 1");
        }
        Ok(Self(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    /// Cyclic left rotation by `shift` positions.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut v = self.0.clone();
        let n = v.len();
        v.rotate_left(shift % n);
        Self(v)
    }
}

impl std::ops::Index<usize> for BitSequence {
    type Output = u8;
    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

/// Lexicographically least binary de Bruijn sequence of the given order,
/// cyclically rotated left by `shift`.
///
/// Built by concatenating, in lexicographic order, every binary Lyndon word
/// whose length divides `order` (Fredricksen–Maiorana).
pub fn de_bruijn(order: u32, shift: usize) -> Result<BitSequence> {
    if !(2..=24).contains(&order) {
        return param(format!("de Bruijn order {order} outside 2..=24"));
    }
    let n = order as usize;
    let mut seq = Vec::with_capacity(1 << n);
    // Duval's iterative Lyndon word generator over the alphabet {0, 1}.
    let mut w: Vec<i8> = vec![-1];
    while !w.is_empty() {
        *w.last_mut().unwrap() += 1;
        let m = w.len();
        if n % m == 0 {
            seq.extend(w.iter().map(|&b| b as u8));
        }
        while w.len() < n {
            let b = w[w.len() - m];
            w.push(b);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
    }
    debug_assert_eq!(seq.len(), 1 << n);
    let shift = shift % seq.len();
    seq.rotate_left(shift);
    Ok(BitSequence(seq))
}
