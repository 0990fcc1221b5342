use num_complex::Complex;

use super::DualPolWaveform;
use crate::scalar::Real;

/// A 2×2 complex Jones matrix acting on `(x, y)` field pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesMatrix<T: Real> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> JonesMatrix<T> {
    pub fn new(m11: Complex<T>, m12: Complex<T>, m21: Complex<T>, m22: Complex<T>) -> Self {
        Self {
            m: [[m11, m12], [m21, m22]],
        }
    }

    pub fn identity() -> Self {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(one, zero, zero, one)
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    /// True when every entry of `M·M†` is within `tol` of the identity.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.mul(&self.adjoint());
        let id = Self::identity();
        (0..2).all(|i| (0..2).all(|j| (p.m[i][j] - id.m[i][j]).norm().as_f64() <= tol))
    }
}

/// Unitary rotation `[[cos α, −sin α·e^{iδ}], [sin α·e^{−iδ}, cos α]]`.
pub fn jones_rotation<T: Real>(alpha: f64, delta: f64) -> JonesMatrix<T> {
    let (s, c) = alpha.sin_cos();
    let e = Complex::from_polar(1.0, delta);
    let cv = |z: Complex<f64>| Complex::new(T::lit(z.re), T::lit(z.im));
    JonesMatrix::new(
        cv(Complex::new(c, 0.0)),
        cv(-e * s),
        cv(e.conj() * s),
        cv(Complex::new(c, 0.0)),
    )
}

/// Per-sample matrix multiply of the `(x, y)` field.
pub fn apply_jones<T: Real>(w: &DualPolWaveform<T>, m: &JonesMatrix<T>) -> DualPolWaveform<T> {
    let (x, y): (Vec<_>, Vec<_>) = w
        .x
        .iter()
        .zip(&w.y)
        .map(|(&a, &b)| {
            let [p, q] = m.apply([a, b]);
            (p, q)
        })
        .unzip();
    DualPolWaveform {
        x,
        y,
        sample_rate: w.sample_rate,
        center_offset: w.center_offset,
    }
}
