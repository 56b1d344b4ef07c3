//! Floating scalar abstraction for the numerical side of the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating type the Weierstrass engine is generic over (`f32`, `f64`).
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Working precision for series evaluation and iterative schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision<T> {
    /// Relative truncation threshold.
    pub eps: T,
    /// Hard cap on series terms / iterations.
    pub max_terms: usize,
}

impl<T: Real> Default for Precision<T> {
    fn default() -> Self {
        Precision {
            eps: T::epsilon(),
            max_terms: 10_000,
        }
    }
}

impl<T: Real> Precision<T> {
    /// Precision targeting `digits` decimal digits, clamped to the type's unit roundoff.
    pub fn from_digits(digits: u32) -> Self {
        let eps = T::lit(10f64.powi(-(digits as i32)));
        Precision {
            eps: eps.max(T::epsilon()),
            max_terms: 10_000,
        }
    }
}

pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

pub(crate) fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `|a - b| / max(1, |a|, |b|)`.
pub fn rel_diff<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    let scale = T::one().max(a.norm()).max(b.norm());
    (a - b).norm() / scale
}
