//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real floating-point scalar (`f32` or `f64`) the whole crate is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance used to decide whether a ratio sits on an integer lattice.
    #[inline]
    fn lattice_tol() -> Self {
        Self::epsilon().sqrt()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// If `x` is within the lattice tolerance of an integer, returns it.
pub fn nearest_integer<T: Real>(x: T) -> Option<i64> {
    let r = x.round();
    let scale = T::one().max(x.abs());
    if (x - r).abs() <= T::lattice_tol() * scale {
        r.to_i64()
    } else {
        None
    }
}

/// Root-mean-square difference between two complex vectors.
pub fn rms_diff<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    assert_eq!(a.len(), b.len());
    if a.is_empty() {
        return T::zero();
    }
    let s = a
        .iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + (*x - *y).norm_sqr());
    (s / T::from_usize_lossy(a.len())).sqrt()
}

/// Root-mean-square difference between two real vectors.
pub fn rms_diff_real<T: Real>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len());
    if a.is_empty() {
        return T::zero();
    }
    let s = a
        .iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + (*x - *y) * (*x - *y));
    (s / T::from_usize_lossy(a.len())).sqrt()
}
