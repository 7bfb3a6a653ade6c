//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the solver is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion used for diagnostics and I/O.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance floor: `max(requested, k * epsilon)`.
    ///
    /// Tolerances are written for `f64`; in `f32` they saturate at a few ulps.
    #[inline]
    fn tol(requested: f64, ulps: f64) -> Self {
        Self::lit(requested).max(Self::epsilon() * Self::lit(ulps))
    }

    /// Odd-symmetric inverse hyperbolic tangent.
    ///
    /// `std`'s `atanh` evaluates `ln_1p(2x / (1 - x))` directly, which is not
    /// odd and loses accuracy for `x` near `-1`. Mirror symmetry of the solver
    /// relies on `artanh(-x) == -artanh(x)` exactly.
    #[inline]
    fn artanh(self) -> Self {
        let a = self.abs();
        let half = Self::lit(0.5);
        let r = half * ((a + a) / (Self::one() - a)).ln_1p();
        if self < Self::zero() {
            -r
        } else {
            r
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub(crate) fn softplus<T: Real>(x: T) -> T {
    if x > T::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
