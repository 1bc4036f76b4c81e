//! Scalar abstraction shared by the exact and floating layers.
//!
//! Everything that only needs field arithmetic (forms, group action,
//! factored elements, the classifier) is written once against [`Scalar`]
//! and instantiated with [`crate::Rational`] for verdicts and `f64` for the
//! numeric oracles.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// `true` when equality and zero tests are decidable (no rounding).
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// Nearest value of this type; exact for rationals (binary expansion).
    fn from_f64(v: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn from_rational(v: &BigRational) -> Self;

    /// Exact value as a rational (binary expansion for floats); `None` for
    /// non-finite values.
    fn to_rational(&self) -> Option<BigRational>;

    fn is_finite(&self) -> bool {
        true
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn powi(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator/denominator too large for a direct conversion
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_int(v: i64) -> Self {
                v as $t
            }

            fn from_f64(v: f64) -> Option<Self> {
                <$t as FromPrimitive>::from_f64(v)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn from_rational(v: &BigRational) -> Self {
                Scalar::to_f64(v) as $t
            }

            fn to_rational(&self) -> Option<BigRational> {
                BigRational::from_float(*self)
            }

            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued fractions). Used to recover exact roots from floating ones.
pub fn rational_guess(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}
