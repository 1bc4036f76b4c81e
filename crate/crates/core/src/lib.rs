//! Orbits of SL(2,R) acting on projectivized representations
//! `P(rho_{n_1} + ... + rho_{n_p})`.
//!
//! The exact layer ([`poly`], [`rep`], [`orbit`], [`smoothness`]) is generic
//! over [`Scalar`] and is used with [`Rational`] for every verdict. The
//! floating layer ([`numeric`], [`fields`]) cross-checks those verdicts.

pub mod fields;
pub mod numeric;
pub mod orbit;
pub mod poly;
pub mod rep;
pub mod scalar;
pub mod smoothness;

pub use scalar::Scalar;

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

pub type Form = poly::HomogeneousForm<Rational>;
pub type FormF64 = poly::HomogeneousForm<f64>;
pub type Element = poly::FactoredElement<Rational>;
pub type ElementF64 = poly::FactoredElement<f64>;
pub type Group = poly::GroupElement<Rational>;
pub type GroupF64 = poly::GroupElement<f64>;
pub type Block = poly::FactoredBlock<Rational>;

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p / q`; panics on `q = 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
