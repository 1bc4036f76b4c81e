use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::Scalar;

/// Sparse polynomial in two local parameters `x`, `y`; the key `(i, j)`
/// stands for `x^i y^j`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePoly<S> {
    terms: BTreeMap<(u32, u32), S>,
}

impl<S: Scalar> BivariatePoly<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: S, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn x() -> Self {
        Self::monomial(S::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(S::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), S)>) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: S) {
        let entry = self.terms.entry((i, j)).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> S {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    /// Lowest total degree present.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.order() == self.degree()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Part of total degree `d`.
    pub fn component(&self, d: u32) -> Self {
        Self { terms: self.terms.iter().filter(|((i, j), _)| i + j == d).map(|(k, c)| (*k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v.clone() * c.clone())))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(S::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|((i, j), c)| c.to_f64() * x.powi(*i as i32) * y.powi(*j as i32)).sum()
    }
}

impl<S: Scalar> Add for &BivariatePoly<S> {
    type Output = BivariatePoly<S>;

    fn add(self, rhs: Self) -> BivariatePoly<S> {
        let mut out = self.clone();
        for ((i, j), c) in &rhs.terms {
            out.add_term(*i, *j, c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &BivariatePoly<S> {
    type Output = BivariatePoly<S>;

    fn neg(self) -> BivariatePoly<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Sub for &BivariatePoly<S> {
    type Output = BivariatePoly<S>;

    fn sub(self, rhs: Self) -> BivariatePoly<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Mul for &BivariatePoly<S> {
    type Output = BivariatePoly<S>;

    fn mul(self, rhs: Self) -> BivariatePoly<S> {
        let mut out = BivariatePoly::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a.clone() * b.clone());
            }
        }
        out
    }
}

macro_rules! owned_op {
    ($tr:ident, $f:ident) => {
        impl<S: Scalar> $tr for BivariatePoly<S> {
            type Output = BivariatePoly<S>;

            fn $f(self, rhs: Self) -> BivariatePoly<S> {
                (&self).$f(&rhs)
            }
        }
    };
}

owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);

impl<S: Scalar> fmt::Display for BivariatePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((i, j), c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rational};

    type P = BivariatePoly<Rational>;

    #[test]
    fn arithmetic_cancels_zero_terms() {
        let p = &P::x() + &P::y();
        let q = &P::x() - &P::y();
        let r = &p * &q;
        assert_eq!(r, &P::x().pow(2) - &P::y().pow(2));
        assert!((&r - &r).is_zero());
    }

    #[test]
    fn degree_and_homogeneity() {
        let p = &P::x() * &P::y().pow(2) + P::y().pow(4);
        assert_eq!((p.order(), p.degree()), (3, 4));
        assert!(!p.is_homogeneous());
        assert_eq!(p.component(3), &P::x() * &P::y().pow(2));
        assert!(P::constant(rat(3)).is_constant());
    }

    #[test]
    fn evaluation() {
        let p = (&P::x() - &P::y()).pow(3);
        assert!((p.eval_f64(2.0, 0.5) - 3.375).abs() < 1e-12);
    }
}
