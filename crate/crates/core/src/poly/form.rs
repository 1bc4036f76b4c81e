use std::fmt;
use std::ops::{Add, Mul};

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::group::GroupElement;
use super::PolyError;
use crate::Scalar;

/// A binary form of fixed degree `n`; `coeffs[i]` multiplies `X^i Y^(n-i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousForm<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> HomogeneousForm<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::MalformedForm("a form needs degree + 1 coefficients".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PolyError::MalformedForm("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_coeffs_unchecked(coeffs: Vec<S>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![S::zero(); degree + 1] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![S::one()] }
    }

    /// `c X^i Y^(degree-i)`.
    pub fn monomial(degree: usize, x_power: usize, c: S) -> Self {
        assert!(x_power <= degree, "monomial exponent exceeds degree");
        let mut f = Self::zero(degree);
        f.coeffs[x_power] = c;
        f
    }

    /// `x_coeff X + y_coeff Y`.
    pub fn linear(x_coeff: S, y_coeff: S) -> Self {
        Self { coeffs: vec![y_coeff, x_coeff] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `X^x_power Y^(n - x_power)`.
    pub fn coeff(&self, x_power: usize) -> &S {
        &self.coeffs[x_power]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitution `X -> aX + cY`, `Y -> bX + dY`.
    pub fn act(&self, g: &GroupElement<S>) -> Self {
        let n = self.degree();
        let image_x = Self::linear(g.a().clone(), g.c().clone());
        let image_y = Self::linear(g.b().clone(), g.d().clone());
        let pows_x = powers(&image_x, n);
        let pows_y = powers(&image_y, n);
        let mut out = Self::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = (&pows_x[i] * &pows_y[n - i]).scale(c);
            out = &out + &term;
        }
        out
    }

    /// Representative with the highest-`X`-power nonzero coefficient equal to 1.
    pub fn normalized(&self) -> Option<Self> {
        let lead = self.coeffs.iter().rev().find(|c| !c.is_zero())?.clone();
        Some(Self { coeffs: self.coeffs.iter().map(|c| c.clone() / lead.clone()).collect() })
    }

    pub fn projectively_eq(&self, other: &Self) -> bool {
        self.degree() == other.degree()
            && match (self.normalized(), other.normalized()) {
                (Some(a), Some(b)) => a == b,
                (None, None) => true,
                _ => false,
            }
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let n = self.degree() as i32;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64() * x.powi(i as i32) * y.powi(n - i as i32))
            .sum()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> HomogeneousForm<T> {
        HomogeneousForm { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> HomogeneousForm<f64> {
        self.map(|c| c.to_f64())
    }
}

fn powers<S: Scalar>(f: &HomogeneousForm<S>, n: usize) -> Vec<HomogeneousForm<S>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(HomogeneousForm::one());
    for i in 0..n {
        let next = &out[i] * f;
        out.push(next);
    }
    out
}

impl<S: Scalar> Mul for &HomogeneousForm<S> {
    type Output = HomogeneousForm<S>;

    fn mul(self, rhs: Self) -> HomogeneousForm<S> {
        let mut coeffs = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        HomogeneousForm { coeffs }
    }
}

impl<S: Scalar> Add for &HomogeneousForm<S> {
    type Output = HomogeneousForm<S>;

    fn add(self, rhs: Self) -> HomogeneousForm<S> {
        assert_eq!(self.degree(), rhs.degree(), "adding forms of different degrees");
        HomogeneousForm {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for HomogeneousForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for i in (0..=n).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative() { (true, -c.clone()) } else { (false, c.clone()) };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            write!(f, "{mag}")?;
            write_monomial(f, "X", i)?;
            write_monomial(f, "Y", n - i)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, var: &str, e: usize) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => write!(f, " {var}"),
        _ => write!(f, " {var}^{e}"),
    }
}

impl<S: Scalar> Serialize for HomogeneousForm<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rational};

    fn form(cs: &[i64]) -> HomogeneousForm<Rational> {
        HomogeneousForm::new(cs.iter().map(|&c| rat(c)).collect()).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let p = form(&[3, -1, 0, 5]);
        assert_eq!(p.act(&GroupElement::identity()), p);
    }

    #[test]
    fn rotation_sends_x_squared_to_y_squared() {
        let w = GroupElement::new(rat(0), rat(-1), rat(1), rat(0)).unwrap();
        // X^2 -> (0*X + 1*Y)^2
        assert_eq!(form(&[0, 0, 1]).act(&w), form(&[1, 0, 0]));
    }

    #[test]
    fn shear_sends_y_squared_to_x_plus_y_squared() {
        let n = GroupElement::new(rat(1), rat(1), rat(0), rat(1)).unwrap();
        // Y -> X + Y, so Y^2 -> X^2 + 2XY + Y^2
        assert_eq!(form(&[1, 0, 0]).act(&n), form(&[1, 2, 1]));
    }

    #[test]
    fn display_lists_terms_from_x_power_down() {
        assert_eq!(form(&[1, 0, -1]).to_string(), "-1 X^2 + 1 Y^2");
        assert_eq!(form(&[1, 2, 1]).to_string(), "1 X^2 + 2 X Y + 1 Y^2");
        assert_eq!(HomogeneousForm::<Rational>::zero(3).to_string(), "0");
    }

    #[test]
    fn projective_equality_ignores_scale() {
        assert!(form(&[2, 4, 6]).projectively_eq(&form(&[-1, -2, -3])));
        assert!(!form(&[2, 4, 6]).projectively_eq(&form(&[1, 2, 4])));
    }
}
