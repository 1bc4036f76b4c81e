use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::form::HomogeneousForm;
use super::group::GroupElement;
use crate::Scalar;

/// A point `t` of the boundary circle RP^1 of the upper half-plane. The
/// point `t` stands for the linear factor `tX + Y`; infinity stands for `X`.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryPoint<S> {
    Finite(S),
    Infinity,
}

impl<S: Scalar> BoundaryPoint<S> {
    /// From a homogeneous pair `t0/t1`; `None` for `(0, 0)`.
    pub fn from_pair(t0: S, t1: S) -> Option<Self> {
        if t1.is_zero() {
            (!t0.is_zero()).then_some(Self::Infinity)
        } else {
            Some(Self::Finite(t0 / t1))
        }
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            Self::Finite(t) => Some(t),
            Self::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    /// Canonical homogeneous pair: `(t, 1)` or `(1, 0)`.
    pub fn pair(&self) -> (S, S) {
        match self {
            Self::Finite(t) => (t.clone(), S::one()),
            Self::Infinity => (S::one(), S::zero()),
        }
    }

    /// The linear form `t0 X + t1 Y`.
    pub fn linear_factor(&self) -> HomogeneousForm<S> {
        let (t0, t1) = self.pair();
        HomogeneousForm::linear(t0, t1)
    }

    /// Image under the Moebius map `t -> (at + b)/(ct + d)` together with the
    /// scalar `c` such that `g . (tX + Y) = c (t'X + Y)`.
    pub fn act(&self, g: &GroupElement<S>) -> (Self, S) {
        let (t0, t1) = self.pair();
        let s0 = g.a().clone() * t0.clone() + g.b().clone() * t1.clone();
        let s1 = g.c().clone() * t0 + g.d().clone() * t1;
        if s1.is_zero() {
            (Self::Infinity, s0)
        } else {
            (Self::Finite(s0 / s1.clone()), s1)
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BoundaryPoint<T> {
        match self {
            Self::Finite(t) => BoundaryPoint::Finite(f(t)),
            Self::Infinity => BoundaryPoint::Infinity,
        }
    }

    pub fn to_f64(&self) -> BoundaryPoint<f64> {
        self.map(|t| t.to_f64())
    }

    /// Order with finite points by value and infinity last.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
            (Self::Finite(_), Self::Infinity) => Ordering::Less,
            (Self::Infinity, Self::Finite(_)) => Ordering::Greater,
            (Self::Infinity, Self::Infinity) => Ordering::Equal,
        }
    }
}

impl<S: Scalar> fmt::Display for BoundaryPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => write!(f, "(1/0)"),
            Self::Finite(t) => {
                let s = t.to_string();
                if s.contains('/') {
                    write!(f, "({s})")
                } else {
                    write!(f, "({s}/1)")
                }
            }
        }
    }
}

impl<S: Scalar> Serialize for BoundaryPoint<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        serializer.collect_str(self)
    }
}

/// A point `re + i im` of the upper half-plane, standing for the quadratic
/// factor `(zX + Y)(conj(z)X + Y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InteriorPoint<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> InteriorPoint<S> {
    /// `None` unless `im > 0`.
    pub fn new(re: S, im: S) -> Option<Self> {
        im.is_positive().then_some(Self { re, im })
    }

    pub fn i() -> Self {
        Self { re: S::zero(), im: S::one() }
    }

    pub fn norm_sqr(&self) -> S {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    /// `|z|^2 X^2 + 2 Re(z) XY + Y^2`.
    pub fn quadratic_factor(&self) -> HomogeneousForm<S> {
        HomogeneousForm::from_coeffs_unchecked(vec![
            S::one(),
            S::two() * self.re.clone(),
            self.norm_sqr(),
        ])
    }

    /// Moebius image `(az + b)/(cz + d)` and the cocycle `|cz + d|^2`.
    pub fn act(&self, g: &GroupElement<S>) -> (Self, S) {
        let (a, b, c, d) = (g.a().clone(), g.b().clone(), g.c().clone(), g.d().clone());
        let (x, y) = (self.re.clone(), self.im.clone());
        // cz + d = (cx + d) + i cy
        let den_re = c.clone() * x.clone() + d.clone();
        let den_im = c.clone() * y.clone();
        let den = den_re.clone() * den_re.clone() + den_im.clone() * den_im;
        // Re((az+b)(conj(cz+d))) = (ax+b)(cx+d) + ac y^2
        let num_re = (a.clone() * x + b) * den_re + a * c * y.clone() * y.clone();
        let re = num_re / den.clone();
        let im = y / den.clone();
        (Self { re, im }, den)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> InteriorPoint<T> {
        InteriorPoint { re: f(&self.re), im: f(&self.im) }
    }

    pub fn to_f64(&self) -> InteriorPoint<f64> {
        self.map(|t| t.to_f64())
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re
            .partial_cmp(&other.re)
            .unwrap_or(Ordering::Equal)
            .then(self.im.partial_cmp(&other.im).unwrap_or(Ordering::Equal))
    }
}

impl<S: Scalar> fmt::Display for InteriorPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.re, self.im)
    }
}

impl<S: Scalar> Serialize for InteriorPoint<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rational};

    fn g(a: i64, b: i64, c: i64, d: i64) -> GroupElement<Rational> {
        GroupElement::new(rat(a), rat(b), rat(c), rat(d)).unwrap()
    }

    #[test]
    fn quarter_turn_sends_zero_to_infinity() {
        let (t, _) = BoundaryPoint::Finite(rat(0)).act(&g(0, -1, 1, 0));
        assert_eq!(t, BoundaryPoint::Infinity);
        let (t, _) = BoundaryPoint::<Rational>::Infinity.act(&g(0, -1, 1, 0));
        assert_eq!(t, BoundaryPoint::Finite(rat(0)));
    }

    #[test]
    fn linear_factor_transforms_with_cocycle() {
        let a = g(2, 3, 1, 2);
        for p in [BoundaryPoint::Finite(rat(5)), BoundaryPoint::Infinity] {
            let (q, c) = p.act(&a);
            assert_eq!(p.linear_factor().act(&a), q.linear_factor().scale(&c));
        }
    }

    #[test]
    fn quadratic_factor_transforms_with_cocycle() {
        let z = InteriorPoint::new(rat(1), rat(2)).unwrap();
        let a = g(1, 1, 1, 2);
        let (w, c) = z.act(&a);
        assert!(w.im > rat(0));
        assert_eq!(z.quadratic_factor().act(&a), w.quadratic_factor().scale(&c));
    }

    #[test]
    fn infinity_displays_as_one_over_zero() {
        assert_eq!(BoundaryPoint::<Rational>::Infinity.to_string(), "(1/0)");
        assert_eq!(BoundaryPoint::Finite(Rational::new((-1).into(), 2.into())).to_string(), "(-1/2)");
        assert_eq!(BoundaryPoint::Finite(rat(3)).to_string(), "(3/1)");
    }

    #[test]
    fn infinity_sorts_last() {
        let mut v = vec![BoundaryPoint::Infinity, BoundaryPoint::Finite(rat(2)), BoundaryPoint::Finite(rat(-1))];
        v.sort_by(|a, b| a.canonical_cmp(b));
        assert_eq!(v, vec![BoundaryPoint::Finite(rat(-1)), BoundaryPoint::Finite(rat(2)), BoundaryPoint::Infinity]);
    }
}
