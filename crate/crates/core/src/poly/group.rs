use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::PolyError;
use crate::Scalar;

/// A matrix `(a b; c d)` of SL(2,R). For exact scalars the determinant is
/// exactly 1; floating elements are accepted within `1e-9` relative error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupElement<S> {
    a: S,
    b: S,
    c: S,
    d: S,
}

/// Basis of sl(2,R) used for the one-parameter subgroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    H,
    K,
    L,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::H, Generator::K, Generator::L];

    /// Matrix entries `(a, b, c, d)`.
    pub fn matrix(self) -> [i64; 4] {
        match self {
            Generator::H => [1, 0, 0, -1],
            Generator::K => [0, -1, 1, 0],
            Generator::L => [0, 1, 1, 0],
        }
    }
}

impl<S: Scalar> GroupElement<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Result<Self, PolyError> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        let ok = if S::EXACT {
            det.is_one()
        } else {
            let scale = [&a, &b, &c, &d].iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
            (det.to_f64() - 1.0).abs() <= 1e-9 * scale * scale
        };
        if !ok {
            return Err(PolyError::NotUnimodular(det.to_f64()));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: S::one(), b: S::zero(), c: S::zero(), d: S::one() }
    }

    pub fn minus_identity() -> Self {
        Self { a: -S::one(), b: S::zero(), c: S::zero(), d: -S::one() }
    }

    pub fn a(&self) -> &S {
        &self.a
    }
    pub fn b(&self) -> &S {
        &self.b
    }
    pub fn c(&self) -> &S {
        &self.c
    }
    pub fn d(&self) -> &S {
        &self.d
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        Self {
            a: a.clone() * e.clone() + b.clone() * g.clone(),
            b: a.clone() * f.clone() + b.clone() * h.clone(),
            c: c.clone() * e.clone() + d.clone() * g.clone(),
            d: c.clone() * f.clone() + d.clone() * h.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }
    }

    /// `(1 t; 0 1)`: sends the boundary point 0 to `t`.
    pub fn shear(t: S) -> Self {
        Self { a: S::one(), b: t, c: S::zero(), d: S::one() }
    }

    /// `(0 -1; 1 0)`: sends 0 to infinity.
    pub fn quarter_turn() -> Self {
        Self { a: S::zero(), b: -S::one(), c: S::one(), d: S::zero() }
    }

    /// `diag(s, 1/s)`.
    pub fn diagonal(s: S) -> Self {
        let inv = S::one() / s.clone();
        Self { a: s, b: S::zero(), c: S::zero(), d: inv }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GroupElement<T> {
        GroupElement { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }

    pub fn to_f64(&self) -> GroupElement<f64> {
        self.map(|v| v.to_f64())
    }
}

impl GroupElement<f64> {
    /// `exp(t Z)` for a basis generator `Z`.
    pub fn exp(generator: Generator, t: f64) -> Self {
        match generator {
            Generator::H => Self { a: t.exp(), b: 0.0, c: 0.0, d: (-t).exp() },
            Generator::K => Self { a: t.cos(), b: -t.sin(), c: t.sin(), d: t.cos() },
            Generator::L => Self { a: t.cosh(), b: t.sinh(), c: t.sinh(), d: t.cosh() },
        }
    }

    /// Iwasawa product `k(theta) a(log_scale) n(shear)`.
    pub fn iwasawa(theta: f64, log_scale: f64, shear: f64) -> Self {
        let k = Self::exp(Generator::K, theta);
        let a = Self::exp(Generator::H, log_scale);
        let n = Self { a: 1.0, b: shear, c: 0.0, d: 1.0 };
        k.compose(&a).compose(&n)
    }

    /// Draw with rotation angle uniform on `[0, 2pi)`, log-scale in
    /// `[-max_log_scale, max_log_scale]` and shear in `[-max_shear, max_shear]`.
    pub fn random<R: Rng>(rng: &mut R, max_log_scale: f64, max_shear: f64) -> Self {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let s = rng.gen_range(-max_log_scale..=max_log_scale);
        let n = rng.gen_range(-max_shear..=max_shear);
        Self::iwasawa(theta, s, n)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl<S: Scalar> fmt::Display for GroupElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}
