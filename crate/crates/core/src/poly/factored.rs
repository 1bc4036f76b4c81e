use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::form::HomogeneousForm;
use super::group::GroupElement;
use super::roots::{BoundaryPoint, InteriorPoint};
use super::PolyError;
use crate::rep::RepDecomposition;
use crate::Scalar;

/// One block `u * prod (t_i X + Y)^alpha_i * prod ((z_j X + Y)(conj z_j X + Y))^beta_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredBlock<S> {
    pub u: S,
    pub boundary: Vec<(BoundaryPoint<S>, u32)>,
    pub interior: Vec<(InteriorPoint<S>, u32)>,
}

impl<S: Scalar> FactoredBlock<S> {
    pub fn zero() -> Self {
        Self { u: S::zero(), boundary: Vec::new(), interior: Vec::new() }
    }

    pub fn new(
        u: S,
        boundary: Vec<(BoundaryPoint<S>, u32)>,
        interior: Vec<(InteriorPoint<S>, u32)>,
    ) -> Self {
        let mut b = Self { u, boundary, interior };
        b.sort();
        b
    }

    /// `u * (tX + Y)^n`.
    pub fn power(u: S, t: BoundaryPoint<S>, n: usize) -> Self {
        if u.is_zero() {
            return Self::zero();
        }
        let boundary = if n > 0 { vec![(t, n as u32)] } else { Vec::new() };
        Self { u, boundary, interior: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero()
    }

    /// `sum alpha + 2 sum beta`.
    pub fn root_degree(&self) -> usize {
        let a: u32 = self.boundary.iter().map(|(_, m)| m).sum();
        let b: u32 = self.interior.iter().map(|(_, m)| m).sum();
        (a + 2 * b) as usize
    }

    pub fn validate(&self, n: usize) -> Result<(), PolyError> {
        if self.u.is_zero() {
            if !self.boundary.is_empty() || !self.interior.is_empty() {
                return Err(PolyError::MalformedBlock("a zero block carries no roots".into()));
            }
            return Ok(());
        }
        if !self.u.is_finite() {
            return Err(PolyError::MalformedBlock("non-finite scalar".into()));
        }
        if self.boundary.iter().any(|(_, m)| *m == 0) || self.interior.iter().any(|(_, m)| *m == 0) {
            return Err(PolyError::MalformedBlock("zero multiplicity".into()));
        }
        if self.interior.iter().any(|(z, _)| !z.im.is_positive()) {
            return Err(PolyError::MalformedBlock("interior root off the upper half-plane".into()));
        }
        for (i, (t, _)) in self.boundary.iter().enumerate() {
            if self.boundary[..i].iter().any(|(s, _)| s == t) {
                return Err(PolyError::MalformedBlock(format!("repeated boundary root {t}")));
            }
        }
        for (i, (z, _)) in self.interior.iter().enumerate() {
            if self.interior[..i].iter().any(|(w, _)| w == z) {
                return Err(PolyError::MalformedBlock(format!("repeated interior root {z}")));
            }
        }
        let found = self.root_degree();
        if found != n {
            return Err(PolyError::DegreeMismatch { expected: n, found });
        }
        Ok(())
    }

    fn sort(&mut self) {
        self.boundary.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        self.interior.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    }

    /// Multiplies the factors out in the monomial basis of degree `n`.
    pub fn expand(&self, n: usize) -> Result<HomogeneousForm<S>, PolyError> {
        self.validate(n)?;
        if self.u.is_zero() {
            return Ok(HomogeneousForm::zero(n));
        }
        let mut acc = HomogeneousForm::one();
        for (t, m) in &self.boundary {
            acc = &acc * &t.linear_factor().pow(*m);
        }
        for (z, m) in &self.interior {
            acc = &acc * &z.quadratic_factor().pow(*m);
        }
        Ok(acc.scale(&self.u))
    }

    /// Moves every root by the Moebius map of `g` and absorbs the cocycles in
    /// `u`, so that `expand` commutes with the action exactly.
    pub fn act(&self, g: &GroupElement<S>) -> Self {
        if self.u.is_zero() {
            return self.clone();
        }
        let mut u = self.u.clone();
        let boundary = self
            .boundary
            .iter()
            .map(|(t, m)| {
                let (s, c) = t.act(g);
                u = u.clone() * c.powi(*m);
                (s, *m)
            })
            .collect();
        let interior = self
            .interior
            .iter()
            .map(|(z, m)| {
                let (w, c) = z.act(g);
                u = u.clone() * c.powi(*m);
                (w, *m)
            })
            .collect();
        Self::new(u, boundary, interior)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> FactoredBlock<T> {
        FactoredBlock {
            u: f(&self.u),
            boundary: self.boundary.iter().map(|(t, m)| (t.map(f), *m)).collect(),
            interior: self.interior.iter().map(|(z, m)| (z.map(f), *m)).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for FactoredBlock<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u={} ; boundary:", self.u)?;
        for (i, (t, m)) in self.boundary.iter().enumerate() {
            write!(f, "{}{t}^{m}", if i == 0 { " " } else { ", " })?;
        }
        write!(f, " ; interior:")?;
        for (i, (z, m)) in self.interior.iter().enumerate() {
            write!(f, "{}{z}^{m}", if i == 0 { " " } else { ", " })?;
        }
        Ok(())
    }
}

impl<S: Scalar> Serialize for FactoredBlock<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        serializer.collect_str(self)
    }
}

/// A point of P(V) for `V = rho_{n_1} + ... + rho_{n_p}`, one block per summand.
/// Stored normalized: the first nonzero `u` is 1 and roots are sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredElement<S> {
    rep: RepDecomposition,
    blocks: Vec<FactoredBlock<S>>,
}

impl<S: Scalar> FactoredElement<S> {
    pub fn new(rep: RepDecomposition, blocks: Vec<FactoredBlock<S>>) -> Result<Self, PolyError> {
        if blocks.len() != rep.len() {
            return Err(PolyError::MalformedBlock(format!(
                "{} blocks for {} summands",
                blocks.len(),
                rep.len()
            )));
        }
        for (b, &n) in blocks.iter().zip(rep.dims()) {
            b.validate(n)?;
        }
        let mut x = Self { rep, blocks };
        x.normalize()?;
        Ok(x)
    }

    fn normalize(&mut self) -> Result<(), PolyError> {
        let lead = self
            .blocks
            .iter()
            .find(|b| !b.is_zero())
            .map(|b| b.u.clone())
            .ok_or(PolyError::ZeroElement)?;
        for b in &mut self.blocks {
            b.u = b.u.clone() / lead.clone();
            b.sort();
        }
        Ok(())
    }

    /// Canonical elliptic point: every hit block is `u_q ((zX+Y)(conj z X+Y))^(n_q/2)`.
    pub fn elliptic(rep: RepDecomposition, u: Vec<S>, z: InteriorPoint<S>) -> Result<Self, PolyError> {
        let blocks = check_scalars(&rep, &u)?
            .map(|(u, n)| {
                if u.is_zero() {
                    return Ok(FactoredBlock::zero());
                }
                if n % 2 == 1 {
                    return Err(PolyError::MalformedBlock(format!("odd degree {n} has no elliptic block")));
                }
                let interior = if n > 0 { vec![(z.clone(), (n / 2) as u32)] } else { Vec::new() };
                Ok(FactoredBlock::new(u, Vec::new(), interior))
            })
            .collect::<Result<_, _>>()?;
        Self::new(rep, blocks)
    }

    /// Canonical parabolic point: every hit block is `u_q (tX+Y)^(n_q)`.
    pub fn parabolic(rep: RepDecomposition, u: Vec<S>, t: BoundaryPoint<S>) -> Result<Self, PolyError> {
        let blocks = check_scalars(&rep, &u)?
            .map(|(u, n)| FactoredBlock::power(u, t.clone(), n))
            .collect();
        Self::new(rep, blocks)
    }

    /// Canonical hyperbolic point: block `q` is `u_q (t1 X+Y)^(alpha_q) (t2 X+Y)^(n_q - alpha_q)`.
    pub fn hyperbolic(
        rep: RepDecomposition,
        u: Vec<S>,
        t1: BoundaryPoint<S>,
        t2: BoundaryPoint<S>,
        alpha: &[u32],
    ) -> Result<Self, PolyError> {
        if alpha.len() != rep.len() {
            return Err(PolyError::MalformedBlock("one multiplicity per summand expected".into()));
        }
        let blocks = check_scalars(&rep, &u)?
            .zip(alpha)
            .map(|((u, n), &a)| {
                if u.is_zero() {
                    return Ok(FactoredBlock::zero());
                }
                if a as usize > n {
                    return Err(PolyError::DegreeMismatch { expected: n, found: a as usize });
                }
                let mut boundary = Vec::new();
                if a > 0 {
                    boundary.push((t1.clone(), a));
                }
                if (a as usize) < n {
                    boundary.push((t2.clone(), n as u32 - a));
                }
                Ok(FactoredBlock::new(u, boundary, Vec::new()))
            })
            .collect::<Result<_, _>>()?;
        Self::new(rep, blocks)
    }

    pub fn rep(&self) -> &RepDecomposition {
        &self.rep
    }

    pub fn blocks(&self) -> &[FactoredBlock<S>] {
        &self.blocks
    }

    pub fn block(&self, q: usize) -> &FactoredBlock<S> {
        &self.blocks[q]
    }

    pub fn scalars(&self) -> Vec<S> {
        self.blocks.iter().map(|b| b.u.clone()).collect()
    }

    pub fn nonzero_mask(&self) -> Vec<bool> {
        self.blocks.iter().map(|b| !b.is_zero()).collect()
    }

    /// Distinct boundary roots over the blocks with `u != 0`, canonically sorted.
    pub fn boundary_roots(&self) -> Vec<BoundaryPoint<S>> {
        let mut out: Vec<BoundaryPoint<S>> = Vec::new();
        for b in self.blocks.iter().filter(|b| !b.is_zero()) {
            for (t, _) in &b.boundary {
                if !out.contains(t) {
                    out.push(t.clone());
                }
            }
        }
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }

    pub fn interior_roots(&self) -> Vec<InteriorPoint<S>> {
        let mut out: Vec<InteriorPoint<S>> = Vec::new();
        for b in self.blocks.iter().filter(|b| !b.is_zero()) {
            for (z, _) in &b.interior {
                if !out.contains(z) {
                    out.push(z.clone());
                }
            }
        }
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }

    pub fn act(&self, g: &GroupElement<S>) -> Self {
        let mut x = Self { rep: self.rep.clone(), blocks: self.blocks.iter().map(|b| b.act(g)).collect() };
        x.normalize().expect("the action preserves nonzero blocks");
        x
    }

    /// Expanded coordinate blocks.
    pub fn forms(&self) -> Vec<HomogeneousForm<S>> {
        self.blocks
            .iter()
            .zip(self.rep.dims())
            .map(|(b, &n)| b.expand(n).expect("validated on construction"))
            .collect()
    }

    /// All coordinates of `V` concatenated block after block.
    pub fn coordinates(&self) -> Vec<S> {
        self.forms().into_iter().flat_map(HomogeneousForm::into_coeffs).collect()
    }

    /// Both sides are normalized on construction, so this is structural equality.
    pub fn projectively_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// Same point with the block scalars replaced.
    pub fn with_scalars(&self, u: &[S]) -> Result<Self, PolyError> {
        if u.len() != self.blocks.len() {
            return Err(PolyError::MalformedBlock("one scalar per summand expected".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(u)
            .map(|(b, u)| {
                if u.is_zero() {
                    FactoredBlock::zero()
                } else {
                    FactoredBlock { u: u.clone(), ..b.clone() }
                }
            })
            .collect();
        Self::new(self.rep.clone(), blocks)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> FactoredElement<T> {
        FactoredElement { rep: self.rep.clone(), blocks: self.blocks.iter().map(|b| b.map(f)).collect() }
    }

    pub fn to_f64(&self) -> FactoredElement<f64> {
        self.map(|v| v.to_f64())
    }
}

fn check_scalars<'a, S: Scalar>(
    rep: &'a RepDecomposition,
    u: &'a [S],
) -> Result<impl Iterator<Item = (S, usize)> + 'a, PolyError> {
    if u.len() != rep.len() {
        return Err(PolyError::MalformedBlock(format!("{} scalars for {} summands", u.len(), rep.len())));
    }
    Ok(u.iter().cloned().zip(rep.dims().iter().copied()))
}

impl<S: Scalar> fmt::Display for FactoredElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)?;
        for b in &self.blocks {
            write!(f, "\n{b}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> Serialize for FactoredElement<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        let mut st = serializer.serialize_struct("FactoredElement", 2)?;
        st.serialize_field("rep", &self.rep.to_string())?;
        st.serialize_field("blocks", &self.blocks)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rational};

    fn rep(d: &[usize]) -> RepDecomposition {
        RepDecomposition::new(d).unwrap()
    }

    #[test]
    fn expand_examples() {
        let y2 = FactoredBlock::power(rat(1), BoundaryPoint::Finite(rat(0)), 2);
        assert_eq!(y2.expand(2).unwrap().coeffs(), &[rat(1), rat(0), rat(0)]);

        let disk = FactoredBlock::new(rat(1), vec![], vec![(InteriorPoint::i(), 1)]);
        assert_eq!(disk.expand(2).unwrap().coeffs(), &[rat(1), rat(0), rat(1)]);

        let xy2 = FactoredBlock::new(
            rat(1),
            vec![(BoundaryPoint::Infinity, 1), (BoundaryPoint::Finite(rat(0)), 2)],
            vec![],
        );
        assert_eq!(xy2.expand(3).unwrap().coeffs(), &[rat(0), rat(1), rat(0), rat(0)]);
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let b = FactoredBlock::power(rat(1), BoundaryPoint::Finite(rat(0)), 2);
        assert!(matches!(b.expand(3), Err(PolyError::DegreeMismatch { .. })));
    }

    #[test]
    fn zero_block_expands_to_zero() {
        assert!(FactoredBlock::<Rational>::zero().expand(4).unwrap().is_zero());
    }

    #[test]
    fn first_nonzero_scalar_is_normalized() {
        let x = FactoredElement::parabolic(rep(&[4, 4, 2]), vec![rat(0), rat(3), rat(6)], BoundaryPoint::Finite(rat(0)))
            .unwrap();
        assert_eq!(x.scalars(), vec![rat(0), rat(1), rat(2)]);
    }

    #[test]
    fn all_zero_scalars_are_not_a_point() {
        let r = FactoredElement::parabolic(rep(&[2]), vec![rat(0)], BoundaryPoint::Finite(rat(0)));
        assert_eq!(r, Err(PolyError::ZeroElement));
    }

    #[test]
    fn quarter_turn_moves_zero_to_infinity() {
        let x = FactoredElement::parabolic(rep(&[2]), vec![rat(1)], BoundaryPoint::Finite(rat(0))).unwrap();
        let w = GroupElement::quarter_turn();
        assert_eq!(x.act(&w).boundary_roots(), vec![BoundaryPoint::Infinity]);
    }

    #[test]
    fn action_commutes_with_expansion() {
        let x = FactoredElement::hyperbolic(
            rep(&[4, 2]),
            vec![rat(1), rat(-3)],
            BoundaryPoint::Finite(rat(1)),
            BoundaryPoint::Infinity,
            &[2, 1],
        )
        .unwrap();
        let g = GroupElement::new(rat(3), rat(1), rat(5), rat(2)).unwrap();
        let lhs: Vec<_> = x.act(&g).forms();
        let rhs: Vec<_> = x.forms().iter().map(|f| f.act(&g)).collect();
        let scale = rhs.iter().flat_map(|f| f.coeffs()).find(|c| **c != rat(0)).unwrap().clone();
        let lead = lhs.iter().flat_map(|f| f.coeffs()).find(|c| **c != rat(0)).unwrap().clone();
        for (l, r) in lhs.iter().zip(&rhs) {
            assert_eq!(l.scale(&scale), r.scale(&lead));
        }
    }

    #[test]
    fn display_matches_line_format() {
        let x = FactoredElement::hyperbolic(
            rep(&[3]),
            vec![rat(1)],
            BoundaryPoint::Infinity,
            BoundaryPoint::Finite(rat(0)),
            &[1],
        )
        .unwrap();
        assert_eq!(x.to_string(), "rho = 3\nu=1 ; boundary: (0/1)^2, (1/0)^1 ; interior:");
    }
}
