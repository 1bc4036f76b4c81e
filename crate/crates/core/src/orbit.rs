//! Orbit type, closure and census for points of P(V).

use serde::Serialize;
use thiserror::Error;

use crate::poly::{BoundaryPoint, FactoredBlock, FactoredElement, PolyError};
use crate::rep::{support_of, RepDecomposition, RepError, Support};
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("closure of a {0}-dimensional orbit is not described")]
    UnsupportedClosure(u8),
    #[error("expected a {expected} orbit, found {found:?}")]
    WrongClass { expected: &'static str, found: OrbitClass },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitClass {
    Fixed,
    EllipticDisk,
    ParabolicCircle,
    ParabolicCylinder,
    HyperbolicMoebius,
    HyperbolicCylinder,
    HigherDimensional,
}

impl OrbitClass {
    pub fn is_parabolic(self) -> bool {
        matches!(self, Self::ParabolicCircle | Self::ParabolicCylinder)
    }

    pub fn is_hyperbolic(self) -> bool {
        matches!(self, Self::HyperbolicMoebius | Self::HyperbolicCylinder)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitDescriptor {
    pub class: OrbitClass,
    pub dimension: u8,
    /// Distinct boundary roots.
    pub k: usize,
    /// Distinct interior roots.
    pub l: usize,
    /// `2 alpha_q - n_q` when it is constant over the support.
    pub delta: Option<i64>,
    pub support: Support,
    /// Parabolic cylinders only: `(b, d)` and `(-b, -d)` give the same point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub double_cover: Option<bool>,
}

impl OrbitDescriptor {
    pub fn stabilizer_dimension(&self) -> u8 {
        3 - self.dimension
    }
}

/// Multiplicities of the two boundary roots `(t1, t2)` of a hyperbolic point,
/// oriented so that `delta >= 0` (ties keep the canonical root order).
pub fn hyperbolic_roots<S: Scalar>(
    x: &FactoredElement<S>,
) -> Option<(BoundaryPoint<S>, BoundaryPoint<S>, Vec<Option<u32>>)> {
    let roots = x.boundary_roots();
    if roots.len() != 2 || !x.interior_roots().is_empty() {
        return None;
    }
    let alpha_of = |t: &BoundaryPoint<S>| -> Vec<Option<u32>> {
        x.blocks()
            .iter()
            .map(|b| {
                (!b.is_zero()).then(|| b.boundary.iter().find(|(s, _)| s == t).map_or(0, |(_, m)| *m))
            })
            .collect()
    };
    let (t1, t2) = (roots[0].clone(), roots[1].clone());
    let alpha = alpha_of(&t1);
    let q = x.nonzero_mask().iter().position(|&b| b).expect("normalized point");
    let d = 2 * alpha[q].expect("hit block") as i64 - x.rep().dim(q) as i64;
    if d < 0 {
        let alpha = alpha_of(&t2);
        Some((t2, t1, alpha))
    } else {
        Some((t1, t2, alpha))
    }
}

pub fn classify_point<S: Scalar>(x: &FactoredElement<S>) -> Result<OrbitDescriptor, OrbitError> {
    let support = support_of(x)?;
    let rep = x.rep();
    let k = x.boundary_roots().len();
    let l = x.interior_roots().len();
    let mut delta = None;
    let mut double_cover = None;
    let (class, dimension) = match (k, l) {
        (0, 0) => (OrbitClass::Fixed, 0),
        (0, 1) => (OrbitClass::EllipticDisk, 2),
        (1, 0) if support.is_single_interval() => (OrbitClass::ParabolicCircle, 1),
        (1, 0) => {
            double_cover = Some(support.has_parity());
            (OrbitClass::ParabolicCylinder, 2)
        }
        (2, 0) => {
            let (_, _, alpha) = hyperbolic_roots(x).expect("two boundary roots");
            let deltas: Vec<(usize, i64)> = support
                .indices
                .iter()
                .map(|&q| (q, 2 * alpha[q].expect("hit block") as i64 - rep.dim(q) as i64))
                .collect();
            let d0 = deltas[0].1;
            if deltas.iter().all(|&(_, d)| d == d0) {
                delta = Some(d0);
                let top = alpha[support.q_plus].expect("hit block");
                let moebius = d0 == 0
                    && support.indices.iter().all(|&q| (top as i64 - alpha[q].expect("hit") as i64) % 2 == 0);
                if moebius {
                    (OrbitClass::HyperbolicMoebius, 2)
                } else {
                    (OrbitClass::HyperbolicCylinder, 2)
                }
            } else {
                (OrbitClass::HigherDimensional, 3)
            }
        }
        _ => (OrbitClass::HigherDimensional, 3),
    };
    Ok(OrbitDescriptor { class, dimension, k, l, delta, support, double_cover })
}

pub fn stabilizer_dimension<S: Scalar>(x: &FactoredElement<S>) -> Result<u8, OrbitError> {
    Ok(classify_point(x)?.stabilizer_dimension())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureTopology {
    ClosedDisk,
    Circle,
    ClosedMoebius,
    Torus,
    KleinBottle,
    ProjectivePlane,
    ClosedCylinder,
    Point,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct ClosureDescriptor<S: Scalar> {
    pub closure_topology: ClosureTopology,
    /// Canonical representatives of the border orbits, largest first.
    pub border: Vec<FactoredElement<S>>,
}

/// `[u_q Y^{n_q}]` restricted to the blocks of interval `s`.
pub fn interval_point<S: Scalar>(x: &FactoredElement<S>, s: usize) -> Result<FactoredElement<S>, PolyError> {
    let rep = x.rep();
    let iv = rep.intervals()[s];
    let blocks = x
        .blocks()
        .iter()
        .enumerate()
        .map(|(q, b)| {
            if iv.contains(q) {
                FactoredBlock::power(b.u.clone(), BoundaryPoint::Finite(S::zero()), rep.dim(q))
            } else {
                FactoredBlock::zero()
            }
        })
        .collect();
    FactoredElement::new(rep.clone(), blocks)
}

pub fn closure_of<S: Scalar>(x: &FactoredElement<S>) -> Result<ClosureDescriptor<S>, OrbitError> {
    let d = classify_point(x)?;
    let top = || interval_point(x, d.support.top_interval());
    let bottom = || interval_point(x, d.support.bottom_interval());
    let (closure_topology, border) = match d.class {
        OrbitClass::Fixed => (ClosureTopology::Point, Vec::new()),
        OrbitClass::ParabolicCircle => (ClosureTopology::Circle, Vec::new()),
        OrbitClass::EllipticDisk => (ClosureTopology::ClosedDisk, vec![top()?]),
        OrbitClass::ParabolicCylinder => {
            let bottom_dim = x.rep().dim(d.support.q_minus);
            let topology = match (d.support.has_parity(), bottom_dim > 0) {
                (true, true) => ClosureTopology::ClosedCylinder,
                (true, false) => ClosureTopology::ClosedDisk,
                (false, true) => ClosureTopology::KleinBottle,
                (false, false) => ClosureTopology::ProjectivePlane,
            };
            (topology, vec![top()?, bottom()?])
        }
        OrbitClass::HyperbolicMoebius => (ClosureTopology::ClosedMoebius, vec![top()?]),
        OrbitClass::HyperbolicCylinder => (ClosureTopology::Torus, vec![top()?]),
        OrbitClass::HigherDimensional => return Err(OrbitError::UnsupportedClosure(d.dimension)),
    };
    Ok(ClosureDescriptor { closure_topology, border })
}

/// Orbits of dimension at most 2 of one class in `P(rho_n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct CensusEntry<S: Scalar> {
    pub class: OrbitClass,
    pub count: usize,
    pub descriptors: Vec<OrbitDescriptor>,
    pub representatives: Vec<FactoredElement<S>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub circles: usize,
    pub moebius: usize,
    pub cylinders: usize,
    pub disks: usize,
    pub fixed: usize,
}

/// Walks every root-multiplicity shape with `k + 2l <= 2` on `rho_n`, keeps
/// one representative per orbit and classifies it.
pub fn enumerate_irreducible<S: Scalar>(n: usize) -> Vec<CensusEntry<S>> {
    let rep = RepDecomposition::irreducible(n);
    let one = || vec![S::one()];
    let mut reps: Vec<FactoredElement<S>> = Vec::new();
    if n == 0 {
        reps.push(FactoredElement::new(rep.clone(), vec![FactoredBlock::new(S::one(), vec![], vec![])]).unwrap());
    } else {
        reps.push(FactoredElement::parabolic(rep.clone(), one(), BoundaryPoint::Finite(S::zero())).unwrap());
    }
    // two boundary roots: X^a Y^(n-a) and X^(n-a) Y^a lie in one orbit
    for a in 1..n {
        if a > n - a {
            break;
        }
        let x = FactoredElement::hyperbolic(
            rep.clone(),
            one(),
            BoundaryPoint::Infinity,
            BoundaryPoint::Finite(S::zero()),
            &[a as u32],
        )
        .unwrap();
        reps.push(x);
    }
    if n % 2 == 0 && n > 0 {
        reps.push(FactoredElement::elliptic(rep.clone(), one(), crate::poly::InteriorPoint::i()).unwrap());
    }

    let mut out: Vec<CensusEntry<S>> = Vec::new();
    for x in reps {
        let d = classify_point(&x).expect("well-formed representative");
        match out.iter_mut().find(|e| e.class == d.class) {
            Some(e) => {
                e.count += 1;
                e.descriptors.push(d);
                e.representatives.push(x);
            }
            None => out.push(CensusEntry { class: d.class, count: 1, descriptors: vec![d], representatives: vec![x] }),
        }
    }
    out
}

pub fn census_row(n: usize) -> CensusRow {
    let mut row = CensusRow { n, ..Default::default() };
    for e in enumerate_irreducible::<crate::Rational>(n) {
        let slot = match e.class {
            OrbitClass::ParabolicCircle => &mut row.circles,
            OrbitClass::HyperbolicMoebius => &mut row.moebius,
            OrbitClass::HyperbolicCylinder => &mut row.cylinders,
            OrbitClass::EllipticDisk => &mut row.disks,
            OrbitClass::Fixed => &mut row.fixed,
            OrbitClass::ParabolicCylinder | OrbitClass::HigherDimensional => continue,
        };
        *slot += e.count;
    }
    row
}

pub fn census(n_max: usize) -> Vec<CensusRow> {
    (0..=n_max).map(census_row).collect()
}
