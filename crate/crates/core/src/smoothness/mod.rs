//! Regularity of orbit closures: the raccourci obstruction, the analyticity
//! verdicts of each orbit family and the gluing of parabolic cylinders.

mod bivariate;
mod local;
mod raccourci;

use serde::Serialize;
use thiserror::Error;

pub use bivariate::BivariatePoly;
pub use local::{
    elliptic_border_coordinates, hyperbolic_diagonal_coordinates, parabolic_lower_coordinates,
    parabolic_upper_coordinates,
};
pub use raccourci::{raccourci_test, ring_membership, subalgebra_membership, SmoothnessVerdict};

use crate::orbit::{classify_point, closure_of, hyperbolic_roots, ClosureTopology, OrbitClass, OrbitDescriptor, OrbitError};
use crate::poly::FactoredElement;
use crate::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum SmoothnessError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("expected a {expected} orbit, found {found:?}")]
    WrongClass { expected: &'static str, found: OrbitClass },
    #[error("the representation has no nontrivial summand")]
    TrivialRepresentation,
    #[error("all coordinates lie in R[P1]: the image is not a surface")]
    Degenerate,
    #[error("coordinate {index}: {reason}")]
    InvalidCoordinate { index: usize, reason: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Regularity {
    Analytic,
    #[serde(rename = "c_k")]
    FinitelyDifferentiable { k: u32 },
    NotSmooth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Conjugacy {
    #[serde(rename = "projective")]
    ProjectiveCompactification,
    #[serde(rename = "conformal")]
    ConformalCompactification,
    #[serde(rename = "product_rp1xrp1")]
    ProductRP1xRP1,
    #[serde(rename = "projective_plane")]
    ProjectivePlaneAction,
    ParabolicFamily { m: u32, topology: ClosureTopology },
    /// Closed one-dimensional orbit, the action on RP^1.
    ProjectiveLine,
    Point,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalyticityVerdict {
    pub status: Regularity,
    pub conjugacy: Conjugacy,
    pub witness: String,
}

impl AnalyticityVerdict {
    fn analytic(conjugacy: Conjugacy, witness: String) -> Self {
        Self { status: Regularity::Analytic, conjugacy, witness }
    }

    fn not_smooth(witness: String) -> Self {
        Self { status: Regularity::NotSmooth, conjugacy: Conjugacy::NotApplicable, witness }
    }

    pub fn is_analytic(&self) -> bool {
        self.status == Regularity::Analytic
    }
}

fn checked<S: Scalar>(
    x: &FactoredElement<S>,
    ok: impl Fn(OrbitClass) -> bool,
    expected: &'static str,
) -> Result<OrbitDescriptor, SmoothnessError> {
    if !x.rep().is_nontrivial() {
        return Err(SmoothnessError::TrivialRepresentation);
    }
    let d = classify_point(x)?;
    if !ok(d.class) {
        return Err(SmoothnessError::WrongClass { expected, found: d.class });
    }
    Ok(d)
}

/// Gaps `g_q = (n_+ - n_q)/2` decide between the projective model, the
/// conformal model and finite differentiability.
pub fn elliptic_analyticity<S: Scalar>(x: &FactoredElement<S>) -> Result<AnalyticityVerdict, SmoothnessError> {
    let d = checked(x, |c| c == OrbitClass::EllipticDisk, "elliptic_disk")?;
    let rep = x.rep();
    let top = rep.dim(d.support.q_plus);
    let gaps: Vec<(usize, usize)> = d.support.indices.iter().map(|&q| (q, (top - rep.dim(q)) / 2)).collect();
    if gaps.iter().all(|&(_, g)| g % 2 == 0) {
        return Ok(AnalyticityVerdict::analytic(Conjugacy::ProjectiveCompactification, "all gaps even".into()));
    }
    if let Some(&(q, _)) = gaps.iter().find(|&&(_, g)| g == 1) {
        return Ok(AnalyticityVerdict::analytic(
            Conjugacy::ConformalCompactification,
            format!("gap 1 at block {q}"),
        ));
    }
    let (q, alpha) = gaps.iter().copied().filter(|&(_, g)| g % 2 == 1).min_by_key(|&(_, g)| g).expect("odd gap");
    Ok(AnalyticityVerdict {
        status: Regularity::FinitelyDifferentiable { k: ((alpha - 1) / 2) as u32 },
        conjugacy: Conjugacy::NotApplicable,
        witness: format!("smallest odd gap {alpha} at block {q}: P1 = x, P2 = y^2, P3 = y^{alpha}"),
    })
}

pub fn hyperbolic_analyticity<S: Scalar>(x: &FactoredElement<S>) -> Result<AnalyticityVerdict, SmoothnessError> {
    let d = checked(x, OrbitClass::is_hyperbolic, "hyperbolic")?;
    if d.class == OrbitClass::HyperbolicMoebius {
        return Ok(AnalyticityVerdict::analytic(
            Conjugacy::ProjectivePlaneAction,
            "delta = 0 with even multiplicity gaps".into(),
        ));
    }
    let (_, _, alpha) = hyperbolic_roots(x).expect("hyperbolic point");
    let a = |q: usize| alpha[q].expect("hit block") as i64;
    let top = a(d.support.q_plus);
    if let Some(&q) = d.support.indices.iter().find(|&&q| top - a(q) == 1) {
        return Ok(AnalyticityVerdict::analytic(Conjugacy::ProductRP1xRP1, format!("multiplicity gap 1 at block {q}")));
    }
    let odd = d.support.indices.iter().map(|&q| top - a(q)).filter(|g| g % 2 == 1).min();
    let witness = match odd {
        Some(g) => format!("no multiplicity gap 1: (t1-t2)^{g} not in R[P1, (t1-t2)^2]"),
        None => "no multiplicity gap 1: P3 not in R[P1, P2]".to_string(),
    };
    Ok(AnalyticityVerdict::not_smooth(witness))
}

/// `m = n_{2-} - n_-` and the three divisibility conditions, checked in order.
pub fn parabolic_analyticity<S: Scalar>(x: &FactoredElement<S>) -> Result<AnalyticityVerdict, SmoothnessError> {
    let d = checked(x, |c| c == OrbitClass::ParabolicCylinder, "parabolic_cylinder")?;
    let rep = x.rep();
    let s = &d.support;
    let n = |q: usize| rep.dim(q);
    let (top, bottom) = (n(s.q_plus), n(s.q_minus));
    let bottom2 = n(s.q2_minus(rep).expect("two intervals"));
    let top2 = n(s.q2_plus(rep).expect("two intervals"));
    let m = bottom2 - bottom;
    if bottom == 0 && bottom2 != 1 {
        return Ok(AnalyticityVerdict::not_smooth(format!("(a) n_- = 0 but n_2- = {bottom2}")));
    }
    if top - top2 != m {
        return Ok(AnalyticityVerdict::not_smooth(format!("(b) n_+ - n_2+ = {} differs from m = {m}", top - top2)));
    }
    if let Some(&q) = s.indices.iter().find(|&&q| (top - n(q)) % m != 0) {
        return Ok(AnalyticityVerdict::not_smooth(format!("(c) m = {m} does not divide n_+ - n_{q} = {}", top - n(q))));
    }
    let topology = closure_of(x)?.closure_topology;
    Ok(AnalyticityVerdict::analytic(
        Conjugacy::ParabolicFamily { m: m as u32, topology },
        format!("m = {m}"),
    ))
}

/// Verdict for any orbit of dimension at most 2.
pub fn analyticity<S: Scalar>(x: &FactoredElement<S>) -> Result<AnalyticityVerdict, SmoothnessError> {
    if !x.rep().is_nontrivial() {
        return Err(SmoothnessError::TrivialRepresentation);
    }
    match classify_point(x)?.class {
        OrbitClass::Fixed => Ok(AnalyticityVerdict::analytic(Conjugacy::Point, "fixed point".into())),
        OrbitClass::ParabolicCircle => {
            Ok(AnalyticityVerdict::analytic(Conjugacy::ProjectiveLine, "closed circle orbit".into()))
        }
        OrbitClass::EllipticDisk => elliptic_analyticity(x),
        OrbitClass::ParabolicCylinder => parabolic_analyticity(x),
        OrbitClass::HyperbolicMoebius | OrbitClass::HyperbolicCylinder => hyperbolic_analyticity(x),
        OrbitClass::HigherDimensional => Err(OrbitError::UnsupportedClosure(3).into()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AssembledSurface {
    Torus2Orbits,
    Torus4Orbits,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct GluingDescriptor<S: Scalar> {
    /// `(q, k_q)` over the support.
    pub k_values: Vec<(usize, u32)>,
    pub k_top: u32,
    pub m: u32,
    /// `x` first, then the sign-flipped companions.
    pub partner_orbits: Vec<FactoredElement<S>>,
    pub assembled_surface: AssembledSurface,
    /// Partners that differ as points of `P(V)`.
    pub distinct_orbit_count: usize,
}

/// Sign-flipped companions of an analytic parabolic cylinder whose union is a
/// torus.
pub fn torus_gluing<S: Scalar>(x: &FactoredElement<S>) -> Result<GluingDescriptor<S>, SmoothnessError> {
    let verdict = parabolic_analyticity(x)?;
    let Conjugacy::ParabolicFamily { m, topology: ClosureTopology::ClosedCylinder } = verdict.conjugacy else {
        let found = classify_point(x)?.class;
        return Err(SmoothnessError::WrongClass { expected: "analytic closed cylinder", found });
    };
    let d = classify_point(x)?;
    let rep = x.rep();
    let bottom = rep.dim(d.support.q_minus);
    let k_values: Vec<(usize, u32)> =
        d.support.indices.iter().map(|&q| (q, ((rep.dim(q) - bottom) / m as usize) as u32)).collect();
    let k_of = |q: usize| k_values.iter().find(|(p, _)| *p == q).map_or(0, |(_, k)| *k);
    let k_top = k_of(d.support.q_plus);
    let u = x.scalars();
    let flip = |exponent: &dyn Fn(u32) -> u32| -> FactoredElement<S> {
        let v: Vec<S> = u
            .iter()
            .enumerate()
            .map(|(q, c)| if exponent(k_of(q)) % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        x.with_scalars(&v).expect("same support")
    };
    let mut partner_orbits = vec![x.clone(), flip(&|k| k)];
    let assembled_surface = if k_top % 2 == 0 {
        AssembledSurface::Torus2Orbits
    } else {
        partner_orbits.push(flip(&|k| k_top - k));
        partner_orbits.push(flip(&|_| k_top));
        AssembledSurface::Torus4Orbits
    };
    let mut distinct: Vec<&FactoredElement<S>> = Vec::new();
    for p in &partner_orbits {
        if !distinct.iter().any(|d| d.projectively_eq(p)) {
            distinct.push(p);
        }
    }
    let distinct_orbit_count = distinct.len();
    Ok(GluingDescriptor { k_values, k_top, m, partner_orbits, assembled_surface, distinct_orbit_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{BoundaryPoint, InteriorPoint};
    use crate::{rat, Element};

    fn u(v: &[i64]) -> Vec<crate::Rational> {
        v.iter().map(|&c| rat(c)).collect()
    }

    fn elliptic(rep: &str, s: &[i64]) -> Element {
        Element::elliptic(rep.parse().unwrap(), u(s), InteriorPoint::i()).unwrap()
    }

    fn parabolic(rep: &str, s: &[i64]) -> Element {
        Element::parabolic(rep.parse().unwrap(), u(s), BoundaryPoint::Finite(rat(0))).unwrap()
    }

    fn hyperbolic(rep: &str, s: &[i64], alpha: &[u32]) -> Element {
        Element::hyperbolic(rep.parse().unwrap(), u(s), BoundaryPoint::Infinity, BoundaryPoint::Finite(rat(0)), alpha)
            .unwrap()
    }

    #[test]
    fn elliptic_trichotomy() {
        let c = |rep, s: &[i64]| elliptic_analyticity(&elliptic(rep, s)).unwrap();
        assert_eq!(c("4+2", &[1, 1]).conjugacy, Conjugacy::ConformalCompactification);
        assert_eq!(c("6+2", &[1, 1]).conjugacy, Conjugacy::ProjectiveCompactification);
        let v = c("8+2", &[1, 1]);
        assert_eq!(v.status, Regularity::FinitelyDifferentiable { k: 1 });
        assert_eq!(v.conjugacy, Conjugacy::NotApplicable);
        assert_eq!(c("2", &[1]).conjugacy, Conjugacy::ProjectiveCompactification);
        assert_eq!(c("12+2", &[1, 1]).status, Regularity::FinitelyDifferentiable { k: 2 });
        // gaps 1 and 2 together: conformal wins
        assert_eq!(c("6+4+2", &[1, 1, 1]).conjugacy, Conjugacy::ConformalCompactification);
    }

    #[test]
    fn hyperbolic_cases() {
        let v = hyperbolic_analyticity(&hyperbolic("2", &[1], &[1])).unwrap();
        assert_eq!(v.conjugacy, Conjugacy::ProjectivePlaneAction);
        let v = hyperbolic_analyticity(&hyperbolic("4+2", &[1, 1], &[2, 1])).unwrap();
        assert_eq!(v.conjugacy, Conjugacy::ProductRP1xRP1);
        // single block: no second multiplicity, the closure has a cuspidal edge
        let v = hyperbolic_analyticity(&hyperbolic("3", &[1], &[1])).unwrap();
        assert_eq!(v.status, Regularity::NotSmooth);
        let v = hyperbolic_analyticity(&hyperbolic("5+1", &[1, 1], &[3, 1])).unwrap();
        assert_eq!(v.status, Regularity::NotSmooth);
        assert!(matches!(
            hyperbolic_analyticity(&hyperbolic("2+1", &[1, 1], &[1, 1])),
            Err(SmoothnessError::WrongClass { .. })
        ));
    }

    #[test]
    fn parabolic_conditions() {
        let c = |rep, s: &[i64]| parabolic_analyticity(&parabolic(rep, s)).unwrap();
        assert_eq!(
            c("2+1+0", &[1, 1, 1]).conjugacy,
            Conjugacy::ParabolicFamily { m: 1, topology: ClosureTopology::ProjectivePlane }
        );
        assert_eq!(c("4+2", &[1, 1]).conjugacy, Conjugacy::ParabolicFamily { m: 2, topology: ClosureTopology::ClosedCylinder });
        let v = c("6+3+2", &[1, 1, 1]);
        assert_eq!(v.status, Regularity::NotSmooth);
        assert!(v.witness.starts_with("(b)"));
        assert_eq!(c("5+2", &[1, 1]).conjugacy, Conjugacy::ParabolicFamily { m: 3, topology: ClosureTopology::KleinBottle });
        assert!(c("4+2+0", &[1, 1, 1]).witness.starts_with("(a)"));
        assert!(c("7+5+4+1", &[1, 1, 1, 1]).witness.starts_with("(b)"));
        assert!(c("7+5+4+2", &[1, 1, 1, 1]).witness.starts_with("(c)"));
        // a zero block changes m
        assert_eq!(c("7+4+1", &[1, 0, 1]).conjugacy, Conjugacy::ParabolicFamily { m: 6, topology: ClosureTopology::ClosedCylinder });
    }

    #[test]
    fn trivial_representation_is_rejected() {
        let p = parabolic("0", &[1]);
        assert_eq!(analyticity(&p), Err(SmoothnessError::TrivialRepresentation));
    }

    #[test]
    fn gluing_even_top() {
        let g = torus_gluing(&parabolic("5+3+1", &[1, 1, 1])).unwrap();
        assert_eq!(g.k_values, vec![(0, 2), (1, 1), (2, 0)]);
        assert_eq!((g.k_top, g.m), (2, 2));
        assert_eq!(g.assembled_surface, AssembledSurface::Torus2Orbits);
        assert_eq!(g.partner_orbits[1].scalars(), u(&[1, -1, 1]));
        assert_eq!(g.distinct_orbit_count, 2);
    }

    #[test]
    fn gluing_odd_top_collapses_projectively() {
        let g = torus_gluing(&parabolic("4+2", &[1, 1])).unwrap();
        assert_eq!(g.k_top, 1);
        assert_eq!(g.assembled_surface, AssembledSurface::Torus4Orbits);
        assert_eq!(g.partner_orbits.len(), 4);
        // u' = (-1, 1) ~ (1, -1) = u'' and u''' = (-1, -1) ~ u
        assert_eq!(g.distinct_orbit_count, 2);
    }

    #[test]
    fn gluing_needs_a_closed_cylinder() {
        assert!(torus_gluing(&parabolic("5+2", &[1, 1])).is_err());
        assert!(torus_gluing(&parabolic("6+3+2", &[1, 1, 1])).is_err());
    }

    #[test]
    fn verdict_json_spellings() {
        let v = elliptic_analyticity(&elliptic("8+2", &[1, 1])).unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["status"]["kind"], "c_k");
        assert_eq!(j["status"]["k"], 1);
        let v = parabolic_analyticity(&parabolic("5+2", &[1, 1])).unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["conjugacy"]["kind"], "parabolic_family");
        assert_eq!(j["conjugacy"]["topology"], "klein_bottle");
        let v = hyperbolic_analyticity(&hyperbolic("4+2", &[1, 1], &[2, 1])).unwrap();
        assert_eq!(serde_json::to_value(&v).unwrap()["conjugacy"]["kind"], "product_rp1xrp1");
    }
}
