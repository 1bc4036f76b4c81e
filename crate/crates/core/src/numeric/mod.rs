//! Floating-point cross-checks of the exact verdicts. Derivatives are
//! fourth-order central differences; ranks follow an explicit gap policy.

mod closure;
mod eigen;
mod manifold;
mod orbit;
mod tangency;

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

pub use closure::{canonical_frame, distance_to_circle, verify_closure, ClosureReport};
pub use eigen::boundary_eigenvalues;
pub use manifold::{embedding_rank_check, probe_polynomial_map, singularity_probe, EmbeddingRankReport, SingularityProbe};
pub use orbit::{orbit_map_rank, sample_orbit, write_cloud_csv};
pub use tangency::{tangency_test, tangency_test_endpoints, TangencyModel, TangencyReport};

use crate::orbit::OrbitError;
use crate::poly::FactoredElement;
use crate::smoothness::SmoothnessError;
use crate::Scalar;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("indeterminate rank: gap ratio {:.3e} below threshold", .0.gap_ratio)]
    IndeterminateRank(RankReport),
    #[error("step {0} outside [1e-8, 1e-3]")]
    InvalidStep(f64),
    #[error("closure check diverged along {parameter}: distance {distance:.3e}")]
    ClosureDivergence { parameter: String, distance: f64 },
    #[error("no local chart: {0}")]
    Chart(String),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Smoothness(#[from] SmoothnessError),
}

/// A point of `P(V)` in the affine chart where coordinate `chart` is 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartPoint {
    pub chart: usize,
    pub coords: Vec<f64>,
}

impl ChartPoint {
    /// Chart on the largest-magnitude entry.
    pub fn from_vector(v: &[f64]) -> Self {
        let chart = largest_entry(v);
        Self::in_chart(v, chart)
    }

    pub fn in_chart(v: &[f64], chart: usize) -> Self {
        let p = v[chart];
        let coords = v.iter().enumerate().filter(|&(i, _)| i != chart).map(|(_, c)| c / p).collect();
        Self { chart, coords }
    }

    /// Homogeneous vector with the chart coordinate restored.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = self.coords.clone();
        v.insert(self.chart, 1.0);
        v
    }

    /// Max-norm distance, both points read in the chart of `self`.
    pub fn distance(&self, other: &ChartPoint) -> f64 {
        let a = self.to_vector();
        let b = ChartPoint::in_chart(&other.to_vector(), self.chart).to_vector();
        a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

pub(crate) fn largest_entry(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap_or(std::cmp::Ordering::Equal))
        .map_or(0, |(i, _)| i)
}

pub fn embed<S: Scalar>(x: &FactoredElement<S>) -> ChartPoint {
    let v: Vec<f64> = x.coordinates().iter().map(|c| c.to_f64()).collect();
    ChartPoint::from_vector(&v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankPolicy {
    /// Required ratio `sigma_r / sigma_{r+1}`.
    pub gap_threshold: f64,
    /// Singular values below `noise_floor * sigma_1` count as zero.
    pub noise_floor: f64,
    /// Below this, `sigma_1` itself counts as zero.
    pub absolute_floor: f64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        Self { gap_threshold: 1e6, noise_floor: 1e-9, absolute_floor: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    pub singular_values: Vec<f64>,
    pub declared_rank: usize,
    /// `sigma_r / sigma_{r+1}`; infinite when `sigma_{r+1}` is absent or zero.
    #[serde(serialize_with = "serialize_ratio")]
    pub gap_ratio: f64,
}

fn serialize_ratio<Z: serde::Serializer>(v: &f64, s: Z) -> Result<Z::Ok, Z::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("inf")
    }
}

impl RankReport {
    pub fn from_matrix(m: &DMatrix<f64>, policy: &RankPolicy) -> Result<Self, NumericError> {
        if m.is_empty() {
            return Self::from_singular_values(Vec::new(), policy);
        }
        let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Self::from_singular_values(sv, policy)
    }

    pub fn from_singular_values(singular_values: Vec<f64>, policy: &RankPolicy) -> Result<Self, NumericError> {
        let s1 = singular_values.first().copied().unwrap_or(0.0);
        let floor = (policy.noise_floor * s1).max(policy.absolute_floor);
        let declared_rank = singular_values.iter().filter(|&&s| s > floor).count();
        let gap_ratio = match (declared_rank, singular_values.get(declared_rank)) {
            (0, _) | (_, None) => f64::INFINITY,
            (r, Some(&next)) if next > 0.0 => singular_values[r - 1] / next,
            _ => f64::INFINITY,
        };
        let report = Self { singular_values, declared_rank, gap_ratio };
        if report.gap_ratio < policy.gap_threshold {
            return Err(NumericError::IndeterminateRank(report));
        }
        Ok(report)
    }
}

/// Fourth-order central difference of a curve at 0.
pub fn derivative(f: impl Fn(f64) -> Vec<f64>, h: f64) -> Vec<f64> {
    let (p1, m1, p2, m2) = (f(h), f(-h), f(2.0 * h), f(-2.0 * h));
    (0..p1.len()).map(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h)).collect()
}

/// Jacobian of `f` at `at`, one column per parameter.
pub fn jacobian(f: &dyn Fn(&[f64]) -> Vec<f64>, at: &[f64], h: f64) -> DMatrix<f64> {
    let columns: Vec<Vec<f64>> = (0..at.len())
        .map(|j| {
            derivative(
                |t| {
                    let mut p = at.to_vec();
                    p[j] += t;
                    f(&p)
                },
                h,
            )
        })
        .collect();
    let rows = columns.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i])
}

pub fn jacobian_rank(
    f: &dyn Fn(&[f64]) -> Vec<f64>,
    at: &[f64],
    h: f64,
    policy: &RankPolicy,
) -> Result<RankReport, NumericError> {
    RankReport::from_matrix(&jacobian(f, at, h), policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{BoundaryPoint, InteriorPoint};
    use crate::{rat, Element};

    #[test]
    fn embed_examples() {
        let y2 = Element::parabolic("2".parse().unwrap(), vec![rat(1)], BoundaryPoint::Finite(rat(0))).unwrap();
        assert_eq!(embed(&y2), ChartPoint { chart: 0, coords: vec![0.0, 0.0] });
        let disk = Element::elliptic("2".parse().unwrap(), vec![rat(1)], InteriorPoint::i()).unwrap();
        let p = embed(&disk);
        assert_eq!(p.coords.len(), 2);
        assert!(p.coords.contains(&0.0) && p.coords.contains(&1.0));
    }

    #[test]
    fn rank_policy() {
        let p = RankPolicy::default();
        let r = RankReport::from_singular_values(vec![1.0, 0.5, 1e-13], &p).unwrap();
        assert_eq!(r.declared_rank, 2);
        let r = RankReport::from_singular_values(vec![2.0, 0.0], &p).unwrap();
        assert_eq!((r.declared_rank, r.gap_ratio), (1, f64::INFINITY));
        let r = RankReport::from_singular_values(vec![0.0, 0.0], &p).unwrap();
        assert_eq!(r.declared_rank, 0);
        assert!(matches!(
            RankReport::from_singular_values(vec![1.0, 1e-8, 1e-10], &p),
            Err(NumericError::IndeterminateRank(_))
        ));
    }

    #[test]
    fn derivative_is_exact_on_quartics() {
        let d = derivative(|t| vec![t.powi(4) + 3.0 * t.powi(3) + t], 0.1);
        assert!((d[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chart_distance_is_projective() {
        let a = ChartPoint::from_vector(&[2.0, 1.0, 0.0]);
        let b = ChartPoint::from_vector(&[-4.0, -2.0, 0.0]);
        assert_eq!(a.distance(&b), 0.0);
    }
}
