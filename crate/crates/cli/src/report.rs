use serde::Serialize;
use sl2orbit::numeric::{
    boundary_eigenvalues, embedding_rank_check, orbit_map_rank, verify_closure, ClosureReport, EmbeddingRankReport,
    NumericError, RankReport,
};
use sl2orbit::orbit::{classify_point, closure_of, ClosureDescriptor, ClosureTopology, OrbitClass, OrbitDescriptor};
use sl2orbit::smoothness::{analyticity, torus_gluing, AnalyticityVerdict, Conjugacy, GluingDescriptor};
use sl2orbit::{Element, GroupF64, Rational};

use crate::profile::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Input {
    pub rep: String,
    pub element: String,
    pub factored: Element,
}

#[derive(Serialize)]
pub struct ClassificationReport {
    pub schema_version: u32,
    pub input: Input,
    pub orbit: OrbitDescriptor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureDescriptor<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analyticity: Option<AnalyticityVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gluing: Option<GluingDescriptor<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

#[derive(Serialize)]
pub struct EigenCheck {
    pub a: f64,
    pub step: f64,
    pub eigenvalues: [f64; 2],
    /// `a^(-m)`, the eigenvalue that separates the families.
    pub expected_invariant: f64,
}

#[derive(Serialize)]
pub struct Verification {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub orbit_rank: Option<RankReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingRankReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<EigenCheck>,
    pub mismatches: Vec<String>,
}

impl ClassificationReport {
    pub fn verified_ok(&self) -> bool {
        self.verification.as_ref().is_none_or(|v| v.mismatches.is_empty())
    }
}

pub fn classify(x: &Element, element: String) -> Result<ClassificationReport, sl2orbit::orbit::OrbitError> {
    let orbit = classify_point(x)?;
    let closure = closure_of(x).ok();
    let verdict = if orbit.class == OrbitClass::HigherDimensional { None } else { analyticity(x).ok() };
    let gluing = match &verdict {
        Some(AnalyticityVerdict {
            conjugacy: Conjugacy::ParabolicFamily { topology: ClosureTopology::ClosedCylinder, .. },
            ..
        }) => torus_gluing(x).ok(),
        _ => None,
    };
    Ok(ClassificationReport {
        schema_version: SCHEMA_VERSION,
        input: Input { rep: x.rep().to_string(), element, factored: x.clone() },
        orbit,
        closure,
        analyticity: verdict,
        gluing,
        verification: None,
    })
}

pub fn verify(report: &mut ClassificationReport, x: &Element, seed: u64, samples: usize, tol: Tolerances) {
    let policy = tol.rank_policy();
    let mut mismatches = Vec::new();
    let dimension = report.orbit.dimension as usize;

    let orbit_rank = match orbit_map_rank(x, &GroupF64::identity(), tol.orbit_step, &policy) {
        Ok(r) => {
            if r.declared_rank != dimension {
                mismatches.push(format!("orbit dimension: symbolic {dimension}, numeric rank {}", r.declared_rank));
            }
            Some(r)
        }
        Err(NumericError::IndeterminateRank(r)) => {
            mismatches.push(format!(
                "orbit dimension: symbolic {dimension}, numeric rank indeterminate (gap ratio {:e})",
                r.gap_ratio
            ));
            Some(r)
        }
        Err(e) => {
            mismatches.push(format!("orbit dimension: {e}"));
            None
        }
    };

    let closure = match (&report.closure, dimension) {
        (Some(c), 2) => match verify_closure(x, c, samples.div_ceil(10).max(2), seed) {
            Ok(r) => {
                if r.max_final_distance > tol.closure_distance {
                    mismatches.push(format!(
                        "closure: border at distance {:e}, tolerance {:e}",
                        r.max_final_distance, tol.closure_distance
                    ));
                }
                Some(r)
            }
            Err(e) => {
                mismatches.push(format!("closure: {e}"));
                None
            }
        },
        _ => None,
    };

    let analytic_surface = report.analyticity.as_ref().is_some_and(|v| {
        v.is_analytic()
            && matches!(
                v.conjugacy,
                Conjugacy::ProjectiveCompactification | Conjugacy::ConformalCompactification | Conjugacy::ProductRP1xRP1
            )
    });
    let embedding = if analytic_surface {
        match embedding_rank_check(x, samples, seed, &policy) {
            Ok(r) => {
                if !r.passed() {
                    mismatches.push(format!(
                        "embedding: rank 2 at {} of {} points, analytic verdict expects all",
                        r.rank_two, r.points
                    ));
                }
                Some(r)
            }
            Err(e) => {
                mismatches.push(format!("embedding: {e}"));
                None
            }
        }
    } else {
        None
    };

    let eigenvalues = match report.analyticity.as_ref().map(|v| &v.conjugacy) {
        Some(Conjugacy::ParabolicFamily { m, .. }) => {
            let (a, step) = (2.0f64, 1e-3);
            let expected = a.powi(-(*m as i32));
            match boundary_eigenvalues(x, a, step) {
                Ok(ev) => {
                    if !ev.iter().any(|e| ((e - expected) / expected).abs() <= tol.eigenvalue_relative) {
                        mismatches.push(format!("eigenvalues: symbolic a^-m = {expected}, numeric {ev:?}"));
                    }
                    Some(EigenCheck { a, step, eigenvalues: ev, expected_invariant: expected })
                }
                Err(e) => {
                    mismatches.push(format!("eigenvalues: {e}"));
                    None
                }
            }
        }
        _ => None,
    };

    report.verification = Some(Verification { seed, tolerances: tol, orbit_rank, closure, embedding, eigenvalues, mismatches });
}
