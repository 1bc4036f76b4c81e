use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{jacobian, largest_entry, ChartPoint, NumericError, RankPolicy, RankReport};
use crate::orbit::{classify_point, hyperbolic_roots};
use crate::poly::{FactoredElement, HomogeneousForm};
use crate::smoothness::{analyticity, BivariatePoly, Conjugacy};
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityProbe {
    /// `None` when the rank at 0 is indeterminate.
    pub rank_at_zero: Option<usize>,
    /// `(radius, largest second fundamental form norm)`.
    pub curvature: Vec<(f64, f64)>,
    pub blow_up_exponent: f64,
    pub singular: bool,
}

const RADII: [f64; 3] = [1e-1, 1e-2, 1e-3];
const ANGLES: [f64; 8] = [0.3, 1.1, 1.9, 2.7, 3.5, 4.3, 5.1, 5.9];

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Norm of the second fundamental form of the image surface at `(x, y)`.
fn curvature(f: &dyn Fn(f64, f64) -> Vec<f64>, x: f64, y: f64, h: f64) -> f64 {
    let at = |dx: f64, dy: f64| f(x + dx * h, y + dy * h);
    let c = at(0.0, 0.0);
    let (xp, xm, yp, ym) = (at(1.0, 0.0), at(-1.0, 0.0), at(0.0, 1.0), at(0.0, -1.0));
    let fx: Vec<f64> = sub(&xp, &xm).iter().map(|v| v / (2.0 * h)).collect();
    let fy: Vec<f64> = sub(&yp, &ym).iter().map(|v| v / (2.0 * h)).collect();
    let second = |p: &[f64], m: &[f64]| -> Vec<f64> {
        p.iter().zip(m).zip(&c).map(|((a, b), c)| (a + b - 2.0 * c) / (h * h)).collect()
    };
    let fxx = second(&xp, &xm);
    let fyy = second(&yp, &ym);
    let (pp, pm, mp, mm) = (at(1.0, 1.0), at(1.0, -1.0), at(-1.0, 1.0), at(-1.0, -1.0));
    let fxy: Vec<f64> = (0..c.len()).map(|i| (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h)).collect();
    let g = [[dot(&fx, &fx), dot(&fx, &fy)], [dot(&fx, &fy), dot(&fy, &fy)]];
    let det = g[0][0] * g[1][1] - g[0][1] * g[0][1];
    if det <= 0.0 {
        return f64::INFINITY;
    }
    let gi = [[g[1][1] / det, -g[0][1] / det], [-g[0][1] / det, g[0][0] / det]];
    let normal = |v: &[f64]| -> Vec<f64> {
        let (a, b) = (dot(v, &fx), dot(v, &fy));
        let (cx, cy) = (gi[0][0] * a + gi[0][1] * b, gi[1][0] * a + gi[1][1] * b);
        v.iter().zip(&fx).zip(&fy).map(|((v, x), y)| v - cx * x - cy * y).collect()
    };
    let n = [[normal(&fxx), normal(&fxy)], [normal(&fxy), normal(&fyy)]];
    let mut k2 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    k2 += gi[i][k] * gi[j][l] * dot(&n[i][j], &n[k][l]);
                }
            }
        }
    }
    k2.max(0.0).sqrt()
}

/// Numeric singularity detection at the origin for a map `R^2 -> R^N` with
/// `f(0) = 0`: rank of the differential at 0, then growth of the curvature of
/// the image along rays shrinking to 0.
pub fn singularity_probe(f: &dyn Fn(f64, f64) -> Vec<f64>) -> SingularityProbe {
    let g = |p: &[f64]| f(p[0], p[1]);
    let rank_at_zero = RankReport::from_matrix(&jacobian(&g, &[0.0, 0.0], 1e-3), &RankPolicy::default())
        .ok()
        .map(|r| r.declared_rank);
    let curvature: Vec<(f64, f64)> = RADII
        .iter()
        .map(|&r| {
            let k = ANGLES
                .iter()
                .map(|&a| curvature(f, r * a.cos(), r * a.sin(), r * 1e-3))
                .fold(0.0, f64::max);
            (r, k)
        })
        .collect();
    let (r0, k0) = curvature[0];
    let (r1, k1) = curvature[curvature.len() - 1];
    let blow_up_exponent = if k1 < 1e-6 {
        0.0
    } else if k0 < 1e-6 || !k1.is_finite() {
        f64::INFINITY
    } else {
        (k1 / k0).log10() / (r0 / r1).log10()
    };
    let singular = rank_at_zero != Some(2) && blow_up_exponent > 0.5;
    SingularityProbe { rank_at_zero, curvature, blow_up_exponent, singular }
}

pub fn probe_polynomial_map<S: Scalar>(coords: &[BivariatePoly<S>]) -> SingularityProbe {
    singularity_probe(&|x, y| coords.iter().map(|p| p.eval_f64(x, y)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingRankReport {
    pub conjugacy: Conjugacy,
    pub points: usize,
    pub boundary_points: usize,
    pub rank_two: usize,
    #[serde(serialize_with = "super::serialize_ratio")]
    pub min_gap_ratio: f64,
    pub seed: u64,
}

impl EmbeddingRankReport {
    pub fn passed(&self) -> bool {
        self.rank_two == self.points
    }
}

type Embedding = Box<dyn Fn(&[f64]) -> Vec<f64>>;

fn concat(forms: Vec<HomogeneousForm<f64>>) -> Vec<f64> {
    forms.into_iter().flat_map(HomogeneousForm::into_coeffs).collect()
}

/// Jacobian rank of the explicit embedding of the closure behind an analytic
/// verdict, at `samples` seeded points of which a fifth (at least 10) lie on
/// the border.
pub fn embedding_rank_check<S: Scalar>(
    x: &FactoredElement<S>,
    samples: usize,
    seed: u64,
    policy: &RankPolicy,
) -> Result<EmbeddingRankReport, NumericError> {
    let verdict = analyticity(x)?;
    let d = classify_point(x)?;
    let rep = x.rep().clone();
    let u: Vec<f64> = x.scalars().iter().map(|c| c.to_f64()).collect();
    let hit = d.support.indices.clone();
    let top = rep.dim(d.support.q_plus);
    let block = move |q: usize, f: HomogeneousForm<f64>| if hit.contains(&q) { f.scale(&u[q]) } else { HomogeneousForm::zero(rep.dim(q)) };
    let rep = x.rep().clone();
    let dims: Vec<usize> = rep.dims().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boundary_points = (samples / 5).max(10).min(samples);

    // parameter points: border first
    let (map, params): (Embedding, Vec<[f64; 2]>) = match verdict.conjugacy {
        Conjugacy::ProjectiveCompactification => {
            // [a X^2 + b XY + (1-a) Y^2] -> [u_q disc^{g_q/2} (...)^{n_q/2}]
            let map = move |p: &[f64]| -> Vec<f64> {
                let (a, b) = (p[0], p[1]);
                let disc = a * (1.0 - a) - b * b / 4.0;
                let quad = HomogeneousForm::new(vec![1.0 - a, b, a]).expect("degree 2");
                concat(
                    dims.iter()
                        .enumerate()
                        .map(|(q, &n)| block(q, quad.pow((n / 2) as u32).scale(&disc.powi(((top - n) / 4) as i32))))
                        .collect(),
                )
            };
            let params = (0..samples)
                .map(|i| {
                    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    let rho: f64 = if i < boundary_points { 1.0 } else { rng.gen_range(0.0..0.99) };
                    [0.5 + 0.5 * rho * theta.cos(), rho * theta.sin()]
                })
                .collect();
            (Box::new(map), params)
        }
        Conjugacy::ConformalCompactification => {
            // a + ib -> [u_q b^{g_q} ((a+ib)X+Y)^{n_q/2} ((a-ib)X+Y)^{n_q/2}]
            let map = move |p: &[f64]| -> Vec<f64> {
                let (a, b) = (p[0], p[1]);
                let quad = HomogeneousForm::new(vec![1.0, 2.0 * a, a * a + b * b]).expect("degree 2");
                concat(
                    dims.iter()
                        .enumerate()
                        .map(|(q, &n)| block(q, quad.pow((n / 2) as u32).scale(&b.powi(((top - n) / 2) as i32))))
                        .collect(),
                )
            };
            let params = (0..samples)
                .map(|i| {
                    let a: f64 = rng.gen_range(-2.0..2.0);
                    let b: f64 = if i < boundary_points { 0.0 } else { rng.gen_range(0.01..2.0) };
                    [a, b]
                })
                .collect();
            (Box::new(map), params)
        }
        Conjugacy::ProductRP1xRP1 => {
            let (_, _, alpha) = hyperbolic_roots(x).expect("hyperbolic");
            let alpha: Vec<usize> = alpha.iter().map(|a| a.unwrap_or(0) as usize).collect();
            let a_top = alpha[d.support.q_plus];
            // (t1, t2) -> [u_q (t1-t2)^{a_+ - a_q} (t1 X+Y)^{a_q} (t2 X+Y)^{n_q - a_q}]
            let map = move |p: &[f64]| -> Vec<f64> {
                let (t1, t2) = (p[0], p[1]);
                concat(
                    dims.iter()
                        .enumerate()
                        .map(|(q, &n)| {
                            let f = &HomogeneousForm::linear(t1, 1.0).pow(alpha[q] as u32)
                                * &HomogeneousForm::linear(t2, 1.0).pow((n - alpha[q]) as u32);
                            block(q, f.scale(&(t1 - t2).powi((a_top - alpha[q]) as i32)))
                        })
                        .collect(),
                )
            };
            let params = (0..samples)
                .map(|i| {
                    let t1: f64 = rng.gen_range(-2.0..2.0);
                    let t2: f64 = if i < boundary_points { t1 } else { rng.gen_range(-2.0..2.0) };
                    [t1, t2]
                })
                .collect();
            (Box::new(map), params)
        }
        other => return Err(NumericError::Chart(format!("no explicit embedding for {other:?}"))),
    };

    let mut rank_two = 0;
    let mut min_gap_ratio = f64::INFINITY;
    for p in &params {
        let chart = largest_entry(&map(p));
        let f = |s: &[f64]| ChartPoint::in_chart(&map(s), chart).coords;
        if let Ok(r) = RankReport::from_matrix(&jacobian(&f, p, 1e-4), policy) {
            if r.declared_rank == 2 {
                rank_two += 1;
                min_gap_ratio = min_gap_ratio.min(r.gap_ratio);
            }
        }
    }
    Ok(EmbeddingRankReport {
        conjugacy: verdict.conjugacy,
        points: params.len(),
        boundary_points,
        rank_two,
        min_gap_ratio,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{BoundaryPoint, InteriorPoint};
    use crate::smoothness::{raccourci_test, SmoothnessVerdict};
    use crate::{rat, Element, Rational};

    type P = BivariatePoly<Rational>;

    #[test]
    fn cusp_and_plane() {
        let cusp = [P::x(), P::y().pow(2), P::y().pow(3)];
        let probe = probe_polynomial_map(&cusp);
        assert_eq!(probe.rank_at_zero, Some(1));
        assert!(probe.singular, "{probe:?}");
        assert!(!probe_polynomial_map(&[P::x(), P::y()]).singular);
        let graph = [P::x(), P::y().pow(2), &(P::x() * P::y().pow(2)) + &P::y().pow(4)];
        assert!(!probe_polynomial_map(&graph).singular);
    }

    #[test]
    fn umbrella_is_singular() {
        let coords = [P::x(), P::y().pow(2), P::x() * P::y()];
        assert!(matches!(raccourci_test(&coords).unwrap(), SmoothnessVerdict::Singular { .. }));
        assert!(probe_polynomial_map(&coords).singular);
    }

    #[test]
    fn explicit_embeddings_have_rank_two() {
        let p = RankPolicy::default();
        for rep in ["2", "4+2", "6+2", "8+4", "10+6+2", "6+4+2"] {
            let n = rep.split('+').count();
            let x = Element::elliptic(rep.parse().unwrap(), vec![rat(1); n], InteriorPoint::i()).unwrap();
            let r = embedding_rank_check(&x, 100, 3, &p).unwrap();
            assert!(r.passed(), "{rep}: {r:?}");
            assert!(r.boundary_points >= 10);
        }
        let x = Element::hyperbolic(
            "4+2".parse().unwrap(),
            vec![rat(1), rat(1)],
            BoundaryPoint::Infinity,
            BoundaryPoint::Finite(rat(0)),
            &[2, 1],
        )
        .unwrap();
        assert!(embedding_rank_check(&x, 100, 3, &p).unwrap().passed());
    }
}
