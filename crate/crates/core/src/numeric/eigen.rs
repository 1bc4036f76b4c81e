use super::{jacobian, NumericError};
use crate::orbit::classify_point;
use crate::poly::{FactoredElement, HomogeneousForm};
use crate::smoothness::{parabolic_analyticity, Conjugacy};
use crate::{GroupF64, Scalar};

/// Eigenvalues, in increasing order, of the differential of `diag(a, 1/a)` at
/// the lower border point `[u_q Y^{n_q}]_{q in I_-}`.
///
/// The chart of the closure there is `(s, t)` with `s = c_{2-,0} / c_{-,0}` and
/// `t = c_{-,1} / (n_- c_{-,0})`, or `(c_{2-,0}, c_{2-,1}) / c_{-,0}` when
/// `n_- = 0`.
pub fn boundary_eigenvalues<S: Scalar>(x: &FactoredElement<S>, a: f64, h: f64) -> Result<[f64; 2], NumericError> {
    if a == 0.0 {
        return Err(NumericError::Chart("a = 0".into()));
    }
    let verdict = parabolic_analyticity(x)?;
    let Conjugacy::ParabolicFamily { m, .. } = verdict.conjugacy else {
        return Err(NumericError::Chart(format!("closure is not a manifold: {}", verdict.witness)));
    };
    let m = m as usize;
    let d = classify_point(x)?;
    let rep = x.rep().clone();
    let (qm, q2m) = (d.support.q_minus, d.support.q2_minus(&rep).expect("two intervals"));
    let nm = rep.dim(qm);
    let u: Vec<f64> = x.scalars().iter().map(|c| c.to_f64()).collect();
    let hit: Vec<usize> = d.support.indices.clone();

    // closure point with chart coordinates sigma
    let point = |sigma: &[f64]| -> Vec<HomogeneousForm<f64>> {
        (0..rep.len())
            .map(|q| {
                let n = rep.dim(q);
                if !hit.contains(&q) {
                    return HomogeneousForm::zero(n);
                }
                let f = if nm > 0 {
                    let dm = sigma[0] * u[qm] / u[q2m];
                    let k = ((n - nm) / m) as i32;
                    HomogeneousForm::linear(sigma[1], 1.0).pow(n as u32).scale(&dm.powi(k))
                } else {
                    let r = u[qm] / u[q2m];
                    HomogeneousForm::linear(sigma[1] * r, sigma[0] * r).pow(n as u32)
                };
                f.scale(&u[q])
            })
            .collect()
    };
    let chart = |forms: &[HomogeneousForm<f64>]| -> Vec<f64> {
        let reference = *forms[qm].coeff(0);
        if nm > 0 {
            vec![forms[q2m].coeff(0) / reference, forms[qm].coeff(1) / (nm as f64 * reference)]
        } else {
            vec![forms[q2m].coeff(0) / reference, forms[q2m].coeff(1) / reference]
        }
    };
    let g = GroupF64::new(a, 0.0, 0.0, 1.0 / a).map_err(|e| NumericError::Chart(e.to_string()))?;
    let map = |sigma: &[f64]| -> Vec<f64> {
        let moved: Vec<HomogeneousForm<f64>> = point(sigma).iter().map(|f| f.act(&g)).collect();
        chart(&moved)
    };
    let j = jacobian(&map, &[0.0, 0.0], h);
    let (tr, det) = (j[(0, 0)] + j[(1, 1)], j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)]);
    let disc = tr * tr - 4.0 * det;
    if disc < -1e-12 * tr * tr {
        return Err(NumericError::Chart("complex eigenvalues".into()));
    }
    let r = disc.max(0.0).sqrt();
    Ok([(tr - r) / 2.0, (tr + r) / 2.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BoundaryPoint;
    use crate::{rat, Element};

    fn parabolic(rep: &str, u: &[i64]) -> Element {
        Element::parabolic(rep.parse().unwrap(), u.iter().map(|&c| rat(c)).collect(), BoundaryPoint::Finite(rat(0)))
            .unwrap()
    }

    fn close(a: [f64; 2], mut b: [f64; 2]) -> bool {
        b.sort_by(f64::total_cmp);
        a.iter().zip(&b).all(|(x, y)| ((x - y) / y).abs() < 1e-6)
    }

    #[test]
    fn eigenvalues_follow_the_chart_weights() {
        // s scales by a^-m and t by a^2
        for (rep, u, m) in [("3+2", vec![1, 1], 1), ("4+2", vec![1, 1], 2), ("5+2", vec![1, 1], 3), ("5+3+1", vec![1, 1, 1], 2)] {
            for a in [0.5, 2.0, 3.0] {
                let ev = boundary_eigenvalues(&parabolic(rep, &u), a, 1e-3).unwrap();
                assert!(close(ev, [a * a, a.powi(-m)]), "{rep} a={a}: {ev:?}");
            }
        }
    }

    #[test]
    fn identity_and_projective_plane() {
        let ev = boundary_eigenvalues(&parabolic("4+2", &[1, 1]), 1.0, 1e-3).unwrap();
        assert!(close(ev, [1.0, 1.0]));
        let ev = boundary_eigenvalues(&parabolic("2+1+0", &[1, 1, 1]), 2.0, 1e-3).unwrap();
        assert!(close(ev, [2.0, 0.5]));
    }

    #[test]
    fn singular_closure_has_no_chart() {
        assert!(matches!(boundary_eigenvalues(&parabolic("6+3+2", &[1, 1, 1]), 2.0, 1e-3), Err(NumericError::Chart(_))));
    }
}
