use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{embed, ChartPoint, NumericError};
use crate::orbit::{classify_point, hyperbolic_roots, ClosureDescriptor, OrbitClass};
use crate::poly::{BoundaryPoint, FactoredElement, Generator, GroupElement};
use crate::{ElementF64, GroupF64, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub sequences_checked: usize,
    pub max_final_distance: f64,
    pub tolerance: f64,
    pub seed: u64,
}

const TOLERANCE: f64 = 1e-6;
const STEPS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];

fn el(a: f64, b: f64, c: f64, d: f64) -> GroupF64 {
    GroupElement::new(a, b, c, d).expect("unimodular by construction")
}

/// `(sqrt y, x/sqrt y; 0, 1/sqrt y)`, sending `i` to `x + iy`.
fn to_interior(x: f64, y: f64) -> GroupF64 {
    let r = y.sqrt();
    el(r, x / r, 0.0, 1.0 / r)
}

/// Group element sending `t` to 0.
fn boundary_to_zero(t: &BoundaryPoint<f64>) -> GroupF64 {
    match t {
        BoundaryPoint::Finite(t) => GroupF64::shear(-t),
        BoundaryPoint::Infinity => GroupF64::quarter_turn(),
    }
}

/// Group element sending `t1` to infinity and `t2` to 0.
fn pair_to_infinity_zero(t1: &BoundaryPoint<f64>, t2: &BoundaryPoint<f64>) -> GroupF64 {
    match (t1, t2) {
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(t2)) => GroupF64::shear(-t2),
        (BoundaryPoint::Finite(t1), BoundaryPoint::Infinity) => el(0.0, -1.0, 1.0, -t1),
        (BoundaryPoint::Finite(t1), BoundaryPoint::Finite(t2)) => {
            // t -> (t - t2)/(t - t1), rescaled to determinant 1
            let det = t2 - t1;
            let s = det.abs().sqrt();
            if det > 0.0 {
                el(1.0 / s, -t2 / s, 1.0 / s, -t1 / s)
            } else {
                el(-1.0 / s, t2 / s, 1.0 / s, -t1 / s)
            }
        }
        _ => unreachable!("distinct roots"),
    }
}

/// Moves the roots of `x` to their canonical places: `i` for elliptic points,
/// 0 for parabolic ones, `(infinity, 0)` for hyperbolic ones.
pub fn canonical_frame<S: Scalar>(x: &FactoredElement<S>) -> Result<ElementF64, NumericError> {
    let class = classify_point(x)?.class;
    let xf = x.to_f64();
    let g = match class {
        OrbitClass::EllipticDisk => {
            let z = xf.interior_roots()[0].clone();
            to_interior(z.re, z.im).inverse()
        }
        c if c.is_parabolic() => boundary_to_zero(&xf.boundary_roots()[0]),
        OrbitClass::HyperbolicMoebius | OrbitClass::HyperbolicCylinder => {
            let (t1, t2, _) = hyperbolic_roots(&xf).expect("hyperbolic");
            pair_to_infinity_zero(&t1, &t2)
        }
        _ => GroupF64::identity(),
    };
    Ok(xf.act(&g))
}

/// Distance from `p` to the circle orbit of a border point, minimized over
/// the rotation subgroup.
pub fn distance_to_circle<S: Scalar>(p: &ChartPoint, border: &FactoredElement<S>) -> f64 {
    let base = border.to_f64();
    let dist = |theta: f64| p.distance(&embed(&base.act(&GroupElement::exp(Generator::K, theta))));
    let n = 720;
    let step = std::f64::consts::PI / n as f64;
    let best = (0..n).map(|i| i as f64 * step).min_by(|a, b| dist(*a).total_cmp(&dist(*b))).unwrap_or(0.0);
    let (mut lo, mut hi) = (best - step, best + step);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if dist(m1) < dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist((lo + hi) / 2.0).min(dist(best))
}

/// Drives the orbit parameters toward the border and checks that the images
/// land on the claimed border circles.
pub fn verify_closure<S: Scalar>(
    x: &FactoredElement<S>,
    descriptor: &ClosureDescriptor<S>,
    count: usize,
    seed: u64,
) -> Result<ClosureReport, NumericError> {
    let class = classify_point(x)?.class;
    let xc = canonical_frame(x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (label, parameter -> group element, border index)
    type Sequence = (String, Box<dyn Fn(f64) -> GroupF64>, usize);
    let mut sequences: Vec<Sequence> = Vec::new();
    for _ in 0..count {
        let t: f64 = rng.gen_range(-2.0..2.0);
        match class {
            OrbitClass::EllipticDisk => {
                let phi: f64 = rng.gen_range(0.1..std::f64::consts::PI - 0.1);
                sequences.push((format!("Im z -> 0 at Re z = {t}"), Box::new(move |e| to_interior(t, e)), 0));
                sequences.push((
                    format!("|z| -> infinity at arg {phi}"),
                    Box::new(move |e| to_interior(phi.cos() / e, phi.sin() / e)),
                    0,
                ));
            }
            OrbitClass::ParabolicCylinder => {
                sequences.push((format!("d -> 0 at t = {t}"), Box::new(move |d| el(1.0 / d, t * d, 0.0, d)), 1));
                sequences.push((
                    format!("d -> infinity at t = {t}"),
                    Box::new(move |e| el(e, t / e, 0.0, 1.0 / e)),
                    0,
                ));
            }
            OrbitClass::HyperbolicMoebius | OrbitClass::HyperbolicCylinder => {
                sequences.push((format!("t1 -> t2 = {t}"), Box::new(move |e| el(t + e, t / e, 1.0, 1.0 / e)), 0));
            }
            _ => {}
        }
    }
    let mut max_final_distance: f64 = 0.0;
    for (label, g, border) in &sequences {
        let target = &descriptor.border[*border];
        let mut last = f64::INFINITY;
        for &e in &STEPS {
            let p = embed(&xc.act(&g(e)));
            last = if p.is_finite() { distance_to_circle(&p, target) } else { f64::INFINITY };
        }
        if !(last <= TOLERANCE) {
            return Err(NumericError::ClosureDivergence { parameter: label.clone(), distance: last });
        }
        max_final_distance = max_final_distance.max(last);
    }
    Ok(ClosureReport { sequences_checked: sequences.len(), max_final_distance, tolerance: TOLERANCE, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::closure_of;
    use crate::poly::{parse_element, InteriorPoint};
    use crate::{rat, ratio, Element};

    fn check(x: &Element) -> ClosureReport {
        let d = closure_of(x).unwrap();
        verify_closure(x, &d, 5, 11).unwrap()
    }

    #[test]
    fn elliptic_closure_reaches_the_circle() {
        let x = Element::elliptic("2".parse().unwrap(), vec![rat(1)], InteriorPoint::i()).unwrap();
        let r = check(&x);
        assert_eq!(r.sequences_checked, 10);
        let z = InteriorPoint::new(ratio(1, 3), rat(2)).unwrap();
        check(&Element::elliptic("6+2".parse().unwrap(), vec![rat(1), rat(-3)], z).unwrap());
    }

    #[test]
    fn parabolic_closure_reaches_both_circles() {
        let x = Element::parabolic("4+2".parse().unwrap(), vec![rat(1), rat(1)], BoundaryPoint::Finite(rat(3))).unwrap();
        assert_eq!(check(&x).sequences_checked, 10);
        let x = Element::parabolic("5+2".parse().unwrap(), vec![rat(1), rat(2)], BoundaryPoint::Infinity).unwrap();
        check(&x);
    }

    #[test]
    fn hyperbolic_closure() {
        let x = parse_element::<crate::Rational>("rho = 2\nu=1 ; boundary: (1/0)^1, (0/1)^1 ; interior:\n").unwrap();
        check(&x);
        let x = Element::hyperbolic(
            "4+2".parse().unwrap(),
            vec![rat(1), rat(1)],
            BoundaryPoint::Finite(rat(-1)),
            BoundaryPoint::Finite(rat(2)),
            &[2, 1],
        )
        .unwrap();
        check(&x);
    }

    #[test]
    fn wrong_border_is_rejected() {
        let x = Element::parabolic("4+2".parse().unwrap(), vec![rat(1), rat(1)], BoundaryPoint::Finite(rat(0))).unwrap();
        let mut d = closure_of(&x).unwrap();
        d.border.swap(0, 1);
        assert!(matches!(verify_closure(&x, &d, 2, 1), Err(NumericError::ClosureDivergence { .. })));
    }
}
