//! Local polynomial coordinates of orbit closures near a border point, in an
//! affine chart of `P(V)`. They feed the raccourci test.

use super::bivariate::BivariatePoly;
use super::SmoothnessError;
use crate::orbit::{classify_point, hyperbolic_roots, OrbitClass};
use crate::poly::FactoredElement;
use crate::Scalar;

type Coeffs<S> = Vec<BivariatePoly<S>>;

fn form_mul<S: Scalar>(a: &Coeffs<S>, b: &Coeffs<S>) -> Coeffs<S> {
    let mut out = vec![BivariatePoly::zero(); a.len() + b.len() - 1];
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(p * q);
        }
    }
    out
}

fn form_pow<S: Scalar>(a: &Coeffs<S>, k: usize) -> Coeffs<S> {
    let mut acc = vec![BivariatePoly::constant(S::one())];
    for _ in 0..k {
        acc = form_mul(&acc, a);
    }
    acc
}

/// `p X + Y`, as coefficients indexed by the power of `X`.
fn linear<S: Scalar>(p: BivariatePoly<S>) -> Coeffs<S> {
    vec![BivariatePoly::constant(S::one()), p]
}

/// Chart on the `Y^n` coefficient of block `reference`; constants removed and
/// vanishing coordinates dropped.
fn chart<S: Scalar>(blocks: Vec<Coeffs<S>>, reference: usize) -> Vec<BivariatePoly<S>> {
    let unit = blocks[reference][0].coeff(0, 0);
    let inv = S::one() / unit;
    blocks
        .into_iter()
        .flatten()
        .map(|p| {
            let p = p.scale(&inv);
            let c = p.coeff(0, 0);
            &p - &BivariatePoly::constant(c)
        })
        .filter(|p| !p.is_zero())
        .collect()
}

fn expect_class<S: Scalar>(
    x: &FactoredElement<S>,
    ok: impl Fn(OrbitClass) -> bool,
    expected: &'static str,
) -> Result<crate::orbit::OrbitDescriptor, SmoothnessError> {
    let d = classify_point(x)?;
    if !ok(d.class) {
        return Err(SmoothnessError::WrongClass { expected, found: d.class });
    }
    Ok(d)
}

/// Elliptic closure near its border, `z = x + iy -> 0`:
/// block `q` is `u_q y^{g_q} ((zX+Y)(conj z X+Y))^{n_q/2}`.
pub fn elliptic_border_coordinates<S: Scalar>(x: &FactoredElement<S>) -> Result<Vec<BivariatePoly<S>>, SmoothnessError> {
    let d = expect_class(x, |c| c == OrbitClass::EllipticDisk, "elliptic_disk")?;
    let rep = x.rep();
    let top = rep.dim(d.support.q_plus);
    let (px, py) = (BivariatePoly::<S>::x(), BivariatePoly::<S>::y());
    let quad = vec![BivariatePoly::constant(S::one()), px.scale(&S::two()), &px.pow(2) + &py.pow(2)];
    let blocks = d
        .support
        .indices
        .iter()
        .map(|&q| {
            let n = rep.dim(q);
            let lead = py.pow(((top - n) / 2) as u32).scale(&x.block(q).u);
            form_mul(&vec![lead], &form_pow(&quad, n / 2))
        })
        .collect();
    Ok(chart(blocks, 0))
}

/// Parabolic closure near the lower border circle, variables `(t, d)`:
/// block `q` is `u_q d^{n_q - n_-} (tX+Y)^{n_q}`.
pub fn parabolic_lower_coordinates<S: Scalar>(x: &FactoredElement<S>) -> Result<Vec<BivariatePoly<S>>, SmoothnessError> {
    let d = expect_class(x, |c| c == OrbitClass::ParabolicCylinder, "parabolic_cylinder")?;
    let rep = x.rep();
    let bottom = rep.dim(d.support.q_minus);
    let (t, dd) = (BivariatePoly::<S>::x(), BivariatePoly::<S>::y());
    let blocks: Vec<Coeffs<S>> = d
        .support
        .indices
        .iter()
        .map(|&q| {
            let n = rep.dim(q);
            let lead = dd.pow((n - bottom) as u32).scale(&x.block(q).u);
            form_mul(&vec![lead], &form_pow(&linear(t.clone()), n))
        })
        .collect();
    let reference = blocks.len() - 1;
    Ok(chart(blocks, reference))
}

/// Parabolic closure near the upper border circle, variables `(t, e)` with
/// `e = 1/d`: block `q` is `u_q e^{n_+ - n_q} (tX+Y)^{n_q}`.
pub fn parabolic_upper_coordinates<S: Scalar>(x: &FactoredElement<S>) -> Result<Vec<BivariatePoly<S>>, SmoothnessError> {
    let d = expect_class(x, |c| c == OrbitClass::ParabolicCylinder, "parabolic_cylinder")?;
    let rep = x.rep();
    let top = rep.dim(d.support.q_plus);
    let (t, e) = (BivariatePoly::<S>::x(), BivariatePoly::<S>::y());
    let blocks = d
        .support
        .indices
        .iter()
        .map(|&q| {
            let n = rep.dim(q);
            let lead = e.pow((top - n) as u32).scale(&x.block(q).u);
            form_mul(&vec![lead], &form_pow(&linear(t.clone()), n))
        })
        .collect();
    Ok(chart(blocks, 0))
}

/// Hyperbolic cylinder closure near the diagonal `t1 = t2 = 0`, variables
/// `(t1, t2)`: block `q` is `u_q (t1-t2)^{a_+ - a_q} (t1 X+Y)^{a_q} (t2 X+Y)^{n_q - a_q}`.
pub fn hyperbolic_diagonal_coordinates<S: Scalar>(
    x: &FactoredElement<S>,
) -> Result<Vec<BivariatePoly<S>>, SmoothnessError> {
    let d = expect_class(x, |c| c == OrbitClass::HyperbolicCylinder, "hyperbolic_cylinder")?;
    let (_, _, alpha) = hyperbolic_roots(x).expect("hyperbolic point");
    let rep = x.rep();
    let a_top = alpha[d.support.q_plus].expect("hit block") as usize;
    let (t1, t2) = (BivariatePoly::<S>::x(), BivariatePoly::<S>::y());
    let diff = &t1 - &t2;
    let blocks = d
        .support
        .indices
        .iter()
        .map(|&q| {
            let n = rep.dim(q);
            let a = alpha[q].expect("hit block") as usize;
            let lead = diff.pow((a_top - a) as u32).scale(&x.block(q).u);
            let f = form_mul(&form_pow(&linear(t1.clone()), a), &form_pow(&linear(t2.clone()), n - a));
            form_mul(&vec![lead], &f)
        })
        .collect();
    Ok(chart(blocks, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{BoundaryPoint, InteriorPoint};
    use crate::smoothness::{raccourci_test, SmoothnessVerdict};
    use crate::{rat, Element};

    fn elliptic(rep: &str, u: &[i64]) -> Element {
        Element::elliptic(rep.parse().unwrap(), u.iter().map(|&v| rat(v)).collect(), InteriorPoint::i()).unwrap()
    }

    fn parabolic(rep: &str, u: &[i64]) -> Element {
        Element::parabolic(rep.parse().unwrap(), u.iter().map(|&v| rat(v)).collect(), BoundaryPoint::Finite(rat(0)))
            .unwrap()
    }

    fn singular(coords: &[BivariatePoly<crate::Rational>]) -> bool {
        matches!(raccourci_test(coords).unwrap(), SmoothnessVerdict::Singular { .. })
    }

    #[test]
    fn elliptic_border_coordinates_follow_the_gap() {
        assert!(!singular(&elliptic_border_coordinates(&elliptic("4+2", &[1, 1])).unwrap()));
        assert!(!singular(&elliptic_border_coordinates(&elliptic("6+2", &[1, 1])).unwrap()));
        assert!(singular(&elliptic_border_coordinates(&elliptic("8+2", &[1, 1])).unwrap()));
    }

    #[test]
    fn parabolic_coordinates_detect_violated_conditions() {
        // lower component of 6+3+2 is fine, the upper one is singular
        let x = parabolic("6+3+2", &[1, 1, 1]);
        assert!(!singular(&parabolic_lower_coordinates(&x).unwrap()));
        assert!(singular(&parabolic_upper_coordinates(&x).unwrap()));
        // n_- = 0 with n_{2-} = 2
        let x = parabolic("4+2+0", &[1, 1, 1]);
        assert!(singular(&parabolic_lower_coordinates(&x).unwrap()));
        for (rep, u) in [("5+2", vec![1, 1]), ("2+1+0", vec![1, 1, 1]), ("4+2", vec![1, -1])] {
            let x = parabolic(rep, &u);
            assert!(!singular(&parabolic_lower_coordinates(&x).unwrap()), "{rep}");
            assert!(!singular(&parabolic_upper_coordinates(&x).unwrap()), "{rep}");
        }
    }

    #[test]
    fn hyperbolic_diagonal() {
        let rep = |s: &str| s.parse().unwrap();
        let x = Element::hyperbolic(rep("4+2"), vec![rat(1), rat(1)], BoundaryPoint::Infinity, BoundaryPoint::Finite(rat(0)), &[2, 1])
            .unwrap();
        assert!(!singular(&hyperbolic_diagonal_coordinates(&x).unwrap()));
        let x = Element::hyperbolic(rep("3"), vec![rat(1)], BoundaryPoint::Infinity, BoundaryPoint::Finite(rat(0)), &[1])
            .unwrap();
        assert!(singular(&hyperbolic_diagonal_coordinates(&x).unwrap()));
    }
}
