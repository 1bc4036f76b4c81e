//! Recovering the factored form of a single block from its coefficients.
//!
//! Roots of the dehomogenized polynomial `P(1, y)` are found as companion
//! matrix eigenvalues with one Newton step each. A root `y` corresponds to
//! the factor `(-y) X + Y`. Exact inputs first go through a squarefree
//! decomposition so that multiplicities are read off exactly; floating inputs
//! are clustered at the caller's tolerance.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::factored::FactoredBlock;
use super::form::HomogeneousForm;
use super::roots::{BoundaryPoint, InteriorPoint};
use super::PolyError;
use crate::scalar::rational_guess;
use crate::{Rational, Scalar};

const MAX_DENOMINATOR: i64 = 1_000_000;

pub fn factor<S: Scalar>(form: &HomogeneousForm<S>, tol: f64) -> Result<FactoredBlock<S>, PolyError> {
    if !(tol > 0.0) {
        return Err(PolyError::UnstableFactorization { tol, detail: "tolerance must be positive".into() });
    }
    if form.is_zero() {
        return Err(PolyError::ZeroForm);
    }
    if S::EXACT {
        let exact = form.map(|c| c.to_rational().expect("exact scalars are finite"));
        let block = factor_exact(&exact, tol)?;
        Ok(block.map(S::from_rational))
    } else {
        let block = factor_float(&form.to_f64(), tol)?;
        Ok(block.map(|v| S::from_f64(*v).expect("finite root")))
    }
}

/// `(x_multiplicity, ascending coefficients of P(1, y))`.
fn dehomogenize<T: Clone + Zero>(coeffs: &[T]) -> (usize, Vec<T>) {
    let n = coeffs.len() - 1;
    let m = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero form");
    (m, (0..=n - m).map(|k| coeffs[n - k].clone()).collect())
}

fn factor_exact(form: &HomogeneousForm<Rational>, tol: f64) -> Result<FactoredBlock<Rational>, PolyError> {
    let n = form.degree();
    let (m, q) = dehomogenize(form.coeffs());
    let u = form.coeff(m).clone();
    let mut boundary = Vec::new();
    let mut interior = Vec::new();
    if m > 0 {
        boundary.push((BoundaryPoint::Infinity, m as u32));
    }
    for (mult, part) in squarefree(&q) {
        if degree(&part) == 0 {
            continue;
        }
        let approx: Vec<f64> = part.iter().map(Scalar::to_f64).collect();
        for y in roots_f64(&approx) {
            if let Some(r) = exact_real_root(&part, y) {
                boundary.push((BoundaryPoint::Finite(-r), mult));
            } else if y.im > 0.0 {
                let z = exact_complex_root(&part, y).ok_or_else(|| {
                    PolyError::IrrationalRoot(format!("y = {} + {}i of {form}", y.re, y.im))
                })?;
                interior.push((z, mult));
            } else if y.im.abs() <= tol * (1.0 + y.norm()) {
                return Err(PolyError::IrrationalRoot(format!("y = {} of {form}", y.re)));
            }
        }
    }
    let block = FactoredBlock::new(u, boundary, interior);
    if block.validate(n).is_err() || &block.expand(n)? != form {
        return Err(PolyError::IrrationalRoot(format!("roots of {form} are not all Gaussian rationals")));
    }
    Ok(block)
}

fn exact_real_root(p: &[Rational], y: Complex64) -> Option<Rational> {
    if y.im.abs() > 1e-6 * (1.0 + y.norm()) {
        return None;
    }
    let r = rational_guess(y.re, MAX_DENOMINATOR)?;
    eval(p, &r).is_zero().then_some(r)
}

/// Root `y = a + bi` (b > 0) of `p`; the factor is `(zX+Y)(conj z X+Y)` with
/// `z = -a + bi`.
fn exact_complex_root(p: &[Rational], y: Complex64) -> Option<InteriorPoint<Rational>> {
    let a = rational_guess(y.re, MAX_DENOMINATOR)?;
    let b = rational_guess(y.im, MAX_DENOMINATOR)?;
    if !b.is_positive() {
        return None;
    }
    // y^2 - 2a y + (a^2 + b^2)
    let quad = vec![a.clone() * a.clone() + b.clone() * b.clone(), -(a.clone() + a.clone()), Rational::one()];
    let (_, rem) = div_rem(p, &quad);
    rem.iter().all(Zero::is_zero).then(|| InteriorPoint { re: -a, im: b })
}

fn factor_float(form: &HomogeneousForm<f64>, tol: f64) -> Result<FactoredBlock<f64>, PolyError> {
    let n = form.degree();
    let coeffs: Vec<f64> = form.coeffs().to_vec();
    let (m, q) = dehomogenize(&coeffs);
    let u = coeffs[m];
    let roots = roots_f64(&q);
    let clusters = cluster(&roots, tol)?;

    let mut boundary = Vec::new();
    let mut interior = Vec::new();
    if m > 0 {
        boundary.push((BoundaryPoint::Infinity, m as u32));
    }
    let mut lower = Vec::new();
    for (c, size) in &clusters {
        if c.im.abs() <= tol {
            boundary.push((BoundaryPoint::Finite(-c.re), *size as u32));
        } else if c.im > 0.0 {
            interior.push((InteriorPoint { re: -c.re, im: c.im }, *size as u32));
        } else {
            lower.push((c.conj(), *size));
        }
    }
    for (z, m) in &interior {
        let partner = lower
            .iter()
            .position(|(w, s)| (w - Complex64::new(-z.re, z.im)).norm() <= 2.0 * tol && *s == *m as usize);
        match partner {
            Some(i) => {
                lower.swap_remove(i);
            }
            None => {
                return Err(PolyError::UnstableFactorization {
                    tol,
                    detail: format!("root cluster ({},{}) has no conjugate partner", z.re, z.im),
                })
            }
        }
    }
    if !lower.is_empty() {
        return Err(PolyError::UnstableFactorization { tol, detail: "unpaired conjugate root cluster".into() });
    }

    let block = FactoredBlock::new(u, boundary, interior);
    block
        .validate(n)
        .map_err(|e| PolyError::UnstableFactorization { tol, detail: e.to_string() })?;
    let back = block.expand(n)?;
    let scale = coeffs.iter().fold(0.0f64, |s, c| s.max(c.abs()));
    let worst = back.coeffs().iter().zip(&coeffs).fold(0.0f64, |w, (a, b)| w.max((a - b).abs() / scale));
    if worst > tol {
        return Err(PolyError::UnstableFactorization {
            tol,
            detail: format!("re-expansion differs by {worst:e} relative"),
        });
    }
    Ok(block)
}

/// Single-linkage clustering at distance `tol`; fails when two clusters are
/// closer than `2 tol`, since then a slightly larger tolerance would merge them.
fn cluster(roots: &[Complex64], tol: f64) -> Result<Vec<(Complex64, usize)>, PolyError> {
    let k = roots.len();
    let mut label: Vec<usize> = (0..k).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..k {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() < tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a] = b;
            }
        }
    }
    let roots_of: Vec<usize> = (0..k).map(|i| find(&mut label, i)).collect();
    for i in 0..k {
        for j in 0..i {
            if roots_of[i] != roots_of[j] && (roots[i] - roots[j]).norm() < 2.0 * tol {
                return Err(PolyError::UnstableFactorization {
                    tol,
                    detail: format!("roots {} and {} are on the edge of merging", roots[i], roots[j]),
                });
            }
        }
    }
    let mut out: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..k {
        match out.iter_mut().find(|(r, _, _)| *r == roots_of[i]) {
            Some(entry) => {
                entry.1 += roots[i];
                entry.2 += 1;
            }
            None => out.push((roots_of[i], roots[i], 1)),
        }
    }
    Ok(out.into_iter().map(|(_, sum, size)| (sum / size as f64, size)).collect())
}

/// Complex roots of the ascending-coefficient polynomial `p`, leading
/// coefficient nonzero.
pub(crate) fn roots_f64(p: &[f64]) -> Vec<Complex64> {
    let d = p.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = p[d];
    if d == 1 {
        return vec![Complex64::new(-p[0] / lead, 0.0)];
    }
    let companion = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -p[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion
        .complex_eigenvalues()
        .iter()
        .map(|&z| {
            // one Newton step, kept only if it helps; near multiple roots v/dv is noise
            let (v, dv) = horner(p, z);
            if dv.norm() == 0.0 {
                return z;
            }
            let w = z - v / dv;
            if horner(p, w).0.norm() < v.norm() {
                w
            } else {
                z
            }
        })
        .collect()
}

fn horner(p: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

fn degree(p: &[Rational]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Rational::zero());
    }
    p
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    if p.len() <= 1 {
        return vec![Rational::zero()];
    }
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer((k as i64).into())).collect())
}

fn monic(p: &[Rational]) -> Vec<Rational> {
    let p = trim(p.to_vec());
    let lead = p.last().expect("nonempty").clone();
    p.into_iter().map(|c| c / lead.clone()).collect()
}

fn div_rem(p: &[Rational], d: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let d = trim(d.to_vec());
    let dd = degree(&d);
    let mut r = trim(p.to_vec());
    if degree(&r) < dd || is_zero_poly(&r) {
        return (vec![Rational::zero()], r);
    }
    let mut quo = vec![Rational::zero(); degree(&r) - dd + 1];
    let lead = d[dd].clone();
    while !is_zero_poly(&r) && degree(&r) >= dd {
        let k = degree(&r) - dd;
        let c = r[degree(&r)].clone() / lead.clone();
        for (i, di) in d.iter().enumerate() {
            r[i + k] = r[i + k].clone() - c.clone() * di;
        }
        quo[k] = c;
        r = trim(r);
    }
    (trim(quo), r)
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero_poly(&b) {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

/// Yun's algorithm: `p = c * prod f_i^i` with `f_i` squarefree and coprime.
fn squarefree(p: &[Rational]) -> Vec<(u32, Vec<Rational>)> {
    let mut out = Vec::new();
    if degree(p) == 0 {
        return out;
    }
    let dp = derivative(p);
    let a0 = gcd(p, &dp);
    let mut b = div_rem(p, &a0).0;
    let mut c = div_rem(&dp, &a0).0;
    let mut d: Vec<Rational> = sub(&c, &derivative(&b));
    let mut i = 1;
    while degree(&b) > 0 {
        let a = gcd(&b, &d);
        if degree(&a) > 0 {
            out.push((i, monic(&a)));
        }
        b = div_rem(&b, &a).0;
        c = div_rem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    trim(
        (0..len)
            .map(|k| {
                a.get(k).cloned().unwrap_or_else(Rational::zero) - b.get(k).cloned().unwrap_or_else(Rational::zero)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn form(cs: &[i64]) -> HomogeneousForm<Rational> {
        HomogeneousForm::new(cs.iter().map(|&c| rat(c)).collect()).unwrap()
    }

    #[test]
    fn sum_of_squares_has_root_i() {
        let b = factor(&form(&[1, 0, 1]), 1e-9).unwrap();
        assert_eq!(b.u, rat(1));
        assert!(b.boundary.is_empty());
        assert_eq!(b.interior, vec![(InteriorPoint::i(), 1)]);
    }

    #[test]
    fn difference_of_squares_has_two_boundary_roots() {
        // X^2 - Y^2 = -(X + Y)(-X + Y)
        let f = form(&[-1, 0, 1]);
        let b = factor(&f, 1e-9).unwrap();
        assert_eq!(b.u, rat(-1));
        assert_eq!(b.boundary, vec![(BoundaryPoint::Finite(rat(-1)), 1), (BoundaryPoint::Finite(rat(1)), 1)]);
        assert_eq!(b.expand(2).unwrap(), f);
    }

    #[test]
    fn double_root_is_read_exactly() {
        // 4X^2 + 4XY + Y^2 = (2X + Y)^2
        let f = form(&[1, 4, 4]);
        let b = factor(&f, 1e-9).unwrap();
        assert_eq!(b.boundary, vec![(BoundaryPoint::Finite(rat(2)), 2)]);
        assert_eq!(b.expand(2).unwrap(), f);
    }

    #[test]
    fn x_multiplicity_becomes_infinity() {
        let f = form(&[0, 1, 0, 0]);
        let b = factor(&f, 1e-9).unwrap();
        assert_eq!(b.boundary, vec![(BoundaryPoint::Finite(rat(0)), 2), (BoundaryPoint::Infinity, 1)]);
    }

    #[test]
    fn irrational_roots_are_refused_exactly() {
        // Y^2 - 2 X^2
        assert!(matches!(factor(&form(&[1, 0, -2]), 1e-9), Err(PolyError::IrrationalRoot(_))));
    }

    #[test]
    fn zero_form_is_refused() {
        assert_eq!(factor(&form(&[0, 0]), 1e-9), Err(PolyError::ZeroForm));
    }

    #[test]
    fn high_multiplicity_exact() {
        let b = FactoredBlock::new(
            rat(3),
            vec![(BoundaryPoint::Finite(Rational::new(1.into(), 3.into())), 5), (BoundaryPoint::Infinity, 2)],
            vec![(InteriorPoint::new(rat(-1), rat(2)).unwrap(), 3)],
        );
        let f = b.expand(13).unwrap();
        assert_eq!(factor(&f, 1e-9).unwrap(), b);
    }

    #[test]
    fn floating_factorization_within_tolerance() {
        let b = FactoredBlock::new(
            2.0,
            vec![(BoundaryPoint::Finite(0.5), 1), (BoundaryPoint::Finite(-3.0), 2)],
            vec![(InteriorPoint::new(1.0, 1.5).unwrap(), 1)],
        );
        let f = b.expand(5).unwrap();
        let g = factor(&f, 1e-6).unwrap();
        assert_eq!(g.boundary.len(), 2);
        assert_eq!(g.boundary[0].1, 2);
        assert!((g.interior[0].0.im - 1.5).abs() < 1e-6);
    }

    #[test]
    fn near_merging_clusters_are_unstable() {
        let b = FactoredBlock::new(1.0, vec![(BoundaryPoint::Finite(0.0), 1), (BoundaryPoint::Finite(1.5e-6), 1)], vec![]);
        let f = b.expand(2).unwrap();
        assert!(matches!(factor(&f, 1e-6), Err(PolyError::UnstableFactorization { .. })));
    }

    #[test]
    fn float_double_root_survives_polishing() {
        let f = HomogeneousForm::new(vec![1.0, -1.0, 0.25]).unwrap();
        let b = factor(&f, 1e-6).unwrap();
        assert_eq!(b.boundary.len(), 1);
        assert!((b.boundary[0].0.finite().unwrap() + 0.5).abs() < 1e-6);
    }

    #[test]
    fn yun_separates_multiplicities() {
        // (y - 1)^2 (y + 2)
        let p = vec![rat(2), rat(-3), rat(0), rat(1)];
        let parts = squarefree(&p);
        assert_eq!(parts, vec![(1, vec![rat(2), rat(1)]), (2, vec![rat(-1), rat(1)])]);
    }
}
