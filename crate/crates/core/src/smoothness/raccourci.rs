use serde::Serialize;

use super::bivariate::BivariatePoly;
use super::SmoothnessError;
use crate::Scalar;

fn negligible<S: Scalar>(v: &S) -> bool {
    if S::EXACT {
        v.is_zero()
    } else {
        v.to_f64().abs() <= 1e-9
    }
}

/// Whether `target` lies in the linear span of `columns` (all vectors of the
/// same length), by row reduction of the augmented matrix.
fn in_span<S: Scalar>(columns: &[Vec<S>], target: &[S]) -> bool {
    let rows = target.len();
    let cols = columns.len();
    let mut m: Vec<Vec<S>> =
        (0..rows).map(|r| columns.iter().map(|c| c[r].clone()).chain([target[r].clone()]).collect()).collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows)
            .filter(|&r| !negligible(&m[r][col]))
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
        else {
            continue;
        };
        m.swap(pivot_row, p);
        let pivot = m[pivot_row][col].clone();
        for r in 0..rows {
            if r == pivot_row || negligible(&m[r][col]) {
                continue;
            }
            let f = m[r][col].clone() / pivot.clone();
            for c in col..=cols {
                let v = m[pivot_row][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    m[pivot_row..].iter().all(|row| negligible(&row[cols]))
}

/// Exponent vectors `e` with `sum e_i deg_i = total`.
fn exponent_vectors(degs: &[u32], total: u32) -> Vec<Vec<u32>> {
    match degs.split_first() {
        None => {
            if total == 0 {
                vec![Vec::new()]
            } else {
                Vec::new()
            }
        }
        Some((&d, rest)) => (0..=total / d)
            .flat_map(|a| {
                exponent_vectors(rest, total - a * d).into_iter().map(move |mut tail| {
                    tail.insert(0, a);
                    tail
                })
            })
            .collect(),
    }
}

/// Membership of `target` in the subalgebra `R[gens]`, generators homogeneous
/// and non-constant. The subalgebra is graded, so each homogeneous component of
/// `target` is tested on its own.
pub fn subalgebra_membership<S: Scalar>(target: &BivariatePoly<S>, gens: &[&BivariatePoly<S>]) -> bool {
    let degs: Vec<u32> = gens.iter().map(|g| g.degree()).collect();
    debug_assert!(gens.iter().all(|g| g.is_homogeneous() && !g.is_constant()));
    let mut d_values: Vec<u32> = target.terms().map(|((i, j), _)| i + j).collect();
    d_values.dedup();
    d_values.into_iter().all(|d| {
        let part = target.component(d);
        if d == 0 {
            return true;
        }
        let basis = |p: &BivariatePoly<S>| -> Vec<S> { (0..=d).map(|i| p.coeff(i, d - i)).collect() };
        let columns: Vec<Vec<S>> = exponent_vectors(&degs, d)
            .into_iter()
            .map(|e| {
                let mut prod = BivariatePoly::constant(S::one());
                for (g, k) in gens.iter().zip(e) {
                    prod = &prod * &g.pow(k);
                }
                basis(&prod)
            })
            .collect();
        in_span(&columns, &basis(&part))
    })
}

/// Whether `target` lies in `R[p1, p2]`.
pub fn ring_membership<S: Scalar>(target: &BivariatePoly<S>, p1: &BivariatePoly<S>, p2: &BivariatePoly<S>) -> bool {
    subalgebra_membership(target, &[p1, p2])
}

/// Outcome of the raccourci test; indices refer to the input coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum SmoothnessVerdict {
    Singular { p1: usize, p2: usize, witness: usize },
    /// No obstruction found. This is not a smoothness certificate.
    NoObstruction { p1: usize, p2: usize },
}

/// Picks `P1` of minimal degree, `P2` of minimal degree outside `R[P1]`, and
/// reports the first minimal-degree coordinate outside `R[P1, P2]`.
///
/// Coordinates must vanish at the origin. `P1` and `P2` must be homogeneous;
/// other coordinates may mix degrees.
pub fn raccourci_test<S: Scalar>(coords: &[BivariatePoly<S>]) -> Result<SmoothnessVerdict, SmoothnessError> {
    for (i, c) in coords.iter().enumerate() {
        if c.is_zero() || !c.coeff(0, 0).is_zero() {
            return Err(SmoothnessError::InvalidCoordinate { index: i, reason: "must be nonzero and vanish at 0" });
        }
    }
    let first_min = |candidates: &mut dyn Iterator<Item = usize>| -> Option<usize> {
        candidates.min_by_key(|&i| (coords[i].degree(), i))
    };
    let p1 = first_min(&mut (0..coords.len())).ok_or(SmoothnessError::Degenerate)?;
    let g1 = &coords[p1];
    if !g1.is_homogeneous() {
        return Err(SmoothnessError::InvalidCoordinate { index: p1, reason: "P1 must be homogeneous" });
    }
    let p2 = first_min(&mut (0..coords.len()).filter(|&i| !subalgebra_membership(&coords[i], &[g1])))
        .ok_or(SmoothnessError::Degenerate)?;
    let g2 = &coords[p2];
    if !g2.is_homogeneous() {
        return Err(SmoothnessError::InvalidCoordinate { index: p2, reason: "P2 must be homogeneous" });
    }
    match first_min(&mut (0..coords.len()).filter(|&i| !ring_membership(&coords[i], g1, g2))) {
        Some(witness) => Ok(SmoothnessVerdict::Singular { p1, p2, witness }),
        None => Ok(SmoothnessVerdict::NoObstruction { p1, p2 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rational};

    type P = BivariatePoly<Rational>;

    fn x() -> P {
        P::x()
    }

    fn y() -> P {
        P::y()
    }

    #[test]
    fn membership_examples() {
        let target = (x() - y()).pow(2);
        assert!(ring_membership(&target, &(x() + y()), &(x() * y())));
        assert!(!ring_membership(&y().pow(3), &x(), &y().pow(2)));
        for (a, b) in [(1, 1), (1, 2), (3, -1)] {
            let p1 = &x().scale(&rat(a)) + &y().scale(&rat(b));
            let p2 = (x() - y()).pow(2);
            assert!(!ring_membership(&(x() - y()).pow(3), &p1, &p2));
        }
    }

    #[test]
    fn membership_of_zero_and_mismatched_degree() {
        assert!(ring_membership(&P::zero(), &x(), &y().pow(2)));
        // degree 1 target, generators of degree 2 and 3
        assert!(!ring_membership(&x(), &x().pow(2), &y().pow(3)));
    }

    #[test]
    fn membership_agrees_for_floats() {
        type F = BivariatePoly<f64>;
        let t = (F::x() - F::y()).pow(2);
        assert!(ring_membership(&t, &(F::x() + F::y()), &(F::x() * F::y())));
        assert!(!ring_membership(&F::y().pow(3), &F::x(), &F::y().pow(2)));
    }

    #[test]
    fn raccourci_examples() {
        assert_eq!(
            raccourci_test(&[x(), y().pow(2), y().pow(3)]).unwrap(),
            SmoothnessVerdict::Singular { p1: 0, p2: 1, witness: 2 }
        );
        assert_eq!(raccourci_test(&[x(), y()]).unwrap(), SmoothnessVerdict::NoObstruction { p1: 0, p2: 1 });
        let third = &(x() * y().pow(2)) + &y().pow(4);
        assert_eq!(
            raccourci_test(&[x(), y().pow(2), third]).unwrap(),
            SmoothnessVerdict::NoObstruction { p1: 0, p2: 1 }
        );
    }

    #[test]
    fn whitney_umbrella_is_singular() {
        let v = raccourci_test(&[x(), y().pow(2), x() * y()]).unwrap();
        assert_eq!(v, SmoothnessVerdict::Singular { p1: 0, p2: 1, witness: 2 });
    }

    #[test]
    fn curve_is_degenerate() {
        assert_eq!(raccourci_test(&[x(), x().pow(2)]), Err(SmoothnessError::Degenerate));
        assert!(matches!(
            raccourci_test(&[x() + P::constant(rat(1)), y()]),
            Err(SmoothnessError::InvalidCoordinate { index: 0, .. })
        ));
    }
}
