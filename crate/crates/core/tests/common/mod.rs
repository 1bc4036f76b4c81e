#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use sl2orbit::poly::{BoundaryPoint, FactoredBlock, InteriorPoint};
use sl2orbit::rep::RepDecomposition;
use sl2orbit::{rat, ratio, Element, Group, Rational};

pub const REPS: [&str; 12] =
    ["1", "2", "3", "4", "2+1", "2+2", "3+1", "4+2", "3+2+1", "5+3", "4+2+0", "6+1"];

pub fn random_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    ratio(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// Product of a few elementary unimodular matrices with small rational entries.
pub fn random_group<R: Rng>(rng: &mut R) -> Group {
    let mut g = Group::identity();
    for _ in 0..rng.gen_range(1..=4) {
        let e = match rng.gen_range(0..4) {
            0 => Group::shear(random_rational(rng, 4, 3)),
            1 => Group::quarter_turn(),
            2 => {
                let mut s = random_rational(rng, 3, 2);
                if s == rat(0) {
                    s = rat(2);
                }
                Group::diagonal(s)
            }
            _ => Group::new(rat(1), rat(0), random_rational(rng, 3, 2), rat(1)).unwrap(),
        };
        g = g.compose(&e);
    }
    g
}

fn boundary_pool() -> Vec<BoundaryPoint<Rational>> {
    let mut v: Vec<_> = [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 3), (1, 1), (3, 2)]
        .iter()
        .map(|&(p, q)| BoundaryPoint::Finite(ratio(p, q)))
        .collect();
    v.push(BoundaryPoint::Infinity);
    v
}

fn interior_pool() -> Vec<InteriorPoint<Rational>> {
    [((0, 1), (1, 1)), ((1, 1), (1, 1)), ((-1, 2), (2, 1)), ((2, 1), (1, 3))]
        .iter()
        .map(|&((a, b), (c, d))| InteriorPoint::new(ratio(a, b), ratio(c, d)).unwrap())
        .collect()
}

/// Random block of degree `n` with roots from small pools.
pub fn random_block<R: Rng>(rng: &mut R, n: usize, u: Rational) -> FactoredBlock<Rational> {
    if u == rat(0) {
        return FactoredBlock::zero();
    }
    let mut boundary: Vec<(BoundaryPoint<Rational>, u32)> = Vec::new();
    let mut interior: Vec<(InteriorPoint<Rational>, u32)> = Vec::new();
    let mut left = n;
    while left > 0 {
        if left >= 2 && rng.gen_bool(0.3) {
            let z = interior_pool().choose(rng).unwrap().clone();
            match interior.iter_mut().find(|(w, _)| *w == z) {
                Some(e) => e.1 += 1,
                None => interior.push((z, 1)),
            }
            left -= 2;
        } else {
            let t = boundary_pool().choose(rng).unwrap().clone();
            match boundary.iter_mut().find(|(s, _)| *s == t) {
                Some(e) => e.1 += 1,
                None => boundary.push((t, 1)),
            }
            left -= 1;
        }
    }
    FactoredBlock::new(u, boundary, interior)
}

pub fn random_element<R: Rng>(rng: &mut R, rep: &RepDecomposition) -> Element {
    let mut u: Vec<Rational> = (0..rep.len()).map(|_| rat(rng.gen_range(-3..=3))).collect();
    if u.iter().all(|c| *c == rat(0)) {
        u[0] = rat(1);
    }
    let blocks = (0..rep.len()).map(|q| random_block(rng, rep.dim(q), u[q].clone())).collect();
    Element::new(rep.clone(), blocks).unwrap()
}

pub fn scalars(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&c| rat(c)).collect()
}

pub fn elliptic(rep: &str, u: &[i64]) -> Element {
    Element::elliptic(rep.parse().unwrap(), scalars(u), InteriorPoint::i()).unwrap()
}

pub fn parabolic(rep: &str, u: &[i64]) -> Element {
    Element::parabolic(rep.parse().unwrap(), scalars(u), BoundaryPoint::Finite(rat(0))).unwrap()
}

pub fn hyperbolic(rep: &str, u: &[i64], alpha: &[u32]) -> Element {
    Element::hyperbolic(rep.parse().unwrap(), scalars(u), BoundaryPoint::Infinity, BoundaryPoint::Finite(rat(0)), alpha)
        .unwrap()
}
