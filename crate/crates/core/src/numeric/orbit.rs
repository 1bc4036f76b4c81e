use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{embed, jacobian_rank, largest_entry, ChartPoint, NumericError, RankPolicy, RankReport};
use crate::poly::{FactoredElement, Generator, GroupElement};
use crate::{GroupF64, Scalar};

/// Numeric dimension of the orbit through `at . x`, from the derivatives of
/// `g -> at exp(tZ) . x` for `Z = H, K, L`.
pub fn orbit_map_rank<S: Scalar>(
    x: &FactoredElement<S>,
    at: &GroupF64,
    h: f64,
    policy: &RankPolicy,
) -> Result<RankReport, NumericError> {
    if !(1e-8..=1e-3).contains(&h) {
        return Err(NumericError::InvalidStep(h));
    }
    let x = x.to_f64();
    let vector = |g: &GroupF64| -> Vec<f64> { x.act(g).coordinates() };
    let chart = largest_entry(&vector(at));
    let f = |p: &[f64]| -> Vec<f64> {
        let g = Generator::ALL
            .iter()
            .zip(p)
            .fold(at.clone(), |g, (&z, &t)| g.compose(&GroupElement::exp(z, t)));
        ChartPoint::in_chart(&vector(&g), chart).coords
    };
    jacobian_rank(&f, &[0.0; 3], h, policy)
}

/// `count` points of the orbit of `x`: the first is `x` itself, the rest are
/// images under seeded Iwasawa draws (log-scale within 3, shear within 10).
pub fn sample_orbit<S: Scalar>(x: &FactoredElement<S>, count: usize, seed: u64) -> Vec<ChartPoint> {
    let x = x.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            if i == 0 {
                embed(&x)
            } else {
                embed(&x.act(&GroupElement::random(&mut rng, 3.0, 10.0)))
            }
        })
        .collect()
}

/// `chart,coord_1,...,coord_k` rows.
pub fn write_cloud_csv<W: Write>(points: &[ChartPoint], mut out: W) -> io::Result<()> {
    let k = points.first().map_or(0, |p| p.coords.len());
    write!(out, "chart")?;
    for i in 1..=k {
        write!(out, ",coord_{i}")?;
    }
    writeln!(out)?;
    for p in points {
        write!(out, "{}", p.chart)?;
        for c in &p.coords {
            write!(out, ",{c:e}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
