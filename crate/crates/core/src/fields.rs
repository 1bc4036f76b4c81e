//! Infinitesimal generators of the analytic compactifications of the
//! hyperbolic plane on the strip `R x R_+`, `x` an angle.
//!
//! The `n`-th family is the pullback of the projective one by
//! `F_n(x, y) = (x, y^n)`:
//!
//! ```text
//! K_n = (2, 0)
//! H_n = (2 sin x (1 + y^n),  (2/n) cos x (2y + y^(n+1)))
//! L_n = (2 cos x (1 + y^n), -(2/n) sin x (2y + y^(n+1)))
//! ```

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::numeric::derivative;
use crate::poly::Generator;

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("n must be at least 1")]
    InvalidOrder,
    #[error("start point below the boundary: y = {0}")]
    OutsideDomain(f64),
    #[error("step must be positive")]
    InvalidStep,
    #[error("integration produced a non-finite value at t = {0}")]
    NonFinite(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneVectorField {
    pub generator: Generator,
    pub n: u32,
}

impl PlaneVectorField {
    pub fn eval(&self, x: f64, y: f64) -> [f64; 2] {
        let n = self.n as i32;
        let nf = self.n as f64;
        let radial = 2.0 * y + y.powi(n + 1);
        match self.generator {
            Generator::K => [2.0, 0.0],
            Generator::H => [2.0 * x.sin() * (1.0 + y.powi(n)), 2.0 / nf * x.cos() * radial],
            Generator::L => [2.0 * x.cos() * (1.0 + y.powi(n)), -2.0 / nf * x.sin() * radial],
        }
    }

    pub fn label(&self) -> String {
        format!("{:?}bar_{}+", self.generator, self.n)
    }
}

/// `(K_n, H_n, L_n)`.
pub fn generators(n: u32) -> Result<[PlaneVectorField; 3], FieldError> {
    if n == 0 {
        return Err(FieldError::InvalidOrder);
    }
    Ok([Generator::K, Generator::H, Generator::L].map(|generator| PlaneVectorField { generator, n }))
}

fn jacobian(f: &PlaneVectorField, x: f64, y: f64, h: f64) -> [[f64; 2]; 2] {
    let dx = derivative(|t| f.eval(x + t, y).to_vec(), h);
    let dy = derivative(|t| f.eval(x, y + t).to_vec(), h);
    [[dx[0], dy[0]], [dx[1], dy[1]]]
}

/// `[f, g] = (Dg) f - (Df) g`.
pub fn lie_bracket(f: &PlaneVectorField, g: &PlaneVectorField, x: f64, y: f64, h: f64) -> [f64; 2] {
    let (jf, jg) = (jacobian(f, x, y, h), jacobian(g, x, y, h));
    let (vf, vg) = (f.eval(x, y), g.eval(x, y));
    let apply = |j: [[f64; 2]; 2], v: [f64; 2]| [j[0][0] * v[0] + j[0][1] * v[1], j[1][0] * v[0] + j[1][1] * v[1]];
    let (a, b) = (apply(jg, vf), apply(jf, vg));
    [a[0] - b[0], a[1] - b[1]]
}

fn matrix(z: Generator) -> [i64; 4] {
    z.matrix()
}

/// Coordinates of the matrix commutator `[a, b]` in the basis `H, K, L`.
pub fn commutator(a: Generator, b: Generator) -> Vec<(Generator, f64)> {
    let mul = |p: [i64; 4], q: [i64; 4]| {
        [p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]]
    };
    let (ab, ba) = (mul(matrix(a), matrix(b)), mul(matrix(b), matrix(a)));
    let c: Vec<i64> = (0..4).map(|i| ab[i] - ba[i]).collect();
    // h H + k K + l L = (h, l - k; k + l, -h)
    let h = c[0] as f64;
    let k = (c[2] - c[1]) as f64 / 2.0;
    let l = (c[1] + c[2]) as f64 / 2.0;
    [(Generator::H, h), (Generator::K, k), (Generator::L, l)].into_iter().filter(|(_, v)| *v != 0.0).collect()
}

/// Sign relating field brackets to matrix commutators, fixed on the `n = 1`
/// closed forms: `[K_1, H_1] = 2 L_1` while `[K, H] = 2L`.
pub const BRACKET_SIGN: f64 = 1.0;

/// Max norm of `[f, g] - sum c_Z Z_n` over the grid.
pub fn bracket_residual(
    f: &PlaneVectorField,
    g: &PlaneVectorField,
    expected: &[(Generator, f64)],
    grid: &[(f64, f64)],
    h: f64,
) -> f64 {
    grid.iter()
        .map(|&(x, y)| {
            let b = lie_bracket(f, g, x, y, h);
            let mut e = [0.0, 0.0];
            for &(z, c) in expected {
                let v = PlaneVectorField { generator: z, n: f.n }.eval(x, y);
                e[0] += BRACKET_SIGN * c * v[0];
                e[1] += BRACKET_SIGN * c * v[1];
            }
            (b[0] - e[0]).abs().max((b[1] - e[1]).abs())
        })
        .fold(0.0, f64::max)
}

/// `nx x ny` points of `[0, 2pi] x [0, y_max]`, boundary row included.
pub fn grid(nx: usize, ny: usize, y_max: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let x = std::f64::consts::TAU * i as f64 / (nx - 1).max(1) as f64;
            let y = y_max * j as f64 / (ny - 1).max(1) as f64;
            out.push((x, y));
        }
    }
    out
}

/// Classical fourth-order Runge-Kutta trajectory, `start` included.
pub fn flow(f: &PlaneVectorField, start: (f64, f64), t: f64, step: f64) -> Result<Vec<[f64; 2]>, FieldError> {
    if start.1 < 0.0 {
        return Err(FieldError::OutsideDomain(start.1));
    }
    if step <= 0.0 {
        return Err(FieldError::InvalidStep);
    }
    let steps = (t.abs() / step).ceil() as usize;
    let dt = if steps == 0 { 0.0 } else { t / steps as f64 };
    let mut p = [start.0, start.1];
    let mut out = vec![p];
    let add = |p: [f64; 2], v: [f64; 2], s: f64| [p[0] + s * v[0], p[1] + s * v[1]];
    for i in 0..steps {
        let k1 = f.eval(p[0], p[1]);
        let q = add(p, k1, dt / 2.0);
        let k2 = f.eval(q[0], q[1]);
        let q = add(p, k2, dt / 2.0);
        let k3 = f.eval(q[0], q[1]);
        let q = add(p, k3, dt);
        let k4 = f.eval(q[0], q[1]);
        p = [
            p[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            p[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if !(p[0].is_finite() && p[1].is_finite()) {
            return Err(FieldError::NonFinite(dt * (i + 1) as f64));
        }
        out.push(p);
    }
    Ok(out)
}

/// `|dF_n V_n(p) - V_1(F_n(p))|` with the differential taken by finite
/// differences.
pub fn pullback_residual(f: &PlaneVectorField, x: f64, y: f64, h: f64) -> f64 {
    let n = f.n as i32;
    let v = f.eval(x, y);
    let push = derivative(|t| vec![x + t * v[0], (y + t * v[1]).powi(n)], h);
    let base = PlaneVectorField { generator: f.generator, n: 1 }.eval(x, y.powi(n));
    (push[0] - base[0]).abs().max((push[1] - base[1]).abs())
}

/// Eigenvalues of the linearization of `f` at a zero, increasing when real;
/// `None` when complex.
pub fn linearization_eigenvalues(f: &PlaneVectorField, x: f64, y: f64, h: f64) -> Option<[f64; 2]> {
    let j = jacobian(f, x, y, h);
    let (tr, det) = (j[0][0] + j[1][1], j[0][0] * j[1][1] - j[0][1] * j[1][0]);
    let disc = tr * tr - 4.0 * det;
    (disc >= 0.0).then(|| [(tr - disc.sqrt()) / 2.0, (tr + disc.sqrt()) / 2.0])
}

/// Disk models read in the strip chart `x = arg w`, `y = chart(|w|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiskModel {
    /// Klein disk, `y = 1/r - 1`.
    Klein,
    /// Poincare disk, `y = (1 - rho)/sqrt(2 rho)`.
    Poincare,
}

impl DiskModel {
    fn to_strip(self, w: Complex64) -> (f64, f64) {
        let r = w.norm();
        let y = match self {
            DiskModel::Klein => 1.0 / r - 1.0,
            DiskModel::Poincare => (1.0 - r) / (2.0 * r).sqrt(),
        };
        (w.arg(), y)
    }

    fn from_strip(self, x: f64, y: f64) -> Complex64 {
        let r = match self {
            DiskModel::Klein => 1.0 / (1.0 + y),
            // (1 - rho)^2 = 2 y^2 rho
            DiskModel::Poincare => {
                let b = 1.0 + y * y;
                b - (b * b - 1.0).sqrt()
            }
        };
        Complex64::from_polar(r, x)
    }

    /// Klein points are carried to the Poincare disk and back.
    fn to_poincare(self, w: Complex64) -> Complex64 {
        match self {
            DiskModel::Poincare => w,
            DiskModel::Klein => w / (1.0 + (1.0 - w.norm_sqr()).sqrt()),
        }
    }

    fn from_poincare(self, w: Complex64) -> Complex64 {
        match self {
            DiskModel::Poincare => w,
            DiskModel::Klein => 2.0 * w / (1.0 + w.norm_sqr()),
        }
    }
}

fn mobius(z: Generator, t: f64, w: Complex64) -> Complex64 {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    // upper half-plane point, moved by exp(-tZ), back to the disk
    let u = i * (one + w) / (one - w);
    let g = crate::GroupF64::exp(z, -t);
    let (a, b, c, d) = (*g.a(), *g.b(), *g.c(), *g.d());
    let v = (a * u + b) / (c * u + d);
    (v - i) / (v + i)
}

/// Generator of `exp(-tZ)` acting by Moebius maps on the disk model, read in
/// the strip chart. Independent of the pullback construction.
pub fn disk_model_field(model: DiskModel, z: Generator, x: f64, y: f64, h: f64) -> [f64; 2] {
    let w0 = model.to_poincare(model.from_strip(x, y));
    let d = derivative(
        |t| {
            let (sx, sy) = model.to_strip(model.from_poincare(mobius(z, t, w0)));
            // unwrap the angle around x
            let dx = (sx - x + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
            vec![x + dx, sy]
        },
        h,
    );
    [d[0], d[1]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_one_matches_closed_forms() {
        let [k, hf, l] = generators(1).unwrap();
        let (x, y) = (0.7, 1.3);
        assert_eq!(k.eval(x, y), [2.0, 0.0]);
        let e = [2.0 * x.sin() * (1.0 + y), 2.0 * x.cos() * (2.0 * y + y * y)];
        assert_eq!(hf.eval(x, y), e);
        let e = [2.0 * x.cos() * (1.0 + y), -2.0 * x.sin() * (2.0 * y + y * y)];
        assert_eq!(l.eval(x, y), e);
        assert_eq!(generators(0), Err(FieldError::InvalidOrder));
    }

    #[test]
    fn commutators() {
        assert_eq!(commutator(Generator::H, Generator::K), vec![(Generator::L, -2.0)]);
        assert_eq!(commutator(Generator::H, Generator::L), vec![(Generator::K, -2.0)]);
        assert_eq!(commutator(Generator::K, Generator::L), vec![(Generator::H, -2.0)]);
        assert!(commutator(Generator::K, Generator::K).is_empty());
    }

    #[test]
    fn brackets_hold_on_the_grid() {
        let g = grid(25, 9, 2.0);
        for n in 1..=6 {
            let f = generators(n).unwrap();
            for a in &f {
                for b in &f {
                    let r = bracket_residual(a, b, &commutator(a.generator, b.generator), &g, 1e-4);
                    assert!(r < 1e-6, "n={n} [{:?},{:?}] residual {r}", a.generator, b.generator);
                }
            }
        }
    }

    #[test]
    fn pullback_consistency() {
        for n in 1..=6 {
            for f in generators(n).unwrap() {
                for &(x, y) in &grid(7, 5, 1.5)[..] {
                    if y > 0.0 {
                        let r = pullback_residual(&f, x, y, 1e-5);
                        assert!(r < 1e-8, "{} at ({x},{y}): {r}", f.label());
                    }
                }
            }
        }
    }

    #[test]
    fn flows() {
        let [k, hf, l] = generators(3).unwrap();
        let tr = flow(&k, (0.0, 1.0), std::f64::consts::PI, 1e-3).unwrap();
        let end = tr.last().unwrap();
        assert!((end[0] - std::f64::consts::TAU).abs() < 1e-12 && end[1] == 1.0);
        for f in [hf, l] {
            let tr = flow(&f, (0.4, 0.0), 2.0, 1e-3).unwrap();
            assert!(tr.iter().all(|p| p[1].abs() <= 1e-9));
        }
        assert_eq!(flow(&k, (0.0, -1.0), 1.0, 1e-3), Err(FieldError::OutsideDomain(-1.0)));
    }

    #[test]
    fn linearizations_separate_the_family() {
        for n in 1..=6 {
            let f = PlaneVectorField { generator: Generator::H, n };
            let ev = linearization_eigenvalues(&f, 0.0, 0.0, 1e-4).unwrap();
            let mut e = [2.0, 4.0 / n as f64];
            e.sort_by(f64::total_cmp);
            assert!((ev[0] - e[0]).abs() < 1e-8 && (ev[1] - e[1]).abs() < 1e-8, "n={n}: {ev:?}");
        }
    }

    #[test]
    fn disk_models_reproduce_the_fields() {
        for (model, n) in [(DiskModel::Klein, 1), (DiskModel::Poincare, 2)] {
            for f in generators(n).unwrap() {
                for &(x, y) in &[(0.3, 0.2), (2.0, 1.0), (4.0, 0.05), (5.5, 1.7)] {
                    let a = f.eval(x, y);
                    let b = disk_model_field(model, f.generator, x, y, 1e-4);
                    assert!((a[0] - b[0]).abs() < 1e-7 && (a[1] - b[1]).abs() < 1e-7, "{model:?} {:?}: {a:?} vs {b:?}", f.generator);
                }
            }
        }
    }
}
