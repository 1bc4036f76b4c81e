use num_complex::Complex64;
use serde::Serialize;

/// Disk model of the hyperbolic plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TangencyModel {
    /// Klein model: geodesics are chords.
    Projective,
    /// Poincare model: geodesics are circle arcs orthogonal to the boundary.
    Conformal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangencyReport {
    pub model: TangencyModel,
    pub geodesics: usize,
    pub max_angle: f64,
    pub min_angle: f64,
    pub degenerate: bool,
}

/// Height at which the geodesic `Re z = s` of the upper half-plane is read
/// off near its endpoint at infinity.
const FAR: f64 = 1e12;

/// Unit direction, at `x0 = 1`, of the closure of the geodesic that comes
/// from `Re z = s` in the upper half-plane through the Cayley map.
fn direction(model: TangencyModel, s: f64) -> Complex64 {
    let z = Complex64::new(s, FAR);
    let i = Complex64::i();
    // w - 1 for w = (z - i)/(z + i), computed without cancellation
    let delta = -2.0 * i / (z + i);
    let v = match model {
        TangencyModel::Conformal => delta,
        TangencyModel::Projective => {
            // k = 2w/(1 + |w|^2) and k - 1 = (2i Im delta - |delta|^2)/(1 + |w|^2)
            let w = Complex64::new(1.0, 0.0) + delta;
            (2.0 * i * delta.im - delta.norm_sqr()) / (1.0 + w.norm_sqr())
        }
    };
    v / v.norm()
}

fn angle(a: Complex64, b: Complex64) -> f64 {
    (a.conj() * b).arg().abs()
}

fn report(model: TangencyModel, directions: &[Complex64]) -> TangencyReport {
    let mut max_angle: f64 = 0.0;
    let mut min_angle = f64::INFINITY;
    for (i, a) in directions.iter().enumerate() {
        for b in &directions[i + 1..] {
            let t = angle(*a, *b);
            max_angle = max_angle.max(t);
            min_angle = min_angle.min(t);
        }
    }
    let degenerate = directions.len() < 2;
    if degenerate {
        min_angle = 0.0;
    }
    TangencyReport { model, geodesics: directions.len(), max_angle, min_angle, degenerate }
}

/// Geodesics ending at `x0 = (1, 0)`, coming from the vertical lines
/// `Re z = s` for `s` evenly spread over `[-2, 2]`.
pub fn tangency_test(model: TangencyModel, samples: usize) -> TangencyReport {
    let s = |j: usize| if samples < 2 { 0.0 } else { -2.0 + 4.0 * j as f64 / (samples - 1) as f64 };
    let dirs: Vec<Complex64> = (0..samples).map(|j| direction(model, s(j))).collect();
    report(model, &dirs)
}

/// Same, with the far endpoints given by their angles on the unit circle.
pub fn tangency_test_endpoints(model: TangencyModel, endpoint_angles: &[f64]) -> TangencyReport {
    let dirs: Vec<Complex64> =
        endpoint_angles.iter().map(|&phi| direction(model, -1.0 / (phi / 2.0).tan())).collect();
    report(model, &dirs)
}
