use std::fmt::Write;

use anyhow::{bail, Result};
use sl2orbit::numeric::{sample_orbit, ChartPoint};
use sl2orbit::orbit::{classify_point, closure_of};
use sl2orbit::Element;

pub struct Cloud {
    pub dimension: usize,
    /// `(series, unit vector)`; the series is `orbit` or `border_<i>`.
    pub points: Vec<(String, Vec<f64>)>,
}

/// Unit representative with its largest entry positive.
fn unit(p: &ChartPoint) -> Vec<f64> {
    let v = p.to_vector();
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let big = v.iter().copied().fold(0.0f64, |m, c| if c.abs() > m.abs() { c } else { m });
    let s = if big < 0.0 { -1.0 / norm } else { 1.0 / norm };
    v.iter().map(|c| c * s).collect()
}

pub fn cloud(x: &Element, count: usize, seed: u64) -> Result<Cloud> {
    let d = classify_point(x)?;
    if d.dimension > 2 {
        bail!("plots need an orbit of dimension at most 2, this one has dimension {}", d.dimension);
    }
    let mut points: Vec<(String, Vec<f64>)> =
        sample_orbit(x, count, seed).iter().map(|p| ("orbit".to_string(), unit(p))).collect();
    if let Ok(c) = closure_of(x) {
        for (i, b) in c.border.iter().enumerate() {
            let n = (count / 4).max(1);
            points.extend(sample_orbit(b, n, seed.wrapping_add(i as u64 + 1)).iter().map(|p| (format!("border_{i}"), unit(p))));
        }
    }
    Ok(Cloud { dimension: x.rep().total_dim(), points })
}

/// Default axes: the two lowest-index coordinates of the top block.
pub fn default_axes(x: &Element) -> Result<(usize, usize)> {
    let d = classify_point(x)?;
    let start = x.rep().offset(d.support.q_plus);
    let total = x.rep().total_dim();
    if total < 2 {
        bail!("a one-dimensional space has no planar projection");
    }
    Ok(if start + 1 < total { (start, start + 1) } else { (total - 2, total - 1) })
}

pub fn csv(cloud: &Cloud) -> String {
    let mut out = String::from("series");
    for i in 0..cloud.dimension {
        write!(out, ",v_{i}").unwrap();
    }
    out.push('\n');
    for (series, v) in &cloud.points {
        out.push_str(series);
        for c in v {
            write!(out, ",{c:e}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn svg(cloud: &Cloud, axes: (usize, usize), title: &str) -> Result<String> {
    let (i, j) = axes;
    if i >= cloud.dimension || j >= cloud.dimension {
        bail!("axes ({i}, {j}) out of range for dimension {}", cloud.dimension);
    }
    const SIZE: f64 = 600.0;
    const PAD: f64 = 40.0;
    let scale = (SIZE - 2.0 * PAD) / 2.0;
    // unit vectors: every coordinate lies in [-1, 1]
    let map = |v: f64| PAD + (v + 1.0) * scale;
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#)?;
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(out, r#"<text x="{PAD}" y="24" font-family="sans-serif" font-size="14">{}</text>"#, escape(title))?;
    writeln!(
        out,
        r##"<line x1="{PAD}" y1="{c}" x2="{e}" y2="{c}" stroke="#999"/><line x1="{c}" y1="{PAD}" x2="{c}" y2="{e}" stroke="#999"/>"##,
        c = SIZE / 2.0,
        e = SIZE - PAD
    )?;
    writeln!(out, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">v_{i}</text>"#, SIZE - PAD, SIZE / 2.0 - 6.0)?;
    writeln!(out, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">v_{j}</text>"#, SIZE / 2.0 + 6.0, PAD - 6.0)?;
    for (series, color, r) in [("orbit", "#1f77b4", 1.2), ("border", "#d62728", 1.8)] {
        writeln!(out, r##"<g fill="{color}" fill-opacity="0.7" data-series="{series}">"##)?;
        for (_, v) in cloud.points.iter().filter(|(s, _)| s.starts_with(series)) {
            writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="{r}"/>"#, map(v[i]), SIZE - map(v[j]))?;
        }
        writeln!(out, "</g>")?;
    }
    writeln!(out, "</svg>")?;
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
