//! SVG picture of an instance and its barycenter: small dots for input atoms,
//! one color per measure, and a disk per barycenter atom whose area is
//! proportional to its mass.

use std::fmt::Write;

use exact_barycenter::model::{BarycenterInstance, DiscreteMeasure};
use exact_barycenter::numeric::to_f64;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;
const DOT: f64 = 3.0;
/// Radius of a barycenter disk carrying all the mass.
const FULL_DISK: f64 = 40.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn xy(atom: &[exact_barycenter::numeric::Rational]) -> (f64, f64) {
    let x = to_f64(&atom[0]);
    let y = atom.get(1).map(to_f64).unwrap_or(0.0);
    (x, y)
}

/// Renders dimensions 1 and 2 (a line is drawn at `y = 0`).
pub fn render(inst: &BarycenterInstance, barycenter: &DiscreteMeasure) -> Result<String, String> {
    if inst.dimension() > 2 || barycenter.dimension() != inst.dimension() {
        return Err(format!("cannot draw dimension {}", inst.dimension()));
    }
    let points: Vec<(f64, f64)> = inst
        .measures()
        .iter()
        .flat_map(|m| m.atoms().iter().map(|a| xy(a)))
        .chain(barycenter.atoms().iter().map(|a| xy(a)))
        .collect();
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in &points {
        lo_x = lo_x.min(*x);
        hi_x = hi_x.max(*x);
        lo_y = lo_y.min(*y);
        hi_y = hi_y.max(*y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let cx = (lo_x + hi_x) / 2.0;
    let cy = (lo_y + hi_y) / 2.0;
    // SVG's y axis points down.
    let place = |(x, y): (f64, f64)| (SIZE / 2.0 + (x - cx) * scale, SIZE / 2.0 - (y - cy) * scale);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, m) in inst.measures().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        writeln!(out, r#"<g class="measure" data-index="{i}" fill="{color}">"#).unwrap();
        for a in m.atoms() {
            let (x, y) = place(xy(a));
            writeln!(out, r#"<circle class="input" cx="{x:.3}" cy="{y:.3}" r="{DOT}"/>"#).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, r#"<g fill="black" fill-opacity="0.6">"#).unwrap();
    for (a, mass) in barycenter.atoms().iter().zip(barycenter.masses()) {
        let (x, y) = place(xy(a));
        let r = FULL_DISK * to_f64(mass).sqrt();
        writeln!(out, r#"<circle class="barycenter" cx="{x:.3}" cy="{y:.3}" r="{r:.3}"/>"#).unwrap();
    }
    writeln!(out, "</g>\n</svg>").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_barycenter::generate::diracs;
    use exact_barycenter::numeric::int;

    #[test]
    fn two_diracs_give_one_disk_between_them() {
        let inst = diracs(vec![vec![int(0), int(0)], vec![int(2), int(0)]]).unwrap();
        let nu = DiscreteMeasure::dirac(vec![int(1), int(0)]);
        let svg = render(&inst, &nu).unwrap();
        assert_eq!(svg.matches(r#"class="barycenter""#).count(), 1);
        assert_eq!(svg.matches(r#"class="input""#).count(), 2);
        assert!(svg.contains(r#"cx="300.000" cy="300.000" r="40.000""#));
    }

    #[test]
    fn higher_dimensions_are_refused() {
        let inst = diracs(vec![vec![int(0), int(0), int(0)]]).unwrap();
        let nu = DiscreteMeasure::dirac(vec![int(0), int(0), int(0)]);
        assert!(render(&inst, &nu).is_err());
    }
}
