//! SVG picture of the unit sphere `{x : ||x|| = 1}` of a planar norm.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::norm::AngularNorm;

/// Smallest accepted picture size in pixels.
pub const MIN_SIZE: u32 = 64;

const MARGIN: f64 = 0.05;

/// Renders the unit sphere of `nm` as a closed path, together with the
/// Euclidean unit circle as a guide, in a square `size x size` viewBox.
pub fn render_unit_sphere(nm: &AngularNorm, size_px: u32) -> Result<String> {
    if size_px < MIN_SIZE {
        return Err(Error::InvalidConfig(format!(
            "picture size {size_px} is below the minimum of {MIN_SIZE}"
        )));
    }
    let points = nm.unit_sphere_points();
    let extent = points
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1.0f64, f64::max);
    let half = f64::from(size_px) / 2.0;
    let scale = half * (1.0 - MARGIN) / extent;
    let to_px = |p: &[f64; 2]| (half + scale * p[0], half - scale * p[1]);

    let mut path = String::with_capacity(points.len() * 24);
    for (j, p) in points.iter().enumerate() {
        let (x, y) = to_px(p);
        let cmd = if j == 0 { 'M' } else { 'L' };
        write!(path, "{cmd}{x:.4},{y:.4} ").unwrap();
    }
    path.push('Z');

    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size_px}" height="{size_px}" viewBox="0 0 {size_px} {size_px}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<circle cx="{half:.4}" cy="{half:.4}" r="{scale:.4}" fill="none" stroke="gray" stroke-width="1" stroke-dasharray="4 3"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<path d="{path}" fill="none" stroke="black" stroke-width="1.5"/>"#
    )
    .unwrap();
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}
