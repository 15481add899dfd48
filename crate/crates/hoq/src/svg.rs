//! Heatmap rendering for grid-search surfaces.

use std::fmt::Write as _;

use crate::search::GridResult;

const CELL: usize = 4;
const LOW: (f64, f64, f64) = (13.0, 8.0, 135.0);
const HIGH: (f64, f64, f64) = (240.0, 249.0, 33.0);

fn ramp(t: f64) -> String {
    let mix = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(LOW.0, HIGH.0), mix(LOW.1, HIGH.1), mix(LOW.2, HIGH.2))
}

/// One `rect` per grid cell, colored on a linear ramp from the surface
/// minimum to its maximum, and one `circle` on the best point. β runs down
/// the rows, γ across the columns.
pub fn heatmap(grid: &GridResult) -> String {
    let r = grid.resolution;
    let side = r * CELL;
    let lo = grid.relative_error.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = grid.relative_error.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(
        out,
        "<title>relative error, beta in [{}, {}), gamma in [{}, {})</title>",
        grid.beta_range.0, grid.beta_range.1, grid.gamma_range.0, grid.gamma_range.1
    );
    for pt in grid.points() {
        let t = if span > 0.0 { (pt.relative_error - lo) / span } else { 0.0 };
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
            pt.gamma_index * CELL,
            pt.beta_index * CELL,
            ramp(t)
        );
    }
    let b = &grid.best;
    let _ = writeln!(
        out,
        r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="red" stroke-width="2"/>"#,
        b.gamma_index * CELL + CELL / 2,
        b.beta_index * CELL + CELL / 2,
        CELL.max(3)
    );
    out.push_str("</svg>\n");
    out
}
