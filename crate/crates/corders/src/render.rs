//! Deterministic SVG rendering of ping-pong configurations: a circle with
//! one equal arc per component slot, labeled from the slot data, and the
//! basepoint marked.  Pure function of the configuration; floating point is
//! used only for drawing coordinates, never for order decisions.

use crate::pingpong::{PingPongConfig, Slot};
use std::fmt::Write;

const CX: f64 = 200.0;
const CY: f64 = 200.0;
const R: f64 = 140.0;
const LABEL_R: f64 = 170.0;

fn polar(angle: f64, radius: f64) -> (f64, f64) {
    // SVG y grows downward; negate so counterclockwise in math coordinates
    // is counterclockwise on screen.
    (CX + radius * angle.cos(), CY - radius * angle.sin())
}

/// Render the configuration as a standalone SVG document.
pub fn render_svg(cfg: &PingPongConfig) -> String {
    let n = cfg.slots().len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| cfg.position(i));
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="400" height="400" viewBox="0 0 400 400">"##
    );
    let _ = writeln!(
        svg,
        r##"  <circle cx="{CX}" cy="{CY}" r="{R}" fill="none" stroke="#999" stroke-width="1"/>"##
    );
    let step = std::f64::consts::TAU / n as f64;
    // A slot's sector is centered on its cyclic position; component arcs
    // fill 70% of the sector.
    for (k, &slot_idx) in order.iter().enumerate() {
        let mid = k as f64 * step;
        match &cfg.slots()[slot_idx] {
            Slot::Basepoint => {
                let (x, y) = polar(mid, R);
                let (lx, ly) = polar(mid, LABEL_R);
                let _ = writeln!(
                    svg,
                    r##"  <circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#000"/>"##
                );
                let _ = writeln!(
                    svg,
                    r##"  <text x="{lx:.2}" y="{ly:.2}" font-size="14" text-anchor="middle" dominant-baseline="middle">x0</text>"##
                );
            }
            Slot::Component { letter, index } => {
                let half = 0.35 * step;
                let (x1, y1) = polar(mid - half, R);
                let (x2, y2) = polar(mid + half, R);
                // Counterclockwise in math coordinates = sweep flag 0 in
                // SVG's y-down coordinates.
                let _ = writeln!(
                    svg,
                    r##"  <path d="M {x1:.2} {y1:.2} A {R} {R} 0 0 0 {x2:.2} {y2:.2}" fill="none" stroke="#1a6" stroke-width="6"/>"##
                );
                let (lx, ly) = polar(mid, LABEL_R);
                let label = if cfg.num_components(*letter) > 1 {
                    format!("D({})[{}]", letter.to_char(), index)
                } else {
                    format!("D({})", letter.to_char())
                };
                let _ = writeln!(
                    svg,
                    r##"  <text x="{lx:.2}" y="{ly:.2}" font-size="14" text-anchor="middle" dominant-baseline="middle">{label}</text>"##
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}
