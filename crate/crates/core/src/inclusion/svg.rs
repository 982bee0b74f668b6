//! Static SVG rendering of inclusion sets. Output depends only on the
//! inputs, so renders can be compared byte for byte.

use std::fmt::Write;

use num_complex::Complex64;

use super::regions::{region_contains, BoundingBox, CircuitRegion, Disk};
use crate::io::format_g17;

pub const CANVAS: f64 = 600.0;
pub const VIEW_SCALE: f64 = 1.1;
pub const DEFAULT_RASTER: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct SvgScene<'a> {
    pub disks: &'a [Disk],
    /// Drawn as a raster of sampled member points.
    pub circuit_regions: Option<&'a [CircuitRegion]>,
    pub eigenvalues: &'a [Complex64],
    /// Raster resolution per axis for the circuit regions.
    pub raster: usize,
}

fn num(v: f64) -> String {
    format_g17((v * 1e6).round() / 1e6)
}

/// Renders the scene in a square canvas whose viewport is the disk union's
/// bounding box scaled by [`VIEW_SCALE`].
pub fn render_svg(scene: &SvgScene<'_>) -> String {
    let mut bbox = BoundingBox::of_disks(scene.disks);
    for z in scene.eigenvalues {
        bbox.re_min = bbox.re_min.min(z.re);
        bbox.re_max = bbox.re_max.max(z.re);
        bbox.im_min = bbox.im_min.min(z.im);
        bbox.im_max = bbox.im_max.max(z.im);
    }
    if !bbox.re_min.is_finite() {
        bbox = BoundingBox {
            re_min: -1.0,
            re_max: 1.0,
            im_min: -1.0,
            im_max: 1.0,
        };
    }
    // Square viewport so disks stay round.
    let span = (bbox.re_max - bbox.re_min)
        .max(bbox.im_max - bbox.im_min)
        .max(1e-9);
    let square = BoundingBox {
        re_min: (bbox.re_min + bbox.re_max - span) / 2.0,
        re_max: (bbox.re_min + bbox.re_max + span) / 2.0,
        im_min: (bbox.im_min + bbox.im_max - span) / 2.0,
        im_max: (bbox.im_min + bbox.im_max + span) / 2.0,
    };
    let view = square.scaled(VIEW_SCALE, 1e-9);
    let scale = CANVAS / (view.re_max - view.re_min);
    let px = |z: Complex64| ((z.re - view.re_min) * scale, (view.im_max - z.im) * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );
    // Axes through the origin when visible.
    let (ox, oy) = px(Complex64::new(0.0, 0.0));
    if (0.0..=CANVAS).contains(&oy) {
        let _ = writeln!(
            out,
            r##"<line x1="0" y1="{y}" x2="{c}" y2="{y}" stroke="#bbbbbb" stroke-width="1"/>"##,
            y = num(oy),
            c = CANVAS
        );
    }
    if (0.0..=CANVAS).contains(&ox) {
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="0" x2="{x}" y2="{c}" stroke="#bbbbbb" stroke-width="1"/>"##,
            x = num(ox),
            c = CANVAS
        );
    }
    if let Some(regions) = scene.circuit_regions {
        let n = scene.raster.max(2);
        let cell = CANVAS / n as f64;
        let _ = writeln!(
            out,
            r##"<g class="brualdi" fill="#f4a261" fill-opacity="0.5">"##
        );
        for iy in 0..n {
            for ix in 0..n {
                let x = (ix as f64 + 0.5) * cell;
                let y = (iy as f64 + 0.5) * cell;
                let z = Complex64::new(view.re_min + x / scale, view.im_max - y / scale);
                if region_contains(regions, z) {
                    let _ = writeln!(
                        out,
                        r#"<rect x="{}" y="{}" width="{w}" height="{w}"/>"#,
                        num(x - cell / 2.0),
                        num(y - cell / 2.0),
                        w = num(cell)
                    );
                }
            }
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(
        out,
        r##"<g class="gershgorin" fill="none" stroke="#264653" stroke-width="1.5">"##
    );
    for d in scene.disks {
        let (cx, cy) = px(d.center);
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" data-row="{}"/>"#,
            num(cx),
            num(cy),
            num(d.radius * scale),
            d.row + 1
        );
        let _ = writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="2" fill="#264653"/>"##,
            num(cx),
            num(cy)
        );
    }
    let _ = writeln!(out, "</g>");
    if !scene.eigenvalues.is_empty() {
        let _ = writeln!(
            out,
            r##"<g class="eigenvalues" stroke="#e63946" stroke-width="2">"##
        );
        for z in scene.eigenvalues {
            let (x, y) = px(*z);
            let _ = writeln!(
                out,
                r#"<path d="M{} {}L{} {}M{} {}L{} {}"/>"#,
                num(x - 4.0),
                num(y - 4.0),
                num(x + 4.0),
                num(y + 4.0),
                num(x - 4.0),
                num(y + 4.0),
                num(x + 4.0),
                num(y - 4.0)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
