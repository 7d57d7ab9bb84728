//! Minimal SVG assembly for rank-2 pictures. Math coordinates go in,
//! y-flipped document coordinates come out.

use std::fmt::Write;

pub struct SvgCanvas {
    min_x: f64,
    max_y: f64,
    width_units: f64,
    height_units: f64,
    scale: f64,
    body: String,
}

impl SvgCanvas {
    /// Viewport given in math coordinates; `scale` is pixels per unit.
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64, scale: f64) -> Self {
        SvgCanvas {
            min_x,
            max_y,
            width_units: max_x - min_x,
            height_units: max_y - min_y,
            scale,
            body: String::new(),
        }
    }

    pub fn to_doc(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.min_x) * self.scale, (self.max_y - y) * self.scale)
    }

    pub fn line(&mut self, from: (f64, f64), to: (f64, f64), style: &str) {
        let (x1, y1) = self.to_doc(from.0, from.1);
        let (x2, y2) = self.to_doc(to.0, to.1);
        writeln!(
            self.body,
            r#"  <line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" style="{style}"/>"#
        )
        .unwrap();
    }

    pub fn circle(&mut self, at: (f64, f64), radius_px: f64, style: &str) {
        let (cx, cy) = self.to_doc(at.0, at.1);
        writeln!(
            self.body,
            r#"  <circle cx="{cx:.3}" cy="{cy:.3}" r="{radius_px:.3}" style="{style}"/>"#
        )
        .unwrap();
    }

    pub fn polygon(&mut self, pts: &[(f64, f64)], style: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| {
                let (dx, dy) = self.to_doc(x, y);
                format!("{dx:.3},{dy:.3}")
            })
            .collect();
        writeln!(
            self.body,
            r#"  <polygon points="{}" style="{style}"/>"#,
            coords.join(" ")
        )
        .unwrap();
    }

    pub fn text(&mut self, at: (f64, f64), content: &str, style: &str) {
        let (x, y) = self.to_doc(at.0, at.1);
        writeln!(
            self.body,
            r#"  <text x="{x:.3}" y="{y:.3}" style="{style}">{}</text>"#,
            xml_escape(content)
        )
        .unwrap();
    }

    pub fn render(&self) -> String {
        let w = self.width_units * self.scale;
        let h = self.height_units * self.scale;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.3} {h:.3}\">\n{}</svg>\n",
            self.body
        )
    }

    pub fn clip_bounds(&self) -> (f64, f64, f64, f64) {
        (
            self.min_x,
            self.max_y - self.height_units,
            self.min_x + self.width_units,
            self.max_y,
        )
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Clip the ray base + t·dir (t ≥ 0) to the rectangle; returns the visible
/// segment if any.
pub fn clip_ray(
    base: (f64, f64),
    dir: (f64, f64),
    rect: (f64, f64, f64, f64),
) -> Option<((f64, f64), (f64, f64))> {
    let (x0, y0, x1, y1) = rect;
    let mut t_lo = 0.0f64;
    let mut t_hi = f64::INFINITY;
    for (p, d, lo, hi) in [
        (base.0, dir.0, x0, x1),
        (base.1, dir.1, y0, y1),
    ] {
        if d.abs() < 1e-12 {
            if p < lo || p > hi {
                return None;
            }
            continue;
        }
        let (a, b) = ((lo - p) / d, (hi - p) / d);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        t_lo = t_lo.max(a);
        t_hi = t_hi.min(b);
    }
    if t_lo > t_hi {
        return None;
    }
    let p = (base.0 + t_lo * dir.0, base.1 + t_lo * dir.1);
    let q = (base.0 + t_hi * dir.0, base.1 + t_hi * dir.1);
    Some((p, q))
}
