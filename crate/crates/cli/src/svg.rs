//! Minimal SVG scatter/polyline writer for human inspection of spectra:
//! viewBox fitted to the data with a 5% margin, imaginary axis pointing up.

use std::fmt::Write as _;

pub struct SvgPlot {
    polylines: Vec<Vec<(f64, f64)>>,
    points: Vec<(f64, f64)>,
}

impl SvgPlot {
    pub fn new() -> Self {
        SvgPlot {
            polylines: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn polyline(&mut self, pts: Vec<(f64, f64)>) {
        if pts.len() > 1 {
            self.polylines.push(pts);
        } else {
            self.points.extend(pts);
        }
    }

    pub fn point(&mut self, p: (f64, f64)) {
        self.points.push(p);
    }

    pub fn render(&self) -> String {
        let all = self
            .polylines
            .iter()
            .flatten()
            .chain(self.points.iter())
            .copied()
            .collect::<Vec<_>>();
        let (mut x0, mut x1, mut y0, mut y1) = (-1.0_f64, 1.0_f64, -1.0_f64, 1.0_f64);
        if !all.is_empty() {
            x0 = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            x1 = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            y0 = all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            y1 = all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        }
        let w = (x1 - x0).max(1e-6);
        let h = (y1 - y0).max(1e-6);
        let margin = 0.05 * w.max(h);
        let (vx, vy) = (x0 - margin, -(y1 + margin));
        let (vw, vh) = (w + 2.0 * margin, h + 2.0 * margin);
        let stroke = 0.004 * vw.max(vh);

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vx:.6} {vy:.6} {vw:.6} {vh:.6}\">"
        );
        for line in &self.polylines {
            let pts: Vec<String> = line
                .iter()
                .map(|&(x, y)| format!("{:.6},{:.6}", x, -y))
                .collect();
            let _ = writeln!(
                out,
                "  <polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"{stroke:.6}\" points=\"{}\"/>",
                pts.join(" ")
            );
        }
        for &(x, y) in &self.points {
            let _ = writeln!(
                out,
                "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"#b03030\"/>",
                x,
                -y,
                1.5 * stroke
            );
        }
        out.push_str("</svg>\n");
        out
    }
}
