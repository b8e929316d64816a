//! Minimal static SVG charts: line plots and a heatmap.

use std::fmt::Write as _;

use qwalk::analysis::SweepGrid;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const COLORS: [&str; 4] = ["#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad"];

pub struct Line {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str, x_label: &str, y_label: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        W / 2.0,
        esc(title),
        LEFT + (W - LEFT - RIGHT) / 2.0,
        H - 12.0,
        esc(x_label),
        TOP + (H - TOP - BOTTOM) / 2.0,
        TOP + (H - TOP - BOTTOM) / 2.0,
        esc(y_label)
    );
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return None;
    }
    Some(if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) })
}

/// Line chart; points that cannot be drawn on a log axis are dropped.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, lines: &[Line], x_scale: Scale, y_scale: Scale) -> String {
    let map = |v: f64, scale: Scale| match scale {
        Scale::Linear => Some(v),
        Scale::Log if v > 0.0 => Some(v.log10()),
        Scale::Log => None,
    };
    let mapped: Vec<Vec<(f64, f64)>> = lines
        .iter()
        .map(|l| l.points.iter().filter_map(|&(x, y)| Some((map(x, x_scale)?, map(y, y_scale)?))).collect())
        .collect();
    let mut out = String::new();
    header(&mut out, title, x_label, y_label);
    let (Some((x0, x1)), Some((y0, y1))) = (
        range(mapped.iter().flatten().map(|p| p.0)),
        range(mapped.iter().flatten().map(|p| p.1)),
    ) else {
        out.push_str("</svg>\n");
        return out;
    };
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);
    let _ = writeln!(
        out,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    let tick = |v: f64, scale: Scale| match scale {
        Scale::Linear => format!("{v:.3}"),
        Scale::Log => format!("1e{v:.1}"),
    };
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>", px(fx), H - BOTTOM + 16.0, tick(fx, x_scale));
        let _ = writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>", LEFT - 4.0, py(fy) + 4.0, tick(fy, y_scale));
    }
    for (i, (line, pts)) in lines.iter().zip(&mapped).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(out, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>", path.join(" "));
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"{color}\">{}</text>",
            LEFT + 8.0,
            TOP + 16.0 + 14.0 * i as f64,
            esc(&line.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Entropy heatmap over the sweep grid, theta on x and phi on y.
pub fn heatmap(title: &str, grid: &SweepGrid) -> String {
    let mut out = String::new();
    header(&mut out, title, "theta (rad)", "phi (rad)");
    let nx = grid.theta_values.len() as f64;
    let ny = grid.phi_values.len() as f64;
    let cw = (W - LEFT - RIGHT) / nx;
    let ch = (H - TOP - BOTTOM) / ny;
    for (i, row) in grid.entropy.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            // white (E = 0) to dark blue (E = 1)
            let v = e.clamp(0.0, 1.0);
            let (r, g, b) = (255.0 * (1.0 - v), 255.0 * (1.0 - 0.7 * v), 255.0 - 100.0 * v);
            let _ = writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({},{},{})\"/>",
                LEFT + i as f64 * cw,
                H - BOTTOM - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                r as u8,
                g as u8,
                b as u8
            );
        }
    }
    let last_theta = grid.theta_values.last().copied().unwrap_or(0.0);
    let last_phi = grid.phi_values.last().copied().unwrap_or(0.0);
    let _ = writeln!(out, "<text x=\"{LEFT}\" y=\"{}\">{:.3}</text>", H - BOTTOM + 16.0, grid.theta_values[0]);
    let _ = writeln!(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{last_theta:.3}</text>", W - RIGHT, H - BOTTOM + 16.0);
    let _ = writeln!(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3}</text>", LEFT - 4.0, H - BOTTOM, grid.phi_values[0]);
    let _ = writeln!(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{last_phi:.3}</text>", LEFT - 4.0, TOP + 10.0);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_is_svg() {
        let svg = line_chart(
            "demo <1>",
            "t",
            "y",
            &[Line { label: "a".into(), points: vec![(1.0, 1.0), (2.0, 4.0), (3.0, 0.0)] }],
            Scale::Log,
            Scale::Log,
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("demo &lt;1&gt;"));
        assert!(svg.contains("<polyline"));
    }

    #[test]
    fn empty_chart_still_closes() {
        let svg = line_chart("e", "x", "y", &[], Scale::Linear, Scale::Linear);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn heatmap_cells() {
        let grid = SweepGrid { theta_values: vec![0.0, 1.0], phi_values: vec![0.0], t: 1, entropy: vec![vec![0.0], vec![1.0]] };
        let svg = heatmap("h", &grid);
        assert_eq!(svg.matches("<rect x=").count(), 2);
    }
}
