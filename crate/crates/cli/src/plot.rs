//! Self-contained SVG plots.

use std::fmt::Write;

use bipartite_resilience::extremal::{PhaseDiagram, Winner};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 64.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

struct Frame {
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        let (lo, hi) = self.x_range;
        MARGIN + (v - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        let (lo, hi) = self.y_range;
        HEIGHT - MARGIN - (v - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN)
    }

    /// Axes, five ticks per axis, labels and a title.
    fn axes(&self, out: &mut String, title: &str, x_label: &str, y_label: &str) {
        let (x0, x1) = (MARGIN, WIDTH - MARGIN);
        let (y0, y1) = (HEIGHT - MARGIN, MARGIN);
        writeln!(
            out,
            r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"#
        )
        .unwrap();
        out.push_str(r#"<g class="ticks" font-family="sans-serif" font-size="11">"#);
        for i in 0..=5 {
            let t = i as f64 / 5.0;
            let xv = self.x_range.0 + t * (self.x_range.1 - self.x_range.0);
            let yv = self.y_range.0 + t * (self.y_range.1 - self.y_range.0);
            let (px, py) = (self.x(xv), self.y(yv));
            write!(
                out,
                r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                y0 + 16.0,
                tick(xv)
            )
            .unwrap();
            write!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                x0 - 6.0,
                py + 4.0,
                tick(yv)
            )
            .unwrap();
        }
        out.push_str("</g>\n");
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 16.0,
            escape(x_label)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="18" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {:.1})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(y_label)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.1}" y="28" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        )
        .unwrap();
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn open() -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Line plot of one series with point markers.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let xs = points.iter().map(|p| p.0);
    let ys = points.iter().map(|p| p.1);
    let x_range = padded_range(
        xs.clone().fold(f64::INFINITY, f64::min),
        xs.fold(f64::NEG_INFINITY, f64::max),
    );
    let y_range = padded_range(
        ys.clone().fold(f64::INFINITY, f64::min),
        ys.fold(f64::NEG_INFINITY, f64::max),
    );
    let frame = Frame { x_range, y_range };
    let mut out = open();
    frame.axes(&mut out, title, x_label, y_label);
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
        .collect();
    writeln!(
        out,
        r##"<g class="series"><polyline fill="none" stroke="#1f5fa8" stroke-width="2" points="{}"/>"##,
        coords.join(" ")
    )
    .unwrap();
    for &(x, y) in points {
        write!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#1f5fa8"/>"##,
            frame.x(x),
            frame.y(y)
        )
        .unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn padded_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

/// Raster with mu on x and p on y; cells where K_{d,d} wins are colored.
pub fn phase_raster(pd: &PhaseDiagram) -> String {
    let frame = Frame {
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
    };
    let mut out = open();
    let edges = |grid: &[f64], i: usize| {
        let lo = if i == 0 {
            grid[0]
        } else {
            0.5 * (grid[i - 1] + grid[i])
        };
        let hi = if i + 1 == grid.len() {
            grid[i]
        } else {
            0.5 * (grid[i] + grid[i + 1])
        };
        (lo, hi)
    };
    out.push_str(r#"<g class="raster" shape-rendering="crispEdges">"#);
    for (i, row) in pd.cells.iter().enumerate() {
        let (mu_lo, mu_hi) = edges(&pd.mu_grid, i);
        for (j, &w) in row.iter().enumerate() {
            let (p_lo, p_hi) = edges(&pd.p_grid, j);
            let fill = if w == Winner::Kdd {
                "#c0392b"
            } else {
                "#f4f1ea"
            };
            write!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                frame.x(mu_lo),
                frame.y(p_hi),
                (frame.x(mu_hi) - frame.x(mu_lo)).max(0.5),
                (frame.y(p_lo) - frame.y(p_hi)).max(0.5),
            )
            .unwrap();
        }
    }
    out.push_str("</g>\n");
    let title = format!("d = {}: K_(d,d) preferred (shaded)", pd.d);
    frame.axes(&mut out, &title, "mu", "p");
    out.push_str("</svg>\n");
    out
}
