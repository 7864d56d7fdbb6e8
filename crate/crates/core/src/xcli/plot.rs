//! Static log-log polyline SVGs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    /// Points with non-positive or non-finite coordinates cannot sit on log
    /// axes and are dropped.
    pub fn to_svg(&self) -> String {
        let logged: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| {
                s.xs.iter()
                    .zip(&s.ys)
                    .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
                    .map(|(x, y)| (x.log10(), y.log10()))
                    .collect()
            })
            .collect();
        let all: Vec<&(f64, f64)> = logged.iter().flatten().collect();
        let span = |f: fn(&(f64, f64)) -> f64| {
            let lo = all.iter().map(|p| f(p)).fold(f64::INFINITY, f64::min);
            let hi = all.iter().map(|p| f(p)).fold(f64::NEG_INFINITY, f64::max);
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if hi - lo < 1e-9 {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        let (x0, x1) = span(|p| p.0);
        let (y0, y1) = span(|p| p.1);
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
        let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            W / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r#"<path d="M{m} {t} L{m} {b} L{r} {b}" fill="none" stroke="black"/>"#,
            m = MARGIN,
            t = MARGIN,
            b = H - MARGIN,
            r = W - MARGIN
        );
        for (lo, hi, horizontal) in [(x0, x1, true), (y0, y1, false)] {
            for d in (lo.floor() as i32)..=(hi.ceil() as i32) {
                let d = d as f64;
                if d < lo - 1e-9 || d > hi + 1e-9 {
                    continue;
                }
                if horizontal {
                    let _ = writeln!(
                        svg,
                        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">1e{}</text>"#,
                        sx(d),
                        H - MARGIN + 18.0,
                        d
                    );
                } else {
                    let _ = writeln!(
                        svg,
                        r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{}</text>"#,
                        MARGIN - 6.0,
                        sy(d) + 4.0,
                        d
                    );
                }
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            W / 2.0,
            H - 16.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            H / 2.0,
            H / 2.0,
            escape(&self.y_label)
        );
        for (i, (s, pts)) in self.series.iter().zip(&logged).enumerate() {
            let colour = COLOURS[i % COLOURS.len()];
            if !pts.is_empty() {
                let path: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
                let _ = writeln!(
                    svg,
                    r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
                    path.join(" ")
                );
            }
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}" fill="{colour}">{}</text>"#,
                W - MARGIN - 150.0,
                MARGIN + 16.0 * i as f64,
                escape(&s.label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_is_deterministic_and_skips_zeros() {
        let p = Plot {
            title: "a < b".into(),
            x_label: "hbar".into(),
            y_label: "defect".into(),
            series: vec![Series {
                label: "s".into(),
                xs: vec![0.5, 0.25, 0.125],
                ys: vec![1e-2, 0.0, 2.5e-3],
            }],
        };
        let a = p.to_svg();
        assert_eq!(a, p.to_svg());
        assert!(a.contains("a &lt; b"));
        assert_eq!(a.matches("<polyline").count(), 1);
        assert!(a.starts_with("<svg"));
    }
}
