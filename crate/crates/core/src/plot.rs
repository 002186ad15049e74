//! Static SVG plots of the (χ, c)-plane.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::invariants::{rational_to_f64, LatticePoint, LineName, RegionLine};

/// Where plotted points come from; paths are read by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub struct PointSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<PathBuf>,
    pub color: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotSpec {
    pub chi_max: i64,
    #[serde(default)]
    pub show_lines: Vec<LineName>,
    #[serde(default)]
    pub point_sources: Vec<PointSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub true_aspect: bool,
}

pub fn valid_color(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].chars().all(|c| c.is_ascii_hexdigit())
}

impl PlotSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.chi_max < 1 {
            return Err(format!("chi_max must be at least 1, got {}", self.chi_max));
        }
        for (i, s) in self.point_sources.iter().enumerate() {
            if !valid_color(&s.color) {
                return Err(format!("point_sources[{i}].color `{}` is not a 6-digit hex color", s.color));
            }
            if s.region.is_some() == s.certificate.is_some() {
                return Err(format!("point_sources[{i}] needs exactly one of `region` and `certificate`"));
            }
        }
        Ok(())
    }
}

/// A resolved set of points to draw. Hollow points are drawn as outlines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    pub label: String,
    pub color: String,
    pub points: Vec<LatticePoint>,
    pub hollow: bool,
}

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 60.0;

struct Frame {
    sx: f64,
    sy: f64,
    height: f64,
    chi_max: f64,
    c_max: f64,
}

impl Frame {
    fn x(&self, chi: f64) -> f64 {
        MARGIN + chi * self.sx
    }

    fn y(&self, c: f64) -> f64 {
        self.height - MARGIN - c * self.sy
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// The part of c = s·χ + b inside [0, χmax] × [0, cmax], if any.
fn clip(line: &RegionLine, chi_max: f64, c_max: f64) -> Option<((f64, f64), (f64, f64))> {
    let s = rational_to_f64(&line.slope);
    let b = rational_to_f64(&line.intercept);
    let (mut lo, mut hi) = (0.0f64, chi_max);
    if s == 0.0 {
        if !(0.0..=c_max).contains(&b) {
            return None;
        }
    } else {
        let a = (0.0 - b) / s;
        let z = (c_max - b) / s;
        lo = lo.max(a.min(z));
        hi = hi.min(a.max(z));
    }
    (lo < hi).then_some(((lo, s * lo + b), (hi, s * hi + b)))
}

/// Renders the plane with the given lines and point sets. `c` is drawn at
/// 1/8 scale unless `true_aspect`. Output depends only on the inputs.
pub fn render_svg(chi_max: i64, lines: &[RegionLine], sets: &[PointSet], true_aspect: bool) -> String {
    let chi_max_f = chi_max.max(1) as f64;
    let c_max = 10.0 * chi_max_f;
    let sx = (WIDTH - 2.0 * MARGIN) / chi_max_f;
    let sy = if true_aspect { sx } else { sx / 8.0 };
    let height = c_max * sy + 2.0 * MARGIN;
    let fr = Frame {
        sx,
        sy,
        height,
        chi_max: chi_max_f,
        c_max,
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.2}" viewBox="0 0 {WIDTH:.0} {height:.2}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{WIDTH:.0}" height="{height:.2}" fill="#ffffff"/>"##);
    // axes
    let _ = writeln!(
        out,
        r##"<g stroke="#000000" stroke-width="1"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"##,
        fr.x(0.0),
        fr.y(0.0),
        fr.x(fr.chi_max),
        fr.y(0.0),
        fr.x(0.0),
        fr.y(0.0),
        fr.x(0.0),
        fr.y(fr.c_max)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">χ</text>"#,
        fr.x(fr.chi_max / 2.0),
        fr.y(0.0) + 35.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN - 35.0,
        fr.y(fr.c_max / 2.0),
        if true_aspect { "c" } else { "c (scaled 1/8)" }
    );
    let step = tick_step(chi_max);
    let mut t = 0;
    while t <= chi_max {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            fr.x(t as f64),
            fr.y(0.0) + 15.0
        );
        t += step;
    }
    let cstep = tick_step(chi_max) * 10;
    let mut t = 0;
    while t as f64 <= c_max {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"#,
            fr.x(0.0) - 5.0,
            fr.y(t as f64) + 4.0
        );
        t += cstep;
    }
    out.push_str("<g class=\"lines\" fill=\"none\" stroke-width=\"1.2\">\n");
    for (i, line) in lines.iter().enumerate() {
        let Some(((x0, y0), (x1, y1))) = clip(line, fr.chi_max, fr.c_max) else {
            continue;
        };
        let color = LINE_COLORS[i % LINE_COLORS.len()];
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}"/>"#,
            fr.x(x0),
            fr.y(y0),
            fr.x(x1),
            fr.y(y1)
        );
        let _ = writeln!(
            out,
            r#"<text class="line-label" x="{:.2}" y="{:.2}" fill="{color}" stroke="none">{}</text>"#,
            fr.x(x1) - 4.0,
            fr.y(y1) - 4.0 - 12.0 * (i % 2) as f64,
            esc(line.name.label())
        );
    }
    out.push_str("</g>\n");
    let r = (sx / 3.0).clamp(0.8, 4.0);
    for set in sets {
        let _ = writeln!(out, r#"<g class="points"><title>{}</title>"#, esc(&set.label));
        for p in &set.points {
            if p.chi < 0 || p.chi > chi_max || p.c < 0 || p.c as f64 > c_max {
                continue;
            }
            let fill = if set.hollow {
                format!(r#"fill="none" stroke="{}""#, set.color)
            } else {
                format!(r#"fill="{}""#, set.color)
            };
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{r:.2}" {fill}/>"#,
                fr.x(p.chi as f64),
                fr.y(p.c as f64)
            );
        }
        out.push_str("</g>\n");
    }
    // legend
    for (i, set) in sets.iter().enumerate() {
        let y = 20.0 + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            MARGIN + 10.0,
            y - 4.0,
            set.color,
            MARGIN + 20.0,
            y,
            esc(&set.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

const LINE_COLORS: [&str; 7] = ["#1f77b4", "#d62728", "#9467bd", "#2ca02c", "#ff7f0e", "#8c564b", "#e377c2"];

fn tick_step(chi_max: i64) -> i64 {
    let raw = (chi_max / 10).max(1);
    let mag = 10i64.pow((raw as f64).log10().floor() as u32);
    [1, 2, 5, 10].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(raw)
}

/// The named lines, with the f-line appended when one is supplied.
pub fn lines_for(names: &[LineName], f_line: Option<&RegionLine>) -> Vec<RegionLine> {
    names
        .iter()
        .filter_map(|n| match n {
            LineName::FLine => f_line.cloned(),
            other => RegionLine::named(*other),
        })
        .collect()
}
