//! CSV, SVG and JSON output.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use xi_core::chambers::{clip_line, clip_polyline};
use xi_core::completion::CompletedContour;
use xi_core::SignClass;

pub const CSV_HEADER: &str = "kind,id,piece,theta,x,y";

/// `+` and `-` as `p` and `m`, usable in file names and XML ids.
pub fn sign_slug(sign: &SignClass) -> String {
    sign.signs()
        .iter()
        .map(|&s| if s > 0 { 'p' } else { 'm' })
        .collect()
}

/// One row per sample: `arc` rows carry branch, sub-arc and angle; `line`
/// rows give the two window endpoints of each admissible facet line.
pub fn contour_csv(contour: &CompletedContour, window: f64) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for arc in &contour.arcs {
        for p in &arc.points {
            if p.v[0].abs() <= window && p.v[1].abs() <= window {
                let _ = writeln!(
                    out,
                    "arc,{},{},{},{},{}",
                    arc.branch, arc.sub_arc, p.theta, p.v[0], p.v[1]
                );
            }
        }
    }
    for (k, line) in contour.admissible_lines().enumerate() {
        if let Some(ends) = clip_line(line.normal, line.offset, window) {
            for (piece, e) in ends.iter().enumerate() {
                let _ = writeln!(out, "line,{k},{piece},,{},{}", e[0], e[1]);
            }
        }
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn fmt(x: f64) -> String {
    format!("{x:.5}")
}

/// All layers in `[-w, w]²`, `y` pointing up, one `<g>` per sign class.
pub fn contour_svg(contours: &[CompletedContour], window: f64) -> String {
    let px = 640.0;
    let unit = 2.0 * window / px;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{px}" height="{px}" viewBox="{} {} {} {}">"#,
        fmt(-window),
        fmt(-window),
        fmt(2.0 * window),
        fmt(2.0 * window)
    );
    let _ = writeln!(
        s,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#ffffff" stroke="#999999" stroke-width="{}"/>"##,
        fmt(-window),
        fmt(-window),
        fmt(2.0 * window),
        fmt(2.0 * window),
        fmt(unit)
    );
    let _ = writeln!(
        s,
        r#"<g transform="scale(1,-1)" fill="none" stroke-linejoin="round">"#
    );
    for (k, c) in contours.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<g id="sigma-{}" stroke="{colour}" stroke-width="{}">"#,
            sign_slug(&c.sign),
            fmt(1.5 * unit)
        );
        let _ = writeln!(s, "<title>{}</title>", c.sign);
        for arc in &c.arcs {
            let pts: Vec<[f64; 2]> = arc.points.iter().map(|p| p.v).collect();
            for piece in clip_polyline(&pts, window) {
                let path: Vec<String> = piece
                    .iter()
                    .map(|p| format!("{},{}", fmt(p[0]), fmt(p[1])))
                    .collect();
                let _ = writeln!(s, r#"<polyline points="{}"/>"#, path.join(" "));
            }
            if arc.start_cusp {
                if let Some(p) = arc.points.first() {
                    let _ = writeln!(
                        s,
                        r#"<circle class="cusp" cx="{}" cy="{}" r="{}"/>"#,
                        fmt(p.v[0]),
                        fmt(p.v[1]),
                        fmt(4.0 * unit)
                    );
                }
            }
        }
        for line in c.admissible_lines() {
            if let Some([a, b]) = clip_line(line.normal, line.offset, window) {
                let _ = writeln!(
                    s,
                    r#"<line class="facet" x1="{}" y1="{}" x2="{}" y2="{}" stroke-dasharray="{} {}"/>"#,
                    fmt(a[0]),
                    fmt(a[1]),
                    fmt(b[0]),
                    fmt(b[1]),
                    fmt(6.0 * unit),
                    fmt(4.0 * unit)
                );
            }
        }
        let _ = writeln!(s, "</g>");
    }
    let m = 5.0 * unit;
    let _ = writeln!(
        s,
        r##"<path id="origin" d="M{0},{0} L{1},{1} M{0},{1} L{1},{0}" stroke="#000000" stroke-width="{2}"/>"##,
        fmt(-m),
        fmt(m),
        fmt(unit)
    );
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

/// Pretty JSON with a trailing newline. Field order follows the structs and
/// maps are `BTreeMap`s, so equal inputs give byte-identical output.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
pub struct Meta<'a> {
    pub command: &'a str,
    pub config: String,
    pub version: &'a str,
    pub workers: usize,
    /// Seconds since the Unix epoch.
    pub started: u64,
    pub elapsed_seconds: f64,
}

pub fn write(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)
}
