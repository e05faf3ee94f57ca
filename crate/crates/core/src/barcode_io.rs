//! Barcode rendering (ASCII, SVG) and JSON interchange.
//!
//! JSON layout:
//!
//! ```json
//! {"intervals":[{"dim":0,"birth":0,"death":null,"positions":[0,null]}],
//!  "meta":{"level_count":2,"filtration":"skeleton","homology_dims":2}}
//! ```
//!
//! `death` is `null` for essential classes; `positions` holds the creator and
//! annihilator positions in the simplex-wise clock.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::persistence::{Barcode, BarcodeMeta, Interval};

#[derive(Debug, Error)]
pub enum BarcodeIoError {
    #[error("width must be at least the level count ({level_count}), got {width}")]
    Width { width: usize, level_count: usize },
    #[error("invalid barcode JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("barcode schema violation: {0}")]
    Schema(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireInterval {
    dim: usize,
    birth: usize,
    death: Option<usize>,
    positions: (usize, Option<usize>),
}

#[derive(Serialize, Deserialize)]
struct WireBarcode {
    intervals: Vec<WireInterval>,
    meta: BarcodeMeta,
}

/// Compact JSON followed by a newline.
pub fn export_json(b: &Barcode) -> String {
    let wire = WireBarcode {
        intervals: b
            .intervals
            .iter()
            .map(|i| WireInterval {
                dim: i.dim,
                birth: i.birth,
                death: i.death,
                positions: (i.birth_position, i.death_position),
            })
            .collect(),
        meta: b.meta.clone(),
    };
    let mut text = serde_json::to_string(&wire).expect("barcode serializes");
    text.push('\n');
    text
}

pub fn import_json(text: &str) -> Result<Barcode, BarcodeIoError> {
    let wire: WireBarcode = serde_json::from_str(text)?;
    let meta = wire.meta;
    let mut intervals = Vec::with_capacity(wire.intervals.len());
    for (n, w) in wire.intervals.into_iter().enumerate() {
        let fail = |why: &str| BarcodeIoError::Schema(format!("interval {n}: {why}"));
        if w.dim >= meta.homology_dims {
            return Err(fail("dimension outside homology_dims"));
        }
        if w.birth >= meta.level_count {
            return Err(fail("birth outside the level range"));
        }
        match (w.death, w.positions.1) {
            (Some(d), Some(j)) => {
                if d < w.birth || d >= meta.level_count {
                    return Err(fail("death outside [birth, level_count)"));
                }
                if j <= w.positions.0 {
                    return Err(fail("death position must follow birth position"));
                }
            }
            (None, None) => {}
            _ => return Err(fail("death and death position must both be null or both set")),
        }
        intervals.push(Interval {
            dim: w.dim,
            birth: w.birth,
            death: w.death,
            birth_position: w.positions.0,
            death_position: w.positions.1,
        });
    }
    Ok(Barcode::new(intervals, meta))
}

/// Text barcode.
///
/// Each level occupies `width / level_count` columns. A row covers the
/// columns of the levels in `[birth, death)`: `[` at the birth, `-` after it,
/// `)` on the first column of the death level, or `>` past the axis end for
/// essential classes. The first column of level `l` therefore crosses
/// exactly the intervals counted by `betti_at(l)`. Zero-length intervals are
/// not drawn.
pub fn render_ascii(b: &Barcode, width: usize) -> Result<String, BarcodeIoError> {
    let levels = b.meta.level_count;
    if width == 0 || width < levels {
        return Err(BarcodeIoError::Width { width, level_count: levels });
    }
    let cell = width.checked_div(levels).unwrap_or(1);
    let span = levels * cell;
    let mut out = format!(
        "# barcode levels={levels} cell={cell} filtration={} dims={}\n",
        b.meta.filtration, b.meta.homology_dims
    );
    let mut axis = vec![' '; span];
    for l in 0..levels {
        axis[l * cell] = char::from_digit((l % 10) as u32, 10).expect("digit");
    }
    let _ = writeln!(out, "{ASCII_INDENT}{}", axis.iter().collect::<String>().trim_end());

    for dim in 0..b.meta.homology_dims {
        let rows: Vec<&Interval> = b.of_dim(dim).filter(|i| !i.is_zero_length()).collect();
        if rows.is_empty() {
            continue;
        }
        let _ = writeln!(out, "H{dim} ({} intervals)", rows.len());
        for i in rows {
            let mut bar = vec![' '; span + 1];
            let end = i.death.map_or(span, |d| d * cell);
            for (col, slot) in bar.iter_mut().enumerate().take(end).skip(i.birth * cell) {
                *slot = if col == i.birth * cell { '[' } else { '-' };
            }
            bar[end] = if i.death.is_some() { ')' } else { '>' };
            let death = i.death.map_or("inf".to_string(), |d| d.to_string());
            let _ = writeln!(
                out,
                "{ASCII_INDENT}{}  [{}, {death})",
                bar.iter().collect::<String>(),
                i.birth
            );
        }
    }
    Ok(out)
}

/// Left margin of every axis and bar row in [`render_ascii`].
pub const ASCII_INDENT: &str = "    ";

const SVG_LEFT: f64 = 60.0;
const SVG_TOP: f64 = 30.0;
const SVG_ROW: f64 = 8.0;
const SVG_LANE_GAP: f64 = 24.0;
const SVG_AXIS_WIDTH: f64 = 720.0;

/// SVG 1.1 barcode with one lane per dimension and an optional dashed cursor.
///
/// Bars are `<line class="bar">` elements spanning `x(birth)..x(death)` where
/// `x(l)` is the left edge of level `l`; essential bars end at the axis end
/// with an arrowhead. The cursor for level `l` sits in the middle of the
/// level, so it crosses exactly the bars with `birth <= l < death`.
pub fn render_svg(b: &Barcode, cursor: Option<usize>) -> String {
    let levels = b.meta.level_count.max(1);
    let unit = SVG_AXIS_WIDTH / levels as f64;
    let x = |l: usize| SVG_LEFT + unit * l as f64;

    let lanes: Vec<(usize, Vec<&Interval>)> = (0..b.meta.homology_dims)
        .map(|d| (d, b.of_dim(d).filter(|i| !i.is_zero_length()).collect::<Vec<_>>()))
        .filter(|(_, rows)| !rows.is_empty())
        .collect();

    let mut body = String::new();
    let mut y = SVG_TOP;
    for (dim, rows) in &lanes {
        let _ = writeln!(
            body,
            r#"<text class="lane" x="{:.2}" y="{:.2}" font-size="12">H{dim}</text>"#,
            SVG_LEFT - 40.0,
            y + SVG_ROW
        );
        for i in rows {
            y += SVG_ROW;
            let end = i.death.map_or(x(levels), x);
            let marker = if i.is_infinite() { r#" marker-end="url(#arrow)""# } else { "" };
            let _ = writeln!(
                body,
                r#"<line class="bar" data-dim="{dim}" data-birth="{}" data-death="{}" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="3"{marker}/>"#,
                i.birth,
                i.death.map_or("inf".to_string(), |d| d.to_string()),
                x(i.birth),
                end,
                LANE_COLORS[dim % LANE_COLORS.len()],
            );
        }
        y += SVG_LANE_GAP;
    }
    let axis_y = y;
    let height = axis_y + 30.0;
    let width = SVG_LEFT + SVG_AXIS_WIDTH + 40.0;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let meta = serde_json::to_string(&b.meta).expect("meta serializes");
    let _ = writeln!(out, "<desc>{}</desc>", escape_xml(&meta));
    out.push_str(
        "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"1\" refY=\"4\" orient=\"auto\">\
         <path d=\"M0,0 L8,4 L0,8 z\"/></marker></defs>\n",
    );
    out.push_str(&body);
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="{:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black"/>"#,
        x(0),
        x(levels)
    );
    let step = (levels / 20).max(1);
    for l in (0..levels).step_by(step) {
        let _ = writeln!(
            out,
            r#"<text class="tick" x="{:.2}" y="{:.2}" font-size="10">{l}</text>"#,
            x(l),
            axis_y + 14.0
        );
    }
    if let Some(l) = cursor {
        let cx = x(l) + unit / 2.0;
        let _ = writeln!(
            out,
            r#"<line class="cursor" data-level="{l}" x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{axis_y:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
            SVG_TOP - 10.0
        );
    }
    out.push_str("</svg>\n");
    out
}

const LANE_COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::clique_complex;
    use crate::filtration::{skeleton_filtration, FiltrationKind};
    use crate::graph::Graph;
    use crate::persistence::barcode;

    fn hollow_triangle() -> Barcode {
        let k = clique_complex(&Graph::complete(3), None).unwrap().skeleton(1);
        barcode(&skeleton_filtration(&k)).unwrap()
    }

    fn empty() -> Barcode {
        Barcode::new(
            Vec::new(),
            BarcodeMeta {
                level_count: 0,
                filtration: FiltrationKind::Skeleton,
                homology_dims: 0,
                complex: None,
                config: None,
            },
        )
    }

    #[test]
    fn ascii_hollow_triangle() {
        let text = render_ascii(&hollow_triangle(), 2).unwrap();
        let expected = "\
# barcode levels=2 cell=1 filtration=skeleton dims=2
    01
H0 (3 intervals)
    [)   [0, 1)
    [)   [0, 1)
    [->  [0, inf)
H1 (1 intervals)
     [>  [1, inf)
";
        assert_eq!(text, expected);
    }

    #[test]
    fn ascii_empty_and_width_errors() {
        let text = render_ascii(&empty(), 1).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("# barcode levels=0"));
        assert!(matches!(render_ascii(&hollow_triangle(), 0), Err(BarcodeIoError::Width { .. })));
        assert!(matches!(render_ascii(&hollow_triangle(), 1), Err(BarcodeIoError::Width { .. })));
    }

    #[test]
    fn svg_hollow_triangle() {
        let svg = render_svg(&hollow_triangle(), None);
        // H0: two finite bars and one essential bar; H1: one essential bar
        assert_eq!(svg.matches(r#"<line class="bar""#).count(), 4);
        assert_eq!(svg.matches(r#"<line class="axis""#).count(), 1);
        assert_eq!(svg.matches("marker-end").count(), 2);
        assert_eq!(svg, render_svg(&hollow_triangle(), None));
        assert!(render_svg(&hollow_triangle(), Some(1)).contains(r#"class="cursor""#));
    }

    #[test]
    fn json_shapes() {
        assert_eq!(
            export_json(&empty()),
            "{\"intervals\":[],\"meta\":{\"level_count\":0,\"filtration\":\"skeleton\",\"homology_dims\":0}}\n"
        );
        let text = export_json(&hollow_triangle());
        assert!(text.contains(r#"{"dim":1,"birth":1,"death":null,"positions":[5,null]}"#), "{text}");
        let back = import_json(&text).unwrap();
        assert_eq!(back, hollow_triangle());
    }

    #[test]
    fn json_schema_violations() {
        let meta = r#""meta":{"level_count":2,"filtration":"skeleton","homology_dims":2}"#;
        let bad = [
            format!(r#"{{"intervals":[{{"dim":2,"birth":0,"death":null,"positions":[0,null]}}],{meta}}}"#),
            format!(r#"{{"intervals":[{{"dim":0,"birth":1,"death":0,"positions":[0,1]}}],{meta}}}"#),
            format!(r#"{{"intervals":[{{"dim":0,"birth":0,"death":1,"positions":[0,null]}}],{meta}}}"#),
            format!(r#"{{"intervals":[{{"dim":0,"birth":0,"death":1,"positions":[3,2]}}],{meta}}}"#),
        ];
        for text in &bad {
            assert!(matches!(import_json(text), Err(BarcodeIoError::Schema(_))), "{text}");
        }
        assert!(matches!(import_json("{"), Err(BarcodeIoError::Json(_))));
        assert!(matches!(
            import_json(&format!(r#"{{"intervals":[{{"dim":0,"birth":0,"death":null,"positions":[0,null],"x":1}}],{meta}}}"#)),
            Err(BarcodeIoError::Json(_))
        ));
    }
}
