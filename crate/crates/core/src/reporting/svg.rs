use std::fmt::Write as _;

use chrono::NaiveDate;

use crate::analysis::Heatmap;

use super::ReportError;

pub const DEFAULT_HEATMAP_MAX: u32 = 10;

const CELL_W: u32 = 6;
const CELL_H: u32 = 24;
const LEFT: u32 = 80;
const TOP: u32 = 10;
const LEGEND_W: u32 = 70;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeatmapStyle {
    /// Value rendered as full red; larger values clamp.
    pub max: u32,
    /// Draw a dashed line before the first column dated on or after this day.
    pub divider: Option<NaiveDate>,
}

impl Default for HeatmapStyle {
    fn default() -> Self {
        HeatmapStyle { max: DEFAULT_HEATMAP_MAX, divider: None }
    }
}

fn lerp(a: u8, b: u8, t: f64) -> u8 {
    (f64::from(a) + (f64::from(b) - f64::from(a)) * t).round() as u8
}

/// Diverging scale: 0 is blue, `max / 2` white, `max` and above red.
pub fn heat_color(value: u64, max: u32) -> String {
    let max = f64::from(max.max(1));
    let v = (value as f64).min(max);
    let mid = max / 2.0;
    let (r, g, b) = if v <= mid {
        let t = v / mid;
        (lerp(0, 255, t), lerp(0, 255, t), 255)
    } else {
        let t = (v - mid) / mid;
        (255, lerp(255, 0, t), lerp(255, 0, t))
    };
    format!("#{r:02X}{g:02X}{b:02X}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders the matrix as an SVG 1.1 document with one `<rect class="cell">`
/// per matrix cell.
pub fn heatmap_svg(matrix: &Heatmap, style: &HeatmapStyle) -> Result<String, ReportError> {
    let cols = matrix.columns() as u32;
    if cols == 0 {
        return Err(ReportError::EmptyMatrix);
    }
    let rows = matrix.bins.len() as u32;
    let grid_w = cols * CELL_W;
    let width = LEFT + grid_w + LEGEND_W;
    let height = TOP * 2 + rows * CELL_H + 20;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<title>Reused sentences per position ({})</title>"#, matrix.axis);
    for (r, bin) in matrix.bins.iter().enumerate() {
        let y = TOP + r as u32 * CELL_H;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            LEFT - 6,
            y + CELL_H / 2 + 4,
            bin.label()
        );
        for (c, id) in matrix.article_ids.iter().enumerate() {
            let value = matrix.counts[r][c];
            let _ = writeln!(
                s,
                r#"<rect class="cell" x="{}" y="{y}" width="{CELL_W}" height="{CELL_H}" fill="{}"><title>{} {}: {value}</title></rect>"#,
                LEFT + c as u32 * CELL_W,
                heat_color(value, style.max),
                escape(id),
                bin.label(),
            );
        }
    }

    if let Some(day) = style.divider {
        let boundary = matrix.timestamps.iter().position(|ts| {
            ts.get(..10).and_then(|d| NaiveDate::parse_from_str(d, "%Y-%m-%d").ok()).is_some_and(|d| d >= day)
        });
        if let Some(c) = boundary {
            let x = LEFT + c as u32 * CELL_W;
            let _ = writeln!(
                s,
                r#"<line class="divider" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black" stroke-width="1.5" stroke-dasharray="4 3"/>"#,
                TOP - 4,
                TOP + rows * CELL_H + 4
            );
        }
    }

    // Legend: eleven swatches from 0 to max.
    let lx = LEFT + grid_w + 16;
    let steps = 10u32;
    let sw_h = rows * CELL_H / (steps + 1);
    for i in 0..=steps {
        let value = u64::from(style.max) * u64::from(i) / u64::from(steps);
        let y = TOP + (steps - i) * sw_h;
        let _ = writeln!(
            s,
            r#"<rect class="legend" x="{lx}" y="{y}" width="12" height="{sw_h}" fill="{}"/>"#,
            heat_color(value, style.max)
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 16, TOP + 9, style.max);
    let _ = writeln!(s, r#"<text x="{}" y="{}">0</text>"#, lx + 16, TOP + (steps + 1) * sw_h);
    if let (Some(first), Some(last)) = (matrix.timestamps.first(), matrix.timestamps.last()) {
        let y = TOP + rows * CELL_H + 16;
        let _ = writeln!(s, r#"<text x="{LEFT}" y="{y}">{}</text>"#, escape(first.get(..10).unwrap_or(first)));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#,
            LEFT + grid_w,
            escape(last.get(..10).unwrap_or(last))
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
