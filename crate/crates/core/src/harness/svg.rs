//! Self-contained SVG line charts of a run.

use std::fmt::Write;

use super::run::{RunSummary, SlotRecord};

const WIDTH: f64 = 800.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const PANEL_GAP: f64 = 60.0;
const MAX_POINTS: usize = 1000;

struct Panel<'a> {
    title: &'a str,
    y_label: &'a str,
    series: Vec<(f64, f64)>,
    /// Horizontal guide line and its caption.
    guide: Option<(f64, String)>,
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(hi > lo) {
        let pad = lo.abs().max(1.0) * 0.1;
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

fn render_panel(out: &mut String, panel: &Panel<'_>, top: f64, x_max: f64) {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = PANEL_HEIGHT - 40.0;
    let mut lo = panel.series.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let mut hi = panel.series.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if let Some((g, _)) = &panel.guide {
        lo = lo.min(*g);
        hi = hi.max(*g);
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    let (lo, hi) = nice_range(lo, hi);
    let x_max = x_max.max(1.0);
    let sx = |x: f64| MARGIN_LEFT + plot_w * x / x_max;
    let sy = |y: f64| top + plot_h - plot_h * (y - lo) / (hi - lo);

    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="15" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        top - 12.0,
        panel.title
    );
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN_LEFT:.1}" y="{top:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#444"/>"##
    );
    for k in 0..=4 {
        let y = lo + (hi - lo) * k as f64 / 4.0;
        let py = sy(y);
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT:.1}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{y:.3}</text>"##,
            MARGIN_LEFT + plot_w,
            MARGIN_LEFT - 6.0,
            py + 4.0
        );
        let x = x_max * k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
            sx(x),
            top + plot_h + 16.0,
            x.round()
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
        18.0,
        top + plot_h / 2.0,
        18.0,
        top + plot_h / 2.0,
        panel.y_label
    );
    if let Some((g, caption)) = &panel.guide {
        let py = sy(*g);
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT:.1}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#c33" stroke-dasharray="6 4"/><text x="{:.1}" y="{:.1}" font-size="11" fill="#c33" text-anchor="end">{caption}</text>"##,
            MARGIN_LEFT + plot_w,
            MARGIN_LEFT + plot_w - 4.0,
            py - 4.0
        );
    }
    if !panel.series.is_empty() {
        let mut d = String::new();
        for (i, (x, y)) in panel.series.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, sx(*x), sy(*y));
        }
        let _ = writeln!(out, r##"<path d="{d}" fill="none" stroke="#1f5fa8" stroke-width="1.5"/>"##);
    }
}

fn thin(records: &[SlotRecord], f: impl Fn(&SlotRecord) -> f64) -> Vec<(f64, f64)> {
    let stride = records.len().div_ceil(MAX_POINTS).max(1);
    let mut pts: Vec<(f64, f64)> = records
        .iter()
        .step_by(stride)
        .map(|r| ((r.t + 1) as f64, f(r)))
        .collect();
    if let Some(last) = records.last() {
        if records.len() % stride != 1 && stride > 1 {
            pts.push(((last.t + 1) as f64, f(last)));
        }
    }
    pts
}

/// Running-average utility and power against the number of elapsed slots.
pub fn render_svg(records: &[SlotRecord], summary: &RunSummary) -> String {
    let height = MARGIN_TOP + 2.0 * PANEL_HEIGHT + PANEL_GAP;
    let x_max = records.last().map(|r| (r.t + 1) as f64).unwrap_or(1.0);
    let utility = Panel {
        title: &format!("{}: running-average utility", summary.name),
        y_label: "nats per slot",
        series: thin(records, |r| r.runavg_r),
        guide: summary
            .reference
            .as_ref()
            .map(|r| (r.r_opt, format!("reference {:.4}", r.r_opt))),
    };
    let power = Panel {
        title: "running-average power",
        y_label: "power",
        series: thin(records, |r| r.runavg_tr_q),
        guide: Some((summary.p_bar, format!("budget {}", summary.p_bar))),
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    render_panel(&mut out, &utility, MARGIN_TOP, x_max);
    render_panel(&mut out, &power, MARGIN_TOP + PANEL_HEIGHT + PANEL_GAP, x_max);
    out.push_str("</svg>\n");
    out
}
