//! Minimal SVG plots drawn with `line`, `rect` and `text` elements only.

use std::fmt::Write as _;

use smallball::{Components, Measure};

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * MARGIN)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(title)
    )
    .unwrap();
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str, x_tick: impl Fn(f64) -> String) {
    let (x0, y0, x1, y1) = (MARGIN, H - MARGIN, W - MARGIN, MARGIN);
    writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#).unwrap();
    writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#).unwrap();
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = f.x.0 + t * (f.x.1 - f.x.0);
        let yv = f.y.0 + t * (f.y.1 - f.y.0);
        let (px, py) = (f.px(xv), f.py(yv));
        writeln!(
            out,
            r#"<line x1="{px}" y1="{y0}" x2="{px}" y2="{}" stroke="black"/>"#,
            y0 + 4.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{px}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
            y0 + 16.0,
            x_tick(xv)
        )
        .unwrap();
        writeln!(
            out,
            r#"<line x1="{}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>"#,
            x0 - 4.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{yv:.3}</text>"#,
            x0 - 6.0,
            py + 3.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 14.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    )
    .unwrap();
}

/// Ratio-versus-radius chart with a log₂ radius axis.
pub fn ratio_chart(title: &str, series: &[Series]) -> String {
    let pts = || {
        series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|(x, y)| *x > 0.0 && y.is_finite())
    };
    let (mut xl, mut xh, mut yl, mut yh) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts() {
        xl = xl.min(x.log2());
        xh = xh.max(x.log2());
        yl = yl.min(y);
        yh = yh.max(y);
    }
    let f = Frame {
        x: padded(xl, xh),
        y: padded(yl.min(1.0), yh.max(1.0)),
    };
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, &f, "radius r (log scale)", "ratio", |x| format!("2^{x:.1}"));
    // reference line at ratio 1
    writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-dasharray="4 3"/>"#,
        MARGIN,
        f.py(1.0),
        W - MARGIN,
        f.py(1.0)
    )
    .unwrap();
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let p: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && y.is_finite())
            .map(|&(x, y)| (f.px(x.log2()), f.py(y)))
            .collect();
        for w in p.windows(2) {
            writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1.5"/>"#,
                w[0].0, w[0].1, w[1].0, w[1].1
            )
            .unwrap();
        }
        let ly = MARGIN + 14.0 * i as f64;
        writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            W - MARGIN - 150.0,
            W - MARGIN - 134.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10">{}</text>"#,
            W - MARGIN - 130.0,
            ly + 3.0,
            escape(&s.name)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Support plot: segments as lines (width grows with density), intervals as
/// bars of their height.
pub fn support_plot(title: &str, m: &Measure) -> String {
    let mut out = String::new();
    match m.components() {
        Components::Segments(segs) => {
            let (mut xl, mut xh, mut yl, mut yh) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
            for s in segs {
                for p in [s.a, s.b] {
                    xl = xl.min(p[0]);
                    xh = xh.max(p[0]);
                    yl = yl.min(p[1]);
                    yh = yh.max(p[1]);
                }
            }
            // equal aspect ratio
            let (cx, cy) = ((xl + xh) / 2.0, (yl + yh) / 2.0);
            let half = ((xh - xl) / (W - 2.0 * MARGIN)).max((yh - yl) / (H - 2.0 * MARGIN)) * 0.55;
            let f = Frame {
                x: (cx - half * (W - 2.0 * MARGIN), cx + half * (W - 2.0 * MARGIN)),
                y: (cy - half * (H - 2.0 * MARGIN), cy + half * (H - 2.0 * MARGIN)),
            };
            let dmax = segs.iter().map(|s| s.density).fold(0.0, f64::max);
            open(&mut out, title);
            axes(&mut out, &f, "x", "y", |x| format!("{x:.2}"));
            for s in segs {
                let width = 0.5 + 2.5 * (s.density / dmax).sqrt();
                writeln!(
                    out,
                    r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="{width:.2}"/>"#,
                    f.px(s.a[0]),
                    f.py(s.a[1]),
                    f.px(s.b[0]),
                    f.py(s.b[1]),
                    COLORS[0]
                )
                .unwrap();
            }
        }
        Components::Intervals(ivs) => {
            let xl = ivs.iter().map(|iv| iv.lo).fold(f64::INFINITY, f64::min);
            let xh = ivs.iter().map(|iv| iv.hi).fold(f64::NEG_INFINITY, f64::max);
            let hmax = ivs.iter().map(|iv| iv.height).fold(0.0, f64::max);
            let f = Frame {
                x: padded(xl, xh),
                y: (0.0, hmax * 1.05),
            };
            open(&mut out, title);
            axes(&mut out, &f, "x", "density", |x| format!("{x:.2}"));
            for iv in ivs {
                // keep very narrow pieces visible
                let w = (f.px(iv.hi) - f.px(iv.lo)).max(1.0);
                writeln!(
                    out,
                    r#"<rect x="{:.3}" y="{:.3}" width="{w:.3}" height="{:.3}" fill="{}"/>"#,
                    f.px(iv.lo),
                    f.py(iv.height),
                    f.py(0.0) - f.py(iv.height),
                    COLORS[0]
                )
                .unwrap();
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
