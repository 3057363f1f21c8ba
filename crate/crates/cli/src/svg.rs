//! Minimal self-contained SVG rendering: one line plot or one heatmap per
//! file, axis labels only. Coordinates are formatted with fixed precision
//! so repeated runs emit identical bytes.

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 540.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn px(v: f64) -> String {
    format!("{v:.2}")
}

fn axis_label(v: f64) -> String {
    format!("{v:.4}")
}

struct Frame {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        let span = (self.xmax - self.xmin).max(f64::MIN_POSITIVE);
        LEFT + (v - self.xmin) / span * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        let span = (self.ymax - self.ymin).max(f64::MIN_POSITIVE);
        HEIGHT - BOTTOM - (v - self.ymin) / span * (HEIGHT - TOP - BOTTOM)
    }
}

fn open_tag() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         fill=\"white\"/>\n"
    )
}

fn axes(frame: &Frame, x_label: &str, y_label: &str) -> String {
    let x0 = px(LEFT);
    let x1 = px(WIDTH - RIGHT);
    let y0 = px(HEIGHT - BOTTOM);
    let y1 = px(TOP);
    let mut s = String::new();
    s.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        px((LEFT + WIDTH - RIGHT) / 2.0),
        px(HEIGHT - 14.0),
        x_label
    ));
    s.push_str(&format!(
        "<text x=\"18\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {})\">{}</text>\n",
        px((TOP + HEIGHT - BOTTOM) / 2.0),
        px((TOP + HEIGHT - BOTTOM) / 2.0),
        y_label
    ));
    for (v, x, anchor) in [
        (frame.xmin, LEFT, "start"),
        (frame.xmax, WIDTH - RIGHT, "end"),
    ] {
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"{anchor}\">{}</text>\n",
            px(x),
            px(HEIGHT - BOTTOM + 18.0),
            axis_label(v)
        ));
    }
    for (v, y) in [(frame.ymin, HEIGHT - BOTTOM), (frame.ymax, TOP)] {
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            px(LEFT - 6.0),
            px(y + 4.0),
            axis_label(v)
        ));
    }
    s
}

/// Renders labeled curves over a shared abscissa.
pub fn line_plot(x: &[f64], series: &[(String, Vec<f64>)], x_label: &str, y_label: &str) -> String {
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, ys) in series {
        for &v in ys.iter().filter(|v| v.is_finite()) {
            ymin = ymin.min(v);
            ymax = ymax.max(v);
        }
    }
    if !ymin.is_finite() || !ymax.is_finite() {
        ymin = 0.0;
        ymax = 1.0;
    }
    if ymax - ymin < 1e-12 {
        ymin -= 0.5;
        ymax += 0.5;
    }
    let pad = 0.05 * (ymax - ymin);
    let frame = Frame {
        xmin: x.first().copied().unwrap_or(0.0),
        xmax: x.last().copied().unwrap_or(1.0),
        ymin: ymin - pad,
        ymax: ymax + pad,
    };
    let mut s = open_tag();
    s.push_str(&axes(&frame, x_label, y_label));
    for (si, (label, ys)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let mut segment = String::new();
        let flush = |seg: &mut String, out: &mut String| {
            if seg.matches(' ').count() >= 1 {
                out.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" \
                     stroke-width=\"1.5\"/>\n",
                    seg.trim_end()
                ));
            }
            seg.clear();
        };
        for (k, &v) in ys.iter().enumerate() {
            if v.is_finite() {
                segment.push_str(&format!("{},{} ", px(frame.x(x[k])), px(frame.y(v))));
            } else {
                flush(&mut segment, &mut s);
            }
        }
        flush(&mut segment, &mut s);
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{label}</text>\n",
            px(WIDTH - RIGHT - 150.0),
            px(TOP + 16.0 * (si as f64 + 1.0)),
        ));
    }
    s.push_str("</svg>");
    s
}

/// Renders one point per (x, y) pair.
pub fn scatter(xs: &[f64], ys: &[f64], x_label: &str, y_label: &str) -> String {
    let bound = |vs: &[f64], pick: fn(f64, f64) -> f64, fallback: f64| {
        vs.iter()
            .copied()
            .filter(|v| v.is_finite())
            .reduce(pick)
            .unwrap_or(fallback)
    };
    let pad = |lo: f64, hi: f64| 0.05 * (hi - lo).max(1e-6);
    let (xmin, xmax) = (bound(xs, f64::min, 0.0), bound(xs, f64::max, 1.0));
    let (ymin, ymax) = (bound(ys, f64::min, 0.0), bound(ys, f64::max, 1.0));
    let frame = Frame {
        xmin: xmin - pad(xmin, xmax),
        xmax: xmax + pad(xmin, xmax),
        ymin: ymin - pad(ymin, ymax),
        ymax: ymax + pad(ymin, ymax),
    };
    let mut s = open_tag();
    s.push_str(&axes(&frame, x_label, y_label));
    for (&x, &y) in xs.iter().zip(ys) {
        if x.is_finite() && y.is_finite() {
            s.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
                px(frame.x(x)),
                px(frame.y(y)),
                PALETTE[0]
            ));
        }
    }
    s.push_str("</svg>");
    s
}

fn heat_color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("rgb({},{},{})", lerp(253.0, 10.0), lerp(245.0, 40.0), lerp(230.0, 120.0))
}

/// Renders a dense grid of values as colored cells. `values` is indexed
/// x-major: `values[ix * ny + iy]`.
pub fn heatmap(
    xs: &[f64],
    ys: &[f64],
    values: &[f64],
    x_label: &str,
    y_label: &str,
    value_label: &str,
) -> String {
    let (nx, ny) = (xs.len(), ys.len());
    let mut vmin = f64::INFINITY;
    let mut vmax = f64::NEG_INFINITY;
    for &v in values.iter().filter(|v| v.is_finite()) {
        vmin = vmin.min(v);
        vmax = vmax.max(v);
    }
    if !vmin.is_finite() {
        vmin = 0.0;
        vmax = 1.0;
    }
    let span = (vmax - vmin).max(f64::MIN_POSITIVE);
    let frame = Frame {
        xmin: xs.first().copied().unwrap_or(0.0),
        xmax: xs.last().copied().unwrap_or(1.0),
        ymin: ys.first().copied().unwrap_or(0.0),
        ymax: ys.last().copied().unwrap_or(1.0),
    };
    let cw = (WIDTH - LEFT - RIGHT) / nx as f64;
    let ch = (HEIGHT - TOP - BOTTOM) / ny as f64;
    let mut s = open_tag();
    for ix in 0..nx {
        for iy in 0..ny {
            let v = values[ix * ny + iy];
            let t = (v - vmin) / span;
            s.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                px(LEFT + ix as f64 * cw),
                px(HEIGHT - BOTTOM - (iy as f64 + 1.0) * ch),
                px(cw + 0.5),
                px(ch + 0.5),
                heat_color(t)
            ));
        }
    }
    s.push_str(&axes(&frame, x_label, y_label));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{value_label}: \
         {} to {}</text>\n",
        px(WIDTH - RIGHT),
        px(TOP - 10.0),
        axis_label(vmin),
        axis_label(vmax)
    ));
    s.push_str("</svg>");
    s
}
