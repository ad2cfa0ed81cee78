//! Self-contained SVG line charts of a sweep.
//!
//! Line styles for the four reference scenarios: dotted, solid, dashed and
//! dash-dotted for the four scenarios in order, cycling after that.

use std::fmt::Write as _;
use std::io::Write;

use crate::sweep::Curve;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    Negativity,
    MutualInfo,
}

impl Measure {
    fn value(self, p: &crate::entanglement::EntanglementPoint) -> f64 {
        match self {
            Measure::Negativity => p.negativity,
            Measure::MutualInfo => p.mutual_info,
        }
    }

    fn axis_label(self) -> &'static str {
        match self {
            Measure::Negativity => "N (bits)",
            Measure::MutualInfo => "I (bits)",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Measure::Negativity => "N",
            Measure::MutualInfo => "I",
        }
    }
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

const DASHES: [Option<&str>; 4] = [Some("1.5,4"), None, Some("8,5"), Some("8,4,1.5,4")];
const COLORS: [&str; 4] = ["#1f4e9c", "#b2182b", "#1b7837", "#6a3d9a"];

#[derive(Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn from_values(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0 };
        }
        if hi - lo < 1e-12 * lo.abs().max(1.0) {
            return Axis {
                lo: lo - 0.5,
                hi: hi + 0.5,
            };
        }
        let pad = 0.04 * (hi - lo);
        Axis {
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    fn ticks(&self) -> (Vec<f64>, usize) {
        let raw = (self.hi - self.lo) / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|f| f * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let decimals = (-step.log10().floor()).max(0.0) as usize;
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        ((first..=last).map(|i| i as f64 * step).collect(), decimals)
    }
}

/// Writes one chart. `asymptotes` holds an optional horizontal reference
/// value per curve, drawn as a thin grey line.
pub fn write_svg<W: Write>(
    mut out: W,
    curves: &[Curve],
    measure: Measure,
    asymptotes: Option<&[f64]>,
) -> Result<()> {
    let xs = Axis::from_values(curves.iter().flat_map(|c| c.points.iter().map(|p| p.t0)));
    let ys = Axis::from_values(
        curves
            .iter()
            .flat_map(|c| c.points.iter().map(move |p| measure.value(p)))
            .chain(asymptotes.unwrap_or(&[]).iter().copied()),
    );
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |x: f64| LEFT + (x - xs.lo) / (xs.hi - xs.lo) * pw;
    let py = |y: f64| TOP + (ys.hi - y) / (ys.hi - ys.lo) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    let (xt, xd) = xs.ticks();
    for t in xt {
        let x = px(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="black"/><text x="{x:.2}" y="{yl:.2}" text-anchor="middle">{t:.xd$}</text>"#,
            y0 = TOP + ph,
            y1 = TOP + ph - 5.0,
            yl = TOP + ph + 18.0,
        );
    }
    let (yt, yd) = ys.ticks();
    for t in yt {
        let y = py(t);
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="black"/><text x="{xl:.2}" y="{yy:.2}" text-anchor="end">{t:.yd$}</text>"#,
            x1 = LEFT + 5.0,
            xl = LEFT - 8.0,
            yy = y + 4.0,
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">T₀</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{y:.2}" text-anchor="middle" transform="rotate(-90 18 {y:.2})">{}</text>"#,
        measure.axis_label(),
        y = TOP + ph / 2.0
    );

    if let Some(asym) = asymptotes {
        for v in asym.iter().filter(|v| v.is_finite()) {
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#999999" stroke-width="0.8" stroke-dasharray="3,3"/>"##,
                y = py(*v),
                x1 = LEFT + pw,
            );
        }
    }

    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = DASHES[i % DASHES.len()]
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        for seg in segments(c) {
            if seg.len() == 1 {
                let p = &c.points[seg[0]];
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                    px(p.t0),
                    py(measure.value(p))
                );
                continue;
            }
            let coords: Vec<String> = seg
                .iter()
                .map(|&k| {
                    let p = &c.points[k];
                    format!("{:.2},{:.2}", px(p.t0), py(measure.value(p)))
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" stroke-linecap="round"{dash} points="{}"/>"#,
                coords.join(" ")
            );
        }
        let ly = TOP + 20.0 + 22.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.8" stroke-linecap="round"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 36.0,
            lx + 44.0,
            ly + 4.0,
            c.scenario.label()
        );
    }
    s.push_str("</svg>\n");
    out.write_all(s.as_bytes())?;
    out.flush()?;
    Ok(())
}

// runs of consecutive points not separated by a failed grid point
fn segments(c: &Curve) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for k in 0..c.points.len() {
        let gap = k > 0 && {
            let (a, b) = (c.points[k - 1].t0, c.points[k].t0);
            c.failures.iter().any(|f| f.t0 > a && f.t0 < b)
        };
        match out.last_mut() {
            Some(seg) if !gap => seg.push(k),
            _ => out.push(vec![k]),
        }
    }
    out
}
