use std::fmt::Write;

use crate::matcore::C64;
use crate::numspec::Region;

const SIZE: f64 = 600.0;

fn points_attr(pts: &[C64], map: &impl Fn(C64) -> (f64, f64)) -> String {
    pts.iter()
        .map(|&z| {
            let (x, y) = map(z);
            format!("{x:.3},{y:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Outer polygon, inner hull, eigenvalues and the unit axes.
pub fn render(region: &Region, eigenvalues: &[C64]) -> String {
    let all = region
        .outer
        .iter()
        .chain(&region.inner)
        .chain(eigenvalues)
        .copied()
        .chain([C64::new(1.0, 1.0), C64::new(-1.0, -1.0)]);
    let (mut lo, mut hi) = (
        C64::new(f64::INFINITY, f64::INFINITY),
        C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for z in all {
        lo = C64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = C64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im) * 1.1;
    let center = (lo + hi) / 2.0;
    let scale = SIZE / span;
    let map = |z: C64| {
        (
            SIZE / 2.0 + (z.re - center.re) * scale,
            SIZE / 2.0 - (z.im - center.im) * scale,
        )
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, _) = map(C64::new(lo.re - span, 0.0));
    let (x1, y_axis) = map(C64::new(hi.re + span, 0.0));
    let (x_axis, y0) = map(C64::new(0.0, hi.im + span));
    let (_, y1) = map(C64::new(0.0, lo.im - span));
    let _ = writeln!(s, r##"<g stroke="#999" stroke-width="1">"##);
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.3}" y1="{y_axis:.3}" x2="{x1:.3}" y2="{y_axis:.3}"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x_axis:.3}" y1="{y0:.3}" x2="{x_axis:.3}" y2="{y1:.3}"/>"#
    );
    for tick in [
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, -1.0),
    ] {
        let (x, y) = map(tick);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r##"<polygon points="{}" fill="#cde" stroke="#036" stroke-width="1.5"/>"##,
        points_attr(&region.outer, &map)
    );
    if !region.inner.is_empty() {
        let _ = writeln!(
            s,
            r##"<polygon points="{}" fill="none" stroke="#c60" stroke-width="1" stroke-dasharray="4 2"/>"##,
            points_attr(&region.inner, &map)
        );
    }
    for &e in eigenvalues {
        let (x, y) = map(e);
        let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#c00"/>"##);
    }
    s.push_str("</svg>\n");
    s
}
