//! Planar convex geometry on complex numbers.

use crate::error::{Error, Result};
use crate::matcore::C64;

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// `Re(e^{-iθ} z)`.
pub fn directional(theta: f64, z: C64) -> f64 {
    z.re * theta.cos() + z.im * theta.sin()
}

/// Intersection of the half planes `Re(e^{-iθ_k} z) ≤ h_k`, as a CCW
/// polygon. Regions without interior come back as one or two vertices.
pub fn outer_polygon(thetas: &[f64], hs: &[f64]) -> Result<Vec<C64>> {
    let scale = 1.0 + hs.iter().fold(0.0f64, |m, h| m.max(h.abs()));
    if !scale.is_finite() {
        return Err(Error::Geometry("support values must be finite".into()));
    }
    let eps = 1e-12 * scale;
    let r = 4.0 * scale;
    let mut poly = vec![C64::new(-r, -r), C64::new(r, -r), C64::new(r, r), C64::new(-r, r)];
    for (&theta, &h) in thetas.iter().zip(hs) {
        let (c, s) = (theta.cos(), theta.sin());
        let slack = |z: C64| h + eps - (z.re * c + z.im * s);
        let mut next = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let cur = poly[i];
            let nxt = poly[(i + 1) % poly.len()];
            let (sc, sn) = (slack(cur), slack(nxt));
            if sc >= 0.0 {
                next.push(cur);
            }
            if (sc >= 0.0) != (sn >= 0.0) {
                let t = sc / (sc - sn);
                next.push(cur + (nxt - cur) * t);
            }
        }
        poly = next;
        if poly.is_empty() {
            return Err(Error::Geometry(format!(
                "half-plane intersection is empty at θ = {theta}; support data inconsistent"
            )));
        }
    }
    Ok(dedupe_cyclic(poly, 1e-8 * scale))
}

fn dedupe_cyclic(poly: Vec<C64>, tol: f64) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::with_capacity(poly.len());
    for z in poly {
        if out.last().is_none_or(|l| (z - l).norm() > tol) {
            out.push(z);
        }
    }
    while out.len() > 1 && (out[0] - out[out.len() - 1]).norm() <= tol {
        out.pop();
    }
    out
}

/// CCW convex hull (monotone chain). Collinear points are dropped.
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points
        .iter()
        .copied()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
        .collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<C64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<C64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance(z: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

/// Distance from `z` to a convex CCW polygon (zero inside).
pub fn distance_to_convex(z: C64, poly: &[C64]) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => (z - poly[0]).norm(),
        2 => segment_distance(z, poly[0], poly[1]),
        m => {
            let inside = (0..m).all(|i| cross(poly[i], poly[(i + 1) % m], z) >= 0.0);
            if inside {
                0.0
            } else {
                (0..m)
                    .map(|i| segment_distance(z, poly[i], poly[(i + 1) % m]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Hausdorff distance between two convex polygons; attained at vertices.
pub fn hausdorff(p: &[C64], q: &[C64]) -> f64 {
    let one_sided = |a: &[C64], b: &[C64]| a.iter().map(|&z| distance_to_convex(z, b)).fold(0.0, f64::max);
    one_sided(p, q).max(one_sided(q, p))
}

/// Support function of a finite point set.
pub fn support_of(points: &[C64], theta: f64) -> f64 {
    points
        .iter()
        .map(|&z| directional(theta, z))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `min_k [h_k − Re(e^{-iθ_k} z)]`: positive inside the outer polygon.
pub fn support_margin(thetas: &[f64], hs: &[f64], z: C64) -> f64 {
    thetas
        .iter()
        .zip(hs)
        .map(|(&t, &h)| h - directional(t, z))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn four_half_planes_give_a_square() {
        let th = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
        let poly = outer_polygon(&th, &[1.0; 4]).unwrap();
        assert_eq!(poly.len(), 4);
        for corner in [
            C64::new(1.0, 1.0),
            C64::new(-1.0, 1.0),
            C64::new(-1.0, -1.0),
            C64::new(1.0, -1.0),
        ] {
            assert!(poly.iter().any(|v| (v - corner).norm() < 1e-9));
        }
        let area: f64 = (0..4)
            .map(|i| cross(C64::new(0.0, 0.0), poly[i], poly[(i + 1) % 4]))
            .sum::<f64>()
            / 2.0;
        assert!((area - 4.0).abs() < 1e-8);
    }

    #[test]
    fn segment_support_collapses_to_two_vertices() {
        let k = 360;
        let th: Vec<f64> = (0..k).map(|i| 2.0 * PI * i as f64 / k as f64).collect();
        let pts = [C64::new(1.0, 0.0), C64::new(3.0, 0.0)];
        let hs: Vec<f64> = th.iter().map(|&t| support_of(&pts, t)).collect();
        let poly = outer_polygon(&th, &hs).unwrap();
        assert_eq!(poly.len(), 2, "{poly:?}");
        assert!(hausdorff(&poly, &pts) < 1e-8);
    }

    #[test]
    fn inconsistent_support_is_a_geometry_error() {
        let th = [0.0, FRAC_PI_2, PI];
        assert!(matches!(
            outer_polygon(&th, &[-1.0, 0.0, -1.0]),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn hull_and_distances() {
        let pts = [
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 1.0),
            C64::new(0.0, 1.0),
            C64::new(0.5, 0.5),
            C64::new(0.5, 0.0),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert_eq!(distance_to_convex(C64::new(0.5, 0.5), &h), 0.0);
        assert!((distance_to_convex(C64::new(2.0, 0.5), &h) - 1.0).abs() < 1e-15);
        assert!((support_margin(&[0.0], &[1.0], C64::new(0.25, 3.0)) - 0.75).abs() < 1e-15);
    }
}
