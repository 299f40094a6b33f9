use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde_json::{json, Value};

use super::Region;
use crate::matcore::C64;

/// Strip `{z : ω₁ ≤ Re(e^{-iθ}z) ≤ ω₂}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Strip {
    pub theta: f64,
    pub omega1: f64,
    pub omega2: f64,
}

/// Sector `z + {r e^{iψ} : r ≥ 0, |ψ − θ| ≤ δ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    pub theta: f64,
    pub delta: f64,
    pub vertex: C64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShapeClass {
    pub compact: bool,
    pub within_strip: Option<Strip>,
    pub within_sector: Option<Sector>,
    pub within_imaginary_axis: bool,
    pub isometric_group: bool,
    pub minimal_strip_width: f64,
}

impl ShapeClass {
    pub fn to_json(&self) -> Value {
        json!({
            "compact": self.compact,
            "within_strip": self.within_strip.map(|s| json!({
                "theta": s.theta, "omega1": s.omega1, "omega2": s.omega2,
            })),
            "within_sector": self.within_sector.map(|s| json!({
                "theta": s.theta, "delta": s.delta, "vertex": [s.vertex.re, s.vertex.im],
            })),
            "within_imaginary_axis": self.within_imaginary_axis,
            "isometric_group": self.isometric_group,
            "minimal_strip_width": self.minimal_strip_width,
        })
    }
}

/// Tightest sector opening toward `θ` with half-angle `δ < π/2`: its
/// vertex is where the two supporting lines with normals `θ ± (δ + π/2)`
/// meet.
pub fn sector_fit(region: &Region, theta: f64, delta: f64) -> Sector {
    let n1 = theta + delta + FRAC_PI_2;
    let n2 = theta - delta - FRAC_PI_2;
    let (h1, h2) = (
        region.support(n1.rem_euclid(2.0 * PI)),
        region.support(n2.rem_euclid(2.0 * PI)),
    );
    // Solve x cos n + y sin n = h for both normals.
    let det = n1.cos() * n2.sin() - n1.sin() * n2.cos();
    let x = (h1 * n2.sin() - h2 * n1.sin()) / det;
    let y = (n1.cos() * h2 - n2.cos() * h1) / det;
    Sector {
        theta,
        delta,
        vertex: C64::new(x, y),
    }
}

/// Shape flags from the support data. Every matrix region is compact; the
/// strip is the narrowest one over the grid directions in `[0, π)`.
pub fn classify_region(region: &Region, tol: f64) -> ShapeClass {
    let mut best: Option<(f64, Strip)> = None;
    for s in region.samples.iter().filter(|s| s.theta < PI) {
        let up = s.h;
        let down = region.support(s.theta + PI);
        let width = up + down;
        if best.is_none_or(|(w, _)| width < w) {
            best = Some((
                width,
                Strip {
                    theta: s.theta,
                    omega1: -down,
                    omega2: up,
                },
            ));
        }
    }
    let within_imaginary_axis = region.support(0.0) <= tol && region.support(PI) <= tol;
    let sector = sector_fit(region, PI, FRAC_PI_4);
    ShapeClass {
        compact: true,
        within_strip: best.map(|b| b.1),
        within_sector: Some(sector),
        within_imaginary_axis,
        isometric_group: within_imaginary_axis,
        minimal_strip_width: best.map(|b| b.0.max(0.0)).unwrap_or(f64::NAN),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{CMatrix, NormSpec};
    use crate::numspec::{region_for, SweepOptions};

    fn region(a: &CMatrix) -> Region {
        region_for(a, &NormSpec::p(2.0).unwrap(), &SweepOptions::default()).unwrap()
    }

    #[test]
    fn skew_hermitian_is_on_the_imaginary_axis() {
        let a = CMatrix::diag(&[C64::new(0.0, 1.0), C64::new(0.0, -1.0)]).unwrap();
        let c = region(&a).classification;
        assert!(c.within_imaginary_axis && c.isometric_group && c.compact);
        assert!(c.minimal_strip_width.abs() < 1e-9);
    }

    #[test]
    fn jordan_block_strip_width_one() {
        let a = CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let c = region(&a).classification;
        assert!(c.compact && !c.within_imaginary_axis);
        assert!((c.minimal_strip_width - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_segment_lies_in_a_horizontal_strip() {
        let a = CMatrix::diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)]).unwrap();
        let r = region(&a);
        let s = r.classification.within_strip.unwrap();
        assert!((s.theta - FRAC_PI_2).abs() < 1e-12);
        assert!(r.classification.minimal_strip_width.abs() < 1e-12);
        // Sector opening left with vertex where the ±45° support lines meet.
        let sec = r.classification.within_sector.unwrap();
        assert!((sec.vertex - C64::new(3.0, 0.0)).norm() < 1e-9);
        assert!(r.outer.iter().all(|v| {
            let d = v - sec.vertex;
            d.norm() < 1e-9 || (d.arg().abs() >= 3.0 * FRAC_PI_4 - 1e-9)
        }));
    }
}
