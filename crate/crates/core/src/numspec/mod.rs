//! Support-function sweep and reconstruction of the numerical spectrum.
//!
//! The region is the intersection of the half planes
//! `{z : Re(e^{-iθ}z) ≤ h(θ)}` with `h(θ) = μ(e^{-iθ}A)`. It is reported as
//! an outer polygon (the half-plane intersection over a uniform angle grid)
//! and an inner polygon (the convex hull of duality pairings found while
//! computing `h`), so the gap between the two bounds the reconstruction
//! error.

mod certify;
mod classify;
pub mod geometry;

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lognorm::{lognorm_closed, lognorm_duality, lognorm_quotient, quotient_lp_seeded, QuotientOptions};
use crate::matcore::{eigenvalues, CMatrix, LpExponent, NormSpec, C64};
use crate::renorm;

pub use certify::{certify_halfplane, Certificate, GridSpec};
pub use classify::{classify_region, Sector, ShapeClass, Strip};

/// One angle of the support function.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportSample {
    pub theta: f64,
    pub h: f64,
    /// A pairing value `⟨Ax, j(x)⟩` on or near the supporting line.
    pub witness: Option<C64>,
    /// Disagreement between the estimators used at this angle (zero for
    /// closed forms).
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub angles: usize,
    pub seed: u64,
    /// Random restarts per angle for the iterative estimators.
    pub restarts: usize,
    /// Target outer/inner gap relative to `1 + max|h|` for [`refine_region`];
    /// `None` keeps the uniform grid only.
    pub refine_tol: Option<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            angles: 360,
            seed: 0,
            restarts: 4,
            refine_tol: Some(1e-4),
        }
    }
}

/// Reconstructed numerical spectrum.
#[derive(Clone, Debug)]
pub struct Region {
    /// Support samples on the uniform grid.
    pub samples: Vec<SupportSample>,
    /// Extra samples at off-grid angles added by [`refine_region`], sorted by
    /// angle. They tighten the outer polygon where the grid is too coarse.
    pub refinement: Vec<SupportSample>,
    /// CCW vertices of the half-plane intersection.
    pub outer: Vec<C64>,
    /// CCW vertices of the hull of witness pairings.
    pub inner: Vec<C64>,
    /// Largest distance from an outer vertex to the inner hull.
    pub gap: f64,
    pub radius: f64,
    pub s_n_at_zero: f64,
    pub classification: ShapeClass,
}

fn angle_grid(k: usize) -> Vec<f64> {
    (0..k).map(|i| TAU * i as f64 / k as f64).collect()
}

fn angle_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k as u64)
}

/// `h(θ_k)` on the uniform grid `θ_k = 2πk/K`.
pub fn support_sweep(a: &CMatrix, norm: &NormSpec, k: usize, seed: u64) -> Result<Vec<SupportSample>> {
    support_sweep_with(
        a,
        norm,
        &SweepOptions {
            angles: k,
            seed,
            ..SweepOptions::default()
        },
    )
}

pub fn support_sweep_with(a: &CMatrix, norm: &NormSpec, opts: &SweepOptions) -> Result<Vec<SupportSample>> {
    let k = opts.angles;
    if k < 3 {
        return Err(Error::input(format!("need at least 3 angles, got {k}")));
    }
    norm.check_dim(a.n())?;
    let thetas = angle_grid(k);
    let sweep_err = |index: usize| {
        move |e: Error| Error::Sweep {
            index,
            source: Box::new(e),
        }
    };
    match norm {
        NormSpec::P(p) if p.is_classical() => thetas
            .par_iter()
            .enumerate()
            .map(|(i, &theta)| closed_sample(a, *p, theta).map_err(sweep_err(i)))
            .collect(),
        NormSpec::P(p) => {
            let samples: Vec<SupportSample> = thetas
                .par_iter()
                .enumerate()
                .map(|(i, &theta)| {
                    general_p_sample(a, *p, theta, angle_seed(opts.seed, i), opts.restarts).map_err(sweep_err(i))
                })
                .collect::<Result<_>>()?;
            Ok(lift_to_witnesses(samples))
        }
        NormSpec::Renormed(r) if r.matrix() == a => Ok(renorm::renormed_support(r, k, opts.seed)?.0),
        NormSpec::Renormed(_) => thetas
            .par_iter()
            .enumerate()
            .map(|(i, &theta)| quotient_sample(a, norm, theta).map_err(sweep_err(i)))
            .collect(),
    }
}

fn closed_sample(a: &CMatrix, p: LpExponent, theta: f64) -> Result<SupportSample> {
    let r = lognorm_closed(&a.rotated(theta), p)?;
    Ok(SupportSample {
        theta,
        h: r.value,
        witness: r.pairing.map(|w| w * C64::from_polar(1.0, theta)),
        residual: 0.0,
    })
}

fn quotient_sample(a: &CMatrix, norm: &NormSpec, theta: f64) -> Result<SupportSample> {
    let q = lognorm_quotient(&a.rotated(theta), norm)?;
    Ok(SupportSample {
        theta,
        h: q.value,
        witness: None,
        residual: q.residual,
    })
}

/// Quotient estimate warm-started at the duality witness; the reported
/// value is the larger of the two, since the quotient is an upper bound
/// and the pairing a lower bound whenever both optimizers succeed.
fn general_p_sample(a: &CMatrix, p: LpExponent, theta: f64, seed: u64, restarts: usize) -> Result<SupportSample> {
    let rot = a.rotated(theta);
    let d = lognorm_duality(&rot, p, seed, restarts)?;
    let mut starts = Vec::new();
    if let Some(x) = &d.witness {
        starts.push(x.as_slice().to_vec());
    }
    let n = a.n();
    starts.push(vec![C64::new(1.0, 0.0); n]);
    let q = quotient_lp_seeded(&rot, p, starts, &QuotientOptions::default())?;
    Ok(SupportSample {
        theta,
        h: q.value.max(d.value),
        witness: d.pairing.map(|w| w * C64::from_polar(1.0, theta)),
        residual: (q.value - d.value).abs(),
    })
}

/// Raises each `h_k` to the largest directional value of any witness: every
/// witness is a genuine pairing, so the true support is at least that.
fn lift_to_witnesses(mut samples: Vec<SupportSample>) -> Vec<SupportSample> {
    let ws: Vec<C64> = samples.iter().filter_map(|s| s.witness).collect();
    for s in &mut samples {
        let m = geometry::support_of(&ws, s.theta);
        if m > s.h {
            s.h = m;
        }
    }
    samples
}

/// Outer polygon, inner hull, gap, radius and classification from support
/// samples and extra witness pairings.
pub fn build_region(samples: &[SupportSample], witnesses: &[C64]) -> Result<Region> {
    build_region_refined(samples, Vec::new(), witnesses)
}

fn build_region_refined(
    samples: &[SupportSample],
    refinement: Vec<SupportSample>,
    witnesses: &[C64],
) -> Result<Region> {
    if samples.len() < 3 {
        return Err(Error::input("need at least 3 support samples"));
    }
    if samples.windows(2).any(|w| w[1].theta <= w[0].theta) {
        return Err(Error::input("support samples must have increasing angles"));
    }
    if samples
        .iter()
        .chain(&refinement)
        .any(|s| !s.h.is_finite() || !s.theta.is_finite())
    {
        return Err(Error::input("support samples must be finite"));
    }
    let (thetas, hs) = merged_constraints(samples, &refinement);
    let outer = geometry::outer_polygon(&thetas, &hs)?;
    let mut pts: Vec<C64> = witnesses.to_vec();
    pts.extend(samples.iter().chain(&refinement).filter_map(|s| s.witness));
    let inner = geometry::convex_hull(&pts);
    let gap = if inner.is_empty() {
        f64::INFINITY
    } else {
        outer
            .iter()
            .map(|&v| geometry::distance_to_convex(v, &inner))
            .fold(0.0, f64::max)
    };
    let radius = outer.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let s_n_at_zero = support_at(samples, &outer, 0.0);
    let mut region = Region {
        samples: samples.to_vec(),
        refinement,
        outer,
        inner,
        gap,
        radius,
        s_n_at_zero,
        classification: ShapeClass::default(),
    };
    region.classification = classify_region(&region, default_tolerance(&region));
    Ok(region)
}

/// Grid and refinement constraints sorted by angle.
fn merged_constraints(samples: &[SupportSample], refinement: &[SupportSample]) -> (Vec<f64>, Vec<f64>) {
    let mut all: Vec<(f64, f64)> = samples
        .iter()
        .chain(refinement)
        .map(|s| (s.theta.rem_euclid(TAU), s.h))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.into_iter().unzip()
}

/// Rounds of bisection in [`refine_region`].
const REFINE_ROUNDS: usize = 30;

/// Tightens the outer polygon where it is farther than `tol·(1 + max|h|)`
/// from the inner hull.
///
/// At each such vertex the constraints active there span an arc of
/// normals; the widest gap between sampled angles inside that arc is
/// bisected and the support function evaluated at the midpoint with the
/// same estimator as the sweep. At most `4K` angles are added. Renormed
/// norms are returned unchanged.
pub fn refine_region(a: &CMatrix, norm: &NormSpec, region: &Region, tol: f64, seed: u64) -> Result<Region> {
    if matches!(norm, NormSpec::Renormed(_)) || tol.is_nan() || tol <= 0.0 || region.gap.is_infinite() {
        return Ok(region.clone());
    }
    norm.check_dim(a.n())?;
    let budget = 4 * region.samples.len();
    let mut current = region.clone();
    for round in 0..REFINE_ROUNDS {
        let scale = 1.0
            + current
                .samples
                .iter()
                .chain(&current.refinement)
                .fold(0.0f64, |m, s| m.max(s.h.abs()));
        if current.gap <= tol * scale {
            break;
        }
        let room = budget.saturating_sub(current.refinement.len());
        if room == 0 {
            break;
        }
        let mut angles = bisection_angles(&current, tol * scale);
        angles.truncate(room);
        if angles.is_empty() {
            break;
        }
        let base = angle_seed(seed, 1_000_003 * (round + 1));
        let fresh: Vec<SupportSample> = angles
            .par_iter()
            .enumerate()
            .map(|(i, &theta)| match norm {
                NormSpec::P(p) if p.is_classical() => closed_sample(a, *p, theta),
                NormSpec::P(p) => general_p_sample(a, *p, theta, angle_seed(base, i), SweepOptions::default().restarts),
                NormSpec::Renormed(_) => unreachable!("renormed norms are not refined"),
            })
            .collect::<Result<_>>()?;
        let mut witnesses = current.inner.clone();
        witnesses.extend(fresh.iter().filter_map(|s| s.witness));
        let mut refinement = current.refinement.clone();
        refinement.extend(fresh);
        // Every witness is a genuine pairing, so no support value may lie
        // below it.
        for s in &mut refinement {
            s.h = s.h.max(geometry::support_of(&witnesses, s.theta));
        }
        refinement.sort_by(|x, y| x.theta.total_cmp(&y.theta));
        current = build_region_refined(&current.samples, refinement, &witnesses)?;
    }
    Ok(current)
}

/// Midpoints of the widest sampled-angle gap in the normal cone of each
/// outer vertex whose distance to the inner hull exceeds `tol`.
fn bisection_angles(region: &Region, tol: f64) -> Vec<f64> {
    let (thetas, hs) = merged_constraints(&region.samples, &region.refinement);
    let m = thetas.len();
    let scale = 1.0 + hs.iter().fold(0.0f64, |a, h| a.max(h.abs()));
    let mut out: Vec<f64> = Vec::new();
    for &v in &region.outer {
        if geometry::distance_to_convex(v, &region.inner) <= tol {
            continue;
        }
        let tight: Vec<usize> = (0..m)
            .filter(|&i| (hs[i] - geometry::directional(thetas[i], v)).abs() <= 1e-9 * scale)
            .collect();
        if tight.len() < 2 {
            continue;
        }
        // The active normals form an arc shorter than π; it starts after the
        // widest cyclic gap between consecutive active angles.
        let t = tight.len();
        let gap_after = |j: usize| (thetas[tight[(j + 1) % t]] - thetas[tight[j]]).rem_euclid(TAU);
        let widest = (0..t)
            .max_by(|&x, &y| gap_after(x).total_cmp(&gap_after(y)))
            .expect("nonempty");
        let (start, end) = (tight[(widest + 1) % t], tight[widest]);
        let mut best: Option<(f64, f64)> = None;
        let mut i = start;
        while i != end {
            let j = (i + 1) % m;
            let width = (thetas[j] - thetas[i]).rem_euclid(TAU);
            if best.is_none_or(|b| width > b.0) {
                best = Some((width, thetas[i] + width / 2.0));
            }
            i = j;
        }
        if let Some((width, mid)) = best {
            if width > 1e-12 {
                out.push(mid.rem_euclid(TAU));
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    out
}

pub(crate) fn default_tolerance(region: &Region) -> f64 {
    let scale = region.samples.iter().fold(0.0f64, |m, s| m.max(s.h.abs()));
    1e-9 * scale.max(1.0)
}

fn same_angle(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d < 1e-12 || TAU - d < 1e-12
}

/// Sampled `h` when `θ` is on the grid, else the outer polygon's support.
fn support_at(samples: &[SupportSample], outer: &[C64], theta: f64) -> f64 {
    samples
        .iter()
        .find(|s| same_angle(s.theta, theta))
        .map(|s| s.h)
        .unwrap_or_else(|| geometry::support_of(outer, theta))
}

impl Region {
    /// Support function of the region at any angle.
    pub fn support(&self, theta: f64) -> f64 {
        support_at(&self.samples, &self.outer, theta)
    }

    /// Angles of all constraints, grid and refinement, in increasing order.
    pub fn thetas(&self) -> Vec<f64> {
        merged_constraints(&self.samples, &self.refinement).0
    }

    /// Support values matching [`Region::thetas`].
    pub fn hs(&self) -> Vec<f64> {
        merged_constraints(&self.samples, &self.refinement).1
    }

    /// Signed margin of `z`: positive inside the outer polygon.
    pub fn margin(&self, z: C64) -> f64 {
        geometry::support_margin(&self.thetas(), &self.hs(), z)
    }

    /// JSON document `{"p", "angles", "support", "refinement", "outer",
    /// "inner", "gap", "radius", "s_n_zero", "class"}`.
    pub fn to_json(&self, norm_label: &str) -> Value {
        let pt = |z: &C64| json!([z.re, z.im]);
        let entries = |v: &[SupportSample]| -> Vec<Value> {
            v.iter()
                .map(|s| {
                    json!({
                        "theta": s.theta,
                        "h": s.h,
                        "witness": s.witness.as_ref().map(pt),
                    })
                })
                .collect()
        };
        json!({
            "p": norm_label,
            "angles": self.samples.len(),
            "support": entries(&self.samples),
            "refinement": entries(&self.refinement),
            "outer": self.outer.iter().map(pt).collect::<Vec<_>>(),
            "inner": self.inner.iter().map(pt).collect::<Vec<_>>(),
            "gap": self.gap,
            "radius": self.radius,
            "s_n_zero": self.s_n_at_zero,
            "class": self.classification.to_json(),
        })
    }
}

/// `r_n = max |z|` over the outer polygon.
pub fn numerical_radius(region: &Region) -> f64 {
    region.radius
}

/// `s_n^θ = h(θ)`, read from the grid or from the outer polygon between
/// grid angles.
pub fn numerical_bounds(samples: &[SupportSample], theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::input("θ must be finite"));
    }
    if let Some(s) = samples.iter().find(|s| same_angle(s.theta, theta)) {
        return Ok(s.h);
    }
    let thetas: Vec<f64> = samples.iter().map(|s| s.theta).collect();
    let hs: Vec<f64> = samples.iter().map(|s| s.h).collect();
    let outer = geometry::outer_polygon(&thetas, &hs)?;
    Ok(geometry::support_of(&outer, theta))
}

/// Each eigenvalue with its signed margin to the outer polygon.
pub fn check_spectrum_inclusion(a: &CMatrix, region: &Region) -> Result<Vec<(C64, f64)>> {
    let thetas = region.thetas();
    let hs = region.hs();
    Ok(eigenvalues(a)?
        .into_iter()
        .map(|l| (l, geometry::support_margin(&thetas, &hs, l)))
        .collect())
}

/// Sweep, build and refine in one call.
pub fn region_for(a: &CMatrix, norm: &NormSpec, opts: &SweepOptions) -> Result<Region> {
    let samples = support_sweep_with(a, norm, opts)?;
    let region = build_region(&samples, &[])?;
    match opts.refine_tol {
        Some(tol) => refine_region(a, norm, &region, tol, opts.seed),
        None => Ok(region),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn jordan() -> CMatrix {
        CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    fn sweep(a: &CMatrix, p: f64, k: usize) -> Vec<SupportSample> {
        support_sweep(a, &NormSpec::p(p).unwrap(), k, 0).unwrap()
    }

    #[test]
    fn jordan_support_is_constant() {
        for s in sweep(&jordan(), 2.0, 36) {
            assert!((s.h - 0.5).abs() < 1e-12);
        }
        for s in sweep(&jordan(), 1.0, 36) {
            assert!((s.h - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cone_support_values() {
        let b = CMatrix::from_real(2, &[2.0, 1.0, 0.0, 0.0]).unwrap();
        let s = sweep(&b, 1.0, 4);
        assert_eq!(s[0].h, 2.0);
        assert!((s[1].h - 1.0).abs() < 1e-15);
        assert!((s[2].h - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_from_four_samples() {
        let samples: Vec<SupportSample> = (0..4)
            .map(|k| SupportSample {
                theta: k as f64 * FRAC_PI_2,
                h: 1.0,
                witness: None,
                residual: 0.0,
            })
            .collect();
        let r = build_region(&samples, &[]).unwrap();
        assert_eq!(r.outer.len(), 4);
        assert!((numerical_radius(&r) - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn jordan_disk_and_triangle() {
        let r = region_for(&jordan(), &NormSpec::p(2.0).unwrap(), &SweepOptions::default()).unwrap();
        assert!((r.radius - 0.5).abs() < 1e-3);
        assert!(r.gap <= 1e-3);
        let d = CMatrix::diag(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0)]).unwrap();
        let r = region_for(&d, &NormSpec::p(2.0).unwrap(), &SweepOptions::default()).unwrap();
        let tri = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0)];
        assert!(geometry::hausdorff(&r.outer, &tri) < 1e-3);
    }

    #[test]
    fn bounds_examples() {
        let a = CMatrix::from_real(2, &[1.0, 1.0, 0.0, -1.0]).unwrap();
        assert!((numerical_bounds(&sweep(&a, 1.0, 360), 0.0).unwrap() - 1.0).abs() < 1e-12);
        let d = CMatrix::diag(&[C64::new(1.0, 1.0), C64::new(-1.0, 0.0)]).unwrap();
        assert!((numerical_bounds(&sweep(&d, f64::INFINITY, 360), 0.0).unwrap() - 1.0).abs() < 1e-12);
        let s = sweep(&jordan(), 2.0, 360);
        assert!((numerical_bounds(&s, FRAC_PI_3).unwrap() - 0.5).abs() < 1e-12);
        // Off-grid angles read the polygon support.
        assert!((numerical_bounds(&s, 0.1234).unwrap() - 0.5).abs() < 1e-4);
    }

    #[test]
    fn spectrum_inclusion_examples() {
        let r = region_for(&jordan(), &NormSpec::p(2.0).unwrap(), &SweepOptions::default()).unwrap();
        let m = check_spectrum_inclusion(&jordan(), &r).unwrap();
        assert!(m.iter().all(|(_, g)| (g - 0.5).abs() < 1e-9));

        let a = CMatrix::from_real(2, &[1.0, 1.0, 0.0, -1.0]).unwrap();
        let r = region_for(&a, &NormSpec::p(1.0).unwrap(), &SweepOptions::default()).unwrap();
        let m = check_spectrum_inclusion(&a, &r).unwrap();
        assert!(m.iter().all(|(_, g)| *g >= -1e-6));
        let at_one = m.iter().find(|(l, _)| (l.re - 1.0).abs() < 1e-9).unwrap();
        assert!(at_one.1.abs() < 1e-9);

        let d = CMatrix::diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)]).unwrap();
        let r = region_for(&d, &NormSpec::p(2.0).unwrap(), &SweepOptions::default()).unwrap();
        assert_eq!(r.outer.len(), 2);
        assert!(check_spectrum_inclusion(&d, &r)
            .unwrap()
            .iter()
            .all(|(_, g)| *g >= -1e-6));
    }

    #[test]
    fn general_p_sweep_matches_jordan_radius() {
        let want = (2.0f64 / 3.0).powf(2.0 / 3.0) * (1.0f64 / 3.0).powf(1.0 / 3.0);
        let s = sweep(&jordan(), 3.0, 24);
        for x in &s {
            assert!((x.h - want).abs() < 1e-5, "θ = {}: {} vs {want}", x.theta, x.h);
        }
        let r = build_region(&s, &[]).unwrap();
        assert!(r.inner.len() >= 3);
        // The region is a disk, so its leftmost support equals the radius.
        assert!((r.support(PI) - want).abs() < 1e-5);
    }

    #[test]
    fn region_json_has_schema_keys() {
        let r = region_for(
            &jordan(),
            &NormSpec::p(2.0).unwrap(),
            &SweepOptions {
                angles: 8,
                ..Default::default()
            },
        )
        .unwrap();
        let v = r.to_json("2");
        for key in [
            "p", "angles", "support", "outer", "inner", "gap", "radius", "s_n_zero", "class",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["support"][0]["witness"].as_array().unwrap().len(), 2);
    }
}
