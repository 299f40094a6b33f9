//! Hildebrandt-type renormings `|||x||| = sup_{t≥0} ‖e^{-ωt} e^{tA_θ} x‖`.
//!
//! For `ω` above the spectral abscissa of `A_θ = e^{-iθ}A` the orbit decays,
//! so the supremum is taken over a finite uniform grid `[0, T]` whose tail
//! is certified to be dominated, then refined to the continuous maximum
//! inside the peak cell. In the new norm the semigroup generated by `A_θ` is
//! `ω`-contractive, which pushes the numerical spectrum toward the convex
//! hull of the spectrum in direction `θ`.

use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::{DMatrix, SVD};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::{
    dual_witness_raw, eigenvalues, expm, lp_norm, matvec, pairing, sigma_max, spectral_abscissa, CMatrix, LpExponent,
    LpKind, NormSpec, C64,
};
use crate::numspec::{self, geometry, Region, SupportSample};
use crate::optim;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Time grid for the supremum over `t ≥ 0`.
#[derive(Clone, Copy, Debug)]
pub struct TimeGrid {
    /// Grid spacing; defaults to `min(0.25, 0.25 / ‖A_θ − ω‖₁)`.
    pub step: Option<f64>,
    /// Initial horizon `T`. The grid is extended past it until the tail is
    /// dominated.
    pub horizon: f64,
    /// Give up when the tail has not decayed by this time.
    pub max_horizon: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            step: None,
            horizon: 4.0,
            max_horizon: 5000.0,
        }
    }
}

/// A validated renorming. Immutable; share it through [`NormSpec::Renormed`].
#[derive(Debug)]
pub struct RenormSpec {
    a: CMatrix,
    theta: f64,
    omega: f64,
    base: LpExponent,
    step: f64,
    /// `B = e^{-iθ}A − ω`.
    generator: DMatrix<C64>,
    /// `E_k = e^{k·step·B}`.
    flows: Vec<DMatrix<C64>>,
    taylor_degree: usize,
    bound: f64,
    tail: f64,
}

/// Largest grid size, counted in stored matrix entries.
const MAX_ENTRIES: usize = 50_000_000;

fn base_op_norm(m: &DMatrix<C64>, p: LpExponent) -> f64 {
    let n1 = || {
        (0..m.ncols())
            .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let ninf = || {
        (0..m.nrows())
            .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    match p.kind() {
        LpKind::One => n1(),
        LpKind::Inf => ninf(),
        LpKind::Two => sigma_max(m),
        // Riesz–Thorin upper bound; only used for truncation and the
        // equivalence constant, where an upper bound is what is needed.
        LpKind::General(p) => n1().powf(1.0 / p) * ninf().powf(1.0 - 1.0 / p),
    }
}

/// Builds `|||·|||` for `A` rotated by `θ` with decay rate `ω`.
pub fn build_hildebrandt_norm(
    a: &CMatrix,
    theta: f64,
    omega: f64,
    base: LpExponent,
    grid: &TimeGrid,
) -> Result<RenormSpec> {
    if !theta.is_finite() || !omega.is_finite() {
        return Err(Error::input("θ and ω must be finite"));
    }
    if !(grid.horizon > 0.0 && grid.max_horizon >= grid.horizon) {
        return Err(Error::input("time grid needs 0 < horizon <= max_horizon"));
    }
    let rotated = a.rotated(theta);
    let abscissa = spectral_abscissa(&rotated)?;
    if omega <= abscissa + 1e-6 {
        return Err(Error::input(format!(
            "ω = {omega} must exceed the spectral abscissa {abscissa} of the rotated matrix by 1e-6"
        )));
    }
    let n = a.n();
    let generator = rotated.shifted(C64::new(-omega, 0.0)).inner().clone();
    let gnorm = base_op_norm(&generator, LpExponent::ONE);
    let step = match grid.step {
        Some(s) if s.is_finite() && s > 0.0 => s,
        Some(s) => return Err(Error::input(format!("time step must be positive, got {s}"))),
        None if gnorm > 0.0 => (0.25 / gnorm).min(0.25),
        None => 0.25,
    };
    let x = step * gnorm;
    if x > 1.0 {
        return Err(Error::input(format!(
            "time step {step} too coarse for ‖A_θ − ω‖₁ = {gnorm}; need step·norm <= 1"
        )));
    }
    // Smallest degree with x^{d+1}/(d+1)! below 1e-17.
    let mut taylor_degree = 1;
    let mut term = x;
    while taylor_degree < 40 {
        term *= x / (taylor_degree + 1) as f64;
        if term < 1e-17 {
            break;
        }
        taylor_degree += 1;
    }

    let e_step = expm(&(&generator * C64::new(step, 0.0)))?;
    let mut flows = vec![DMatrix::<C64>::identity(n, n)];
    let mut values = vec![1.0];
    let mut running = 1.0f64;
    loop {
        let t = (flows.len() - 1) as f64 * step;
        let last = *values.last().expect("nonempty");
        if t >= grid.horizon && last < running && last * running < 1.0 {
            break;
        }
        if t >= grid.max_horizon || flows.len() * n * n >= MAX_ENTRIES {
            return Err(Error::numerical(
                format!("renorm tail did not decay by t = {t}: e^(-ωt)‖e^(tA_θ)‖ = {last}, running sup {running}"),
                Some(last),
            ));
        }
        let next = flows.last().expect("nonempty") * &e_step;
        let v = base_op_norm(&next, base);
        if !v.is_finite() {
            return Err(Error::numerical("renorm flow overflowed", Some(running)));
        }
        running = running.max(v);
        values.push(v);
        flows.push(next);
    }
    let tail = *values.last().expect("nonempty");
    let (k, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    let lo = if k > 0 { -step } else { 0.0 };
    let flow_k = &flows[k];
    let (_, refined) = optim::golden_max(
        |s| {
            if s == 0.0 {
                return values[k];
            }
            expm(&(&generator * C64::new(s, 0.0)))
                .map(|e| base_op_norm(&(flow_k * e), base))
                .unwrap_or(f64::NEG_INFINITY)
        },
        lo,
        step,
        50,
    );
    let bound = running.max(refined);

    Ok(RenormSpec {
        a: a.clone(),
        theta,
        omega,
        base,
        step,
        generator,
        flows,
        taylor_degree,
        bound,
        tail,
    })
}

/// Maximizer of `t ↦ ‖E_t x‖` with its value.
pub(crate) struct Peak {
    pub value: f64,
    #[allow(dead_code)] // read by tests
    pub t: f64,
    /// `E_t x` at the maximizing `t`.
    pub y: Vec<C64>,
}

impl RenormSpec {
    pub fn matrix(&self) -> &CMatrix {
        &self.a
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn base(&self) -> LpExponent {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.a.n()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Truncation time `T`.
    pub fn horizon(&self) -> f64 {
        (self.flows.len() - 1) as f64 * self.step
    }

    pub fn grid_len(&self) -> usize {
        self.flows.len()
    }

    /// `M = sup_t e^{-ωt}‖e^{tA_θ}‖`, so `‖x‖ ≤ |||x||| ≤ M‖x‖`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `e^{-ωT}‖e^{TA_θ}‖` at the truncation time.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn into_norm(self) -> NormSpec {
        NormSpec::Renormed(Arc::new(self))
    }

    pub fn norm(&self, x: &[C64]) -> f64 {
        self.peak(x).value
    }

    pub(crate) fn peak(&self, x: &[C64]) -> Peak {
        let mut best_k = 0;
        let mut best_v = f64::NEG_INFINITY;
        let mut best_y = Vec::new();
        for (k, e) in self.flows.iter().enumerate() {
            let y = matvec(e, x);
            let v = lp_norm(&y, self.base);
            if v > best_v {
                best_v = v;
                best_k = k;
                best_y = y;
            }
        }
        if best_v == 0.0 {
            return Peak {
                value: 0.0,
                t: 0.0,
                y: best_y,
            };
        }
        // Taylor coefficients B^j y / j! around the peak grid point.
        let mut coeffs = Vec::with_capacity(self.taylor_degree + 1);
        coeffs.push(best_y.clone());
        for j in 1..=self.taylor_degree {
            let prev = coeffs.last().expect("nonempty");
            let next: Vec<C64> = matvec(&self.generator, prev)
                .into_iter()
                .map(|z| z / j as f64)
                .collect();
            coeffs.push(next);
        }
        let eval = |s: f64| -> Vec<C64> {
            let mut acc = coeffs[self.taylor_degree].clone();
            for c in coeffs[..self.taylor_degree].iter().rev() {
                for (a, ci) in acc.iter_mut().zip(c) {
                    *a = *a * s + ci;
                }
            }
            acc
        };
        let lo = if best_k > 0 { -self.step } else { 0.0 };
        let hi = if best_k + 1 < self.flows.len() { self.step } else { 0.0 };
        let (s, v) = optim::golden_max(|s| lp_norm(&eval(s), self.base), lo, hi, 48);
        let t0 = best_k as f64 * self.step;
        if v > best_v {
            Peak {
                value: v,
                t: t0 + s,
                y: eval(s),
            }
        } else {
            Peak {
                value: best_v,
                t: t0,
                y: best_y,
            }
        }
    }

    /// Difference quotient `(|||x + hBx||| − |||x|||) / (h |||x|||)`.
    pub(crate) fn quotient_objective(&self, b: &DMatrix<C64>, x: &[C64], h: f64) -> f64 {
        let nx = self.norm(x);
        if nx == 0.0 {
            return f64::NEG_INFINITY;
        }
        let bx = matvec(b, x);
        let y: Vec<C64> = x.iter().zip(&bx).map(|(a, b)| a + b * h).collect();
        (self.norm(&y) - nx) / (h * nx)
    }

    /// Pairing `⟨Ay, j(y)⟩ / ‖y‖²` at the peak `y` of the orbit of `x`.
    ///
    /// `E_t` commutes with `A`, so the right derivative of `|||x + hAx|||`
    /// at `h = 0` is the base-norm derivative at the peak vector. The set of
    /// these pairings is therefore the numerical range in `|||·|||`.
    pub(crate) fn renormed_pairing(&self, x: &[C64]) -> Option<C64> {
        let pk = self.peak(x);
        if pk.value == 0.0 {
            return None;
        }
        let ny = lp_norm(&pk.y, self.base);
        let j = dual_witness_raw(&pk.y, self.base);
        Some(pairing(&matvec(self.a.inner(), &pk.y), &j) / (ny * ny))
    }
}

/// Right singular vector of the smallest singular value.
fn null_vector(m: &DMatrix<C64>) -> Vec<C64> {
    let svd = SVD::new(m.clone(), false, true);
    let vt = svd.v_t.expect("requested V");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |b, (i, &s)| if s < b.1 { (i, s) } else { b });
    vt.row(k).iter().map(|z| z.conj()).collect()
}

/// Support samples of the numerical spectrum of the renorm's own matrix in
/// the renormed norm, plus every pairing point found along the way.
pub(crate) fn renormed_support(spec: &RenormSpec, k: usize, seed: u64) -> Result<(Vec<SupportSample>, Vec<C64>)> {
    if k < 3 {
        return Err(Error::input("need at least 3 angles"));
    }
    let n = spec.dim();
    let mut starts: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    for lambda in eigenvalues(&spec.a)? {
        let shifted = spec.a.shifted(-lambda);
        starts.push(null_vector(shifted.inner()));
    }
    let mut rng = optim::rng(seed);
    for _ in 0..(256 + 64 * n) {
        starts.push(optim::random_cvec(&mut rng, n));
    }
    let pool: Vec<(Vec<C64>, C64)> = starts
        .into_par_iter()
        .filter_map(|x| spec.renormed_pairing(&x).map(|w| (x, w)))
        .collect();
    if pool.is_empty() {
        return Err(Error::numerical("no valid renormed pairing found", None));
    }

    let refined: Vec<(C64, f64)> = (0..k)
        .into_par_iter()
        .map(|i| {
            let phi = TAU * i as f64 / k as f64;
            let rot = C64::from_polar(1.0, -phi);
            let score = |w: C64| (rot * w).re;
            let (x0, _) = pool.iter().fold((&pool[0].0, f64::NEG_INFINITY), |b, (x, w)| {
                let s = score(*w);
                if s > b.1 {
                    (x, s)
                } else {
                    b
                }
            });
            let f = |x: &[C64]| spec.renormed_pairing(x).map(&score).unwrap_or(f64::NEG_INFINITY);
            let mut local = optim::rng(seed ^ (0x51_7cc1_b727_220a ^ i as u64));
            let r = optim::pattern_ascent(&f, x0, 0.2, &mut local, 400, 1e-7);
            let w = spec.renormed_pairing(&r.x).unwrap_or(pool[0].1);
            (w, r.value)
        })
        .collect();

    let mut witnesses: Vec<C64> = pool.iter().map(|(_, w)| *w).collect();
    witnesses.extend(refined.iter().map(|(w, _)| *w));
    let samples = (0..k)
        .map(|i| {
            let phi = TAU * i as f64 / k as f64;
            let rot = C64::from_polar(1.0, -phi);
            let (wbest, h) = witnesses.iter().fold((witnesses[0], f64::NEG_INFINITY), |b, &w| {
                let s = (rot * w).re;
                if s > b.1 {
                    (w, s)
                } else {
                    b
                }
            });
            SupportSample {
                theta: phi,
                h,
                witness: Some(wbest),
                residual: h - refined[i].1,
            }
        })
        .collect();
    Ok((samples, witnesses))
}

/// Numerical spectrum of the renorm's matrix under `|||·|||`.
pub fn renormed_region(spec: &RenormSpec, k: usize, seed: u64) -> Result<Region> {
    let (samples, witnesses) = renormed_support(spec, k, seed)?;
    numspec::build_region(&samples, &witnesses)
}

/// Number of rotation directions intersected per `ω`. Directions are snapped
/// to the sweep grid so that each renorm's contractive direction is sampled.
pub const FAN_SIZE: usize = 16;

/// Grid indices of the fan directions for a `k`-angle sweep.
fn fan_indices(k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..FAN_SIZE)
        .map(|f| ((f * k) as f64 / FAN_SIZE as f64).round() as usize % k)
        .collect();
    idx.dedup();
    idx
}

#[derive(Clone, Debug)]
pub struct HullStep {
    pub omega: f64,
    /// Intersection of the renormed regions over the fan.
    pub region: Region,
    pub radius: f64,
    /// Hausdorff distance from the region to the convex hull of the spectrum.
    pub hausdorff_to_conv_spectrum: f64,
}

#[derive(Clone, Debug)]
pub struct HullReport {
    pub steps: Vec<HullStep>,
    pub fan: usize,
    /// Radii are nonincreasing along the `ω` list.
    pub monotone: bool,
}

/// Intersected renormed regions for a decreasing list of `ω`.
pub fn hull_convergence_report(
    a: &CMatrix,
    base: LpExponent,
    omegas: &[f64],
    k: usize,
    seed: u64,
) -> Result<HullReport> {
    if omegas.is_empty() {
        return Err(Error::input("ω list is empty"));
    }
    if omegas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::input("ω list must be strictly decreasing"));
    }
    let eigs = eigenvalues(a)?;
    let conv_spectrum = geometry::convex_hull(&eigs);
    if k < 3 {
        return Err(Error::input("need at least 3 angles"));
    }
    let fan = fan_indices(k);
    let mut steps = Vec::with_capacity(omegas.len());
    for &omega in omegas {
        let fans: Vec<(Vec<SupportSample>, Vec<C64>)> = fan
            .iter()
            .map(|&i| {
                let theta = TAU * i as f64 / k as f64;
                let spec = build_hildebrandt_norm(a, theta, omega, base, &TimeGrid::default())?;
                renormed_support(&spec, k, seed.wrapping_add(i as u64))
            })
            .collect::<Result<_>>()?;
        let samples: Vec<SupportSample> = (0..k)
            .map(|i| {
                let best = fans
                    .iter()
                    .map(|(s, _)| &s[i])
                    .min_by(|x, y| x.h.total_cmp(&y.h))
                    .expect("fan is nonempty");
                SupportSample {
                    witness: None,
                    ..best.clone()
                }
            })
            .collect();
        let thetas: Vec<f64> = samples.iter().map(|s| s.theta).collect();
        let hs: Vec<f64> = samples.iter().map(|s| s.h).collect();
        let mut inner: Vec<C64> = eigs.clone();
        for (_, ws) in &fans {
            inner.extend(
                ws.iter()
                    .copied()
                    .filter(|&w| geometry::support_margin(&thetas, &hs, w) >= 0.0),
            );
        }
        let region = numspec::build_region(&samples, &inner)?;
        let hausdorff = geometry::hausdorff(&region.outer, &conv_spectrum);
        steps.push(HullStep {
            omega,
            radius: region.radius,
            hausdorff_to_conv_spectrum: hausdorff,
            region,
        });
    }
    let monotone = steps.windows(2).all(|w| w[1].radius <= w[0].radius + 1e-9);
    Ok(HullReport {
        steps,
        fan: fan.len(),
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jordan() -> CMatrix {
        CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn basis_vector_norms_for_jordan_block() {
        let r = build_hildebrandt_norm(&jordan(), 0.0, 1.0, LpExponent::INF, &TimeGrid::default()).unwrap();
        let e1 = [C64::new(1.0, 0.0), ZERO];
        let e2 = [ZERO, C64::new(1.0, 0.0)];
        assert!((r.norm(&e1) - 1.0).abs() < 1e-12);
        assert!((r.norm(&e2) - 1.0).abs() < 1e-12);
        assert!(r.tail() * r.bound() < 1.0);
    }

    #[test]
    fn omega_below_abscissa_is_rejected() {
        let a = CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let e = build_hildebrandt_norm(&a, 0.0, 1.0, LpExponent::TWO, &TimeGrid::default());
        assert!(matches!(e, Err(Error::Input(_))));
    }

    #[test]
    fn refined_peak_beats_grid_and_matches_closed_form() {
        // ‖e^{-ωt}(t, 1)‖₂ peaks at the larger root of ωt² − t + ω = 0.
        let omega = 0.3;
        let r = build_hildebrandt_norm(&jordan(), 0.0, omega, LpExponent::TWO, &TimeGrid::default()).unwrap();
        let pk = r.peak(&[ZERO, C64::new(1.0, 0.0)]);
        let t = (1.0 + (1.0 - 4.0 * omega * omega).sqrt()) / (2.0 * omega);
        let want = (-omega * t).exp() * (1.0 + t * t).sqrt();
        assert!((pk.t - t).abs() < 1e-6, "{} vs {t}", pk.t);
        assert!((pk.value - want).abs() < 1e-13);
    }

    #[test]
    fn pairing_at_peak_respects_contractivity() {
        let omega = 0.25;
        let r = build_hildebrandt_norm(&jordan(), 0.0, omega, LpExponent::TWO, &TimeGrid::default()).unwrap();
        let mut rng = optim::rng(5);
        for _ in 0..500 {
            let x = optim::random_cvec(&mut rng, 2);
            let w = r.renormed_pairing(&x).unwrap();
            // The peak time is located to about sqrt(ε), so the pairing is too.
            assert!(w.re <= omega + 1e-7, "{w}");
        }
    }
}
