//! Logarithmic norms `μ(A) = lim_{h↘0} (‖I + hA‖ − 1) / h`.
//!
//! Three estimators are provided and kept independent of each other:
//!
//! * [`lognorm_closed`]: classical formulas for `p ∈ {1, 2, ∞}`;
//! * [`lognorm_quotient`]: the difference quotient itself on the schedule
//!   `h_k = 2^{-k} s`, which is nonincreasing in `h` and therefore an upper
//!   bound once the operator norm is exact;
//! * [`lognorm_duality`]: the supremum of `Re⟨Ax, j(x)⟩` over the unit
//!   sphere, a lower bound attained by an explicit witness.
//!
//! The support function of the numerical spectrum in direction `θ` is the
//! logarithmic norm of `e^{-iθ} A`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matcore::{
    adjoint_matvec, dual_witness_raw, hermitian_max, lp_grad, lp_norm, matvec, pairing, CMatrix, CVector, LpExponent,
    LpKind, NormSpec, C64,
};
use crate::optim::{self, AscentOptions};
use crate::renorm::RenormSpec;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogNormMethod {
    Closed,
    Quotient,
    Duality,
}

#[derive(Clone, Debug)]
pub struct LogNormResult {
    pub value: f64,
    pub method: LogNormMethod,
    /// Unit vector attaining or approaching the supremum.
    pub witness: Option<CVector>,
    /// `⟨Ax, j⟩` at the witness for the duality functional used.
    pub pairing: Option<C64>,
    /// Convergence diagnostic: eigen-residual, last quotient decrement or
    /// gradient norm depending on the method.
    pub residual: f64,
}

/// `μ_p(A)` in closed form for `p ∈ {1, 2, ∞}`.
pub fn lognorm_closed(a: &CMatrix, p: LpExponent) -> Result<LogNormResult> {
    let n = a.n();
    match p.kind() {
        LpKind::Two => {
            let h = a.hermitian_part();
            let (lmax, v) = hermitian_max(h.inner());
            let v: Vec<C64> = v.iter().copied().collect();
            let j: Vec<C64> = v.iter().map(|z| z.conj()).collect();
            let w = pairing(&a.apply(&v), &j);
            Ok(LogNormResult {
                value: lmax,
                method: LogNormMethod::Closed,
                residual: (w.re - lmax).abs(),
                witness: Some(CVector::from_slice_unchecked(&v)),
                pairing: Some(w),
            })
        }
        LpKind::One => {
            let (col, value) = best_index(n, |j| {
                a.get(j, j).re + (0..n).filter(|&i| i != j).map(|i| a.get(i, j).norm()).sum::<f64>()
            });
            let (x, f) = l1_extreme_pair(a, col);
            let w = pairing(&a.apply(&x), &f);
            Ok(LogNormResult {
                value,
                method: LogNormMethod::Closed,
                residual: (w.re - value).abs(),
                witness: Some(CVector::from_slice_unchecked(&x)),
                pairing: Some(w),
            })
        }
        LpKind::Inf => {
            let (row, value) = best_index(n, |i| {
                a.get(i, i).re + (0..n).filter(|&j| j != i).map(|j| a.get(i, j).norm()).sum::<f64>()
            });
            let (x, f) = linf_extreme_pair(a, row);
            let w = pairing(&a.apply(&x), &f);
            Ok(LogNormResult {
                value,
                method: LogNormMethod::Closed,
                residual: (w.re - value).abs(),
                witness: Some(CVector::from_slice_unchecked(&x)),
                pairing: Some(w),
            })
        }
        LpKind::General(p) => Err(Error::input(format!(
            "no closed-form logarithmic norm for p = {p}; use the quotient or duality estimator"
        ))),
    }
}

fn best_index(n: usize, f: impl Fn(usize) -> f64) -> (usize, f64) {
    (0..n).map(|k| (k, f(k))).fold(
        (0, f64::NEG_INFINITY),
        |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        },
    )
}

fn unit_phase_conj(z: C64) -> C64 {
    if z == ZERO {
        ONE
    } else {
        z.conj() / z.norm()
    }
}

/// Extreme point `e_j` of the `ℓ¹` ball together with the dual-face
/// extreme point that maximizes `Re⟨A e_j, f⟩`.
fn l1_extreme_pair(a: &CMatrix, j: usize) -> (Vec<C64>, Vec<C64>) {
    let n = a.n();
    let mut x = vec![ZERO; n];
    x[j] = ONE;
    let f = (0..n)
        .map(|i| if i == j { ONE } else { unit_phase_conj(a.get(i, j)) })
        .collect();
    (x, f)
}

/// Extreme point of the `ℓ^∞` ball with phases aligned to row `i`, paired
/// with the functional `e_i`.
fn linf_extreme_pair(a: &CMatrix, i: usize) -> (Vec<C64>, Vec<C64>) {
    let n = a.n();
    let x = (0..n)
        .map(|k| if k == i { ONE } else { unit_phase_conj(a.get(i, k)) })
        .collect();
    let mut f = vec![ZERO; n];
    f[i] = ONE;
    (x, f)
}

#[derive(Clone, Copy, Debug)]
pub struct QuotientOptions {
    pub max_halvings: usize,
    /// Stop once successive quotients differ by less than this.
    pub tol: f64,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        QuotientOptions {
            max_halvings: 40,
            tol: 1e-7,
            seed: 0x9e37,
            restarts: 8,
        }
    }
}

/// Difference-quotient estimator with default options.
pub fn lognorm_quotient(a: &CMatrix, norm: &NormSpec) -> Result<LogNormResult> {
    lognorm_quotient_with(a, norm, &QuotientOptions::default())
}

/// The schedule starts at `s = 1 / max(1, ‖A‖₁, ‖A‖_∞)` so that it is
/// invariant under scaling of `A`.
pub fn lognorm_quotient_with(a: &CMatrix, norm: &NormSpec, opts: &QuotientOptions) -> Result<LogNormResult> {
    norm.check_dim(a.n())?;
    let s = 1.0 / a.norm1().max(a.norm_inf()).max(1.0);
    match norm {
        NormSpec::P(p) if p.is_classical() => {
            let q = |h: f64| classical_quotient(a, *p, h);
            run_schedule(s, opts, |h, _| (q(h), None), None)
        }
        NormSpec::P(p) => {
            let starts = initial_points(a.n(), opts.seed, opts.restarts);
            quotient_lp_seeded(a, *p, starts, opts)
        }
        NormSpec::Renormed(r) => {
            let starts = initial_points(a.n(), opts.seed, opts.restarts);
            let seed = opts.seed;
            run_schedule(
                s,
                opts,
                |h, warm: Option<&[Vec<C64>]>| renormed_quotient_step(a.inner(), r, h, warm.unwrap_or(&[]), seed),
                Some(starts),
            )
        }
    }
}

/// General-`p` quotient started from the given points at the first `h`.
pub(crate) fn quotient_lp_seeded(
    a: &CMatrix,
    p: LpExponent,
    starts: Vec<Vec<C64>>,
    opts: &QuotientOptions,
) -> Result<LogNormResult> {
    if starts.is_empty() {
        return Err(Error::input("quotient needs at least one start"));
    }
    let s = 1.0 / a.norm1().max(a.norm_inf()).max(1.0);
    let anchors = pairing_maxima(a, p, &starts);
    run_schedule(
        s,
        opts,
        |h, warm: Option<&[Vec<C64>]>| {
            let mut pts = warm.unwrap_or(&[]).to_vec();
            pts.extend(anchors.iter().cloned());
            lp_quotient_step(a.inner(), p, h, &pts)
        },
        Some(starts),
    )
}

/// Distinct local maximizers of the pairing reached from `starts`. The step
/// objective tends to the pairing as `h → 0`, so these are re-offered at
/// every `h`; otherwise all carried candidates can settle on a branch that
/// is best at large `h` only.
fn pairing_maxima(a: &CMatrix, p: LpExponent, starts: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let opts = AscentOptions {
        max_iter: 5000,
        grad_tol: 1e-9,
        initial_step: 0.25,
    };
    let f = |x: &[C64]| pairing_objective(a.inner(), p.value(), x);
    let results = starts
        .iter()
        .map(|x0| {
            let r = optim::gradient_ascent(f, x0, &opts);
            (r.value, r.x)
        })
        .collect();
    carry_distinct(results).1.unwrap_or_default()
}

type StepOutput = (f64, Option<Vec<Vec<C64>>>);

fn run_schedule<F>(s: f64, opts: &QuotientOptions, mut step: F, starts: Option<Vec<Vec<C64>>>) -> Result<LogNormResult>
where
    F: FnMut(f64, Option<&[Vec<C64>]>) -> StepOutput,
{
    let mut warm = starts;
    let mut prev: Option<f64> = None;
    let mut last = f64::NAN;
    let mut decrement = f64::INFINITY;
    for k in 0..=opts.max_halvings {
        let h = s * 2f64.powi(-(k as i32));
        let (q, next) = step(h, warm.as_deref());
        if !q.is_finite() {
            return Err(Error::numerical(
                format!("difference quotient not finite at h = {h:e}"),
                prev,
            ));
        }
        if next.is_some() {
            warm = next;
        }
        last = q;
        if let Some(pq) = prev {
            decrement = (pq - q).abs();
            if decrement < opts.tol {
                break;
            }
        }
        prev = Some(q);
    }
    let witness = warm.and_then(|w| w.into_iter().next());
    Ok(LogNormResult {
        value: last,
        method: LogNormMethod::Quotient,
        witness: witness.map(|x| CVector::from_slice_unchecked(&x)),
        pairing: None,
        residual: decrement,
    })
}

/// `(‖I + hA‖ − 1)/h` for `p ∈ {1, 2, ∞}`, evaluated without cancellation.
fn classical_quotient(a: &CMatrix, p: LpExponent, h: f64) -> f64 {
    let n = a.n();
    // (|1 + hz| − 1)/h = (2 Re z + h|z|²) / (|1 + hz| + 1)
    let diag_term = |z: C64| (2.0 * z.re + h * z.norm_sqr()) / ((ONE + z * h).norm() + 1.0);
    match p.kind() {
        LpKind::One => (0..n)
            .map(|j| diag_term(a.get(j, j)) + (0..n).filter(|&i| i != j).map(|i| a.get(i, j).norm()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max),
        LpKind::Inf => (0..n)
            .map(|i| diag_term(a.get(i, i)) + (0..n).filter(|&j| j != i).map(|j| a.get(i, j).norm()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max),
        LpKind::Two => {
            // ‖I + hA‖² = 1 + h ν with ν = λ_max(A + Aᴴ + h AᴴA).
            let m = a.inner();
            let sym: DMatrix<C64> = m + m.adjoint() + m.adjoint() * m * C64::new(h, 0.0);
            let sym = (&sym + sym.adjoint()) * C64::new(0.5, 0.0);
            let (nu, _) = hermitian_max(&sym);
            nu / ((1.0 + h * nu).max(0.0).sqrt() + 1.0)
        }
        LpKind::General(_) => unreachable!("classical quotient called with general p"),
    }
}

/// `‖u + hv‖_p − ‖u‖_p` without cancellation.
pub(crate) fn lp_increment(u: &[C64], v: &[C64], h: f64, p: LpExponent) -> f64 {
    // |u_k + h v_k|² − |u_k|² computed exactly up to rounding.
    let sq_inc = |a: C64, b: C64| 2.0 * h * (a.conj() * b).re + h * h * b.norm_sqr();
    let abs_inc = |a: C64, b: C64| {
        let d = sq_inc(a, b);
        let den = (a + b * h).norm() + a.norm();
        if den == 0.0 {
            0.0
        } else {
            d / den
        }
    };
    match p.kind() {
        LpKind::One => u.iter().zip(v).map(|(&a, &b)| abs_inc(a, b)).sum(),
        LpKind::Inf => {
            let m = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
            u.iter()
                .zip(v)
                .map(|(&a, &b)| abs_inc(a, b) + (a.norm() - m))
                .fold(f64::NEG_INFINITY, f64::max)
        }
        LpKind::Two => {
            let nu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
            let d: f64 = u.iter().zip(v).map(|(&a, &b)| sq_inc(a, b)).sum();
            let nu_new = (nu + d).max(0.0);
            d / (nu_new.sqrt() + nu.sqrt())
        }
        LpKind::General(p) => {
            // S = Σ|u_k|^p, ΔS = Σ (|u_k|²)^{p/2}((1 + δ_k/|u_k|²)^{p/2} − 1).
            let m = u.iter().chain(v.iter()).map(|z| z.norm()).fold(0.0, f64::max);
            if m == 0.0 {
                return 0.0;
            }
            let mut s = 0.0;
            let mut ds = 0.0;
            for (&a, &b) in u.iter().zip(v) {
                let (a, b) = (a / m, b / m);
                let r2 = a.norm_sqr();
                let d = sq_inc(a, b);
                s += r2.powf(p / 2.0);
                if r2 > 0.0 {
                    ds += r2.powf(p / 2.0) * ((p / 2.0) * (d / r2).ln_1p()).exp_m1();
                } else {
                    ds += (a + b * h).norm().powf(p);
                }
            }
            if s == 0.0 {
                return m * ds.powf(1.0 / p);
            }
            m * s.powf(1.0 / p) * ((1.0 / p) * (ds / s).ln_1p()).exp_m1()
        }
    }
}

fn initial_points(n: usize, seed: u64, restarts: usize) -> Vec<Vec<C64>> {
    let mut rng = optim::rng(seed);
    let mut pts: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            let mut e = vec![ZERO; n];
            e[k] = ONE;
            e
        })
        .collect();
    pts.push(vec![ONE; n]);
    for _ in 0..restarts {
        pts.push(optim::random_cvec(&mut rng, n));
    }
    pts
}

/// Number of candidates carried along the `h` schedule.
const CARRY: usize = 3;

/// Unit vector with the phase of its largest entry removed, so that
/// maximizers differing only by a scalar compare equal.
fn canonical(x: &[C64]) -> Vec<C64> {
    let k = (0..x.len())
        .max_by(|&i, &j| x[i].norm().total_cmp(&x[j].norm()))
        .unwrap_or(0);
    let n = crate::matcore::norm2_slice(x);
    if n == 0.0 || x[k].norm() == 0.0 {
        return x.to_vec();
    }
    let phase = x[k].conj() / x[k].norm();
    x.iter().map(|z| z * phase / n).collect()
}

/// Best value and up to `CARRY` distinct candidates. Several starts often
/// land on the same local maximum at large `h`; keeping copies of it would
/// drop the branch that is best as `h → 0`.
fn carry_distinct(mut results: Vec<(f64, Vec<C64>)>) -> StepOutput {
    results.sort_by(|a, b| b.0.total_cmp(&a.0));
    let best = results[0].0;
    let mut kept: Vec<Vec<C64>> = Vec::with_capacity(CARRY);
    let mut seen: Vec<Vec<C64>> = Vec::with_capacity(CARRY);
    for (_, x) in results {
        let c = canonical(&x);
        let duplicate = seen
            .iter()
            .any(|d| d.iter().zip(&c).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) < 1e-4);
        if !duplicate {
            seen.push(c);
            kept.push(x);
            if kept.len() == CARRY {
                break;
            }
        }
    }
    (best, Some(kept))
}

/// One step of the general-`p` quotient: maximize
/// `q_h(x) = (‖x + hAx‖ − ‖x‖)/(h‖x‖)` from each warm start.
fn lp_quotient_step(a: &DMatrix<C64>, p: LpExponent, h: f64, warm: &[Vec<C64>]) -> StepOutput {
    let objective = |x: &[C64]| -> (f64, Vec<C64>) {
        let ax = matvec(a, x);
        let nx = lp_norm(x, p);
        let inc = lp_increment(x, &ax, h, p);
        let value = inc / (h * nx);
        // ∇q = [Mᴴ g(Mx) − (‖Mx‖/‖x‖) g(x)] / (h ‖x‖),  M = I + hA
        let y: Vec<C64> = x.iter().zip(&ax).map(|(a, b)| a + b * h).collect();
        let ny = nx + inc;
        let gy = lp_grad(&y, p);
        let gx = lp_grad(x, p);
        let agy = adjoint_matvec(a, &gy);
        let grad = (0..x.len())
            .map(|k| ((gy[k] - gx[k] * (ny / nx)) / h + agy[k]) / nx)
            .collect();
        (value, grad)
    };
    let opts = AscentOptions {
        max_iter: 2000,
        grad_tol: 1e-10 + 1e-15 / h,
        initial_step: 0.1,
    };
    let results: Vec<(f64, Vec<C64>)> = warm
        .iter()
        .map(|x0| {
            let r = optim::gradient_ascent(objective, x0, &opts);
            (r.value, r.x)
        })
        .collect();
    carry_distinct(results)
}

fn renormed_quotient_step(a: &DMatrix<C64>, r: &RenormSpec, h: f64, warm: &[Vec<C64>], seed: u64) -> StepOutput {
    let objective = |x: &[C64]| r.quotient_objective(a, x, h);
    let mut rng = optim::rng(seed ^ h.to_bits());
    let results: Vec<(f64, Vec<C64>)> = warm
        .iter()
        .map(|x0| {
            let res = optim::pattern_ascent(&objective, x0, 0.2, &mut rng, 1500, 1e-8);
            (res.value, res.x)
        })
        .collect();
    carry_distinct(results)
}

/// `Re⟨Ax, j(x)⟩ / ‖x‖²` for `1 < p < ∞` and its real gradient.
fn pairing_objective(a: &DMatrix<C64>, p: f64, x: &[C64]) -> (f64, Vec<C64>) {
    let v = matvec(a, x);
    let mut u = vec![ZERO; x.len()];
    let mut gpart = vec![ZERO; x.len()];
    let mut d = 0.0;
    for k in 0..x.len() {
        let r = x[k].norm();
        if r < 1e-300 {
            continue;
        }
        let phase = x[k] / r;
        let rp2 = r.powf(p - 2.0);
        u[k] = x[k] * rp2;
        d += r.powf(p);
        let c = phase.conj() * v[k];
        gpart[k] = phase * rp2 * C64::new((p - 1.0) * c.re, c.im);
    }
    if d == 0.0 {
        return (f64::NEG_INFINITY, vec![ZERO; x.len()]);
    }
    let num: f64 = u.iter().zip(&v).map(|(a, b)| (a.conj() * b).re).sum();
    let f = num / d;
    let au = adjoint_matvec(a, &u);
    let grad = (0..x.len()).map(|k| (gpart[k] + au[k] - u[k] * (p * f)) / d).collect();
    (f, grad)
}

/// Supremum of `Re⟨Ax, j(x)⟩` over `‖x‖_p = 1`.
///
/// For `1 < p < ∞` the duality map is single valued and smooth; the pairing
/// is maximized by gradient ascent from `restarts` seeded random starts plus
/// the coordinate vectors. For `p ∈ {1, ∞}` the extreme points of the unit
/// ball are enumerated together with the extreme points of their dual faces,
/// which is exact.
pub fn lognorm_duality(a: &CMatrix, p: LpExponent, seed: u64, restarts: usize) -> Result<LogNormResult> {
    let n = a.n();
    match p.kind() {
        LpKind::One | LpKind::Inf => {
            let mut best: Option<(f64, Vec<C64>, Vec<C64>, C64)> = None;
            for k in 0..n {
                let (x, f) = if p.kind() == LpKind::One {
                    l1_extreme_pair(a, k)
                } else {
                    linf_extreme_pair(a, k)
                };
                let w = pairing(&a.apply(&x), &f);
                if best.as_ref().is_none_or(|b| w.re > b.0) {
                    best = Some((w.re, x, f, w));
                }
            }
            let (value, x, _, w) = best.expect("n >= 1");
            Ok(LogNormResult {
                value,
                method: LogNormMethod::Duality,
                witness: Some(CVector::from_slice_unchecked(&x)),
                pairing: Some(w),
                residual: 0.0,
            })
        }
        LpKind::Two | LpKind::General(_) => {
            let pv = p.value();
            let opts = AscentOptions {
                max_iter: 20000,
                grad_tol: 1e-11,
                initial_step: 0.25,
            };
            let f = |x: &[C64]| pairing_objective(a.inner(), pv, x);
            let mut best: Option<optim::AscentResult> = None;
            for x0 in initial_points(n, seed, restarts) {
                let r = optim::gradient_ascent(f, &x0, &opts);
                if best.as_ref().is_none_or(|b| r.value > b.value) {
                    best = Some(r);
                }
            }
            let best = best.expect("at least one start");
            let scale = lp_norm(&best.x, p);
            let x: Vec<C64> = best.x.iter().map(|z| z / scale).collect();
            let (value, grad) = pairing_objective(a.inner(), pv, &x);
            let j = dual_witness_raw(&x, p);
            let w = pairing(&a.apply(&x), &j);
            let residual = crate::matcore::norm2_slice(&grad);
            Ok(LogNormResult {
                value,
                method: LogNormMethod::Duality,
                witness: Some(CVector::from_slice_unchecked(&x)),
                pairing: Some(w),
                residual,
            })
        }
    }
}

/// `⟨Ax, j(x)⟩ / ‖x‖²` with the canonical duality selection.
pub fn pairing_at(a: &CMatrix, x: &CVector, p: LpExponent) -> Result<C64> {
    if x.len() != a.n() {
        return Err(Error::input("dimension mismatch"));
    }
    let nx = lp_norm(x.as_slice(), p);
    if nx == 0.0 {
        return Err(Error::input("pairing at the zero vector is undefined"));
    }
    let j = dual_witness_raw(x.as_slice(), p);
    Ok(pairing(&a.apply(x.as_slice()), &j) / (nx * nx))
}

/// Samples of the numerical range `{⟨Ax, j(x)⟩ : ‖x‖_p = 1}`.
///
/// Returns `count` pairings at seeded random unit vectors followed by the
/// duality-optimizer witnesses for eight rotations of `A`, which lie on the
/// boundary of the numerical spectrum.
pub fn sample_numrange(a: &CMatrix, p: LpExponent, count: usize, seed: u64) -> Result<Vec<C64>> {
    if count == 0 {
        return Err(Error::input("sample count must be >= 1"));
    }
    let n = a.n();
    let mut rng = optim::rng(seed);
    let mut out = Vec::with_capacity(count + 8);
    for i in 0..count {
        let mut x = optim::random_cvec(&mut rng, n);
        // Half of the samples for p ∈ {1, ∞} sit on lower-dimensional faces
        // of the unit ball, where the duality set is largest.
        if i % 2 == 1 && n > 1 {
            match p.kind() {
                LpKind::One => {
                    let keep = 1 + (i / 2) % n;
                    let offset = (i / 2) % n;
                    for (k, z) in x.iter_mut().enumerate() {
                        if (k + n - offset) % n >= keep {
                            *z = ZERO;
                        }
                    }
                }
                LpKind::Inf => {
                    for z in x.iter_mut() {
                        if *z != ZERO {
                            *z /= z.norm();
                        }
                    }
                }
                _ => {}
            }
        }
        let nx = lp_norm(&x, p);
        if nx == 0.0 {
            continue;
        }
        let j = dual_witness_raw(&x, p);
        out.push(pairing(&matvec(a.inner(), &x), &j) / (nx * nx));
    }
    for m in 0..8 {
        let theta = std::f64::consts::TAU * m as f64 / 8.0;
        let r = lognorm_duality(&a.rotated(theta), p, seed.wrapping_add(m as u64), 4)?;
        if let Some(w) = r.pairing {
            out.push(w * C64::from_polar(1.0, theta));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jordan() -> CMatrix {
        CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert!((lognorm_closed(&jordan(), LpExponent::TWO).unwrap().value - 0.5).abs() < 1e-14);
        assert_eq!(lognorm_closed(&jordan(), LpExponent::ONE).unwrap().value, 1.0);
        let b = CMatrix::from_real(2, &[2.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(lognorm_closed(&b, LpExponent::ONE).unwrap().value, 2.0);
        assert!(lognorm_closed(&b, LpExponent::new(3.0).unwrap()).is_err());
    }

    #[test]
    fn closed_form_witness_attains_value() {
        let a = CMatrix::from_row_major(
            3,
            &[
                C64::new(0.2, 1.0),
                C64::new(-1.0, 0.3),
                C64::new(0.0, 0.5),
                C64::new(0.4, 0.0),
                C64::new(-0.7, -0.2),
                C64::new(1.1, 0.0),
                C64::new(0.0, -0.9),
                C64::new(0.3, 0.3),
                C64::new(0.5, 0.1),
            ],
        )
        .unwrap();
        for p in [LpExponent::ONE, LpExponent::TWO, LpExponent::INF] {
            let r = lognorm_closed(&a, p).unwrap();
            assert!((r.pairing.unwrap().re - r.value).abs() < 1e-12, "p = {p}");
            assert!((lp_norm(r.witness.unwrap().as_slice(), p) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn quotient_examples() {
        let z = CMatrix::zeros(2);
        assert_eq!(lognorm_quotient(&z, &NormSpec::P(LpExponent::TWO)).unwrap().value, 0.0);
        let q = lognorm_quotient(&jordan(), &NormSpec::P(LpExponent::TWO)).unwrap();
        assert!((q.value - 0.5).abs() < 1e-6, "{}", q.value);
        let d = CMatrix::diag(&[C64::new(1.0, 1.0), C64::new(-1.0, 0.0)]).unwrap();
        let q = lognorm_quotient(&d, &NormSpec::inf()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-6, "{}", q.value);
    }

    #[test]
    fn quotient_general_p_on_jordan_block() {
        // The numerical spectrum of the Jordan block is a disk, so μ at θ = 0
        // equals the numerical radius.
        for (p, want) in [
            (3.0, (2.0f64 / 3.0).powf(2.0 / 3.0) * (1.0f64 / 3.0).powf(1.0 / 3.0)),
            (4.0, 0.75f64.powf(0.75) * 0.25f64.powf(0.25)),
        ] {
            let q = lognorm_quotient(&jordan(), &NormSpec::p(p).unwrap()).unwrap();
            assert!((q.value - want).abs() < 1e-5, "p = {p}: {} vs {want}", q.value);
        }
    }

    #[test]
    fn duality_examples() {
        let r = lognorm_duality(&jordan(), LpExponent::TWO, 1, 8).unwrap();
        assert!((r.value - 0.5).abs() < 1e-10);
        let x = r.witness.unwrap();
        let h = 0.5f64.sqrt();
        assert!((x.as_slice()[0].norm() - h).abs() < 1e-6 && (x.as_slice()[1].norm() - h).abs() < 1e-6);
        assert!(r.residual < 1e-6);

        let d = CMatrix::diag(&[C64::new(2.0, 0.0), C64::new(-1.0, 0.0)]).unwrap();
        let r = lognorm_duality(&d, LpExponent::TWO, 1, 8).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!((r.witness.unwrap().as_slice()[0].norm() - 1.0).abs() < 1e-6);

        let want = 0.75f64.powf(0.75) * 0.25f64.powf(0.25);
        let r = lognorm_duality(&jordan(), LpExponent::new(4.0).unwrap(), 1, 8).unwrap();
        assert!((r.value - want).abs() < 1e-8, "{} vs {want}", r.value);
        assert!((want - 0.5699).abs() < 1e-4);
    }

    #[test]
    fn pairing_gradient_matches_finite_differences() {
        let a = CMatrix::from_row_major(
            2,
            &[
                C64::new(0.3, -0.2),
                C64::new(1.0, 0.4),
                C64::new(-0.6, 0.0),
                C64::new(0.1, 0.8),
            ],
        )
        .unwrap();
        let x = vec![C64::new(0.7, 0.2), C64::new(-0.4, 0.5)];
        for p in [1.5, 2.0, 3.0] {
            let (_, g) = pairing_objective(a.inner(), p, &x);
            let eps = 1e-6;
            for k in 0..2 {
                for dir in [ONE, C64::new(0.0, 1.0)] {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[k] += dir * eps;
                    xm[k] -= dir * eps;
                    let fd =
                        (pairing_objective(a.inner(), p, &xp).0 - pairing_objective(a.inner(), p, &xm).0) / (2.0 * eps);
                    let an = (g[k].conj() * dir).re;
                    assert!((fd - an).abs() < 1e-6, "p={p} k={k}: {fd} vs {an}");
                }
            }
        }
    }

    #[test]
    fn lp_increment_is_cancellation_free() {
        let u = vec![C64::new(0.6, 0.1), C64::new(-0.3, 0.7)];
        let v = vec![C64::new(1.0, -2.0), C64::new(0.5, 0.5)];
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let p = LpExponent::new(p).unwrap();
            let h = 1e-3;
            let y: Vec<C64> = u.iter().zip(&v).map(|(a, b)| a + b * h).collect();
            let direct = lp_norm(&y, p) - lp_norm(&u, p);
            assert!((lp_increment(&u, &v, h, p) - direct).abs() < 1e-12, "p = {p}");
            // derivative limit at tiny h
            let tiny = 1e-12;
            let q = lp_increment(&u, &v, tiny, p) / tiny;
            let q2 = lp_increment(&u, &v, 2.0 * tiny, p) / (2.0 * tiny);
            assert!((q - q2).abs() < 1e-8, "p = {p}: {q} vs {q2}");
        }
    }

    #[test]
    fn numrange_samples_follow_examples() {
        let a = jordan();
        let e1 = CVector::from_real(&[1.0, 0.0]).unwrap();
        assert_eq!(pairing_at(&a, &e1, LpExponent::TWO).unwrap(), ZERO);
        let h = 0.5f64.sqrt();
        let x = CVector::from_real(&[h, h]).unwrap();
        assert!((pairing_at(&a, &x, LpExponent::TWO).unwrap() - C64::new(0.5, 0.0)).norm() < 1e-15);
        // The cone example pairs x = (0, 1) with the functional j = (1, 1).
        let b = CMatrix::from_real(2, &[2.0, 1.0, 0.0, 0.0]).unwrap();
        let w = pairing(&b.apply(&[ZERO, ONE]), &[ONE, ONE]);
        assert_eq!(w, ONE);

        let s1 = sample_numrange(&b, LpExponent::ONE, 50, 3).unwrap();
        let s2 = sample_numrange(&b, LpExponent::ONE, 50, 3).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), 58);
        let mu = lognorm_closed(&b, LpExponent::ONE).unwrap().value;
        assert!(s1.iter().all(|w| w.re <= mu + 1e-12));
    }
}
