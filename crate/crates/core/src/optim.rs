//! Local ascent on the complex unit sphere.
//!
//! All objectives optimized here are invariant under positive scaling of
//! their argument, so iterates are kept at unit Euclidean length and the
//! caller renormalizes to whatever norm it reports in.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{norm2_slice, C64};

pub(crate) type Rng64 = ChaCha8Rng;

pub(crate) fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian vector (`E|z_k|² = 1`).
pub(crate) fn random_cvec(rng: &mut Rng64, n: usize) -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * s, im * s)
        })
        .collect()
}

pub(crate) fn normalize(x: &mut [C64]) {
    let n = norm2_slice(x);
    if n > 0.0 {
        for z in x.iter_mut() {
            *z /= n;
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct AscentResult {
    pub x: Vec<C64>,
    pub value: f64,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct AscentOptions {
    pub max_iter: usize,
    pub grad_tol: f64,
    pub initial_step: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            max_iter: 5000,
            grad_tol: 1e-9,
            initial_step: 0.25,
        }
    }
}

/// Gradient ascent with Armijo backtracking and a growing trial step.
/// `f` returns the value and the real gradient written as a complex vector
/// (`df = Re Σ conj(g_k) dx_k`).
pub(crate) fn gradient_ascent<F>(f: F, x0: &[C64], opts: &AscentOptions) -> AscentResult
where
    F: Fn(&[C64]) -> (f64, Vec<C64>),
{
    let mut x = x0.to_vec();
    normalize(&mut x);
    let (mut fx, mut g) = f(&x);
    let mut step = opts.initial_step;
    for _ in 0..opts.max_iter {
        let gn = norm2_slice(&g);
        if !gn.is_finite() || gn <= opts.grad_tol {
            break;
        }
        let mut accepted = false;
        while step > 1e-18 {
            let mut xn: Vec<C64> = x.iter().zip(&g).map(|(a, b)| a + b * step).collect();
            normalize(&mut xn);
            let (fnew, gnew) = f(&xn);
            // Strict increase: once the Armijo term is below an ulp, equal
            // values would otherwise be accepted forever.
            if fnew.is_finite() && fnew > fx && fnew >= fx + 1e-4 * step * gn * gn {
                x = xn;
                fx = fnew;
                g = gnew;
                step = (step * 2.0).min(1e3);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No ascent step exists at machine precision.
            break;
        }
    }
    AscentResult { x, value: fx }
}

#[derive(Clone, Debug)]
pub(crate) struct PatternResult {
    pub x: Vec<C64>,
    pub value: f64,
    /// Final mutation radius.
    pub step: f64,
    pub converged: bool,
}

/// Derivative-free (1+1) evolution strategy with the one-fifth success
/// rule. Suitable for objectives that are only piecewise smooth.
pub(crate) fn pattern_ascent<F>(
    f: &F,
    x0: &[C64],
    sigma0: f64,
    rng: &mut Rng64,
    max_evals: usize,
    sigma_min: f64,
) -> PatternResult
where
    F: Fn(&[C64]) -> f64,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    normalize(&mut x);
    let mut fx = f(&x);
    let mut sigma = sigma0;
    let grow = 1.5f64;
    let shrink = grow.powf(-0.25);
    for _ in 0..max_evals {
        if sigma < sigma_min {
            return PatternResult {
                x,
                value: fx,
                step: sigma,
                converged: true,
            };
        }
        let xi = random_cvec(rng, n);
        let scale = sigma / (n as f64).sqrt();
        let mut cand: Vec<C64> = x.iter().zip(&xi).map(|(a, b)| a + b * scale).collect();
        normalize(&mut cand);
        let fc = f(&cand);
        if fc > fx {
            x = cand;
            fx = fc;
            sigma *= grow;
        } else {
            sigma *= shrink;
        }
        sigma = sigma.min(2.0);
    }
    PatternResult {
        x,
        value: fx,
        step: sigma,
        converged: sigma < sigma_min,
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    // Endpoints are candidates too: the maximum may sit on the boundary.
    [(lo, f(lo)), (hi, f(hi)), (c, fc), (d, fd)]
        .into_iter()
        .fold(
            (lo, f64::NEG_INFINITY),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        )
}

#[cfg(test)]
mod tests {
    use super::*;

    // Rayleigh quotient of diag(3, 1, -2): maximum 3 at e₁.
    fn rayleigh(x: &[C64]) -> (f64, Vec<C64>) {
        let d = [3.0, 1.0, -2.0];
        let nn: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let num: f64 = x.iter().zip(d).map(|(z, w)| w * z.norm_sqr()).sum();
        let v = num / nn;
        let g = x.iter().zip(d).map(|(z, w)| z * (2.0 * (w - v) / nn)).collect();
        (v, g)
    }

    #[test]
    fn gradient_ascent_finds_top_eigenvalue() {
        let x0 = vec![C64::new(0.3, 0.1), C64::new(1.0, 0.0), C64::new(0.5, -0.2)];
        let r = gradient_ascent(rayleigh, &x0, &AscentOptions::default());
        assert!((r.value - 3.0).abs() < 1e-12);
        assert!(norm2_slice(&rayleigh(&r.x).1) < 1e-6, "{r:?}");
    }

    #[test]
    fn pattern_ascent_is_deterministic_and_accurate() {
        let f = |x: &[C64]| rayleigh(x).0;
        let x0 = vec![C64::new(0.3, 0.1), C64::new(1.0, 0.0), C64::new(0.5, -0.2)];
        let a = pattern_ascent(&f, &x0, 0.5, &mut rng(7), 4000, 1e-10);
        let b = pattern_ascent(&f, &x0, 0.5, &mut rng(7), 4000, 1e-10);
        assert_eq!(a.value, b.value);
        assert!((a.value - 3.0).abs() < 1e-9);
    }

    #[test]
    fn golden_section_interior_and_boundary() {
        let (x, fx) = golden_max(|t| -(t - 0.3).powi(2), 0.0, 1.0, 60);
        assert!((x - 0.3).abs() < 1e-8 && fx.abs() < 1e-15);
        let (x, _) = golden_max(|t| t, -1.0, 2.0, 60);
        assert_eq!(x, 2.0);
    }
}
