//! Vector `ℓᵖ` norms, duality witnesses and induced operator norms.

use nalgebra::DMatrix;

use super::{adjoint_matvec, matvec, CMatrix, CVector, LpExponent, LpKind, NormSpec, C64};
use crate::error::{Error, Result};
use crate::optim;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub(crate) fn lp_norm(x: &[C64], p: LpExponent) -> f64 {
    match p.kind() {
        LpKind::One => x.iter().map(|z| z.norm()).sum(),
        LpKind::Inf => x.iter().map(|z| z.norm()).fold(0.0, f64::max),
        LpKind::Two => {
            let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if m == 0.0 {
                return 0.0;
            }
            m * x.iter().map(|z| (z.norm() / m).powi(2)).sum::<f64>().sqrt()
        }
        LpKind::General(p) => {
            let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if m == 0.0 {
                return 0.0;
            }
            m * x.iter().map(|z| (z.norm() / m).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }
}

pub fn vec_norm(x: &CVector, norm: &NormSpec) -> Result<f64> {
    norm.check_dim(x.len())?;
    Ok(norm.eval(x.as_slice()))
}

/// Bilinear pairing `⟨y, f⟩ = Σ_k y_k f_k`.
pub fn pairing(y: &[C64], f: &[C64]) -> C64 {
    y.iter().zip(f).map(|(a, b)| a * b).sum()
}

/// One element `j(x)` of the duality set, with `⟨x, j(x)⟩ = ‖x‖²` and
/// `‖j(x)‖_q = ‖x‖`. Conjugation lives inside `j`.
///
/// For `p ∈ {1, ∞}` the set is multivalued; the selection puts mass on
/// every nonzero coordinate (`p = 1`) or on the first coordinate of maximal
/// modulus (`p = ∞`).
pub fn dual_witness(x: &CVector, p: LpExponent) -> Result<CVector> {
    if x.as_slice().iter().all(|z| *z == ZERO) {
        return Err(Error::input("duality witness of the zero vector is undefined"));
    }
    Ok(CVector::from_slice_unchecked(&dual_witness_raw(x.as_slice(), p)))
}

pub(crate) fn dual_witness_raw(x: &[C64], p: LpExponent) -> Vec<C64> {
    let nx = lp_norm(x, p);
    if nx == 0.0 {
        return vec![ZERO; x.len()];
    }
    match p.kind() {
        LpKind::One => x
            .iter()
            .map(|z| if *z == ZERO { ZERO } else { z.conj() / z.norm() * nx })
            .collect(),
        LpKind::Inf => {
            let (m, _) = x.iter().enumerate().fold(
                (0, -1.0),
                |(bi, bv), (i, z)| {
                    if z.norm() > bv {
                        (i, z.norm())
                    } else {
                        (bi, bv)
                    }
                },
            );
            let mut j = vec![ZERO; x.len()];
            j[m] = x[m].conj() / x[m].norm() * nx;
            j
        }
        LpKind::Two => x.iter().map(|z| z.conj()).collect(),
        LpKind::General(p) => x
            .iter()
            .map(|z| {
                let r = z.norm();
                if r == 0.0 {
                    ZERO
                } else {
                    z.conj() / r * (nx * (r / nx).powf(p - 1.0))
                }
            })
            .collect(),
    }
}

/// Real gradient of `y ↦ ‖y‖_p` for `1 < p < ∞`, as a complex vector `g`
/// with `d‖y‖ = Re Σ conj(g_k) dy_k`. Equals `conj(j(y)) / ‖y‖`.
pub(crate) fn lp_grad(y: &[C64], p: LpExponent) -> Vec<C64> {
    let ny = lp_norm(y, p);
    if ny == 0.0 {
        return vec![ZERO; y.len()];
    }
    dual_witness_raw(y, p).into_iter().map(|j| j.conj() / ny).collect()
}

/// Unit vector in `ℓᵖ` maximizing `Re Σ conj(z_k) x_k`; the maximum equals
/// `‖z‖_q`.
pub(crate) fn dual_maximizer(z: &[C64], p: LpExponent) -> Vec<C64> {
    let q = p.conjugate();
    let nz = lp_norm(z, q);
    if nz == 0.0 {
        let mut x = vec![ZERO; z.len()];
        x[0] = C64::new(1.0, 0.0);
        return x;
    }
    // The maximizer is the conjugate of j_q(z) scaled to unit p-norm.
    match q.kind() {
        LpKind::Inf => {
            let j = dual_witness_raw(z, q);
            j.iter().map(|c| c.conj() / nz).collect()
        }
        LpKind::One => z
            .iter()
            .map(|c| if *c == ZERO { C64::new(1.0, 0.0) } else { c / c.norm() })
            .collect(),
        _ => dual_witness_raw(z, q).iter().map(|c| c.conj() / nz).collect(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OpNormOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Relative stationarity tolerance.
    pub tol: f64,
}

impl Default for OpNormOptions {
    fn default() -> Self {
        OpNormOptions {
            restarts: 16,
            seed: 0x5eed,
            max_iter: 4000,
            tol: 1e-12,
        }
    }
}

/// Result of an operator norm evaluation. For closed forms `residual` is 0
/// and `converged` is true; for iterative paths `value` is a lower bound.
#[derive(Clone, Debug)]
pub struct OpNormEstimate {
    pub value: f64,
    pub residual: f64,
    pub converged: bool,
    pub maximizer: Option<Vec<C64>>,
}

impl OpNormEstimate {
    fn exact(value: f64) -> Self {
        OpNormEstimate {
            value,
            residual: 0.0,
            converged: true,
            maximizer: None,
        }
    }
}

/// Induced operator norm. Iterative paths that fail to converge return a
/// numerical error carrying the best lower bound.
pub fn op_norm(a: &CMatrix, norm: &NormSpec) -> Result<f64> {
    let est = op_norm_estimate(a, norm, &OpNormOptions::default())?;
    if est.converged {
        Ok(est.value)
    } else {
        Err(Error::numerical(
            format!("operator norm ascent did not converge (residual {:e})", est.residual),
            Some(est.value),
        ))
    }
}

pub fn op_norm_estimate(a: &CMatrix, norm: &NormSpec, opts: &OpNormOptions) -> Result<OpNormEstimate> {
    norm.check_dim(a.n())?;
    match norm {
        NormSpec::P(p) => Ok(match p.kind() {
            LpKind::One => OpNormEstimate::exact(a.norm1()),
            LpKind::Inf => OpNormEstimate::exact(a.norm_inf()),
            LpKind::Two => OpNormEstimate::exact(a.norm2()),
            LpKind::General(_) => lp_power_method(a.inner(), *p, opts),
        }),
        NormSpec::Renormed(r) => Ok(renormed_op_norm(a.inner(), r, opts)),
    }
}

/// Boyd's power iteration for `max ‖Ax‖_p / ‖x‖_p`: each step maximizes
/// the tangent linearization of `‖Ax‖_p` over the unit `p`-ball, so the
/// objective never decreases. The residual is the Hölder gap
/// `‖Aᴴ g‖_q − ‖Ax‖_p ≥ 0`, zero exactly at stationary points.
fn lp_power_method(a: &DMatrix<C64>, p: LpExponent, opts: &OpNormOptions) -> OpNormEstimate {
    let n = a.nrows();
    let q = p.conjugate();
    let mut rng = optim::rng(opts.seed);
    let mut starts: Vec<Vec<C64>> = Vec::with_capacity(opts.restarts.max(2));
    let best_col = (0..n)
        .max_by(|&i, &j| {
            let ci: Vec<C64> = a.column(i).iter().copied().collect();
            let cj: Vec<C64> = a.column(j).iter().copied().collect();
            lp_norm(&ci, p).total_cmp(&lp_norm(&cj, p))
        })
        .unwrap_or(0);
    let mut e = vec![ZERO; n];
    e[best_col] = C64::new(1.0, 0.0);
    starts.push(e);
    starts.push(vec![C64::new(1.0, 0.0); n]);
    while starts.len() < opts.restarts.max(2) {
        starts.push(optim::random_cvec(&mut rng, n));
    }

    let mut best = OpNormEstimate {
        value: 0.0,
        residual: f64::INFINITY,
        converged: false,
        maximizer: None,
    };
    for start in starts {
        let s = lp_norm(&start, p);
        let mut x: Vec<C64> = start.iter().map(|z| z / s).collect();
        let mut value = 0.0;
        let mut residual = f64::INFINITY;
        let mut converged = false;
        for _ in 0..opts.max_iter {
            let y = matvec(a, &x);
            value = lp_norm(&y, p);
            if value == 0.0 {
                residual = 0.0;
                converged = true;
                break;
            }
            let g = lp_grad(&y, p);
            let z = adjoint_matvec(a, &g);
            let bound = lp_norm(&z, q);
            residual = (bound - value).max(0.0);
            if residual <= opts.tol * value {
                converged = true;
                break;
            }
            x = dual_maximizer(&z, p);
        }
        if value > best.value || best.maximizer.is_none() {
            best = OpNormEstimate {
                value,
                residual,
                converged,
                maximizer: Some(x),
            };
        }
    }
    best
}

fn renormed_op_norm(a: &DMatrix<C64>, r: &crate::renorm::RenormSpec, opts: &OpNormOptions) -> OpNormEstimate {
    let n = a.nrows();
    let ratio = |x: &[C64]| {
        let nx = r.norm(x);
        if nx == 0.0 {
            return f64::NEG_INFINITY;
        }
        r.norm(&matvec(a, x)) / nx
    };
    let mut rng = optim::rng(opts.seed);
    let mut starts: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            let mut e = vec![ZERO; n];
            e[k] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    for _ in 0..opts.restarts.max(4) * 4 {
        starts.push(optim::random_cvec(&mut rng, n));
    }
    starts.sort_by(|u, v| ratio(v).total_cmp(&ratio(u)));
    starts.truncate(opts.restarts.max(1));
    let mut best = OpNormEstimate {
        value: 0.0,
        residual: f64::INFINITY,
        converged: false,
        maximizer: None,
    };
    for start in starts {
        let res = optim::pattern_ascent(&ratio, &start, 0.3, &mut rng, 3000, 1e-9);
        if res.value > best.value || best.maximizer.is_none() {
            best = OpNormEstimate {
                value: res.value,
                residual: res.step,
                converged: res.converged,
                maximizer: Some(res.x),
            };
        }
    }
    best
}
