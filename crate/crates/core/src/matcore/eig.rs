use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use super::{op_norm_estimate, CMatrix, LpKind, NormSpec, OpNormOptions, C64};
use crate::error::{Error, Result};

/// Eigenvalues with multiplicity, sorted by real part then imaginary part.
///
/// Computed from the complex Schur form (Hessenberg reduction followed by
/// shifted QR sweeps).
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let n = a.n();
    if n == 1 {
        return Ok(vec![a.get(0, 0)]);
    }
    let scale = a.norm1().max(f64::MIN_POSITIVE);
    let schur = nalgebra::Schur::try_new(a.inner().clone(), f64::EPSILON * 0.5, 200 * n)
        .ok_or_else(|| Error::numerical("Schur iteration did not converge", None))?;
    let (_, t) = schur.unpack();
    // Sub-diagonal entries must have deflated; a leftover block would mean
    // the diagonal is not the spectrum.
    for k in 1..n {
        if t[(k, k - 1)].norm() > 1e-10 * scale {
            return Err(Error::numerical(format!("Schur form did not deflate at row {k}"), None));
        }
    }
    let mut ev: Vec<C64> = (0..n).map(|k| t[(k, k)]).collect();
    ev.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(ev)
}

/// `max_k Re λ_k(A)`.
pub fn spectral_abscissa(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Largest eigenvalue of a Hermitian matrix and a unit eigenvector.
pub(crate) fn hermitian_max(h: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let eig = SymmetricEigen::new(h.clone());
    let (k, &v) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    let vec = eig.eigenvectors.column(k).into_owned();
    (v, vec)
}

pub(crate) fn sigma_max(m: &DMatrix<C64>) -> f64 {
    SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub(crate) fn sigma_min(m: &DMatrix<C64>) -> f64 {
    SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn spectrum_distance(eigs: &[C64], lambda: C64) -> f64 {
    eigs.iter().map(|e| (e - lambda).norm()).fold(f64::INFINITY, f64::min)
}

/// `‖(λ − A)^{-1}‖` in the given norm.
pub fn resolvent_norm(a: &CMatrix, lambda: C64, norm: &NormSpec) -> Result<f64> {
    if !super::is_finite(lambda) {
        return Err(Error::input("λ must be finite"));
    }
    norm.check_dim(a.n())?;
    let eigs = eigenvalues(a)?;
    let d = spectrum_distance(&eigs, lambda);
    if d <= 1e-10 * (1.0 + lambda.norm()) {
        return Err(Error::Singular { lambda, distance: d });
    }
    resolvent_norm_unchecked(a, lambda, norm)
}

/// Resolvent norm without the spectral-distance precheck. Callers that
/// evaluate many `λ` compute the spectrum once and screen themselves.
pub(crate) fn resolvent_norm_unchecked(a: &CMatrix, lambda: C64, norm: &NormSpec) -> Result<f64> {
    let n = a.n();
    let shifted = DMatrix::<C64>::identity(n, n) * lambda - a.inner();
    if let NormSpec::P(p) = norm {
        if p.kind() == LpKind::Two {
            let s = sigma_min(&shifted);
            if s == 0.0 {
                return Err(Error::Singular { lambda, distance: 0.0 });
            }
            return Ok(1.0 / s);
        }
    }
    let inv = invert(shifted, lambda)?;
    Ok(op_norm_estimate(&inv, norm, &OpNormOptions::default())?.value)
}

/// The resolvent matrix `(λ − A)^{-1}`.
pub fn resolvent(a: &CMatrix, lambda: C64) -> Result<CMatrix> {
    if !super::is_finite(lambda) {
        return Err(Error::input("λ must be finite"));
    }
    let n = a.n();
    invert(DMatrix::<C64>::identity(n, n) * lambda - a.inner(), lambda)
}

fn invert(m: DMatrix<C64>, lambda: C64) -> Result<CMatrix> {
    let singular = || Error::Singular { lambda, distance: 0.0 };
    let inv = m.try_inverse().ok_or_else(singular)?;
    CMatrix::from_dmatrix(inv).map_err(|_| singular())
}
