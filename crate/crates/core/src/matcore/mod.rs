//! Dense complex linear algebra and norm primitives.
//!
//! Everything here is a pure function of its inputs. Matrices are small
//! (desk scale, `n ≤ 256`) and stored densely.

mod eig;
mod expm;
mod norms;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::renorm::RenormSpec;

pub use eig::{eigenvalues, resolvent, resolvent_norm, spectral_abscissa};
pub(crate) use eig::{hermitian_max, resolvent_norm_unchecked, sigma_max, spectrum_distance};
pub(crate) use expm::expm;
pub use expm::mat_exp;
pub use norms::{dual_witness, op_norm, op_norm_estimate, pairing, vec_norm, OpNormEstimate, OpNormOptions};
pub(crate) use norms::{dual_witness_raw, lp_grad, lp_norm};

/// A finite complex vector of fixed length `n ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CVector(DVector<C64>);

impl CVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::input("vector must have at least one entry"));
        }
        if let Some(k) = entries.iter().position(|z| !is_finite(*z)) {
            return Err(Error::input(format!("vector entry {k} is not finite")));
        }
        Ok(CVector(DVector::from_vec(entries)))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&r| C64::new(r, 0.0)).collect())
    }

    pub(crate) fn from_slice_unchecked(entries: &[C64]) -> Self {
        CVector(DVector::from_column_slice(entries))
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[k] = C64::new(1.0, 0.0);
        CVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn inner(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn scaled(&self, c: C64) -> CVector {
        CVector(&self.0 * c)
    }
}

/// Dense `n × n` complex matrix with `entries[i][j] = A_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::input(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::input("matrix must be at least 1x1"));
        }
        if let Some(k) = m.iter().position(|z| !is_finite(*z)) {
            let n = m.nrows();
            return Err(Error::input(format!(
                "matrix entry ({}, {}) is not finite",
                k % n,
                k / n
            )));
        }
        Ok(CMatrix(m))
    }

    pub(crate) fn from_dmatrix_unchecked(m: DMatrix<C64>) -> Self {
        debug_assert!(m.is_square());
        CMatrix(m)
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(n: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::input(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(n, n, entries))
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<C64> = entries.iter().map(|&r| C64::new(r, 0.0)).collect();
        Self::from_row_major(n, &c)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::input(format!("row {i} has {} entries, expected {n}", r.len())));
        }
        let flat: Vec<C64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(n, &flat)
    }

    pub fn diag(entries: &[C64]) -> Result<Self> {
        Self::from_dmatrix(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        CMatrix(DMatrix::zeros(n, n))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// The rotated operator `e^{-iθ} A`.
    pub fn rotated(&self, theta: f64) -> CMatrix {
        self.scaled(C64::from_polar(1.0, -theta))
    }

    pub fn scaled(&self, c: C64) -> CMatrix {
        CMatrix(&self.0 * c)
    }

    /// `A + c I`.
    pub fn shifted(&self, c: C64) -> CMatrix {
        let mut m = self.0.clone();
        for k in 0..self.n() {
            m[(k, k)] += c;
        }
        CMatrix(m)
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix(self.0.adjoint())
    }

    /// `(A + Aᴴ) / 2`.
    pub fn hermitian_part(&self) -> CMatrix {
        CMatrix((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &other.0)
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &other.0)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        matvec(&self.0, x)
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.n())
            .map(|j| self.0.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n())
            .map(|i| self.0.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest singular value.
    pub fn norm2(&self) -> f64 {
        sigma_max(&self.0)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Exponent of an `ℓᵖ` norm, `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpExponent(f64);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LpKind {
    One,
    Two,
    Inf,
    /// `1 < p < ∞`, `p ≠ 2`.
    General(f64),
}

impl LpExponent {
    pub const ONE: LpExponent = LpExponent(1.0);
    pub const TWO: LpExponent = LpExponent(2.0);
    pub const INF: LpExponent = LpExponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::input(format!("norm exponent must satisfy p >= 1, got {p}")));
        }
        Ok(LpExponent(p))
    }

    /// Parses `"1"`, `"2.5"`, `"inf"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Self::INF);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::input(format!("cannot parse norm exponent '{s}'")))?;
        if p.is_infinite() {
            return Err(Error::input("spell p = ∞ as 'inf'"));
        }
        Self::new(p)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn kind(self) -> LpKind {
        if self.0 == 1.0 {
            LpKind::One
        } else if self.0 == 2.0 {
            LpKind::Two
        } else if self.0.is_infinite() {
            LpKind::Inf
        } else {
            LpKind::General(self.0)
        }
    }

    /// Whether a closed-form operator norm and logarithmic norm exist.
    pub fn is_classical(self) -> bool {
        !matches!(self.kind(), LpKind::General(_))
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> LpExponent {
        match self.kind() {
            LpKind::One => Self::INF,
            LpKind::Inf => Self::ONE,
            LpKind::Two => Self::TWO,
            LpKind::General(p) => LpExponent(p / (p - 1.0)),
        }
    }
}

impl fmt::Display for LpExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// The norm carried by `ℂⁿ`.
#[derive(Clone, Debug)]
pub enum NormSpec {
    P(LpExponent),
    Renormed(Arc<RenormSpec>),
}

impl NormSpec {
    pub fn p(p: f64) -> Result<Self> {
        Ok(NormSpec::P(LpExponent::new(p)?))
    }

    pub fn inf() -> Self {
        NormSpec::P(LpExponent::INF)
    }

    pub(crate) fn eval(&self, x: &[C64]) -> f64 {
        match self {
            NormSpec::P(p) => lp_norm(x, *p),
            NormSpec::Renormed(r) => r.norm(x),
        }
    }

    pub fn exponent(&self) -> Option<LpExponent> {
        match self {
            NormSpec::P(p) => Some(*p),
            NormSpec::Renormed(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            NormSpec::P(p) => p.to_string(),
            NormSpec::Renormed(r) => format!("renormed({})", r.base()),
        }
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if let NormSpec::Renormed(r) = self {
            if r.dim() != n {
                return Err(Error::input(format!(
                    "renormed norm acts on dimension {}, operand has dimension {n}",
                    r.dim()
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn matvec(m: &DMatrix<C64>, x: &[C64]) -> Vec<C64> {
    let n = m.nrows();
    let mut y = vec![C64::new(0.0, 0.0); n];
    for (j, &xj) in x.iter().enumerate() {
        if xj == C64::new(0.0, 0.0) {
            continue;
        }
        let col = m.column(j);
        for (yi, &mij) in y.iter_mut().zip(col.iter()) {
            *yi += mij * xj;
        }
    }
    y
}

/// `Aᴴ x`.
pub(crate) fn adjoint_matvec(m: &DMatrix<C64>, x: &[C64]) -> Vec<C64> {
    (0..m.ncols())
        .map(|j| m.column(j).iter().zip(x).map(|(a, b)| a.conj() * b).sum())
        .collect()
}

pub(crate) fn norm2_slice(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
