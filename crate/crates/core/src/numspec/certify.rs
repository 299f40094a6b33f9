use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::{eigenvalues, resolvent_norm_unchecked, spectrum_distance, CMatrix, NormSpec, C64};

/// λ-grid `λ = e^{iθ}(ω + d + iτ)` with `d` log-spaced and `τ` linear, both
/// scaled by `1 + ‖A‖₂`. The offsets always include `τ = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub distances: usize,
    pub tangential: usize,
    pub d_min: f64,
    pub d_max: f64,
    /// `τ` ranges over `[−span, span]`.
    pub span: f64,
    pub cert_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            distances: 40,
            tangential: 10,
            d_min: 1e-3,
            d_max: 1e3,
            span: 2.0,
            cert_tol: 1e-8,
        }
    }
}

impl GridSpec {
    /// Parses `"DxT"`, e.g. `"40x10"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (d, t) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::input(format!("grid must look like 40x10, got '{s}'")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::input(format!("bad grid count '{v}'")))
        };
        Ok(GridSpec {
            distances: parse(d)?,
            tangential: parse(t)?,
            ..GridSpec::default()
        })
    }

    /// Tangential offsets as fractions of the span: `T` evenly spaced values
    /// in `[−1, 1]`, plus `0` when `T` is even so the foot of the
    /// perpendicular from the center is always probed.
    fn offsets(&self) -> Vec<f64> {
        let t = self.tangential;
        let mut g: Vec<f64> = if t == 1 {
            vec![0.0]
        } else {
            (0..t).map(|j| 2.0 * j as f64 / (t - 1) as f64 - 1.0).collect()
        };
        if t.is_multiple_of(2) {
            g.insert(t / 2, 0.0);
        }
        g
    }

    fn points(&self, theta: f64, omega: f64, scale: f64) -> Vec<(C64, f64)> {
        let rot = C64::from_polar(1.0, theta);
        let (lo, hi) = ((self.d_min * scale).ln(), (self.d_max * scale).ln());
        let offsets = self.offsets();
        let mut out = Vec::with_capacity(self.distances * offsets.len());
        for i in 0..self.distances {
            let f = if self.distances == 1 {
                0.0
            } else {
                i as f64 / (self.distances - 1) as f64
            };
            let d = (lo + f * (hi - lo)).exp();
            for &g in &offsets {
                out.push((rot * C64::new(omega + d, self.span * scale * g), d));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub theta: f64,
    pub omega: f64,
    pub grid: Vec<C64>,
    /// `max ‖R(λ, A)‖ · d(λ, ∂H)` over the grid.
    pub worst_ratio: f64,
    pub worst_lambda: C64,
    pub pass: bool,
    /// Grid points whose ratio exceeds `1 + cert_tol`; eigenvalue hits carry
    /// an infinite ratio.
    pub failures: Vec<(C64, f64)>,
}

/// Checks `‖R(λ, A)‖ ≤ 1 / d(λ, ∂H_{θ,ω})` on the grid. Failure is a result,
/// not an error.
pub fn certify_halfplane(a: &CMatrix, norm: &NormSpec, theta: f64, omega: f64, grid: &GridSpec) -> Result<Certificate> {
    if !theta.is_finite() || !omega.is_finite() {
        return Err(Error::input("θ and ω must be finite"));
    }
    if !(grid.d_min > 0.0 && grid.d_max >= grid.d_min && grid.span >= 0.0 && grid.cert_tol >= 0.0) {
        return Err(Error::input("invalid certification grid"));
    }
    norm.check_dim(a.n())?;
    let scale = 1.0 + a.norm2();
    let eigs = eigenvalues(a)?;
    let pts = grid.points(theta, omega, scale);
    let ratios: Vec<f64> = pts
        .par_iter()
        .map(|&(lambda, d)| {
            if spectrum_distance(&eigs, lambda) <= 1e-10 {
                return Ok(f64::INFINITY);
            }
            match resolvent_norm_unchecked(a, lambda, norm) {
                Ok(r) => Ok(r * d),
                Err(Error::Singular { .. }) => Ok(f64::INFINITY),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let limit = 1.0 + grid.cert_tol;
    let mut worst = (f64::NEG_INFINITY, pts[0].0);
    let mut failures = Vec::new();
    for (&(lambda, _), &r) in pts.iter().zip(&ratios) {
        if r > worst.0 {
            worst = (r, lambda);
        }
        if r > limit {
            failures.push((lambda, r));
        }
    }
    Ok(Certificate {
        theta,
        omega,
        grid: pts.iter().map(|p| p.0).collect(),
        worst_ratio: worst.0,
        worst_lambda: worst.1,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::LpExponent;

    fn jordan() -> CMatrix {
        CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn jordan_certificates() {
        let two = NormSpec::P(LpExponent::TWO);
        let c = certify_halfplane(&jordan(), &two, 0.0, 0.5, &GridSpec::default()).unwrap();
        assert!(c.pass, "worst {}", c.worst_ratio);
        assert_eq!(c.grid.len(), 440);
        assert!(c.grid.iter().all(|l| l.re > 0.5));
        let c = certify_halfplane(&jordan(), &two, 0.0, 0.0, &GridSpec::default()).unwrap();
        assert!(
            !c.pass && c.worst_ratio >= 1.6,
            "{} at {}",
            c.worst_ratio,
            c.worst_lambda
        );
        // A single point at λ = 1 reproduces the golden-ratio bound.
        let one = GridSpec {
            distances: 1,
            tangential: 1,
            d_min: 1.0 / (1.0 + 1.0),
            d_max: 1.0,
            ..GridSpec::default()
        };
        let c = certify_halfplane(&jordan(), &two, 0.0, 0.0, &one).unwrap();
        assert!((c.grid[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((c.worst_ratio - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_passes_with_equality() {
        let z = CMatrix::zeros(2);
        let c = certify_halfplane(&z, &NormSpec::inf(), 0.0, 0.0, &GridSpec::default()).unwrap();
        assert!(c.pass);
        assert!(c.worst_ratio <= 1.0 + 1e-12 && c.worst_ratio > 0.999);
    }

    #[test]
    fn eigenvalue_on_grid_is_a_hard_failure() {
        let a = CMatrix::from_real(1, &[1.0]).unwrap();
        let g = GridSpec {
            distances: 1,
            tangential: 1,
            d_min: 0.5,
            d_max: 0.5,
            ..GridSpec::default()
        };
        let c = certify_halfplane(&a, &NormSpec::inf(), 0.0, 0.0, &g).unwrap();
        assert!(!c.pass && c.worst_ratio.is_infinite());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(GridSpec::parse("8x3").unwrap().distances, 8);
        assert!(GridSpec::parse("8").is_err());
        assert!(GridSpec::parse("0x3").is_err());
    }
}
