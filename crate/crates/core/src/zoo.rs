//! Example operators and closed-form oracles for their numerical spectra.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matcore::{CMatrix, C64};
use crate::optim;

pub const NAMES: [&str; 7] = [
    "jordan2",
    "triangular_pm1",
    "shifted_cone_B",
    "diag",
    "dirichlet_laplacian",
    "skew_hermitian_random",
    "random",
];

pub type Params = BTreeMap<String, String>;

#[derive(Clone, Debug)]
pub struct ExampleDescriptor {
    pub name: String,
    pub params: Params,
    pub matrix: CMatrix,
    pub notes: String,
}

fn get<'a>(params: &'a Params, key: &str) -> Option<&'a str> {
    params.get(key).map(String::as_str)
}

fn get_usize(params: &Params, key: &str, default: Option<usize>) -> Result<usize> {
    match get(params, key) {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("parameter {key} must be a nonnegative integer, got '{v}'"))),
        None => default.ok_or_else(|| Error::input(format!("missing parameter {key}"))),
    }
}

fn get_f64(params: &Params, key: &str, default: f64) -> Result<f64> {
    match get(params, key) {
        Some(v) => {
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("parameter {key} must be a number, got '{v}'")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::input(format!("parameter {key} must be finite")))
            }
        }
        None => Ok(default),
    }
}

/// Parses `"1"`, `"-2.5i"`, `"1+2i"`, `"3-i"`, `"(0.5,-1)"`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::input(format!("cannot parse complex number '{s}'"));
    if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or_else(bad)?;
        return Ok(C64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|r| C64::new(r, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |v: &str| -> Result<f64> {
        match v {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => v.parse().map_err(|_| bad()),
        }
    };
    let z = match split {
        Some(k) => C64::new(body[..k].parse().map_err(|_| bad())?, imag(&body[k..])?),
        None => C64::new(0.0, imag(body)?),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

fn parse_symbol(params: &Params) -> Result<Vec<C64>> {
    let q = get(params, "q").ok_or_else(|| Error::input("diag needs parameter q=<v1,v2,...>"))?;
    let vals: Vec<C64> = q
        .split([',', ';'])
        .filter(|s| !s.trim().is_empty())
        .map(parse_complex)
        .collect::<Result<_>>()?;
    if vals.is_empty() {
        return Err(Error::input("diag needs at least one entry"));
    }
    Ok(vals)
}

/// `(1/h²) tridiag(1, −2, 1)` with `h = L/(N+1)`.
pub fn dirichlet_laplacian(n: usize, length: f64) -> Result<CMatrix> {
    if n == 0 || length.is_nan() || length <= 0.0 {
        return Err(Error::input("laplacian needs N >= 1 and L > 0"));
    }
    let h = length / (n + 1) as f64;
    let s = 1.0 / (h * h);
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = -2.0 * s;
        if i + 1 < n {
            m[i * n + i + 1] = s;
            m[(i + 1) * n + i] = s;
        }
    }
    CMatrix::from_real(n, &m)
}

/// Closed-form eigenvalues `−(4/h²) sin²(kπ / (2(N+1)))`, ascending.
pub fn laplacian_eigenvalues(n: usize, length: f64) -> Vec<f64> {
    let h = length / (n + 1) as f64;
    let mut ev: Vec<f64> = (1..=n)
        .map(|k| -(4.0 / (h * h)) * (k as f64 * PI / (2.0 * (n + 1) as f64)).sin().powi(2))
        .collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Complex Gaussian entries with `E|a_ij|² = 1`.
pub fn random_matrix(n: usize, seed: u64) -> CMatrix {
    let mut rng = optim::rng(seed);
    let entries = optim::random_cvec(&mut rng, n * n);
    CMatrix::from_row_major(n, &entries).expect("finite Gaussian entries")
}

/// `(G − Gᴴ)/2` for a Gaussian `G`.
pub fn skew_hermitian_random(n: usize, seed: u64) -> CMatrix {
    let g = random_matrix(n, seed);
    g.add(&g.adjoint().scaled(C64::new(-1.0, 0.0)))
        .scaled(C64::new(0.5, 0.0))
}

pub fn make_example(name: &str, params: &Params) -> Result<ExampleDescriptor> {
    let (matrix, notes) = match name {
        "jordan2" => (
            CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0])?,
            "nilpotent Jordan block; semigroup [[1,t],[0,1]]; numerical spectrum is a disk".to_string(),
        ),
        "triangular_pm1" => (
            CMatrix::from_real(2, &[1.0, 1.0, 0.0, -1.0])?,
            "upper triangular with eigenvalues ±1; under ℓ¹ the numerical bound at θ = 0 is 1".to_string(),
        ),
        "shifted_cone_B" => (
            CMatrix::from_real(2, &[2.0, 1.0, 0.0, 0.0])?,
            "triangular_pm1 + I; under ℓ¹ the region is the hull of 2 and the unit circle".to_string(),
        ),
        "diag" => (
            CMatrix::diag(&parse_symbol(params)?)?,
            "multiplication operator by a sampled symbol; region is the hull of the entries".to_string(),
        ),
        "dirichlet_laplacian" => {
            let n = get_usize(params, "N", None)?;
            let l = get_f64(params, "L", PI)?;
            (
                dirichlet_laplacian(n, l)?,
                format!("second difference on (0, {l}) with {n} interior points; top eigenvalue tends to -1 for L = π"),
            )
        }
        "skew_hermitian_random" => {
            let n = get_usize(params, "n", None)?;
            let seed = get_usize(params, "seed", Some(0))? as u64;
            if n == 0 {
                return Err(Error::input("n must be >= 1"));
            }
            (
                skew_hermitian_random(n, seed),
                "generates a unitary group; region on the imaginary axis".to_string(),
            )
        }
        "random" => {
            let n = get_usize(params, "n", None)?;
            let seed = get_usize(params, "seed", Some(0))? as u64;
            if n == 0 {
                return Err(Error::input("n must be >= 1"));
            }
            (
                random_matrix(n, seed),
                "complex Gaussian entries with unit variance".to_string(),
            )
        }
        other => {
            return Err(Error::input(format!(
                "unknown example '{other}'; known: {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(ExampleDescriptor {
        name: name.to_string(),
        params: params.clone(),
        matrix,
        notes,
    })
}

/// Closed-form support function of an example region.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportOracle {
    /// `max_k Re(e^{-iθ} q_k)`.
    Points(Vec<C64>),
    /// Disk of the given radius about 0.
    Disk(f64),
    /// `conv({2} ∪ unit circle) + shift`.
    Cone { shift: f64 },
}

impl SupportOracle {
    pub fn support(&self, theta: f64) -> f64 {
        match self {
            SupportOracle::Points(q) => q
                .iter()
                .map(|z| z.re * theta.cos() + z.im * theta.sin())
                .fold(f64::NEG_INFINITY, f64::max),
            SupportOracle::Disk(r) => *r,
            SupportOracle::Cone { shift } => (2.0 * theta.cos()).max(1.0) + shift * theta.cos(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Oracle {
    pub radius: Option<f64>,
    pub s_n_at_zero: Option<f64>,
    pub support: Option<SupportOracle>,
    /// Real segment `[left, right]` for self-adjoint examples.
    pub segment: Option<(f64, f64)>,
}

/// Numerical radius of the 2×2 Jordan block under `ℓᵖ`.
pub fn jordan_radius(p: f64) -> f64 {
    if p == 1.0 || p.is_infinite() {
        1.0
    } else {
        ((p - 1.0) / p).powf(1.0 - 1.0 / p) * (1.0 / p).powf(1.0 / p)
    }
}

/// Expected quantities for `name` at exponent `p` (parameter `p`, default 2,
/// `inf` allowed).
pub fn oracle(name: &str, params: &Params) -> Result<Oracle> {
    let p = match get(params, "p") {
        Some(v) => crate::matcore::LpExponent::parse(v)?.value(),
        None => 2.0,
    };
    Ok(match name {
        "jordan2" => {
            let r = jordan_radius(p);
            Oracle {
                radius: Some(r),
                s_n_at_zero: Some(r),
                support: Some(SupportOracle::Disk(r)),
                segment: None,
            }
        }
        "triangular_pm1" if p == 1.0 => Oracle {
            radius: Some(2.0),
            s_n_at_zero: Some(1.0),
            support: Some(SupportOracle::Cone { shift: -1.0 }),
            segment: None,
        },
        "shifted_cone_B" if p == 1.0 => Oracle {
            radius: Some(2.0),
            s_n_at_zero: Some(2.0),
            support: Some(SupportOracle::Cone { shift: 0.0 }),
            segment: None,
        },
        "triangular_pm1" | "shifted_cone_B" => Oracle::default(),
        "diag" => {
            let q = parse_symbol(params)?;
            let h = SupportOracle::Points(q.clone());
            Oracle {
                radius: Some(q.iter().map(|z| z.norm()).fold(0.0, f64::max)),
                s_n_at_zero: Some(h.support(0.0)),
                support: Some(h),
                segment: None,
            }
        }
        "dirichlet_laplacian" => {
            let n = get_usize(params, "N", None)?;
            let l = get_f64(params, "L", PI)?;
            let ev = laplacian_eigenvalues(n, l);
            let (lo, hi) = (ev[0], ev[ev.len() - 1]);
            Oracle {
                radius: Some(lo.abs().max(hi.abs())),
                s_n_at_zero: Some(hi),
                support: Some(SupportOracle::Points(vec![C64::new(lo, 0.0), C64::new(hi, 0.0)])),
                segment: Some((lo, hi)),
            }
        }
        "skew_hermitian_random" | "random" => Oracle::default(),
        other => return Err(Error::input(format!("unknown example '{other}'"))),
    })
}
