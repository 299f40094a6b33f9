//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (degrees 3, 5, 7, 9, 13).

use nalgebra::DMatrix;

use super::{CMatrix, C64};
use crate::error::{Error, Result};

// Largest 1-norms for which each Padé degree reaches double precision.
const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
    (13, 5.371_920_351_148_152e0),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// `e^{tA}` for `t ≥ 0`.
pub fn mat_exp(a: &CMatrix, t: f64) -> Result<CMatrix> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::input(format!("exponent time must be finite and >= 0, got {t}")));
    }
    let m = a.inner() * C64::new(t, 0.0);
    Ok(CMatrix::from_dmatrix_unchecked(expm(&m)?))
}

fn norm1(m: &DMatrix<C64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn real(c: f64) -> C64 {
    C64::new(c, 0.0)
}

pub(crate) fn expm(a: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let n = a.nrows();
    let eye = DMatrix::<C64>::identity(n, n);
    let nrm = norm1(a);
    if !nrm.is_finite() {
        return Err(Error::numerical("matrix exponential of a non-finite matrix", None));
    }

    let (u, v, squarings) = if let Some(&(deg, _)) = THETA[..4].iter().find(|(_, th)| nrm <= *th) {
        let a2 = a * a;
        let (u, v) = match deg {
            3 => {
                let u = a * (&a2 * real(B3[3]) + &eye * real(B3[1]));
                let v = &a2 * real(B3[2]) + &eye * real(B3[0]);
                (u, v)
            }
            5 => {
                let a4 = &a2 * &a2;
                let u = a * (&a4 * real(B5[5]) + &a2 * real(B5[3]) + &eye * real(B5[1]));
                let v = &a4 * real(B5[4]) + &a2 * real(B5[2]) + &eye * real(B5[0]);
                (u, v)
            }
            7 => {
                let a4 = &a2 * &a2;
                let a6 = &a4 * &a2;
                let u = a * (&a6 * real(B7[7]) + &a4 * real(B7[5]) + &a2 * real(B7[3]) + &eye * real(B7[1]));
                let v = &a6 * real(B7[6]) + &a4 * real(B7[4]) + &a2 * real(B7[2]) + &eye * real(B7[0]);
                (u, v)
            }
            _ => {
                let a4 = &a2 * &a2;
                let a6 = &a4 * &a2;
                let a8 = &a4 * &a4;
                let u = a
                    * (&a8 * real(B9[9])
                        + &a6 * real(B9[7])
                        + &a4 * real(B9[5])
                        + &a2 * real(B9[3])
                        + &eye * real(B9[1]));
                let v =
                    &a8 * real(B9[8]) + &a6 * real(B9[6]) + &a4 * real(B9[4]) + &a2 * real(B9[2]) + &eye * real(B9[0]);
                (u, v)
            }
        };
        (u, v, 0)
    } else {
        let theta13 = THETA[4].1;
        let s = ((nrm / theta13).log2().ceil()).max(0.0) as i32;
        if s > 1023 {
            return Err(Error::numerical("matrix exponential overflow: norm too large", None));
        }
        let a = a * real(2f64.powi(-s));
        let a2 = &a * &a;
        let a4 = &a2 * &a2;
        let a6 = &a4 * &a2;
        let b = |k: usize| real(B13[k]);
        let inner_u = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9));
        let u = &a * (inner_u + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &eye * b(1));
        let inner_v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8));
        let v = inner_v + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &eye * b(0);
        (u, v, s)
    };

    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::numerical("singular Padé denominator", None))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if r.iter().any(|z| !super::is_finite(*z)) {
        return Err(Error::numerical("matrix exponential overflow", None));
    }
    Ok(r)
}
