//! Semigroup side: norm curves `t ↦ ‖e^{tA_θ}‖`, growth envelopes and the
//! stability equivalence between decay and the pairing bound.

use std::io::Write;

use crate::error::{Error, Result};
use crate::lognorm::{lognorm_closed, lognorm_quotient};
use crate::matcore::{mat_exp, op_norm_estimate, CMatrix, NormSpec, OpNormOptions};

#[derive(Clone, Debug)]
pub struct NormCurve {
    pub theta: f64,
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
    pub norm: NormSpec,
    /// The exponential overflowed and the curve stops early.
    pub truncated: bool,
}

/// Log-spaced grid from `1e-4` to `1e2` with 60 points.
pub fn default_t_grid() -> Vec<f64> {
    log_grid(1e-4, 1e2, 60)
}

pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if count == 1 {
                lo
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn norm_curve(a: &CMatrix, norm: &NormSpec, theta: f64, t_grid: &[f64]) -> Result<NormCurve> {
    if t_grid.is_empty() {
        return Err(Error::input("time grid is empty"));
    }
    if t_grid.iter().any(|t| !t.is_finite() || *t <= 0.0) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input("time grid must be positive and strictly increasing"));
    }
    norm.check_dim(a.n())?;
    let rot = a.rotated(theta);
    let mut ts = Vec::with_capacity(t_grid.len());
    let mut values = Vec::with_capacity(t_grid.len());
    let mut truncated = false;
    for &t in t_grid {
        let e = match mat_exp(&rot, t) {
            Ok(e) => e,
            Err(Error::Numerical { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let v = op_norm_estimate(&e, norm, &OpNormOptions::default())?.value;
        if !v.is_finite() {
            truncated = true;
            break;
        }
        ts.push(t);
        values.push(v);
    }
    Ok(NormCurve {
        theta,
        ts,
        values,
        norm: norm.clone(),
        truncated,
    })
}

impl NormCurve {
    /// CSV with header `t,norm` and shortest round-trip decimals.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,norm")?;
        for (t, v) in self.ts.iter().zip(&self.values) {
            writeln!(w, "{t:?},{v:?}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeCheck {
    pub pass: bool,
    pub worst_t: f64,
    /// `max_i values[i] / e^{ω t_i}`.
    pub worst_ratio: f64,
}

/// `‖T(t_i)‖ ≤ e^{ω t_i}(1 + 1e-9)` at every grid point.
pub fn growth_envelope_check(curve: &NormCurve, omega: f64) -> EnvelopeCheck {
    let mut worst = (f64::NEG_INFINITY, f64::NAN);
    for (&t, &v) in curve.ts.iter().zip(&curve.values) {
        let r = (v.ln() - omega * t).exp();
        if r > worst.0 {
            worst = (r, t);
        }
    }
    EnvelopeCheck {
        pass: worst.0 <= 1.0 + 1e-9,
        worst_t: worst.1,
        worst_ratio: worst.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitCheck {
    /// `sup_t (1/t) log ‖T(t)‖` over the grid.
    pub sup_value: f64,
    /// Intercept of the linear fit of `(1/t) log ‖T(t)‖` against `t` over
    /// the ten smallest `t`.
    pub limit_value: f64,
    /// Largest distance of either estimate from the logarithmic norm.
    pub max_deviation: f64,
}

pub fn subadditive_limit_check(curve: &NormCurve, lognorm_value: f64) -> Result<LimitCheck> {
    if curve.ts.len() < 2 {
        return Err(Error::input("curve needs at least two points"));
    }
    let rates: Vec<f64> = curve.ts.iter().zip(&curve.values).map(|(t, v)| v.ln() / t).collect();
    let sup_value = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let m = rates.len().min(10);
    let (xs, ys) = (&curve.ts[..m], &rates[..m]);
    let mx = xs.iter().sum::<f64>() / m as f64;
    let my = ys.iter().sum::<f64>() / m as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let limit_value = my - slope * mx;
    Ok(LimitCheck {
        sup_value,
        limit_value,
        max_deviation: (sup_value - lognorm_value)
            .abs()
            .max((limit_value - lognorm_value).abs()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityCheck {
    pub envelope_ok: bool,
    pub pairing_ok: bool,
    pub lognorm: f64,
    pub worst_t: f64,
}

/// Decay `‖e^{tA}‖ ≤ e^{-εt}` versus the pairing bound `μ(A) ≤ −ε`. The two
/// must agree; a disagreement is reported as an error.
pub fn stability_equivalence_check(a: &CMatrix, norm: &NormSpec, eps: f64, t_grid: &[f64]) -> Result<StabilityCheck> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::input(format!("ε must be positive, got {eps}")));
    }
    let curve = norm_curve(a, norm, 0.0, t_grid)?;
    let env = growth_envelope_check(&curve, -eps);
    let mu = match norm {
        NormSpec::P(p) if p.is_classical() => lognorm_closed(a, *p)?.value,
        _ => lognorm_quotient(a, norm)?.value,
    };
    let pairing_ok = mu <= -eps + 1e-8;
    if env.pass != pairing_ok {
        return Err(Error::Disagreement {
            envelope_ok: env.pass,
            pairing_ok,
            lognorm: mu,
            worst_t: env.worst_t,
        });
    }
    Ok(StabilityCheck {
        envelope_ok: env.pass,
        pairing_ok,
        lognorm: mu,
        worst_t: env.worst_t,
    })
}
