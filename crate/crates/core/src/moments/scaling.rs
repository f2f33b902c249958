//! Observed second moments across doublings of K (or k), next to the
//! predicted envelopes, with a fitted log-log slope.

use super::sigma_k::sigma_k_direct;
use super::sigma_m::sigma_m_direct;
use super::MomentFamily;
use crate::arith::{g_function, gcd, largest_square_divisor};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

/// Rows at or below this are too small to carry slope information.
pub const DEGENERATE_LEVEL: f64 = 1e-20;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    /// K for the weight family, k for the index family
    pub parameter: u64,
    pub sigma_sq: f64,
    pub envelope: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub family: MomentFamily,
    /// m (weight family) or M (index family)
    pub fixed: u64,
    pub q: u64,
    pub chi_id: String,
    pub rows: Vec<ScalingRow>,
    /// least-squares slope of log sigma^2 against log parameter over the
    /// non-degenerate rows; None with fewer than two
    pub slope: Option<f64>,
    pub predicted_slope: f64,
    /// slope at least as steep as predicted
    pub consistent: Option<bool>,
}

/// m (m, q) g(q')^2 / (K^3 q^2).
pub fn weight_envelope(big_k: u64, m: u64, chi: &DirichletCharacter) -> f64 {
    let q = chi.modulus();
    let g = g_function(chi.conductor());
    (m * gcd(m, q)) as f64 * g * g / ((big_k as f64).powi(3) * (q * q) as f64)
}

/// M^{1/2} f(q)^{1/2} / (k^{3/2} q) + M f(q) / (k^{5/2} q^2).
pub fn index_envelope(big_m: u64, k: u64, q: u64) -> f64 {
    let f = largest_square_divisor(q) as f64;
    let (m, k, q) = (big_m as f64, k as f64, q as f64);
    m.sqrt() * f.sqrt() / (k.powf(1.5) * q) + m * f / (k.powf(2.5) * q * q)
}

pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Direct-route moments over `parameters` (K values, or k values) with the
/// other index held at `fixed`.
pub fn scaling_report(
    family: MomentFamily,
    parameters: &[u64],
    fixed: u64,
    chi: &DirichletCharacter,
) -> Result<ScalingReport> {
    if parameters.is_empty() {
        return Err(Error::InvalidArgument("scaling_report needs at least one parameter".into()));
    }
    let q = chi.modulus();
    let mut rows = Vec::with_capacity(parameters.len());
    for &p in parameters {
        let p32 = u32::try_from(p)
            .map_err(|_| Error::RangeExceeded(format!("parameter {p} too large")))?;
        let (sigma_sq, envelope) = match family {
            MomentFamily::Weight => {
                (sigma_k_direct(p32, fixed, chi)?.value, weight_envelope(p, fixed, chi))
            }
            MomentFamily::Index => (sigma_m_direct(fixed, p32, chi)?.value, index_envelope(fixed, p, q)),
        };
        rows.push(ScalingRow { parameter: p, sigma_sq, envelope, degenerate: sigma_sq <= DEGENERATE_LEVEL });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.degenerate)
        .map(|r| ((r.parameter as f64).ln(), r.sigma_sq.ln()))
        .collect();
    let slope = fit_slope(&points);
    let predicted_slope = match family {
        MomentFamily::Weight => -3.0,
        MomentFamily::Index => -1.5,
    };
    Ok(ScalingReport {
        family,
        fixed,
        q,
        chi_id: chi.id(),
        rows,
        slope,
        predicted_slope,
        consistent: slope.map(|s| s <= predicted_slope),
    })
}
