//! sigma_K^2 = (2/K) sum_{k = delta mod 2} u((k-1)/K) (||P~_k||^2 - 1)^2.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::oscillatory::osc_integrals_for_arguments;
use super::{total, MomentFamily, MomentReport, MomentSide, MomentTerm, Route, TermLabel};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::kloosterman::{kloosterman, Method};
use crate::poincare::{times_i_pow, DeltaSeries};
use crate::smoothfn::u_eval;

/// Tail tolerance for each Delta series on the direct side.
pub const DIRECT_TAIL_TOL: f64 = 1e-15;

/// The nominal c-range 200 m / (K q) before scaling by `cutoff_mult`.
pub fn weight_pair_cutoff(big_k: u32, m: u64, q: u64, cutoff_mult: f64) -> u64 {
    (cutoff_mult * 200.0 * m as f64 / (big_k as f64 * q as f64)).floor() as u64
}

fn check(big_k: u32, m: u64) -> Result<()> {
    if big_k < 6 {
        return Err(Error::InvalidArgument(format!("sigma_K needs K >= 6, got {big_k}")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("sigma_K needs m >= 1".into()));
    }
    Ok(())
}

/// Weights k >= 3 with k = delta (mod 2) and u((k-1)/K) > 0.
pub fn weights_in_window(big_k: u32, delta: u8) -> Vec<u32> {
    (3..=3 * big_k + 1)
        .filter(|&k| k % 2 == delta as u32 % 2 && u_eval((k - 1) as f64 / big_k as f64) > 0.0)
        .collect()
}

pub fn sigma_k_direct(big_k: u32, m: u64, chi: &DirichletCharacter) -> Result<MomentSide> {
    check(big_k, m)?;
    let ks = weights_in_window(big_k, chi.parity());
    let mut series = DeltaSeries::new(m, m, chi)?;
    let mut longest = 0;
    for &k in &ks {
        longest = longest.max(series.cutoff_for(k, DIRECT_TAIL_TOL)?.0);
    }
    series.prefetch(longest)?;
    let scale = 2.0 / big_k as f64;
    let rows: Result<Vec<(MomentTerm, f64, f64)>> = ks
        .par_iter()
        .map(|&k| {
            let d = series.evaluate_prefetched(k, DIRECT_TAIL_TOL)?;
            let rotated = times_i_pow(k, d.value);
            let x = 2.0 * PI * rotated.re;
            let e = 2.0 * PI * (d.tail_bound + d.rounding_bound);
            let w = scale * u_eval((k - 1) as f64 / big_k as f64);
            let term = MomentTerm { label: TermLabel::Weight(k), contribution: w * x * x };
            Ok((term, w * (2.0 * x.abs() * e + e * e), 2.0 * PI * rotated.im.abs()))
        })
        .collect();
    let rows = rows?;
    let terms: Vec<MomentTerm> = rows.iter().map(|r| r.0).collect();
    let value = total(&terms);
    Ok(MomentSide {
        value,
        certified_error: rows.iter().map(|r| r.1).sum::<f64>() + 4.0 * f64::EPSILON * value.abs(),
        heuristic_error: 0.0,
        imag_residue: rows.iter().map(|r| r.2).fold(0.0, f64::max),
        terms,
    })
}

/// (-1)^delta 4 pi^2 sum_{c1, c2 <= C} (S(m,m;qc1)/(qc1)) (S(m,m;qc2)/(qc2)) (I^- - (-1)^delta I^+).
pub fn sigma_k_transformed(
    big_k: u32,
    m: u64,
    chi: &DirichletCharacter,
    cutoff_mult: f64,
) -> Result<MomentSide> {
    check(big_k, m)?;
    if !(cutoff_mult >= 1.0) {
        return Err(Error::InvalidArgument("cutoff_mult must be >= 1".into()));
    }
    let q = chi.modulus();
    let cmax = weight_pair_cutoff(big_k, m, q, cutoff_mult);
    let sign = if chi.parity() == 0 { 1.0 } else { -1.0 };
    let sums: Result<Vec<_>> = (1..=cmax)
        .into_par_iter()
        .map(|c| kloosterman(m as i64, m as i64, c * q, chi, Method::Factored))
        .collect();
    let sums = sums?;
    let pairs: Vec<(u64, u64)> =
        (1..=cmax).flat_map(|c1| (c1..=cmax).map(move |c2| (c1, c2))).collect();
    let rows: Result<Vec<(MomentTerm, f64, f64)>> = pairs
        .par_iter()
        .map(|&(c1, c2)| {
            let (l1, l2) = ((c1 * q) as f64, (c2 * q) as f64);
            let x1 = 4.0 * PI * m as f64 / l1;
            let x2 = 4.0 * PI * m as f64 / l2;
            let (minus, plus) = osc_integrals_for_arguments(big_k, x1, x2)?;
            let s = sums[(c1 - 1) as usize].value * sums[(c2 - 1) as usize].value;
            let mult = if c1 == c2 { 1.0 } else { 2.0 };
            let w = mult * sign * 4.0 * PI * PI / (l1 * l2);
            let bracket = minus.value - sign * plus.value;
            let err = mult * 4.0 * PI * PI * s.norm() / (l1 * l2)
                * (minus.quadrature_error + plus.quadrature_error);
            Ok((
                MomentTerm { label: TermLabel::Pair(c1, c2), contribution: w * s.re * bracket },
                err,
                (w * s.im * bracket).abs(),
            ))
        })
        .collect();
    let rows = rows?;
    let terms: Vec<MomentTerm> = rows.iter().map(|r| r.0).collect();
    let value = total(&terms);
    Ok(MomentSide {
        value,
        certified_error: rows.iter().map(|r| r.1).sum::<f64>() + 4.0 * f64::EPSILON * value.abs(),
        heuristic_error: (-(big_k as f64) / 2.0).exp(),
        imag_residue: rows.iter().map(|r| r.2).sum(),
        terms,
    })
}

pub fn sigma_k(
    big_k: u32,
    m: u64,
    chi: &DirichletCharacter,
    route: Route,
    cutoff_mult: f64,
) -> Result<MomentReport> {
    let direct = match route {
        Route::Direct | Route::Both => Some(sigma_k_direct(big_k, m, chi)?),
        Route::Transformed => None,
    };
    let transformed = match route {
        Route::Transformed | Route::Both => Some(sigma_k_transformed(big_k, m, chi, cutoff_mult)?),
        Route::Direct => None,
    };
    Ok(MomentReport {
        family: MomentFamily::Weight,
        scale: big_k as u64,
        fixed: m,
        q: chi.modulus(),
        chi_id: chi.id(),
        direct,
        transformed,
    })
}
