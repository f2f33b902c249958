//! sigma_M^2 = (1/M) sum_m u(m/M) (||P~_m||^2 - 1)^2 at fixed weight k.
//!
//! Transformed route: squaring Delta gives, for each pair (l1, l2) = (q c1, q c2),
//! the m-sum of u(m/M) S(m,m;l1) S(m,m;l2) J(4 pi m/l1) J(4 pi m/l2). Poisson
//! summation turns it into sum_n N_chi(n; l1, l2) I(n) with
//! I(n) = int f(t) e(t n/(l1 l2)), f(t) = u(t/M) J(4 pi t/l1) J(4 pi t/l2).
//! I(n) is negligible once |n|/(l1 l2) exceeds the band 2/l1 + 2/l2 of J J
//! plus the decay radius of u_hat over M. Writing N_chi as the convolution of
//! the two dagger histograms A_l(x) = sum_{a + abar = x} chi(a), the windowed
//! n-sum factors, and each I(n) is computed by the trapezoid rule with step
//! 1/P, exact for frequencies below P minus the band:
//!   pair = (1/P) sum_j f(j/P) A1^(j) A2^(j) G(j),
//!   A^(j) = sum_x A(x) e(j x/(P l)),  G(j) = sum_{|s| < S} e(j s/P).

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::counting::dagger_histogram;
use super::{total, MomentFamily, MomentReport, MomentSide, MomentTerm, Route, TermLabel};
use crate::bessel::jn;
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::poincare::{norm_squared_with_tol, parity_matches};
use crate::smoothfn::{decay_radius, u_eval};
use crate::summation::{roots_table, NeumaierComplex};

pub const DIRECT_TAIL_TOL: f64 = 1e-15;

/// |u_hat| relative level at which the dual n-window is cut.
pub const DUAL_WINDOW_LEVEL: f64 = 1e-13;

pub fn index_pair_cutoff(big_m: u64, k: u32, q: u64, cutoff_mult: f64) -> u64 {
    (cutoff_mult * 200.0 * big_m as f64 / (k as f64 * q as f64)).floor() as u64
}

fn check(big_m: u64, k: u32, chi: &DirichletCharacter) -> Result<()> {
    if k < 3 {
        return Err(Error::WeightTooSmall(k));
    }
    if big_m == 0 {
        return Err(Error::InvalidArgument("sigma_M needs M >= 1".into()));
    }
    if !parity_matches(k, chi) {
        return Err(Error::ParityMismatch { k });
    }
    Ok(())
}

/// Indices m >= 1 with u(m/M) > 0.
pub fn indices_in_window(big_m: u64) -> Vec<u64> {
    (1..=3 * big_m).filter(|&m| u_eval(m as f64 / big_m as f64) > 0.0).collect()
}

pub fn sigma_m_direct(big_m: u64, k: u32, chi: &DirichletCharacter) -> Result<MomentSide> {
    check(big_m, k, chi)?;
    let q = chi.modulus();
    let ms = indices_in_window(big_m);
    let rows: Result<Vec<(MomentTerm, f64, f64)>> = ms
        .par_iter()
        .map(|&m| {
            let cert = norm_squared_with_tol(k, m, q, chi, DIRECT_TAIL_TOL)?;
            let x = cert.norm_sq - 1.0;
            let e = cert.total_error;
            let w = u_eval(m as f64 / big_m as f64) / big_m as f64;
            Ok((
                MomentTerm { label: TermLabel::Index(m), contribution: w * x * x },
                w * (2.0 * x.abs() * e + e * e),
                cert.imag_residue.abs(),
            ))
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

struct DualGrid {
    p: u64,
    j_lo: u64,
    /// u(j/(PM)) G(j) for j = j_lo, j_lo + 1, ...
    weights: Vec<Complex64>,
}

impl DualGrid {
    fn new(big_m: u64, s: u64) -> Self {
        let p = 2 * s + 2;
        let pm = (p * big_m) as f64;
        let j_lo = (pm / 2.0).floor() as u64 + 1;
        let j_hi = (3.0 * pm).ceil() as u64 - 1;
        let roots = roots_table(p);
        let g: Vec<Complex64> = (0..p)
            .map(|j| {
                let mut acc = NeumaierComplex::new();
                for s in -(s as i64) - 1..s as i64 - 1 {
                    acc.add(roots[((j as i64 * s).rem_euclid(p as i64)) as usize]);
                }
                acc.value()
            })
            .collect();
        let weights = (j_lo..=j_hi)
            .map(|j| g[(j % p) as usize] * u_eval(j as f64 / pm))
            .collect();
        DualGrid { p, j_lo, weights }
    }

    /// J(4 pi j/(P l)) A^(j) along the grid.
    fn factor(&self, l: u64, k: u32, hist: &[Complex64]) -> Result<Vec<Complex64>> {
        let pl = self.p * l;
        let roots = roots_table(pl);
        let nz: Vec<(u64, Complex64)> = hist
            .iter()
            .enumerate()
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .map(|(x, &v)| (x as u64, v))
            .collect();
        (0..self.weights.len() as u64)
            .map(|i| {
                let j = self.j_lo + i;
                let bes = jn(k - 1, 4.0 * PI * j as f64 / pl as f64)?.value;
                let jr = j % pl;
                let mut acc = NeumaierComplex::new();
                for &(x, a) in &nz {
                    acc.add(a * roots[(jr * x % pl) as usize]);
                }
                Ok(acc.value() * bes)
            })
            .collect()
    }
}

struct DualPass {
    terms: Vec<MomentTerm>,
    imag: Vec<f64>,
}

fn dual_pass(
    big_m: u64,
    k: u32,
    chi: &DirichletCharacter,
    cmax: u64,
    hists: &HashMap<u64, Vec<Complex64>>,
    s: u64,
) -> Result<DualPass> {
    let q = chi.modulus();
    let grid = DualGrid::new(big_m, s);
    let factors: Result<Vec<Vec<Complex64>>> = (1..=cmax)
        .into_par_iter()
        .map(|c| grid.factor(c * q, k, &hists[&(c * q)]))
        .collect();
    let factors = factors?;
    let pairs: Vec<(u64, u64)> =
        (1..=cmax).flat_map(|c1| (c1..=cmax).map(move |c2| (c1, c2))).collect();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let prefactor = sign * 4.0 * PI * PI / (big_m as f64 * (q * q) as f64);
    let rows: Vec<(MomentTerm, f64)> = pairs
        .par_iter()
        .map(|&(c1, c2)| {
            let (h1, h2) = (&factors[(c1 - 1) as usize], &factors[(c2 - 1) as usize]);
            let mut acc = NeumaierComplex::new();
            for ((w, a), b) in grid.weights.iter().zip(h1).zip(h2) {
                acc.add(w * a * b);
            }
            let mult = if c1 == c2 { 1.0 } else { 2.0 };
            let v = acc.value() * (mult * prefactor / (grid.p * c1 * c2) as f64);
            (MomentTerm { label: TermLabel::Pair(c1, c2), contribution: v.re }, v.im)
        })
        .collect();
    Ok(DualPass {
        terms: rows.iter().map(|r| r.0).collect(),
        imag: rows.iter().map(|r| r.1).collect(),
    })
}

/// (-1)^k (4 pi^2/(M q^2)) sum_{c1, c2 <= C} (1/(c1 c2)) sum_n N_chi(n; q c1, q c2) I(n).
pub fn sigma_m_transformed(
    big_m: u64,
    k: u32,
    chi: &DirichletCharacter,
    cutoff_mult: f64,
) -> Result<MomentSide> {
    check(big_m, k, chi)?;
    if !(cutoff_mult >= 1.0) {
        return Err(Error::InvalidArgument("cutoff_mult must be >= 1".into()));
    }
    let q = chi.modulus();
    let cmax = index_pair_cutoff(big_m, k, q, cutoff_mult);
    let heuristic_error = (-(k as f64)).exp();
    if cmax == 0 {
        return Ok(MomentSide {
            value: 0.0,
            certified_error: 0.0,
            heuristic_error,
            imag_residue: 0.0,
            terms: Vec::new(),
        });
    }
    let hists: HashMap<u64, Vec<Complex64>> = (1..=cmax)
        .into_par_iter()
        .map(|c| (c * q, dagger_histogram(c * q, chi)))
        .collect();
    let band = 4.0 / q as f64;
    let s = (band + decay_radius(DUAL_WINDOW_LEVEL) / big_m as f64).ceil() as u64 + 1;
    let main = dual_pass(big_m, k, chi, cmax, &hists, s)?;
    let check_pass = dual_pass(big_m, k, chi, cmax, &hists, s + s.div_ceil(4) + 1)?;
    let value = total(&main.terms);
    let other = total(&check_pass.terms);
    let imag = crate::summation::compensated_sum(main.imag.iter().copied());
    Ok(MomentSide {
        value,
        certified_error: (value - other).abs() + 64.0 * f64::EPSILON * value.abs(),
        heuristic_error,
        imag_residue: imag.abs(),
        terms: main.terms,
    })
}

pub fn sigma_m(
    big_m: u64,
    k: u32,
    chi: &DirichletCharacter,
    route: Route,
    cutoff_mult: f64,
) -> Result<MomentReport> {
    let direct = match route {
        Route::Direct | Route::Both => Some(sigma_m_direct(big_m, k, chi)?),
        Route::Transformed => None,
    };
    let transformed = match route {
        Route::Transformed | Route::Both => Some(sigma_m_transformed(big_m, k, chi, cutoff_mult)?),
        Route::Direct => None,
    };
    Ok(MomentReport {
        family: MomentFamily::Index,
        scale: big_m,
        fixed: k as u64,
        q: chi.modulus(),
        chi_id: chi.id(),
        direct,
        transformed,
    })
}
