//! The Delta series, squared Petersson norms of the normalized Poincaré
//! series, non-vanishing certificates, and scans over dyadic ranges.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bessel::{jn, log_first_term};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::kloosterman::{kloosterman_direct, KloostermanValue};
use crate::summation::NeumaierComplex;

pub const DEFAULT_REL_TOL: f64 = 1e-12;
pub const MAX_TERMS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBoundedValue {
    pub value: Complex64,
    /// rigorous bound on the dropped tail of the c-series
    pub tail_bound: f64,
    pub terms_used: u64,
    /// estimate of accumulated rounding in the kept terms
    pub rounding_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NonZeroCertified,
    Inconclusive,
    ParityMismatch,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NonZeroCertified => "NonZeroCertified",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::ParityMismatch => "ParityMismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormCertificate {
    pub k: u32,
    pub m: u64,
    pub q: u64,
    pub chi_id: String,
    pub norm_sq: f64,
    pub total_error: f64,
    pub margin: f64,
    pub verdict: Verdict,
    /// Im(i^k Delta), zero in exact arithmetic
    pub imag_residue: f64,
}

/// i^k z, exact quarter-turn.
pub fn times_i_pow(k: u32, z: Complex64) -> Complex64 {
    match k % 4 {
        0 => z,
        1 => Complex64::new(-z.im, z.re),
        2 => -z,
        _ => Complex64::new(z.im, -z.re),
    }
}

/// Cutoff C so that the tail sum_{c > C} bound is <= tol, together with the
/// bound itself. Past c0 = ceil(X/(2 sqrt k)) + 1 every Bessel argument is in
/// the first-term-domination range, so each dropped term is at most
/// (X/(2c))^nu / nu!, and sum_{c>C} c^{-nu} <= C^{1-nu}/(nu-1).
pub fn series_cutoff(k: u32, x: f64, tol: f64) -> Result<(u64, f64)> {
    let nu = k - 1;
    let c0 = (x / (2.0 * (k as f64).sqrt())).ceil() as u64 + 1;
    let log_tail = |c: f64| -> f64 {
        if x == 0.0 {
            return f64::NEG_INFINITY;
        }
        log_first_term(nu, x) + (1.0 - nu as f64) * c.ln() - ((nu - 1) as f64).ln()
    };
    let need = (log_first_term(nu, x) - ((nu - 1) as f64).ln() - tol.ln()) / (nu as f64 - 1.0);
    let c_tol = if x == 0.0 || need <= 0.0 { 1.0 } else { need.exp().ceil() };
    if c_tol > MAX_TERMS as f64 || c0 > MAX_TERMS {
        return Err(Error::ToleranceUnreachable { tol, limit: MAX_TERMS });
    }
    let c = c0.max(c_tol as u64).max(1);
    Ok((c, log_tail(c as f64).exp()))
}

/// Kloosterman sums S_chi(m, n; cq) for c = 1, 2, ..., extended on demand and
/// shared by every weight that needs them.
#[derive(Debug, Clone)]
pub struct DeltaSeries {
    m: u64,
    n: u64,
    chi: DirichletCharacter,
    sums: Vec<KloostermanValue>,
}

impl DeltaSeries {
    pub fn new(m: u64, n: u64, chi: &DirichletCharacter) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("Delta needs m, n >= 1".into()));
        }
        Ok(DeltaSeries { m, n, chi: chi.clone(), sums: Vec::new() })
    }

    pub fn prefetch(&mut self, cutoff: u64) -> Result<()> {
        let q = self.chi.modulus();
        let start = self.sums.len() as u64 + 1;
        if cutoff < start {
            return Ok(());
        }
        let (m, n, chi) = (self.m as i64, self.n as i64, &self.chi);
        let fresh: Result<Vec<KloostermanValue>> = (start..=cutoff)
            .into_par_iter()
            .map(|c| kloosterman_direct(m, n, c * q, chi))
            .collect();
        self.sums.extend(fresh?);
        Ok(())
    }

    /// Cutoff and tail bound that `evaluate` would use for weight k.
    pub fn cutoff_for(&self, k: u32, rel_tol: f64) -> Result<(u64, f64)> {
        if k < 3 {
            return Err(Error::WeightTooSmall(k));
        }
        series_cutoff(k, self.argument(), rel_tol)
    }

    fn argument(&self) -> f64 {
        4.0 * PI * ((self.m as f64) * (self.n as f64)).sqrt() / self.chi.modulus() as f64
    }

    pub fn evaluate(&mut self, k: u32, rel_tol: f64) -> Result<TailBoundedValue> {
        let (cutoff, _) = self.cutoff_for(k, rel_tol)?;
        self.prefetch(cutoff)?;
        self.evaluate_prefetched(k, rel_tol)
    }

    /// As `evaluate`, for a series already prefetched far enough; usable from
    /// many threads at once.
    pub fn evaluate_prefetched(&self, k: u32, rel_tol: f64) -> Result<TailBoundedValue> {
        let (cutoff, tail_bound) = self.cutoff_for(k, rel_tol)?;
        if (self.sums.len() as u64) < cutoff {
            return Err(Error::InvalidArgument(format!(
                "series prefetched to {} terms, weight {k} needs {cutoff}",
                self.sums.len()
            )));
        }
        let q = self.chi.modulus();
        let x = self.argument();
        let nu = k - 1;
        let mut acc = NeumaierComplex::new();
        let mut rounding = 0.0;
        for c in 1..=cutoff {
            let s = &self.sums[(c - 1) as usize];
            let cq = (c * q) as f64;
            let j = jn(nu, x / c as f64)?;
            let term = s.value * (j.value / cq);
            acc.add(term);
            rounding += (s.error_estimate * j.value.abs() + s.value.norm() * j.abs_error_bound) / cq
                + 2.0 * f64::EPSILON * term.norm();
        }
        Ok(TailBoundedValue {
            value: acc.value(),
            tail_bound,
            terms_used: cutoff,
            rounding_bound: rounding,
        })
    }
}

/// Delta_{k,q,chi}(m, n) = sum_c S_chi(m, n; cq)/(cq) J_{k-1}(4 pi sqrt(mn)/(cq)).
pub fn delta_series(
    k: u32,
    m: u64,
    n: u64,
    q: u64,
    chi: &DirichletCharacter,
    rel_tol: f64,
) -> Result<TailBoundedValue> {
    if chi.modulus() != q {
        return Err(Error::ModulusMismatch { char_modulus: chi.modulus(), modulus: q });
    }
    DeltaSeries::new(m, n, chi)?.evaluate(k, rel_tol)
}

/// Same series with a fixed cutoff and no tail certificate.
pub fn delta_fixed_cutoff(
    k: u32,
    m: u64,
    n: u64,
    chi: &DirichletCharacter,
    cutoff: u64,
) -> Result<Complex64> {
    let mut series = DeltaSeries::new(m, n, chi)?;
    series.prefetch(cutoff)?;
    let q = chi.modulus();
    let x = 4.0 * PI * ((m as f64) * (n as f64)).sqrt() / q as f64;
    let mut acc = NeumaierComplex::new();
    for c in 1..=cutoff {
        let s = series.sums[(c - 1) as usize].value;
        acc.add(s * (jn(k - 1, x / c as f64)?.value / (c * q) as f64));
    }
    Ok(acc.value())
}

pub(crate) fn certificate_from_delta(
    k: u32,
    m: u64,
    chi: &DirichletCharacter,
    delta: &TailBoundedValue,
) -> NormCertificate {
    let rotated = times_i_pow(k, delta.value);
    let norm_sq = 1.0 + 2.0 * PI * rotated.re;
    let total_error = 2.0 * PI * (delta.tail_bound + delta.rounding_bound);
    let margin = norm_sq - total_error;
    NormCertificate {
        k,
        m,
        q: chi.modulus(),
        chi_id: chi.id(),
        norm_sq,
        total_error,
        margin,
        verdict: if margin > 0.0 { Verdict::NonZeroCertified } else { Verdict::Inconclusive },
        imag_residue: 2.0 * PI * rotated.im,
    }
}

fn parity_mismatch(k: u32, m: u64, chi: &DirichletCharacter) -> NormCertificate {
    // the series vanishes identically when chi(-1) != (-1)^k
    NormCertificate {
        k,
        m,
        q: chi.modulus(),
        chi_id: chi.id(),
        norm_sq: 0.0,
        total_error: 0.0,
        margin: 0.0,
        verdict: Verdict::ParityMismatch,
        imag_residue: 0.0,
    }
}

pub fn parity_matches(k: u32, chi: &DirichletCharacter) -> bool {
    (k % 2) as u8 == chi.parity()
}

/// ||P~||^2 = 1 + 2 pi i^k Delta_{k,q,chi}(m, m).
pub fn norm_squared_with_tol(
    k: u32,
    m: u64,
    q: u64,
    chi: &DirichletCharacter,
    rel_tol: f64,
) -> Result<NormCertificate> {
    if k < 3 {
        return Err(Error::WeightTooSmall(k));
    }
    if chi.modulus() != q {
        return Err(Error::ModulusMismatch { char_modulus: chi.modulus(), modulus: q });
    }
    if !parity_matches(k, chi) {
        return Ok(parity_mismatch(k, m, chi));
    }
    let delta = DeltaSeries::new(m, m, chi)?.evaluate(k, rel_tol)?;
    Ok(certificate_from_delta(k, m, chi, &delta))
}

pub fn norm_squared(k: u32, m: u64, q: u64, chi: &DirichletCharacter) -> Result<NormCertificate> {
    norm_squared_with_tol(k, m, q, chi, DEFAULT_REL_TOL)
}

/// Coefficient of x^n in x prod_{j<=n} (1 - x^j)^24.
pub fn ramanujan_tau(n: u64) -> Result<i128> {
    if n == 0 || n > 200 {
        return Err(Error::RangeExceeded(format!("ramanujan_tau needs 1 <= n <= 200, got {n}")));
    }
    let len = n as usize; // degrees 0..n-1 of the product
    let mut euler = vec![0i128; len];
    euler[0] = 1;
    for j in 1..len {
        for d in (j..len).rev() {
            euler[d] -= euler[d - j];
        }
    }
    let mul = |a: &[i128], b: &[i128]| -> Vec<i128> {
        let mut out = vec![0i128; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b[..len - i].iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let e2 = mul(&euler, &euler);
    let e4 = mul(&e2, &e2);
    let e8 = mul(&e4, &e4);
    let e16 = mul(&e8, &e8);
    let e24 = mul(&e16, &e8);
    Ok(e24[len - 1])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    /// the scanned variable: k for weight scans, m for index scans
    pub parameter: u64,
    pub certificate: NormCertificate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    pub threshold: f64,
    pub near_unit_count: usize,
    pub nonzero_count: usize,
    /// rows both certified non-zero and within the threshold of 1
    pub certified_near_unit_count: usize,
    pub exceptional: Vec<u64>,
    pub admissible: usize,
    /// half the dyadic range length, the expected admissible count
    pub half_range: f64,
}

fn summarize(rows: Vec<ScanRow>, threshold: f64, half_range: f64) -> ScanResult {
    let mut near = 0;
    let mut nonzero = 0;
    let mut both = 0;
    let mut exceptional = Vec::new();
    for r in &rows {
        let c = &r.certificate;
        if c.verdict == Verdict::ParityMismatch {
            continue;
        }
        let is_near = (c.norm_sq - 1.0).abs() <= threshold;
        let is_nonzero = c.verdict == Verdict::NonZeroCertified;
        near += is_near as usize;
        nonzero += is_nonzero as usize;
        both += (is_near && is_nonzero) as usize;
        if !is_near {
            exceptional.push(r.parameter);
        }
    }
    let admissible = rows.len();
    ScanResult {
        rows,
        threshold,
        near_unit_count: near,
        nonzero_count: nonzero,
        certified_near_unit_count: both,
        exceptional,
        admissible,
        half_range,
    }
}

/// Scan K < k < 2K with k of the given parity (normally chi's own parity).
pub fn scan_k_with_parity(
    big_k: u32,
    m: u64,
    q: u64,
    chi: &DirichletCharacter,
    eps: f64,
    parity: u8,
) -> Result<ScanResult> {
    scan_k_with_tol(big_k, m, q, chi, eps, parity, DEFAULT_REL_TOL)
}

pub fn scan_k_with_tol(
    big_k: u32,
    m: u64,
    q: u64,
    chi: &DirichletCharacter,
    eps: f64,
    parity: u8,
    rel_tol: f64,
) -> Result<ScanResult> {
    if big_k < 6 {
        return Err(Error::InvalidArgument("scan_k needs K >= 6".into()));
    }
    if chi.modulus() != q {
        return Err(Error::ModulusMismatch { char_modulus: chi.modulus(), modulus: q });
    }
    let ks: Vec<u32> = (big_k + 1..2 * big_k).filter(|k| k % 2 == parity as u32 % 2).collect();
    let mut series = DeltaSeries::new(m, m, chi)?;
    let mut longest = 0;
    for &k in ks.iter().filter(|&&k| parity_matches(k, chi)) {
        longest = longest.max(series.cutoff_for(k, rel_tol)?.0);
    }
    series.prefetch(longest)?;
    let rows: Result<Vec<ScanRow>> = ks
        .par_iter()
        .map(|&k| {
            let cert = if parity_matches(k, chi) {
                let delta = series.evaluate_prefetched(k, rel_tol)?;
                certificate_from_delta(k, m, chi, &delta)
            } else {
                parity_mismatch(k, m, chi)
            };
            Ok(ScanRow { parameter: k as u64, certificate: cert })
        })
        .collect();
    Ok(summarize(rows?, (big_k as f64).powf(-eps), big_k as f64 / 2.0))
}

pub fn scan_k(big_k: u32, m: u64, q: u64, chi: &DirichletCharacter, eps: f64) -> Result<ScanResult> {
    scan_k_with_parity(big_k, m, q, chi, eps, chi.parity())
}

/// Scan M < m < 2M at fixed weight k.
pub fn scan_m(big_m: u64, k: u32, q: u64, chi: &DirichletCharacter, eps: f64) -> Result<ScanResult> {
    scan_m_with_tol(big_m, k, q, chi, eps, DEFAULT_REL_TOL)
}

pub fn scan_m_with_tol(
    big_m: u64,
    k: u32,
    q: u64,
    chi: &DirichletCharacter,
    eps: f64,
    rel_tol: f64,
) -> Result<ScanResult> {
    if k < 3 {
        return Err(Error::WeightTooSmall(k));
    }
    if big_m == 0 {
        return Err(Error::InvalidArgument("scan_m needs M >= 1".into()));
    }
    if chi.modulus() != q {
        return Err(Error::ModulusMismatch { char_modulus: chi.modulus(), modulus: q });
    }
    let ms: Vec<u64> = (big_m + 1..2 * big_m).collect();
    let rows: Result<Vec<ScanRow>> = ms
        .par_iter()
        .map(|&m| {
            let certificate = norm_squared_with_tol(k, m, q, chi, rel_tol)?;
            Ok(ScanRow { parameter: m, certificate })
        })
        .collect();
    Ok(summarize(rows?, (k as f64).powf(-eps), big_m as f64 / 2.0))
}
