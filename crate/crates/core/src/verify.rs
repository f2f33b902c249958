//! Self-check suites: each runs an exhaustive or gridded comparison and
//! counts violations.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::arith::{divisor_count, gcd, largest_square_divisor};
use crate::bessel::neumann_residual;
use crate::characters::{enumerate_characters, DirichletCharacter};
use crate::error::{Error, Result};
use crate::kloosterman::{weil_bound_value, KloostermanRows};
use crate::moments::counting::{n_chi_brute_table, n_chi_structured, v_count};
use crate::moments::oscillatory::parity_weighted_bessel_residual;
use crate::moments::sums::{
    s1_envelope, s1_sum, s2_envelope, s2_sum, splitting_rhs, S1_BOUND_CONSTANT, S2_BOUND_CONSTANT,
};
use crate::moments::{sigma_k, sigma_m, MomentReport, Route};
use crate::poincare::parity_matches;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Weil,
    Neumann,
    NCount,
    VCount,
    Sums,
    Cross,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Weil, Suite::Neumann, Suite::NCount, Suite::VCount, Suite::Sums, Suite::Cross];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Weil => "weil",
            Suite::Neumann => "neumann",
            Suite::NCount => "ncount",
            Suite::VCount => "vcount",
            Suite::Sums => "sums",
            Suite::Cross => "cross",
        }
    }

    pub fn from_name(name: &str) -> Result<Suite> {
        Suite::ALL
            .iter()
            .copied()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{name}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub failures: u64,
    /// largest observed |measured| / allowed over all checks
    pub worst_ratio: f64,
    /// first few failing cases, human readable
    pub failing: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

const MAX_LISTED: usize = 10;

#[derive(Default)]
struct Tally {
    checks: u64,
    failures: u64,
    worst: f64,
    failing: Vec<String>,
}

impl Tally {
    fn record(&mut self, measured: f64, allowed: f64, describe: impl FnOnce() -> String) {
        self.checks += 1;
        let ratio = if allowed > 0.0 { measured / allowed } else if measured > 0.0 { f64::INFINITY } else { 0.0 };
        if ratio.is_nan() || ratio > 1.0 {
            self.failures += 1;
            if self.failing.len() < MAX_LISTED {
                self.failing.push(describe());
            }
        }
        if !ratio.is_nan() {
            self.worst = self.worst.max(ratio);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.failures += other.failures;
        self.worst = self.worst.max(other.worst);
        for f in other.failing {
            if self.failing.len() < MAX_LISTED {
                self.failing.push(f);
            }
        }
        self
    }

    fn finish(self, suite: Suite) -> SuiteReport {
        SuiteReport {
            suite,
            checks: self.checks,
            failures: self.failures,
            worst_ratio: self.worst,
            failing: self.failing,
        }
    }
}

fn merge_all(parts: Vec<Tally>) -> Tally {
    parts.into_iter().fold(Tally::default(), Tally::merge)
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let tally = match suite {
        Suite::Weil => weil_suite(400, 24)?,
        Suite::Neumann => neumann_suite()?,
        Suite::NCount => ncount_suite(40)?,
        Suite::VCount => vcount_suite(500)?,
        Suite::Sums => sums_suite()?,
        Suite::Cross => cross_suite()?,
    };
    Ok(tally.finish(suite))
}

/// |S_chi(m, n; c)| against the Weil bound for every modulus c <= max_c that
/// is a multiple of q <= max_q, every character mod q and all residues m, n.
fn weil_suite(max_c: u64, max_q: u64) -> Result<Tally> {
    let mut jobs = Vec::new();
    for q in 1..=max_q {
        for chi in enumerate_characters(q)? {
            for c in (q..=max_c).step_by(q as usize) {
                jobs.push((chi.clone(), c));
            }
        }
    }
    let parts: Result<Vec<Tally>> = jobs
        .par_iter()
        .map(|(chi, c)| {
            let (c, q) = (*c, chi.modulus());
            let rows = KloostermanRows::new(c, chi)?;
            // the bound depends on (m, n) only through gcd(m, n, c)
            let by_gcd: Vec<f64> = (0..=c)
                .map(|d| if d > 0 && c % d == 0 { weil_bound_value(d as i64, d as i64, c / q, q, chi) } else { 0.0 })
                .collect();
            let gcd_n: Vec<u64> = (0..c).map(|n| gcd(n, c)).collect();
            let mut t = Tally::default();
            for m in 0..c as i64 {
                let row = rows.row(m);
                let gm = gcd(m as u64, c);
                for (n, s) in row.iter().enumerate() {
                    let bound = by_gcd[gcd(gm, gcd_n[n]) as usize];
                    t.record(s.norm(), bound + 1e-6, || {
                        format!("S_{}({m},{n};{c}) = {:.6}", chi.id(), s.norm())
                    });
                }
            }
            Ok(t)
        })
        .collect();
    Ok(merge_all(parts?))
}

/// Neumann's addition theorem on a 100-point grid with x <= 50, and the
/// parity-windowed sum against the oscillatory integrals on 20 configurations.
fn neumann_suite() -> Result<Tally> {
    let mut t = Tally::default();
    for i in 0..100u64 {
        let (x1, x2, theta) = neumann_grid_point(i);
        let n = (x1.max(x2).ceil() as u32) + 40;
        let r = neumann_residual(x1, x2, theta, n)?;
        t.record(r, 1e-8, || format!("neumann x1={x1} x2={x2} theta={theta}: {r:.3e}"));
    }
    for (big_k, x1, x2, delta) in parity_window_configs() {
        let r = parity_weighted_bessel_residual(big_k, x1, x2, delta)?;
        t.record(r, 1e-6, || format!("parity K={big_k} x1={x1} x2={x2} delta={delta}: {r:.3e}"));
    }
    Ok(t)
}

pub fn neumann_grid_point(i: u64) -> (f64, f64, f64) {
    let frac = |a: f64| (i as f64 * a).fract();
    let x1 = 0.25 + 49.75 * frac(0.618_033_988_749_895);
    let x2 = 0.25 + 49.75 * frac(0.414_213_562_373_095);
    let theta = TAU * frac(0.259_921_049_894_873);
    (x1, x2, theta)
}

pub fn parity_window_configs() -> Vec<(u32, f64, f64, u8)> {
    let mut out = Vec::new();
    let ks = [4u32, 8, 16, 24, 40];
    let xs = [(1.0, 2.0), (10.0, 10.0), (35.0, 7.5), (120.0, 90.0)];
    for (i, &k) in ks.iter().enumerate() {
        for (j, &(x1, x2)) in xs.iter().enumerate() {
            out.push((k, x1, x2, ((i + j) % 2) as u8));
        }
    }
    out
}

/// Brute force against the structured count for l1, l2 <= max_l, all n, for
/// the characters mod 1 and mod 4.
fn ncount_suite(max_l: u64) -> Result<Tally> {
    let mut chars = vec![DirichletCharacter::principal(1)?];
    chars.extend(enumerate_characters(4)?);
    let mut jobs = Vec::new();
    for chi in &chars {
        let q = chi.modulus();
        for l1 in (q..=max_l).step_by(q as usize) {
            for l2 in (q..=max_l).step_by(q as usize) {
                jobs.push((chi.clone(), l1, l2));
            }
        }
    }
    let parts: Result<Vec<Tally>> = jobs
        .par_iter()
        .map(|(chi, l1, l2)| {
            let (l1, l2) = (*l1, *l2);
            let brute = n_chi_brute_table(l1, l2, chi)?;
            let mut t = Tally::default();
            for (n, b) in brute.iter().enumerate() {
                let s = n_chi_structured(n as i64, l1, l2, chi)?.value;
                let diff = (s - b).norm();
                t.record(diff, 1e-9, || {
                    format!("N_{}({n};{l1},{l2}): brute {b:.6} structured {s:.6}", chi.id())
                });
            }
            Ok(t)
        })
        .collect();
    Ok(merge_all(parts?))
}

/// v(x; l) against an O(l) scan and against sigma_0(l) sqrt(f(l)).
fn vcount_suite(max_l: u64) -> Result<Tally> {
    let parts: Result<Vec<Tally>> = (1..=max_l)
        .into_par_iter()
        .map(|l| {
            let mut t = Tally::default();
            let bound = divisor_count(l) as f64 * (largest_square_divisor(l) as f64).sqrt();
            for x in 0..l {
                let v = v_count(x as i64, l)?;
                let (xi, li) = (x as i128, l as i128);
                let scan = (0..li).filter(|&a| (a * a - xi * a + 1).rem_euclid(li) == 0).count() as u64;
                t.record(v.abs_diff(scan) as f64, 0.0, || format!("v({x};{l}) = {v}, scan {scan}"));
                t.record(v as f64, bound, || format!("v({x};{l}) = {v} > {bound}"));
            }
            Ok(t)
        })
        .collect();
    Ok(merge_all(parts?))
}

/// The S1/S2 bounds with their frozen constants, and the splitting identity.
fn sums_suite() -> Result<Tally> {
    let mut t = Tally::default();
    for q in 1..=24u64 {
        for x in [10.0, 100.0, 1000.0] {
            let s1 = s1_sum(x, q)?;
            let b1 = S1_BOUND_CONSTANT * s1_envelope(x, q);
            t.record(s1, b1, || format!("S1({x};{q}) = {s1:.6} > {b1:.6}"));
            let s2 = s2_sum(x, q)?;
            let b2 = S2_BOUND_CONSTANT * s2_envelope(x, q);
            t.record(s2, b2, || format!("S2({x};{q}) = {s2:.6} > {b2:.6}"));
        }
    }
    let mut split = Tally::default();
    for u in 1..=300u64 {
        for v in 1..=300u64 {
            let lhs = largest_square_divisor(u * v);
            let rhs = splitting_rhs(u, v);
            split.record(lhs.abs_diff(rhs) as f64, 0.0, || format!("f({u}*{v}) = {lhs}, split {rhs}"));
        }
    }
    Ok(t.merge(split))
}

/// Both moments along both routes over the shipped configuration grid.
pub fn cross_grid_reports() -> Result<Vec<MomentReport>> {
    let mut out = Vec::new();
    for q in [1u64, 3, 4] {
        for chi in enumerate_characters(q)? {
            for big_k in [12u32, 16, 24] {
                for m in 1..=6u64 {
                    out.push(sigma_k(big_k, m, &chi, Route::Both, 1.0)?);
                }
            }
            for big_m in [6u64, 8] {
                for k in 10..=14u32 {
                    if parity_matches(k, &chi) {
                        out.push(sigma_m(big_m, k, &chi, Route::Both, 1.0)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn cross_suite() -> Result<Tally> {
    let mut t = Tally::default();
    for r in cross_grid_reports()? {
        let d = r.discrepancy().unwrap_or(f64::NAN).abs();
        let allowed = r.certified_error() + r.cross_tolerance();
        t.record(d, allowed, || {
            format!("{:?} scale={} fixed={} chi={}: discrepancy {d:.3e}", r.family, r.scale, r.fixed, r.chi_id)
        });
        if let Some(side) = &r.direct {
            t.record(-side.value, side.certified_error, || {
                format!("{:?} scale={} fixed={} chi={}: negative direct value", r.family, r.scale, r.fixed, r.chi_id)
            });
        }
    }
    Ok(t)
}
