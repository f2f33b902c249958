//! The arithmetic sums S1, S2, T_sigma that control the transformed index
//! moment, with their envelopes and the splitting identity for f.

use rayon::prelude::*;

use crate::arith::{divisor_count, gcd, largest_square_divisor, squarefree_part};
use crate::error::{Error, Result};
use crate::summation::{compensated_sum, pairwise_sum};

pub const MAX_SINGLE_RANGE: f64 = 1e6;
pub const MAX_DOUBLE_RANGE: f64 = 1e4;

/// Frozen constants C with S1 <= C * envelope and S2 <= C * envelope: twice the
/// largest ratio seen for q <= 24, X in {5, 50, 500, 2000} (0.720 and 2.93e-5).
pub const S1_BOUND_CONSTANT: f64 = 1.44;
pub const S2_BOUND_CONSTANT: f64 = 5.9e-5;

fn check_range(x: f64, max: f64) -> Result<u64> {
    if !(x >= 0.0) || x > max {
        return Err(Error::RangeExceeded(format!("sum range X must lie in [0, {max:e}], got {x}")));
    }
    Ok(x.floor() as u64)
}

fn sqrt_f_table(n: u64, a: u64) -> Vec<f64> {
    (1..=n)
        .into_par_iter()
        .map(|c| (largest_square_divisor(c * a) as f64).sqrt())
        .collect()
}

/// T_sigma(X; a) = sum_{c <= X} f(c a)^{1/2} / c^sigma.
pub fn t_sigma_sum(x: f64, a: u64, sigma: f64) -> Result<f64> {
    let n = check_range(x, MAX_SINGLE_RANGE)?;
    if a == 0 || !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidArgument("t_sigma_sum needs a >= 1, 0 < sigma < 1".into()));
    }
    let sf = sqrt_f_table(n, a);
    Ok(compensated_sum(sf.iter().enumerate().map(|(i, s)| s / ((i + 1) as f64).powf(sigma))))
}

/// S1(X; q) = T_{1/4}(X; q).
pub fn s1_sum(x: f64, q: u64) -> Result<f64> {
    t_sigma_sum(x, q, 0.25)
}

/// S2(X; q) = sum_{c1, c2 <= X} (c1, c2)^{1/2} f(q c1)^{1/2} f(q c2)^{1/2} / (c1 c2)^{3/4}.
pub fn s2_sum(x: f64, q: u64) -> Result<f64> {
    let n = check_range(x, MAX_DOUBLE_RANGE)?;
    if q == 0 {
        return Err(Error::InvalidArgument("s2_sum needs q >= 1".into()));
    }
    let w: Vec<f64> = sqrt_f_table(n, q)
        .iter()
        .enumerate()
        .map(|(i, s)| s / ((i + 1) as f64).powf(0.75))
        .collect();
    // diagonal plus twice the strict upper triangle, one row per c1
    let rows: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|c1| {
            let w1 = w[(c1 - 1) as usize];
            let off = compensated_sum(
                (c1 + 1..=n).map(|c2| (gcd(c1, c2) as f64).sqrt() * w[(c2 - 1) as usize]),
            );
            w1 * ((c1 as f64).sqrt() * w1 + 2.0 * off)
        })
        .collect();
    Ok(pairwise_sum(&rows))
}

/// f(q)^{1/2} sigma_0(q) X^{3/4} log(X + 2).
pub fn s1_envelope(x: f64, q: u64) -> f64 {
    (largest_square_divisor(q) as f64).sqrt() * divisor_count(q) as f64 * x.powf(0.75) * (x + 2.0).ln()
}

/// q^{1/2} f(q)^{1/2} sigma_0(q)^2 X^{1/2} log^18(X + 2).
pub fn s2_envelope(x: f64, q: u64) -> f64 {
    let d = divisor_count(q) as f64;
    (q as f64).sqrt()
        * (largest_square_divisor(q) as f64).sqrt()
        * d
        * d
        * x.sqrt()
        * (x + 2.0).ln().powi(18)
}

/// X^{1 - sigma} log(X + 2) f(a)^{1/2} sigma_0(a).
pub fn t_sigma_envelope(x: f64, a: u64, sigma: f64) -> f64 {
    x.powf(1.0 - sigma)
        * (x + 2.0).ln()
        * (largest_square_divisor(a) as f64).sqrt()
        * divisor_count(a) as f64
}

/// Right side of f(uv) = f(u) f(v/(v, alpha(u))) (v, alpha(u))^2.
pub fn splitting_rhs(u: u64, v: u64) -> u64 {
    let d = gcd(v, squarefree_part(u));
    largest_square_divisor(u) * largest_square_divisor(v / d) * d * d
}
