//! Oscillatory integrals of the two moment transforms.
//!
//! I^-/+ = int u_hat(K t) J0(sqrt(x1^2 + x2^2 -/+ 2 x1 x2 cos 2 pi t)) dt.
//! The J0 factor is 1-periodic, so the integral equals int_0^1 F(t) P(t) dt
//! with P(t) = sum_j u_hat(K (t + j)). P has Fourier coefficients u(-r/K)/K,
//! supported in -3K < r < -K/2, and F's coefficients J_n(x1) J_n(x2) are
//! negligible past n ~ min(x1, x2); the trapezoid rule on [0, 1] is therefore
//! exact once the node count exceeds both bands together.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bessel::{jn, jn_sequence, jn_value};
use crate::error::{Error, Result};
use crate::smoothfn::{u_eval, window};
use crate::summation::{compensated_sum, Neumaier, NeumaierComplex};

/// u_hat is sampled out to this radius when periodizing; past it |u_hat| is
/// at the 1e-15 rounding floor of its quadrature.
pub const TRANSFORM_RADIUS: f64 = 160.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscValue {
    pub value: f64,
    /// |value at N nodes - value at 2N nodes|
    pub quadrature_error: f64,
}

static PERIODIZED: OnceLock<Mutex<HashMap<(u32, usize), Arc<Vec<f64>>>>> = OnceLock::new();

/// Re P(i/n) for i = 0..n, P the 1-periodization of t -> u_hat(K t).
pub fn periodized_window(big_k: u32, n: usize) -> Result<Arc<Vec<f64>>> {
    let cache = PERIODIZED.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(big_k, n)) {
        return Ok(v.clone());
    }
    // P(i/n) = sum over l = i mod n of u_hat(l K / n); Re u_hat is even
    let step = big_k as f64 / n as f64;
    let lmax = (TRANSFORM_RADIUS / step).floor() as usize;
    let ts: Vec<f64> = (0..=lmax).map(|l| l as f64 * step).collect();
    let re: Vec<f64> = window().u_hat_many(&ts)?.into_iter().map(|z| z.re).collect();
    let mut acc = vec![Neumaier::new(); n];
    for (l, &v) in re.iter().enumerate() {
        acc[l % n].add(v);
        if l > 0 {
            acc[(n - l % n) % n].add(v);
        }
    }
    let vals = Arc::new(acc.iter().map(|a| a.value()).collect::<Vec<f64>>());
    cache.lock().unwrap().insert((big_k, n), vals.clone());
    Ok(vals)
}

fn node_count(big_k: u32, x1: f64, x2: f64) -> usize {
    let xmin = x1.abs().min(x2.abs());
    let band = 3.0 * big_k as f64 + xmin + 12.0 * xmin.cbrt() + 30.0;
    (band.ceil() as usize + 1).next_power_of_two()
}

/// Both integrals (I^-, I^+) for Bessel arguments x1, x2.
pub fn osc_integrals_for_arguments(big_k: u32, x1: f64, x2: f64) -> Result<(OscValue, OscValue)> {
    if big_k == 0 {
        return Err(Error::InvalidArgument("K must be positive".into()));
    }
    let n = node_count(big_k, x1, x2);
    let n2 = 2 * n;
    let p = periodized_window(big_k, n2)?;
    // F_minus on the fine grid; F_minus(t) = F_minus(1 - t), and F_plus is F_minus shifted by 1/2
    let half: Result<Vec<f64>> = (0..=n2 / 2)
        .map(|i| {
            let c = (TAU * i as f64 / n2 as f64).cos();
            let arg = (x1 * x1 + x2 * x2 - 2.0 * x1 * x2 * c).max(0.0).sqrt();
            Ok(jn(0, arg)?.value)
        })
        .collect();
    let half = half?;
    let f = |i: usize| half[if i <= n2 / 2 { i } else { n2 - i }];
    let trap = |shift: usize, stride: usize| -> f64 {
        let mut acc = Neumaier::new();
        for i in (0..n2).step_by(stride) {
            acc.add(f((i + shift) % n2) * p[i]);
        }
        acc.value() * stride as f64 / n2 as f64
    };
    let pack = |shift: usize| {
        let fine = trap(shift, 1);
        let coarse = trap(shift, 2);
        OscValue { value: fine, quadrature_error: (fine - coarse).abs() }
    };
    Ok((pack(0), pack(n2 / 2)))
}

/// I^- (sign = -1) or I^+ (sign = +1) at x_i = 4 pi m / (q c_i).
pub fn osc_integral_pm(m: u64, big_k: u32, q: u64, c1: u64, c2: u64, sign: i32) -> Result<OscValue> {
    if c1 == 0 || c2 == 0 || q == 0 {
        return Err(Error::InvalidArgument("osc_integral_pm needs q, c1, c2 >= 1".into()));
    }
    let x1 = 4.0 * PI * m as f64 / (q * c1) as f64;
    let x2 = 4.0 * PI * m as f64 / (q * c2) as f64;
    let (minus, plus) = osc_integrals_for_arguments(big_k, x1, x2)?;
    Ok(if sign < 0 { minus } else { plus })
}

/// |sum_{n = delta mod 2} u(n/K) J_n(x1) J_n(x2) - (I1 + (-1)^delta I2)/2| with
/// I1 = K I^-, I2 = K I^+.
pub fn parity_weighted_bessel_residual(big_k: u32, x1: f64, x2: f64, delta: u8) -> Result<f64> {
    let (lhs, minus, plus) = parity_sides(big_k, x1, x2, delta)?;
    let k = big_k as f64;
    let sign = if delta % 2 == 0 { 1.0 } else { -1.0 };
    Ok((lhs - 0.5 * k * (minus.value + sign * plus.value)).abs())
}

/// The Bessel side sum_{n = delta mod 2} u(n/K) J_n(x1) J_n(x2), and I^-/+.
pub fn parity_sides(big_k: u32, x1: f64, x2: f64, delta: u8) -> Result<(f64, OscValue, OscValue)> {
    if big_k < 4 || x1.abs() > 1e3 || x2.abs() > 1e3 {
        return Err(Error::RangeExceeded("needs K >= 4 and |x1|, |x2| <= 1e3".into()));
    }
    let top = 3 * big_k;
    let j1 = jn_sequence(top, x1)?;
    let j2 = jn_sequence(top, x2)?;
    let lhs = compensated_sum(
        (0..=top as usize)
            .filter(|n| n % 2 == (delta % 2) as usize)
            .map(|n| u_eval(n as f64 / big_k as f64) * j1[n] * j2[n]),
    );
    let (minus, plus) = osc_integrals_for_arguments(big_k, x1, x2)?;
    Ok((lhs, minus, plus))
}

/// I_{M,k}(n; l1, l2) = int u(t/M) J_{k-1}(4 pi t/l1) J_{k-1}(4 pi t/l2) e(t n/(l1 l2)) dt
/// by the trapezoid rule on the support [M/2, 3M]. The integrand is smooth
/// and vanishes to all orders at both ends, so the rule converges faster than
/// any power; the step is set from the oscillation rate and the estimate is
/// compared against the half step.
pub fn osc_integral_index(n: i64, l1: u64, l2: u64, big_m: u64, k: u32) -> Result<(Complex64, f64)> {
    if l1 == 0 || l2 == 0 || k < 3 || big_m == 0 {
        return Err(Error::InvalidArgument(
            "osc_integral_index needs l1, l2, M >= 1 and k >= 3".into(),
        ));
    }
    let m = big_m as f64;
    let freq = n as f64 / (l1 as f64 * l2 as f64);
    let band = 2.0 / l1 as f64 + 2.0 / l2 as f64 + freq.abs();
    // nodes per unit length: Nyquist for the band plus room for u's transform
    let density = 2.0 * band + 60.0 / m + 8.0;
    let steps = ((2.5 * m * density).ceil() as usize).max(64);
    let sum_at = |steps: usize| -> Result<Complex64> {
        let h = 2.5 * m / steps as f64;
        let terms: Result<Vec<Complex64>> = (1..steps)
            .into_par_iter()
            .map(|i| {
                let t = 0.5 * m + i as f64 * h;
                let w = u_eval(t / m)
                    * jn_value(k - 1, 4.0 * PI * t / l1 as f64)?
                    * jn_value(k - 1, 4.0 * PI * t / l2 as f64)?;
                Ok(Complex64::from_polar(w, TAU * (t * freq).fract()))
            })
            .collect();
        let mut acc = NeumaierComplex::new();
        for z in terms? {
            acc.add(z);
        }
        Ok(acc.value() * h)
    };
    let coarse = sum_at(steps)?;
    let fine = sum_at(2 * steps)?;
    Ok((fine, (fine - coarse).norm()))
}
