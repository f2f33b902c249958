//! Twisted Kloosterman sums S_chi(m, n; c) = sum_{a mod c, (a,c)=1}
//! chi(a) e((m a + n abar)/c), and the Weil-type bounds they satisfy.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::arith::{
    divisor_count, euler_phi, factorize, g_function, g_of_prime_power, gcd, gcd_signed,
    mod_inverse, valuation,
};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::summation::{roots_table, NeumaierComplex};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KloostermanValue {
    pub value: Complex64,
    pub modulus: u64,
    pub term_count: u64,
    /// bound on the accumulated rounding error
    pub error_estimate: f64,
}

impl KloostermanValue {
    fn exact_zero(modulus: u64) -> Self {
        KloostermanValue {
            value: Complex64::new(0.0, 0.0),
            modulus,
            term_count: 0,
            error_estimate: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Factored,
}

fn check_modulus(c: u64, chi: &DirichletCharacter) -> Result<()> {
    if c == 0 || c % chi.modulus() != 0 {
        return Err(Error::ModulusMismatch { char_modulus: chi.modulus(), modulus: c });
    }
    Ok(())
}

fn direct_with<F: Fn(u64) -> Complex64>(m: i64, n: i64, c: u64, chi_at: F) -> KloostermanValue {
    let table = roots_table(c);
    let mr = m.rem_euclid(c as i64) as u128;
    let nr = n.rem_euclid(c as i64) as u128;
    let mut acc = NeumaierComplex::new();
    let mut count = 0u64;
    for a in 0..c {
        if gcd(a, c) != 1 {
            continue;
        }
        let abar = mod_inverse(a as i64, c).expect("unit") as u128;
        let idx = ((mr * a as u128 + nr * abar) % c as u128) as usize;
        acc.add(chi_at(a) * table[idx]);
        count += 1;
    }
    let value = acc.value();
    KloostermanValue {
        value,
        modulus: c,
        term_count: count,
        error_estimate: 4.0 * f64::EPSILON * (count as f64 + value.norm()),
    }
}

/// Direct summation over the units mod c. `chi` must have modulus dividing c;
/// chi(a) means its value at a mod q.
pub fn kloosterman_direct(
    m: i64,
    n: i64,
    c: u64,
    chi: &DirichletCharacter,
) -> Result<KloostermanValue> {
    check_modulus(c, chi)?;
    let q = chi.modulus();
    Ok(direct_with(m, n, c, |a| chi.eval_reduced(a % q)))
}

// S_chi(m, n; p^l) for a character chi of modulus p^v, v <= l.
fn prime_power_sum(m: i64, n: i64, p: u64, l: u32, chi: &DirichletCharacter) -> KloostermanValue {
    let pl = p.pow(l);
    let vm = valuation(m.rem_euclid(pl as i64), p).unwrap_or(l);
    let vn = valuation(n.rem_euclid(pl as i64), p).unwrap_or(l);
    let alpha = vm.min(vn).min(l);
    if alpha == l {
        // every exponential is 1: a pure character sum
        if chi.is_principal() {
            let phi = euler_phi(pl);
            return KloostermanValue {
                value: Complex64::new(phi as f64, 0.0),
                modulus: pl,
                term_count: phi,
                error_estimate: 0.0,
            };
        }
        return KloostermanValue::exact_zero(pl);
    }
    let reduced = p.pow(l - alpha);
    if alpha > 0 && chi.conductor() > reduced {
        // chi is nontrivial on the units = 1 mod p^{l-alpha}; the inner
        // character sum annihilates every term
        return KloostermanValue::exact_zero(pl);
    }
    let pa = p.pow(alpha) as i64;
    let scale = pa as f64;
    let inner = direct_with(
        m.rem_euclid(pl as i64) / pa,
        n.rem_euclid(pl as i64) / pa,
        reduced,
        |b| chi.eval(b as i64),
    );
    KloostermanValue {
        value: inner.value * scale,
        modulus: pl,
        term_count: inner.term_count,
        error_estimate: inner.error_estimate * scale,
    }
}

/// Evaluation through twisted multiplicativity over the prime powers of c,
/// with the gcd reduction at each prime power.
pub fn kloosterman_factored(
    m: i64,
    n: i64,
    c: u64,
    chi: &DirichletCharacter,
) -> Result<KloostermanValue> {
    check_modulus(c, chi)?;
    let mut parts = Vec::new();
    for &(p, l) in &factorize(c).factors {
        let pl = p.pow(l);
        let rest = c / pl;
        let u = mod_inverse(rest as i64, pl)? as i128;
        let mp = ((m as i128).rem_euclid(pl as i128) * u % pl as i128) as i64;
        let np = ((n as i128).rem_euclid(pl as i128) * u % pl as i128) as i64;
        let part = prime_power_sum(mp, np, p, l, &chi.prime_component(p));
        if part.value.re == 0.0 && part.value.im == 0.0 && part.error_estimate == 0.0 {
            return Ok(KloostermanValue::exact_zero(c));
        }
        parts.push(part);
    }
    let mut value = Complex64::new(1.0, 0.0);
    let mut err = 0.0;
    let mut count = 0;
    for (i, part) in parts.iter().enumerate() {
        value *= part.value;
        count += part.term_count;
        let others: f64 = parts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, o)| o.value.norm() + o.error_estimate)
            .product();
        err += part.error_estimate * others;
    }
    err += 4.0 * f64::EPSILON * parts.len() as f64 * value.norm();
    Ok(KloostermanValue { value, modulus: c, term_count: count.max(1), error_estimate: err })
}

pub fn kloosterman(
    m: i64,
    n: i64,
    c: u64,
    chi: &DirichletCharacter,
    method: Method,
) -> Result<KloostermanValue> {
    match method {
        Method::Direct => kloosterman_direct(m, n, c, chi),
        Method::Factored => kloosterman_factored(m, n, c, chi),
    }
}

/// 4 sigma_0(cq) (m, n, cq)^{1/2} (cq)^{1/2} g(q'), q' the conductor of chi.
pub fn weil_bound_value(m: i64, n: i64, c: u64, q: u64, chi: &DirichletCharacter) -> f64 {
    let cq = c * q;
    let d = gcd(gcd_signed(m, cq), gcd_signed(n, cq));
    4.0 * divisor_count(cq) as f64
        * (d as f64).sqrt()
        * (cq as f64).sqrt()
        * g_function(chi.conductor())
}

/// Prime-power variant 2 (2,p)^2 p^{l/2} g(p^gamma).
pub fn prime_power_bound_value(p: u64, l: u32, gamma: u32) -> f64 {
    let two_p = gcd(2, p) as f64;
    2.0 * two_p * two_p * (p as f64).powf(l as f64 / 2.0) * g_of_prime_power(p, gamma)
}

/// All S_chi(m, n; c) for fixed (c, chi), one m at a time: the n-dependence is
/// a discrete Fourier transform over abar.
pub struct KloostermanRows {
    c: u64,
    inverse: Vec<u64>,
    chi_values: Vec<Complex64>,
    table: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
}

impl KloostermanRows {
    pub fn new(c: u64, chi: &DirichletCharacter) -> Result<Self> {
        check_modulus(c, chi)?;
        let q = chi.modulus();
        let inverse = (0..c)
            .map(|a| if gcd(a, c) == 1 { mod_inverse(a as i64, c).unwrap() } else { u64::MAX })
            .collect();
        let chi_values = (0..c).map(|a| chi.eval_reduced(a % q)).collect();
        let fft = FftPlanner::new().plan_fft_inverse(c as usize);
        Ok(KloostermanRows { c, inverse, chi_values, table: roots_table(c), fft })
    }

    /// Entry n is S_chi(m, n; c), for n in [0, c).
    pub fn row(&self, m: i64) -> Vec<Complex64> {
        let c = self.c;
        let mr = m.rem_euclid(c as i64) as u128;
        let mut buf = vec![Complex64::new(0.0, 0.0); c as usize];
        for a in 0..c {
            let abar = self.inverse[a as usize];
            if abar == u64::MAX {
                continue;
            }
            let idx = (mr * a as u128 % c as u128) as usize;
            buf[abar as usize] = self.chi_values[a as usize] * self.table[idx];
        }
        self.fft.process(&mut buf);
        buf
    }
}
