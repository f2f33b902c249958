//! Integer arithmetic: factorization and the multiplicative functions used in
//! the bounds (f, alpha, g, sigma_0, phi).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// (prime, exponent), primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }

    /// Iterator over the prime powers p^e exactly dividing n.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, e)| p.pow(e))
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// gcd of an integer (possibly negative or zero) with a positive modulus.
pub fn gcd_signed(a: i64, m: u64) -> u64 {
    gcd(a.unsigned_abs(), m)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all n < 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho; only reached for composites without small
// factors.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize needs n >= 1");
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p <= 1000 && p * p <= m {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    split_into(m, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Factorization { n, factors }
}

/// p-adic valuation; None stands for +infinity (x = 0).
pub fn valuation(x: i64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut x = x.unsigned_abs();
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// The largest square dividing n (denoted f).
pub fn largest_square_divisor(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, e)| p.pow(e - e % 2))
        .product()
}

/// n / f(n), always square-free (denoted alpha).
pub fn squarefree_part(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p)
        .product()
}

fn g_prime_power(p: u64, a: u32) -> f64 {
    let p = p as f64;
    match a {
        0 | 1 => 1.0,
        a if a % 2 == 0 => p.powf(a as f64 / 4.0),
        a => p.powf((a as f64 + 1.0) / 4.0),
    }
}

/// The multiplicative function g appearing in the refined Weil bound.
pub fn g_function(n: u64) -> f64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, a)| g_prime_power(p, a))
        .product()
}

pub fn g_of_prime_power(p: u64, a: u32) -> f64 {
    g_prime_power(p, a)
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(_, e)| e as u64 + 1)
        .product()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in &factorize(n).factors {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Inverse of a modulo c in [0, c). Modulo 1 every integer is a unit with
/// inverse 0.
pub fn mod_inverse(a: i64, c: u64) -> Result<u64> {
    if c == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if c == 1 {
        return Ok(0);
    }
    let (mut old_r, mut r) = (a.rem_euclid(c as i64) as i128, c as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { a, modulus: c });
    }
    Ok(old_s.rem_euclid(c as i128) as u64)
}

/// Combine pairwise coprime congruences x = r_i mod m_i.
pub fn crt_combine(congruences: &[(u64, u64)]) -> Result<(u64, u64)> {
    let mut acc = (0u64, 1u64);
    for &(r, m) in congruences {
        if m == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let (r0, m0) = acc;
        if gcd(m0, m) != 1 {
            return Err(Error::NonCoprimeModuli(m0, m));
        }
        // x = r0 + m0 * t with m0 * t = r - r0 (mod m)
        let inv = mod_inverse(m0 as i64, m)?;
        let diff = (r % m + m - r0 % m) % m;
        let t = mul_mod(diff, inv, m);
        let modulus = m0 as u128 * m as u128;
        if modulus > u64::MAX as u128 {
            return Err(Error::RangeExceeded("CRT modulus exceeds 64 bits".into()));
        }
        let x = (r0 as u128 + m0 as u128 * t as u128) % modulus;
        acc = (x as u64, modulus as u64);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        assert!(factorize(1).factors.is_empty());
        assert_eq!(factorize(12).factors, vec![(2, 2), (3, 1)]);
        let n = (1u64 << 40) + 1;
        let f = factorize(n);
        assert_eq!(f.product(), n);
        assert!(f.factors.iter().all(|&(p, _)| is_prime(p)));
        let big = 4_294_967_291u64 * 4_294_967_279u64;
        assert_eq!(factorize(big).factors, vec![(4_294_967_279, 1), (4_294_967_291, 1)]);
    }

    #[test]
    fn multiplicative_function_examples() {
        assert_eq!(largest_square_divisor(1), 1);
        assert_eq!(largest_square_divisor(12), 4);
        assert_eq!(largest_square_divisor(72), 36);
        assert_eq!(squarefree_part(1), 1);
        assert_eq!(squarefree_part(12), 3);
        assert_eq!(squarefree_part(8), 2);
        assert_eq!(g_function(1), 1.0);
        assert!((g_function(4) - 2f64.sqrt()).abs() < 1e-15);
        assert!((g_function(8) - 2.0).abs() < 1e-15);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn inverse_and_crt() {
        assert_eq!(mod_inverse(3, 7), Ok(5));
        assert!(matches!(mod_inverse(2, 4), Err(Error::NotInvertible { .. })));
        assert_eq!(mod_inverse(-1, 7), Ok(6));
        assert_eq!(crt_combine(&[(2, 3), (3, 5)]), Ok((8, 15)));
        assert!(matches!(crt_combine(&[(1, 4), (1, 6)]), Err(Error::NonCoprimeModuli(4, 6))));
    }
}
