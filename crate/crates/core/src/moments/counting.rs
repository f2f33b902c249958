//! The arithmetic dual of the index moment: v(x; l) and the character-weighted
//! counts N_chi(n; l1, l2) of residue pairs with a1' l2 + a2' l1 = n (mod l1 l2),
//! where a' = a + abar.

use num_complex::Complex64;

use crate::arith::{crt_combine, factorize, gcd, mod_inverse};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::summation::NeumaierComplex;

pub const MAX_COUNT_MODULUS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Brute,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NCountValue {
    pub n: i64,
    pub l1: u64,
    pub l2: u64,
    pub value: Complex64,
    pub method: CountMethod,
}

// roots of t^2 - x t + 1 = 0 mod p^a: brute force mod p, then lift one
// p-adic digit at a time
fn roots_prime_power(x: i64, p: u64, a: u32) -> Vec<u64> {
    let poly = |t: u64, modulus: u64| -> bool {
        let m = modulus as i128;
        let t = t as i128;
        let x = (x as i128).rem_euclid(m);
        (t * t - x * t + 1).rem_euclid(m) == 0
    };
    let mut roots: Vec<u64> = (0..p).filter(|&t| poly(t, p)).collect();
    let mut pj = p;
    for _ in 1..a {
        let next = pj * p;
        let mut lifted = Vec::new();
        for &r in &roots {
            for s in 0..p {
                let t = r + s * pj;
                if poly(t, next) {
                    lifted.push(t);
                }
            }
        }
        roots = lifted;
        pj = next;
    }
    roots
}

fn check_count_modulus(l: u64) -> Result<()> {
    if l == 0 || l > MAX_COUNT_MODULUS {
        return Err(Error::RangeExceeded(format!(
            "modulus {l} outside [1, {MAX_COUNT_MODULUS}]"
        )));
    }
    Ok(())
}

/// All a mod l with a^2 - x a + 1 = 0 (equivalently a + abar = x), sorted.
pub fn dagger_preimages(x: i64, l: u64) -> Result<Vec<u64>> {
    check_count_modulus(l)?;
    if l == 1 {
        return Ok(vec![0]);
    }
    let mut combos: Vec<(u64, u64)> = vec![(0, 1)];
    for &(p, a) in &factorize(l).factors {
        let pa = p.pow(a);
        let local = roots_prime_power(x, p, a);
        let mut next = Vec::with_capacity(combos.len() * local.len());
        for &(r, m) in &combos {
            for &t in &local {
                next.push(crt_combine(&[(r, m), (t, pa)])?);
            }
        }
        combos = next;
        if combos.is_empty() {
            return Ok(Vec::new());
        }
    }
    let mut out: Vec<u64> = combos.into_iter().map(|(r, _)| r).collect();
    out.sort_unstable();
    Ok(out)
}

/// v(x; l) = #{a mod l : a^2 - x a + 1 = 0 mod l}, by CRT over prime powers.
pub fn v_count(x: i64, l: u64) -> Result<u64> {
    check_count_modulus(l)?;
    let mut count = 1u64;
    for &(p, a) in &factorize(l).factors {
        count *= roots_prime_power(x, p, a).len() as u64;
        if count == 0 {
            break;
        }
    }
    Ok(count)
}

/// a' = a + abar mod l for a unit a.
pub fn dagger(a: u64, l: u64) -> u64 {
    let inv = mod_inverse(a as i64, l).expect("dagger of a unit");
    (a + inv) % l
}

fn check_pair(l1: u64, l2: u64, chi: &DirichletCharacter) -> Result<()> {
    let q = chi.modulus();
    for l in [l1, l2] {
        if l == 0 || l % q != 0 {
            return Err(Error::ModulusMismatch { char_modulus: q, modulus: l });
        }
    }
    Ok(())
}

/// Brute-force N_chi(n; l1, l2) for every n mod l1 l2, from one pass of the
/// double sum over units.
pub fn n_chi_brute_table(l1: u64, l2: u64, chi: &DirichletCharacter) -> Result<Vec<Complex64>> {
    check_pair(l1, l2, chi)?;
    let big = l1 * l2;
    let mut table = vec![NeumaierComplex::new(); big as usize];
    for a1 in (0..l1).filter(|&a| gcd(a, l1) == 1) {
        let x = dagger(a1, l1);
        let c1 = chi.eval(a1 as i64);
        for a2 in (0..l2).filter(|&a| gcd(a, l2) == 1) {
            let y = dagger(a2, l2);
            table[((x * l2 + y * l1) % big) as usize].add(c1 * chi.eval(a2 as i64));
        }
    }
    Ok(table.iter().map(|a| a.value()).collect())
}

/// Double sum over units a1 mod l1, a2 mod l2 with the congruence indicator.
pub fn n_chi_brute(n: i64, l1: u64, l2: u64, chi: &DirichletCharacter) -> Result<NCountValue> {
    check_pair(l1, l2, chi)?;
    let big = (l1 as u128 * l2 as u128) as i128;
    let target = (n as i128).rem_euclid(big);
    let mut acc = NeumaierComplex::new();
    for a1 in (0..l1).filter(|&a| gcd(a, l1) == 1) {
        let x = dagger(a1, l1) as i128;
        for a2 in (0..l2).filter(|&a| gcd(a, l2) == 1) {
            let y = dagger(a2, l2) as i128;
            if (x * l2 as i128 + y * l1 as i128).rem_euclid(big) == target {
                acc.add(chi.eval(a1 as i64) * chi.eval(a2 as i64));
            }
        }
    }
    Ok(NCountValue { n, l1, l2, value: acc.value(), method: CountMethod::Brute })
}

/// The g = (l1, l2) solutions (x_h, y_h) of x l2 + y l1 = n mod l1 l2, each
/// weighted by the chi-sums over the a with a' = x_h and a' = y_h.
pub fn n_chi_structured(
    n: i64,
    l1: u64,
    l2: u64,
    chi: &DirichletCharacter,
) -> Result<NCountValue> {
    check_pair(l1, l2, chi)?;
    check_count_modulus(l1)?;
    check_count_modulus(l2)?;
    let zero = NCountValue { n, l1, l2, value: Complex64::new(0.0, 0.0), method: CountMethod::Structured };
    let g = gcd(l1, l2);
    if n.rem_euclid(g as i64) != 0 {
        return Ok(zero);
    }
    let (l1p, l2p) = (l1 / g, l2 / g);
    // x l2' + y l1' = n/g modulo l1 l2 / g = g l1' l2'
    let reduced_modulus = (l1p as i128) * (l2p as i128) * g as i128;
    let np = (n as i128 / g as i128).rem_euclid(reduced_modulus);
    let x0 = if l1p == 1 {
        0i128
    } else {
        let inv = mod_inverse(l2p as i64, l1p)? as i128;
        (np.rem_euclid(l1p as i128) * inv).rem_euclid(l1p as i128)
    };
    let y0 = (np - x0 * l2p as i128) / l1p as i128;
    let chi_sum = |x: i128, l: u64| -> Result<Complex64> {
        let x = x.rem_euclid(l as i128) as i64;
        Ok(dagger_preimages(x, l)?.iter().map(|&a| chi.eval(a as i64)).sum())
    };
    let mut acc = NeumaierComplex::new();
    for h in 0..g as i128 {
        let a1 = chi_sum(x0 + h * l1p as i128, l1)?;
        if a1.norm() == 0.0 {
            continue;
        }
        let a2 = chi_sum(y0 - h * l2p as i128, l2)?;
        acc.add(a1 * a2);
    }
    Ok(NCountValue { value: acc.value(), ..zero })
}

pub fn n_chi(
    n: i64,
    l1: u64,
    l2: u64,
    chi: &DirichletCharacter,
    method: CountMethod,
) -> Result<NCountValue> {
    match method {
        CountMethod::Brute => n_chi_brute(n, l1, l2, chi),
        CountMethod::Structured => n_chi_structured(n, l1, l2, chi),
    }
}

/// A(x) = sum of chi(a) over units a mod l with a' = x, for every x mod l.
pub fn dagger_histogram(l: u64, chi: &DirichletCharacter) -> Vec<Complex64> {
    let mut hist = vec![Complex64::new(0.0, 0.0); l as usize];
    for a in (0..l).filter(|&a| gcd(a, l) == 1) {
        hist[dagger(a, l) as usize] += chi.eval(a as i64);
    }
    hist
}

/// N_chi(g r; l1, l2) for all r in [0, l1 l2 / g), stored sparsely, built by
/// convolving the two dagger histograms.
#[derive(Debug, Clone)]
pub struct DualCounts {
    pub l1: u64,
    pub l2: u64,
    pub g: u64,
    /// l1 l2 / g: the period of r -> N(g r)
    pub period: u64,
    /// (r, N(g r)) for the nonzero entries, r increasing
    pub entries: Vec<(u64, Complex64)>,
}

impl DualCounts {
    pub fn from_histograms(l1: u64, h1: &[Complex64], l2: u64, h2: &[Complex64]) -> Self {
        let g = gcd(l1, l2);
        let big = l1 * l2;
        let period = big / g;
        let mut dense = vec![Complex64::new(0.0, 0.0); period as usize];
        let nz2: Vec<(u64, Complex64)> = h2
            .iter()
            .enumerate()
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .map(|(y, &v)| (y as u64, v))
            .collect();
        for (x, &a1) in h1.iter().enumerate() {
            if a1.re == 0.0 && a1.im == 0.0 {
                continue;
            }
            let base = x as u64 * l2 % big;
            for &(y, a2) in &nz2 {
                let b = (base + y * l1) % big;
                dense[(b / g) as usize] += a1 * a2;
            }
        }
        let entries = dense
            .into_iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > 1e-9)
            .map(|(r, v)| (r as u64, v))
            .collect();
        DualCounts { l1, l2, g, period, entries }
    }

    pub fn new(l1: u64, l2: u64, chi: &DirichletCharacter) -> Result<Self> {
        check_pair(l1, l2, chi)?;
        Ok(Self::from_histograms(l1, &dagger_histogram(l1, chi), l2, &dagger_histogram(l2, chi)))
    }

    pub fn value(&self, n: i64) -> Complex64 {
        if n.rem_euclid(self.g as i64) != 0 {
            return Complex64::new(0.0, 0.0);
        }
        let r = (n / self.g as i64).rem_euclid(self.period as i64) as u64;
        match self.entries.binary_search_by_key(&r, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }
}
