//! Dirichlet characters modulo q, addressed by exponent vectors against a
//! fixed generator basis of (Z/qZ)^*.
//!
//! Basis convention: for odd p^a the smallest primitive root; for 2^a with
//! a >= 3 the pair {-1, 5}; for 4 the generator -1; modulus 2 contributes no
//! generator. Generators are ordered by prime, and the character index is the
//! mixed-radix number whose least significant digit is the first exponent.
//! Index 0 is always the principal character.

use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{factorize, gcd, lcm, pow_mod};
use crate::error::{Error, Result};
use crate::summation::{root_of_unity, NeumaierComplex};

pub const MAX_MODULUS: u64 = 1_000_000;

const NOT_UNIT: u64 = u64::MAX;

#[derive(Debug)]
struct Generator {
    prime_power: u64,
    order: u64,
    /// discrete log of each residue mod prime_power w.r.t. this generator
    log: Vec<u64>,
}

#[derive(Debug)]
struct Block {
    prime: u64,
    exponent: u32,
    /// indices into UnitGroup::gens
    gens: Vec<usize>,
}

#[derive(Debug)]
struct UnitGroup {
    modulus: u64,
    gens: Vec<Generator>,
    blocks: Vec<Block>,
}

fn smallest_primitive_root(p: u64, a: u32) -> u64 {
    let phi_p = p - 1;
    let prime_divs: Vec<u64> = factorize(phi_p).factors.iter().map(|&(r, _)| r).collect();
    (2..p)
        .find(|&g| {
            prime_divs.iter().all(|&r| pow_mod(g, phi_p / r, p) != 1)
                && (a < 2 || pow_mod(g, phi_p, p * p) != 1)
        })
        .unwrap_or(1) // p = 2 never reaches here
}

impl UnitGroup {
    fn new(q: u64) -> Self {
        let mut gens = Vec::new();
        let mut blocks = Vec::new();
        for &(p, a) in &factorize(q).factors {
            let pk = p.pow(a);
            let mut block = Block { prime: p, exponent: a, gens: Vec::new() };
            if p == 2 {
                if a == 2 {
                    let mut log = vec![NOT_UNIT; 4];
                    log[1] = 0;
                    log[3] = 1;
                    block.gens.push(gens.len());
                    gens.push(Generator { prime_power: 4, order: 2, log });
                } else if a >= 3 {
                    let half = pk / 4;
                    let mut sign_log = vec![NOT_UNIT; pk as usize];
                    let mut five_log = vec![NOT_UNIT; pk as usize];
                    let mut x = 1u64;
                    for j in 0..half {
                        sign_log[x as usize] = 0;
                        five_log[x as usize] = j;
                        sign_log[(pk - x) as usize] = 1;
                        five_log[(pk - x) as usize] = j;
                        x = x * 5 % pk;
                    }
                    block.gens.push(gens.len());
                    gens.push(Generator { prime_power: pk, order: 2, log: sign_log });
                    block.gens.push(gens.len());
                    gens.push(Generator { prime_power: pk, order: half, log: five_log });
                }
            } else {
                let g = smallest_primitive_root(p, a);
                let order = pk / p * (p - 1);
                let mut log = vec![NOT_UNIT; pk as usize];
                let mut x = 1u64;
                for j in 0..order {
                    log[x as usize] = j;
                    x = x * g % pk;
                }
                block.gens.push(gens.len());
                gens.push(Generator { prime_power: pk, order, log });
            }
            blocks.push(block);
        }
        UnitGroup { modulus: q, gens, blocks }
    }

    fn group_order(&self) -> u64 {
        self.gens.iter().map(|g| g.order).product()
    }
}

#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
    index: u64,
    /// common denominator of all phases
    denom: u64,
    /// phase numerator per residue, NOT_UNIT for non-units
    phases: Arc<Vec<u64>>,
    values: Arc<Vec<Complex64>>,
    conductor: u64,
    parity: u8,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

fn check_modulus(q: u64) -> Result<()> {
    if q == 0 || q > MAX_MODULUS {
        return Err(Error::RangeExceeded(format!(
            "character modulus {q} outside [1, {MAX_MODULUS}]"
        )));
    }
    Ok(())
}

impl DirichletCharacter {
    fn build(group: Arc<UnitGroup>, exponents: Vec<u64>) -> Self {
        let q = group.modulus;
        let denom = group.gens.iter().fold(1u64, |d, g| lcm(d, g.order));
        let mut phases = vec![NOT_UNIT; q as usize];
        for a in 0..q {
            if gcd(a, q) != 1 {
                continue;
            }
            let mut ph = 0u64;
            for (gen, &e) in group.gens.iter().zip(&exponents) {
                let l = gen.log[(a % gen.prime_power) as usize];
                ph = (ph + (e * l % gen.order) * (denom / gen.order)) % denom;
            }
            phases[a as usize] = ph;
        }
        let values = phases
            .iter()
            .map(|&ph| {
                if ph == NOT_UNIT {
                    Complex64::new(0.0, 0.0)
                } else {
                    root_of_unity(ph as i64, denom)
                }
            })
            .collect();
        let mut index = 0u64;
        let mut radix = 1u64;
        for (gen, &e) in group.gens.iter().zip(&exponents) {
            index += e * radix;
            radix *= gen.order;
        }
        let conductor = conductor_from_exponents(&group, &exponents);
        let minus_one = (q - 1) % q;
        let parity = if phases[minus_one as usize] == 0 { 0 } else { 1 };
        DirichletCharacter {
            group,
            exponents,
            index,
            denom,
            phases: Arc::new(phases),
            values: Arc::new(values),
            conductor,
            parity,
        }
    }

    fn exponents_of_index(group: &UnitGroup, mut index: u64) -> Vec<u64> {
        group
            .gens
            .iter()
            .map(|g| {
                let e = index % g.order;
                index /= g.order;
                e
            })
            .collect()
    }

    pub fn principal(q: u64) -> Result<Self> {
        Self::from_index(q, 0)
    }

    /// The character at position `index` of `enumerate_characters(q)`.
    pub fn from_index(q: u64, index: u64) -> Result<Self> {
        check_modulus(q)?;
        let group = Arc::new(UnitGroup::new(q));
        let order = group.group_order();
        if index >= order {
            return Err(Error::InvalidArgument(format!(
                "character index {index} out of range: modulus {q} has {order} characters"
            )));
        }
        let exps = Self::exponents_of_index(&group, index);
        Ok(Self::build(group, exps))
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// External address "q:index".
    pub fn id(&self) -> String {
        format!("{}:{}", self.modulus(), self.index)
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn is_real(&self) -> bool {
        self.phases
            .iter()
            .all(|&ph| ph == NOT_UNIT || (2 * ph) % self.denom == 0)
    }

    /// Denominator D such that every value is e(k/D).
    pub fn phase_denominator(&self) -> u64 {
        self.denom
    }

    /// Phase numerator of chi(a) over `phase_denominator`, None when
    /// gcd(a, q) > 1.
    pub fn phase(&self, a: i64) -> Option<u64> {
        let r = a.rem_euclid(self.modulus() as i64) as usize;
        match self.phases[r] {
            NOT_UNIT => None,
            ph => Some(ph),
        }
    }

    #[inline]
    pub fn eval(&self, a: i64) -> Complex64 {
        self.values[a.rem_euclid(self.modulus() as i64) as usize]
    }

    /// chi(a) for a residue already reduced to [0, q).
    #[inline]
    pub fn eval_reduced(&self, a: u64) -> Complex64 {
        self.values[a as usize]
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .group
            .gens
            .iter()
            .zip(&self.exponents)
            .map(|(g, &e)| (g.order - e) % g.order)
            .collect();
        Self::build(self.group.clone(), exps)
    }

    /// The p-part of chi: a character modulo p^{v_p(q)} with chi equal to the
    /// product of its prime components.
    pub fn prime_component(&self, p: u64) -> Self {
        let Some(block) = self.group.blocks.iter().find(|b| b.prime == p) else {
            return Self::principal(1).expect("modulus 1 is valid");
        };
        let pk = p.pow(block.exponent);
        let group = Arc::new(UnitGroup::new(pk));
        let exps = block.gens.iter().map(|&i| self.exponents[i]).collect();
        Self::build(group, exps)
    }
}

fn conductor_from_exponents(group: &UnitGroup, exps: &[u64]) -> u64 {
    let mut cond = 1u64;
    for block in &group.blocks {
        let p = block.prime;
        let a = block.exponent;
        let e: Vec<u64> = block.gens.iter().map(|&i| exps[i]).collect();
        let part = if p == 2 {
            match a {
                1 => 1,
                2 => {
                    if e[0] == 1 {
                        4
                    } else {
                        1
                    }
                }
                _ => {
                    let half = 1u64 << (a - 2);
                    if e[1] == 0 {
                        if e[0] == 1 {
                            4
                        } else {
                            1
                        }
                    } else {
                        let o5 = half / gcd(e[1], half);
                        4 * o5
                    }
                }
            }
        } else if e[0] == 0 {
            1
        } else {
            let n = group.gens[block.gens[0]].order;
            let o = n / gcd(e[0], n);
            // units = 1 mod p^j form the subgroup of order p^{a-j}, trivial
            // under chi iff o divides (p-1)p^{j-1}
            let mut j = 1u32;
            while ((p - 1) * p.pow(j - 1)) % o != 0 {
                j += 1;
            }
            p.pow(j)
        };
        cond *= part;
    }
    cond
}

/// All characters modulo q in index order; the first one is principal.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    check_modulus(q)?;
    let group = Arc::new(UnitGroup::new(q));
    let order = group.group_order();
    Ok((0..order)
        .map(|i| {
            let exps = DirichletCharacter::exponents_of_index(&group, i);
            DirichletCharacter::build(group.clone(), exps)
        })
        .collect())
}

pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let q = chi.modulus();
    let mut acc = NeumaierComplex::new();
    for a in 0..q {
        let v = chi.eval_reduced(a);
        if v.re != 0.0 || v.im != 0.0 {
            acc.add(v * root_of_unity(a as i64, q));
        }
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_principal_first() {
        assert_eq!(enumerate_characters(1).unwrap().len(), 1);
        assert_eq!(enumerate_characters(5).unwrap().len(), 4);
        for q in [1u64, 2, 4, 8, 9, 12, 60] {
            let chars = enumerate_characters(q).unwrap();
            assert!(chars[0].is_principal());
            assert_eq!(chars[0].conductor(), 1);
        }
    }

    #[test]
    fn mod_four() {
        let chi = DirichletCharacter::from_index(4, 1).unwrap();
        assert_eq!(chi.eval(3), Complex64::new(-1.0, 0.0));
        assert_eq!(chi.conductor(), 4);
        assert_eq!(chi.parity(), 1);
        assert!((gauss_sum(&chi).norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn conj_inverts_values() {
        for chi in enumerate_characters(20).unwrap() {
            let c = chi.conj();
            for a in 0..20 {
                assert_eq!(c.eval(a), chi.eval(a).conj());
            }
        }
    }

    #[test]
    fn out_of_range_index() {
        assert!(DirichletCharacter::from_index(5, 4).is_err());
        assert!(DirichletCharacter::from_index(0, 0).is_err());
    }
}
