use num_complex::Complex64;
use poincare_core::arith::{divisors, euler_phi, gcd};
use poincare_core::characters::*;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

// smallest d | q through which chi factors, by checking every pair of units
fn brute_conductor(chi: &DirichletCharacter) -> u64 {
    let q = chi.modulus();
    let units: Vec<u64> = (1..=q).filter(|&a| gcd(a, q) == 1).collect();
    for d in divisors(q) {
        let ok = units.iter().all(|&a| {
            units
                .iter()
                .filter(|&&b| (b + q - a) % d == 0)
                .all(|&b| close(chi.eval(a as i64), chi.eval(b as i64), 1e-12))
        });
        if ok {
            return d;
        }
    }
    unreachable!()
}

#[test]
fn enumeration_counts() {
    let one = enumerate_characters(1).unwrap();
    assert_eq!(one.len(), 1);
    for a in -5..5 {
        assert_eq!(one[0].eval(a), Complex64::new(1.0, 0.0));
    }
    assert_eq!(enumerate_characters(5).unwrap().len(), 4);
    for q in 1..=100u64 {
        let chars = enumerate_characters(q).unwrap();
        assert_eq!(chars.len() as u64, euler_phi(q));
        assert!(chars[0].is_principal());
        for (i, c) in chars.iter().enumerate() {
            assert_eq!(c.index(), i as u64);
            assert_eq!(DirichletCharacter::from_index(q, i as u64).unwrap().id(), c.id());
        }
    }
}

#[test]
fn conductors_mod_8() {
    let mut cond: Vec<u64> = enumerate_characters(8).unwrap().iter().map(brute_conductor).collect();
    cond.sort_unstable();
    assert_eq!(cond, vec![1, 4, 8, 8]);
}

#[test]
fn conductor_matches_brute_search() {
    for q in 1..=72u64 {
        for chi in enumerate_characters(q).unwrap() {
            assert_eq!(chi.conductor(), brute_conductor(&chi), "{}", chi.id());
        }
    }
}

#[test]
fn evaluation_examples() {
    let p12 = DirichletCharacter::principal(12).unwrap();
    assert_eq!(p12.eval(5), Complex64::new(1.0, 0.0));
    assert_eq!((p12.conductor(), p12.parity()), (1, 0));
    let chi4 = enumerate_characters(4).unwrap().into_iter().find(|c| !c.is_principal()).unwrap();
    assert!(close(chi4.eval(3), Complex64::new(-1.0, 0.0), 1e-15));
    assert_eq!((chi4.conductor(), chi4.parity()), (4, 1));
    for chi in enumerate_characters(6).unwrap() {
        assert_eq!(chi.eval(3), Complex64::new(0.0, 0.0));
    }
    // the real character mod 3 lifted to mod 9
    let lifted: Vec<_> = enumerate_characters(9)
        .unwrap()
        .into_iter()
        .filter(|c| c.is_real() && !c.is_principal())
        .collect();
    assert_eq!(lifted.len(), 1);
    assert_eq!(lifted[0].conductor(), 3);
    assert_eq!(brute_conductor(&lifted[0]), 3);
}

#[test]
fn multiplicative_and_unimodular() {
    for q in 1..=100u64 {
        for chi in enumerate_characters(q).unwrap() {
            assert!(close(chi.eval(1), Complex64::new(1.0, 0.0), 1e-15));
            let sign = if chi.parity() == 0 { 1.0 } else { -1.0 };
            assert!(close(chi.eval(-1), Complex64::new(sign, 0.0), 1e-15));
            for a in 0..q {
                let va = chi.eval(a as i64);
                if gcd(a, q) != 1 {
                    assert_eq!(va, Complex64::new(0.0, 0.0));
                    continue;
                }
                assert!((va.norm() - 1.0).abs() < 1e-14);
                for b in (0..q).filter(|&b| gcd(b, q) == 1) {
                    let vab = chi.eval((a * b) as i64);
                    assert!(close(vab, va * chi.eval(b as i64), 1e-13), "{} a={a} b={b}", chi.id());
                }
            }
            let cond = chi.conductor();
            assert_eq!(q % cond, 0);
        }
    }
}

#[test]
fn orthogonality() {
    for q in 1..=60u64 {
        let chars = enumerate_characters(q).unwrap();
        let phi = euler_phi(q) as f64;
        for chi in &chars {
            let total: Complex64 = (0..q).map(|a| chi.eval(a as i64)).sum();
            let expected = if chi.is_principal() { phi } else { 0.0 };
            assert!(close(total, Complex64::new(expected, 0.0), 1e-9), "{}", chi.id());
        }
        let units: Vec<u64> = (0..q).filter(|&a| gcd(a, q) == 1).collect();
        for &a in &units {
            for &b in &units {
                let s: Complex64 = chars.iter().map(|c| c.eval(a as i64) * c.eval(b as i64).conj()).sum();
                let expected = if a == b { phi } else { 0.0 };
                assert!(close(s, Complex64::new(expected, 0.0), 1e-9), "q={q} a={a} b={b}");
            }
        }
        if q > 2 {
            let even = chars.iter().filter(|c| c.parity() == 0).count();
            assert_eq!(2 * even, chars.len(), "q={q}");
        }
    }
}

#[test]
fn gauss_sums() {
    let one = DirichletCharacter::principal(1).unwrap();
    assert!(close(gauss_sum(&one), Complex64::new(1.0, 0.0), 1e-14));
    let chi4 = DirichletCharacter::from_index(4, 1).unwrap();
    // direct two-term sum: e(1/4) - e(3/4) = 2i
    assert!(close(gauss_sum(&chi4), Complex64::new(0.0, 2.0), 1e-12));
    for chi in enumerate_characters(5).unwrap().iter().skip(1) {
        assert!((gauss_sum(chi).norm() - 5f64.sqrt()).abs() < 1e-10);
    }
    for q in 1..=200u64 {
        for chi in enumerate_characters(q).unwrap() {
            if chi.conductor() == q {
                assert!((gauss_sum(&chi).norm() - (q as f64).sqrt()).abs() <= 1e-10 * q as f64);
            }
        }
    }
}

#[test]
fn conjugate_character() {
    for q in [7u64, 15, 16, 21] {
        for chi in enumerate_characters(q).unwrap() {
            let c = chi.conj();
            for a in 0..q as i64 {
                assert_eq!(c.eval(a), chi.eval(a).conj());
            }
        }
    }
}
