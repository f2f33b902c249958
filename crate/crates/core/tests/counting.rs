use num_complex::Complex64;
use poincare_core::arith::{divisor_count, gcd, is_prime, largest_square_divisor};
use poincare_core::characters::{enumerate_characters, DirichletCharacter};
use poincare_core::moments::counting::{dagger, dagger_preimages, DualCounts};
use poincare_core::moments::*;
use proptest::prelude::*;

// inverse by search, no shared arithmetic
fn naive_inverse(a: u64, l: u64) -> u64 {
    (0..l).find(|&b| (a * b) % l == 1 % l).unwrap()
}

fn naive_n_chi(n: i64, l1: u64, l2: u64, chi: &DirichletCharacter) -> Complex64 {
    let big = (l1 * l2) as i64;
    let mut s = Complex64::new(0.0, 0.0);
    for a1 in (0..l1).filter(|&a| gcd(a, l1) == 1) {
        let x = (a1 + naive_inverse(a1, l1)) as i64;
        for a2 in (0..l2).filter(|&a| gcd(a, l2) == 1) {
            let y = (a2 + naive_inverse(a2, l2)) as i64;
            if (x * l2 as i64 + y * l1 as i64 - n).rem_euclid(big) == 0 {
                s += chi.eval(a1 as i64) * chi.eval(a2 as i64);
            }
        }
    }
    s
}

fn naive_v(x: i64, l: u64) -> u64 {
    let li = l as i64;
    (0..li).filter(|&a| (a * a - x * a + 1).rem_euclid(li) == 0).count() as u64
}

#[test]
fn trivial_moduli() {
    let one = DirichletCharacter::principal(1).unwrap();
    for n in -5..5 {
        assert_eq!(n_chi_brute(n, 1, 1, &one).unwrap().value, Complex64::new(1.0, 0.0));
        assert!((n_chi_structured(n, 1, 1, &one).unwrap().value - 1.0).norm() < 1e-12);
    }
}

#[test]
fn vanishes_off_gcd_multiples() {
    let one = DirichletCharacter::principal(1).unwrap();
    for (l1, l2) in [(4u64, 6u64), (9, 12), (10, 15)] {
        let g = gcd(l1, l2) as i64;
        for n in 0..(l1 * l2) as i64 {
            if n % g != 0 {
                assert_eq!(n_chi_structured(n, l1, l2, &one).unwrap().value.norm(), 0.0);
                assert!(n_chi_brute(n, l1, l2, &one).unwrap().value.norm() < 1e-12);
            }
        }
    }
}

#[test]
fn matches_naive_count() {
    for q in [1u64, 3, 4] {
        for chi in enumerate_characters(q).unwrap() {
            for l1 in (q..=18).step_by(q as usize) {
                for l2 in (q..=18).step_by(q as usize) {
                    let dual = DualCounts::new(l1, l2, &chi).unwrap();
                    for n in 0..(l1 * l2) as i64 {
                        let want = naive_n_chi(n, l1, l2, &chi);
                        let b = n_chi_brute(n, l1, l2, &chi).unwrap();
                        let s = n_chi_structured(n, l1, l2, &chi).unwrap();
                        assert!((b.value - want).norm() < 1e-9);
                        assert!((s.value - want).norm() < 1e-9, "{l1} {l2} n={n}");
                        assert!((dual.value(n) - want).norm() < 1e-9);
                        assert_eq!(b.method, CountMethod::Brute);
                        assert_eq!(s.method, CountMethod::Structured);
                    }
                }
            }
        }
    }
}

#[test]
fn count_bound() {
    let chi = DirichletCharacter::from_index(4, 1).unwrap();
    for l1 in (4..=40u64).step_by(4) {
        for l2 in (4..=40u64).step_by(4) {
            let g = gcd(l1, l2);
            let bound = g as f64
                * (divisor_count(l1) * divisor_count(l2)) as f64
                * ((largest_square_divisor(l1) * largest_square_divisor(l2)) as f64).sqrt();
            let dual = DualCounts::new(l1, l2, &chi).unwrap();
            for &(_, v) in &dual.entries {
                assert!(v.norm() <= bound + 1e-6);
            }
        }
    }
}

#[test]
fn modulus_mismatch() {
    let chi = DirichletCharacter::from_index(4, 1).unwrap();
    assert_eq!(n_chi_structured(1, 6, 8, &chi).unwrap_err().kind(), "ModulusMismatch");
    assert_eq!(n_chi_brute(1, 8, 6, &chi).unwrap_err().kind(), "ModulusMismatch");
}

#[test]
fn v_examples() {
    for p in [2u64, 3, 5, 7, 11, 101, 997] {
        assert!(is_prime(p));
        assert_eq!(v_count(2, p).unwrap(), 1);
    }
    assert_eq!(v_count(0, 5).unwrap(), 2);
    assert_eq!(v_count(0, 3).unwrap(), 0);
    assert_eq!(v_count(5, 1).unwrap(), 1);
}

#[test]
fn v_matches_scan_and_bound() {
    for l in 1..=500u64 {
        let bound = divisor_count(l) as f64 * (largest_square_divisor(l) as f64).sqrt();
        for x in 0..l as i64 {
            let v = v_count(x, l).unwrap();
            if l <= 150 {
                assert_eq!(v, naive_v(x, l), "x={x} l={l}");
            }
            assert!(v as f64 <= bound, "x={x} l={l}");
        }
    }
}

#[test]
fn dagger_preimages_examples() {
    assert_eq!(dagger_preimages(2, 7).unwrap(), vec![1]);
    assert_eq!(dagger_preimages(0, 5).unwrap(), vec![2, 3]);
    assert_eq!(dagger_preimages(1, 3).unwrap(), vec![2]);
}

proptest! {
    #[test]
    fn preimages_are_exactly_the_solutions(x in -1000i64..1000, l in 1u64..3000) {
        let pre = dagger_preimages(x, l).unwrap();
        prop_assert_eq!(pre.len() as u64, v_count(x, l).unwrap());
        let xr = x.rem_euclid(l as i64) as u64;
        for &a in &pre {
            prop_assert_eq!(gcd(a, l), 1);
            prop_assert_eq!(dagger(a, l), xr);
        }
        prop_assert!(pre.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn structured_equals_brute(l1 in 1u64..30, l2 in 1u64..30, n in -2000i64..2000, pick in 0usize..2) {
        let chi = if pick == 0 || l1 % 4 != 0 || l2 % 4 != 0 {
            DirichletCharacter::principal(1).unwrap()
        } else {
            DirichletCharacter::from_index(4, 1).unwrap()
        };
        let b = n_chi_brute(n, l1, l2, &chi).unwrap().value;
        let s = n_chi_structured(n, l1, l2, &chi).unwrap().value;
        prop_assert!((b - s).norm() < 1e-9);
    }
}
