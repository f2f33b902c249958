use num_complex::Complex64;
use poincare_core::arith::divisors;
use poincare_core::characters::{enumerate_characters, DirichletCharacter};
use poincare_core::poincare::*;
use proptest::prelude::*;

// log-derivative recurrence for prod (1 - x^j)^24:
// n a_n = -24 sum_{k=1}^{n} sigma(k) a_{n-k}, and tau(n) = a_{n-1}
fn tau_oracle(limit: usize) -> Vec<i128> {
    let sigma: Vec<i128> =
        (0..=limit as u64).map(|k| if k == 0 { 0 } else { divisors(k).iter().sum::<u64>() as i128 }).collect();
    let mut a = vec![0i128; limit];
    a[0] = 1;
    for n in 1..limit {
        let s: i128 = (1..=n).map(|k| sigma[k] * a[n - k]).sum();
        assert_eq!((-24 * s) % n as i128, 0);
        a[n] = -24 * s / n as i128;
    }
    let mut tau = vec![0i128; limit + 1];
    tau[1..].copy_from_slice(&a);
    tau
}

fn principal() -> DirichletCharacter {
    DirichletCharacter::principal(1).unwrap()
}

#[test]
fn tau_values() {
    let known = [1i128, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
    for (i, &t) in known.iter().enumerate() {
        assert_eq!(ramanujan_tau(i as u64 + 1).unwrap(), t);
    }
    let oracle = tau_oracle(200);
    for n in 1..=200u64 {
        assert_eq!(ramanujan_tau(n).unwrap(), oracle[n as usize], "n={n}");
    }
    assert_eq!(ramanujan_tau(0).unwrap_err().kind(), "RangeExceeded");
    assert_eq!(ramanujan_tau(201).unwrap_err().kind(), "RangeExceeded");
}

#[test]
fn tau_hecke_relations() {
    for p in [2i128, 3, 5, 7, 11, 13] {
        let tp = ramanujan_tau(p as u64).unwrap();
        let tp2 = ramanujan_tau((p * p) as u64).unwrap();
        assert_eq!(tp2, tp * tp - p.pow(11));
    }
}

#[test]
fn delta_matches_long_fixed_cutoff() {
    let one = principal();
    let v = delta_series(12, 1, 1, 1, &one, 1e-12).unwrap();
    // terms beyond c = 3000 are below (2 pi/3000)^11/11! ~ 1e-37
    let brute = delta_fixed_cutoff(12, 1, 1, &one, 3000).unwrap();
    assert!((v.value - brute).norm() <= 1e-9);
    let rotated = times_i_pow(12, v.value);
    assert!(rotated.im.abs() <= 1e-9);
    assert!(v.terms_used >= 1 && v.tail_bound >= 0.0);
}

#[test]
fn delta_conjugate_character() {
    // Delta with conj chi equals chi(-1) conj(Delta with chi) on the diagonal
    for q in [5u64, 7, 12] {
        for chi in enumerate_characters(q).unwrap() {
            let k = if chi.parity() == 0 { 12 } else { 11 };
            let a = delta_series(k, 3, 3, q, &chi, 1e-12).unwrap().value;
            let b = delta_series(k, 3, 3, q, &chi.conj(), 1e-12).unwrap().value;
            let sign = if chi.parity() == 0 { 1.0 } else { -1.0 };
            assert!((b - a.conj() * sign).norm() <= 1e-12, "{}", chi.id());
        }
    }
}

#[test]
fn delta_tiny_for_large_weight() {
    // only c = 1 matters: Delta ~ J_39(4 pi) = 2.43e-16
    let v = delta_series(40, 1, 1, 1, &principal(), 1e-12).unwrap();
    let j = poincare_core::bessel::jn(39, 4.0 * std::f64::consts::PI).unwrap().value;
    assert!(v.value.norm() <= 1e-15);
    assert!((v.value.re - j).abs() <= 1e-3 * j);
    let deeper = delta_series(80, 1, 1, 1, &principal(), 1e-12).unwrap();
    assert!(deeper.value.norm() <= 1e-20);
}

#[test]
fn delta_errors() {
    let one = principal();
    assert_eq!(delta_series(2, 1, 1, 1, &one, 1e-12).unwrap_err().kind(), "WeightTooSmall");
    assert_eq!(norm_squared(2, 1, 1, &one).unwrap_err().kind(), "WeightTooSmall");
    let chi = DirichletCharacter::principal(3).unwrap();
    assert_eq!(delta_series(12, 1, 1, 4, &chi, 1e-12).unwrap_err().kind(), "ModulusMismatch");
}

#[test]
fn doubled_cutoff_moves_within_tail() {
    for &(k, m, q) in &[(12u32, 1u64, 1u64), (16, 4, 1), (13, 7, 4), (20, 30, 3)] {
        for chi in enumerate_characters(q).unwrap() {
            if !parity_matches(k, &chi) {
                continue;
            }
            let v = delta_series(k, m, m, q, &chi, 1e-10).unwrap();
            let doubled = delta_fixed_cutoff(k, m, m, &chi, 2 * v.terms_used).unwrap();
            assert!((v.value - doubled).norm() <= v.tail_bound + 1e-10);
        }
    }
}

#[test]
fn norm_examples() {
    let one = principal();
    let c = norm_squared(12, 1, 1, &one).unwrap();
    assert_eq!(c.verdict, Verdict::NonZeroCertified);
    assert!(c.margin > 0.0 && c.norm_sq - c.total_error > 0.0);

    let odd = norm_squared(13, 1, 1, &one).unwrap();
    assert_eq!(odd.verdict, Verdict::ParityMismatch);

    let c16 = norm_squared(16, 1, 1, &one).unwrap();
    let d = delta_series(16, 1, 1, 1, &one, 1e-12).unwrap();
    let doubled = delta_fixed_cutoff(16, 1, 1, &one, 2 * d.terms_used).unwrap();
    let recomputed = 1.0 + 2.0 * std::f64::consts::PI * times_i_pow(16, doubled).re;
    assert!((c16.norm_sq - recomputed).abs() <= 1e-6);
}

#[test]
fn no_cusp_forms_means_zero_norm() {
    // weights 8, 10 and 14 carry no cusp forms for the full modular group
    for k in [8u32, 10, 14] {
        for m in 1..=5 {
            let c = norm_squared(k, m, 1, &principal()).unwrap();
            assert!(c.norm_sq.abs() <= c.total_error + 1e-9, "k={k} m={m} {}", c.norm_sq);
        }
    }
}

#[test]
fn real_and_nonnegative_across_grid() {
    for q in [1u64, 3, 4, 5, 8] {
        for chi in enumerate_characters(q).unwrap() {
            for k in 7..=20u32 {
                if !parity_matches(k, &chi) {
                    continue;
                }
                for m in [1u64, 2, 5, 11] {
                    let c = norm_squared(k, m, q, &chi).unwrap();
                    assert!(c.imag_residue.abs() <= c.total_error + 1e-9, "{} k={k} m={m}", chi.id());
                    assert!(c.norm_sq >= -c.total_error - 1e-12);
                    if c.verdict == Verdict::NonZeroCertified {
                        assert!(c.norm_sq > 0.0);
                    }
                }
            }
        }
    }
}

#[test]
fn tau_ratio_is_constant() {
    let mut ratios = Vec::new();
    for m in 1..=12u64 {
        let t = ramanujan_tau(m).unwrap();
        if t == 0 {
            continue;
        }
        let c = norm_squared(12, m, 1, &principal()).unwrap();
        ratios.push(c.norm_sq * (m as f64).powi(11) / (t as f64).powi(2));
    }
    let r0 = ratios[0];
    for r in &ratios {
        assert!(((r - r0) / r0).abs() <= 1e-6, "{r} vs {r0}");
    }
}

#[test]
fn scan_k_counts() {
    let one = principal();
    let s = scan_k(16, 1, 1, &one, 0.1).unwrap();
    assert_eq!(s.admissible, 7);
    assert!(s.near_unit_count + 2 >= s.admissible);
    assert!(s.nonzero_count >= s.certified_near_unit_count);
    assert_eq!(s.half_range, 8.0);
    for r in &s.rows {
        assert_eq!(r.parameter % 2, 0);
        assert!(r.parameter > 16 && r.parameter < 32);
    }

    let odd = scan_k_with_parity(16, 1, 1, &one, 0.1, 1).unwrap();
    assert!(odd.rows.iter().all(|r| r.certificate.verdict == Verdict::ParityMismatch));
    assert_eq!(odd.near_unit_count, 0);
    assert_eq!(odd.nonzero_count, 0);

    // m far larger than K: counts are only descriptive
    let far = scan_k(16, 500, 1, &one, 0.1).unwrap();
    assert_eq!(far.admissible, 7);

    assert!(scan_k(5, 1, 1, &one, 0.1).is_err());
}

#[test]
fn scan_m_counts() {
    let one = principal();
    let s = scan_m(8, 12, 1, &one, 0.1).unwrap();
    assert_eq!(s.admissible, 7);
    assert!(s.nonzero_count >= s.near_unit_count);
    assert!(s.near_unit_count >= 1);

    let mismatch = scan_m(8, 11, 1, &one, 0.1).unwrap();
    assert_eq!(mismatch.near_unit_count, 0);
    assert_eq!(mismatch.nonzero_count, 0);
}

#[test]
fn i_power_is_exact() {
    let z = Complex64::new(0.3, -1.7);
    assert_eq!(times_i_pow(0, z), z);
    assert_eq!(times_i_pow(1, z), Complex64::new(1.7, 0.3));
    assert_eq!(times_i_pow(2, z), -z);
    assert_eq!(times_i_pow(7, z), times_i_pow(3, z));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tau_multiplicative(a in 1u64..15, b in 1u64..15) {
        prop_assume!(poincare_core::arith::gcd(a, b) == 1);
        prop_assert_eq!(
            ramanujan_tau(a * b).unwrap(),
            ramanujan_tau(a).unwrap() * ramanujan_tau(b).unwrap()
        );
    }

    #[test]
    fn certificate_is_consistent(k in 7u32..30, m in 1u64..40, pick in 0usize..4) {
        let chi = enumerate_characters(5).unwrap()[pick].clone();
        let c = norm_squared(k, m, 5, &chi).unwrap();
        if parity_matches(k, &chi) {
            prop_assert!((c.margin - (c.norm_sq - c.total_error)).abs() < 1e-15);
            prop_assert_eq!(c.verdict == Verdict::NonZeroCertified, c.margin > 0.0);
            prop_assert!(c.norm_sq >= -c.total_error - 1e-12);
        } else {
            prop_assert_eq!(c.verdict, Verdict::ParityMismatch);
        }
    }
}
