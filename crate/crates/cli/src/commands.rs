use poincare_core::characters::DirichletCharacter;
use poincare_core::kloosterman::{kloosterman, weil_bound_value, Method};
use poincare_core::moments::{sigma_k, sigma_m, MomentReport, MomentSide, Route, TermLabel};
use poincare_core::poincare::{
    norm_squared_with_tol, ramanujan_tau, scan_k_with_tol, scan_m_with_tol, NormCertificate, ScanResult,
};
use poincare_core::verify::{run_suite, Suite};
use poincare_core::Error;

use crate::args::{CharArgs, Command, MethodArg, RouteArg};
use crate::report::{Cell, Report, Table};

/// What a command produced, plus whether it should count as a failure
/// (verification suites report their rows either way).
pub struct Outcome {
    pub report: Report,
    pub failure: Option<String>,
}

fn character(args: &CharArgs, report: &mut Report) -> Result<DirichletCharacter, Error> {
    let (q, index) = args.resolve();
    report.param("q", q);
    report.param("chi-index", index);
    DirichletCharacter::from_index(q, index)
}

fn route(r: RouteArg) -> Route {
    match r {
        RouteArg::Direct => Route::Direct,
        RouteArg::Transformed => Route::Transformed,
        RouteArg::Both => Route::Both,
    }
}

fn route_name(r: RouteArg) -> &'static str {
    match r {
        RouteArg::Direct => "direct",
        RouteArg::Transformed => "transformed",
        RouteArg::Both => "both",
    }
}

const NORM_COLUMNS: [&str; 9] =
    ["k", "m", "q", "chi", "norm_sq", "total_error", "margin", "verdict", "imag_residue"];

fn norm_row(c: &NormCertificate) -> Vec<Cell> {
    vec![
        c.k.into(),
        c.m.into(),
        c.q.into(),
        c.chi_id.clone().into(),
        c.norm_sq.into(),
        c.total_error.into(),
        c.margin.into(),
        c.verdict.as_str().into(),
        c.imag_residue.into(),
    ]
}

fn scan_tables(scan: &ScanResult, report: &mut Report) {
    let mut rows = Table::new("rows", &["parameter", "norm_sq", "margin", "verdict", "total_error"]);
    for r in &scan.rows {
        let c = &r.certificate;
        rows.push(vec![
            r.parameter.into(),
            c.norm_sq.into(),
            c.margin.into(),
            c.verdict.as_str().into(),
            c.total_error.into(),
        ]);
    }
    report.tables.push(rows);
    let exceptional: Vec<String> = scan.exceptional.iter().map(u64::to_string).collect();
    report.tables.push(Table::single(
        "counts",
        &[
            "admissible",
            "near_unit_count",
            "nonzero_count",
            "certified_near_unit_count",
            "half_range",
            "threshold",
            "exceptional",
        ],
        vec![
            scan.admissible.into(),
            scan.near_unit_count.into(),
            scan.nonzero_count.into(),
            scan.certified_near_unit_count.into(),
            scan.half_range.into(),
            scan.threshold.into(),
            exceptional.join(" ").into(),
        ],
    ));
}

fn moment_tables(r: &MomentReport, report: &mut Report) {
    let side = |s: &Option<MomentSide>| s.as_ref().map(|s| (s.value, s.certified_error, s.heuristic_error));
    let d = side(&r.direct);
    let t = side(&r.transformed);
    report.tables.push(Table::single(
        "summary",
        &[
            "direct_value",
            "direct_error",
            "transformed_value",
            "transformed_error",
            "transformed_heuristic_error",
            "transformed_imag_residue",
            "discrepancy",
            "certified_error",
            "cross_tolerance",
            "agrees",
        ],
        vec![
            d.map(|s| s.0).into(),
            d.map(|s| s.1).into(),
            t.map(|s| s.0).into(),
            t.map(|s| s.1).into(),
            t.map(|s| s.2).into(),
            r.transformed.as_ref().map(|s| s.imag_residue).into(),
            r.discrepancy().into(),
            r.certified_error().into(),
            r.cross_tolerance().into(),
            r.agrees().into(),
        ],
    ));
    let mut terms = Table::new("terms", &["route", "kind", "a", "b", "contribution"]);
    for (name, s) in [("direct", &r.direct), ("transformed", &r.transformed)] {
        let Some(s) = s else { continue };
        for term in &s.terms {
            let (kind, a, b): (&str, Cell, Cell) = match term.label {
                TermLabel::Weight(k) => ("weight", k.into(), Cell::Null),
                TermLabel::Index(m) => ("index", m.into(), Cell::Null),
                TermLabel::Pair(c1, c2) => ("pair", c1.into(), c2.into()),
            };
            terms.push(vec![name.into(), kind.into(), a, b, term.contribution.into()]);
        }
    }
    report.tables.push(terms);
}

pub fn execute(cmd: &Command, rel_tol: f64) -> Result<Outcome, Error> {
    let mut failure = None;
    let report = match cmd {
        Command::Kloosterman { m, n, c, chi, method } => {
            let mut rep = Report::new("kloosterman");
            rep.param("m", *m);
            rep.param("n", *n);
            rep.param("c", *c);
            let ch = character(chi, &mut rep)?;
            let (meth, name) = match method {
                MethodArg::Direct => (Method::Direct, "direct"),
                MethodArg::Factored => (Method::Factored, "factored"),
            };
            rep.param("method", name);
            let v = kloosterman(*m, *n, *c, &ch, meth)?;
            let q = ch.modulus();
            let bound = weil_bound_value(*m, *n, c / q, q, &ch);
            rep.tables.push(Table::single(
                "result",
                &["re", "im", "abs", "term_count", "error_estimate", "weil_bound", "ratio"],
                vec![
                    v.value.re.into(),
                    v.value.im.into(),
                    v.value.norm().into(),
                    v.term_count.into(),
                    v.error_estimate.into(),
                    bound.into(),
                    (v.value.norm() / bound).into(),
                ],
            ));
            rep
        }
        Command::Norm { k, m, chi } => {
            let mut rep = Report::new("norm");
            rep.param("k", *k);
            rep.param("m", *m);
            let ch = character(chi, &mut rep)?;
            rep.param("rel-tol", rel_tol);
            let cert = norm_squared_with_tol(*k, *m, ch.modulus(), &ch, rel_tol)?;
            rep.tables.push(Table::single("result", &NORM_COLUMNS, norm_row(&cert)));
            rep
        }
        Command::ScanK { big_k, m, chi, eps, parity } => {
            let mut rep = Report::new("scan-k");
            rep.param("K", *big_k);
            rep.param("m", *m);
            let ch = character(chi, &mut rep)?;
            let par = parity.unwrap_or(ch.parity());
            rep.param("eps", *eps);
            rep.param("parity", par as u64);
            rep.param("rel-tol", rel_tol);
            let scan = scan_k_with_tol(*big_k, *m, ch.modulus(), &ch, *eps, par, rel_tol)?;
            scan_tables(&scan, &mut rep);
            rep
        }
        Command::ScanM { big_m, k, chi, eps } => {
            let mut rep = Report::new("scan-m");
            rep.param("M", *big_m);
            rep.param("k", *k);
            let ch = character(chi, &mut rep)?;
            rep.param("eps", *eps);
            rep.param("rel-tol", rel_tol);
            let scan = scan_m_with_tol(*big_m, *k, ch.modulus(), &ch, *eps, rel_tol)?;
            scan_tables(&scan, &mut rep);
            rep
        }
        Command::MomentK { big_k, m, chi, route: r, cutoff_mult } => {
            let mut rep = Report::new("moment-k");
            rep.param("K", *big_k);
            rep.param("m", *m);
            let ch = character(chi, &mut rep)?;
            rep.param("route", route_name(*r));
            rep.param("cutoff-mult", *cutoff_mult);
            let res = sigma_k(*big_k, *m, &ch, route(*r), *cutoff_mult)?;
            moment_tables(&res, &mut rep);
            rep
        }
        Command::MomentM { big_m, k, chi, route: r, cutoff_mult } => {
            let mut rep = Report::new("moment-m");
            rep.param("M", *big_m);
            rep.param("k", *k);
            let ch = character(chi, &mut rep)?;
            rep.param("route", route_name(*r));
            rep.param("cutoff-mult", *cutoff_mult);
            let res = sigma_m(*big_m, *k, &ch, route(*r), *cutoff_mult)?;
            moment_tables(&res, &mut rep);
            rep
        }
        Command::Verify { suite } => {
            let mut rep = Report::new("verify");
            rep.param("suite", suite.as_str());
            let suites: Vec<Suite> =
                if suite == "all" { Suite::ALL.to_vec() } else { vec![Suite::from_name(suite)?] };
            let mut table =
                Table::new("suites", &["suite", "checks", "failures", "worst_ratio", "passed", "first_failure"]);
            let mut failed = Vec::new();
            for s in suites {
                let r = run_suite(s)?;
                if !r.passed() {
                    failed.push(s.name());
                }
                table.push(vec![
                    s.name().into(),
                    r.checks.into(),
                    r.failures.into(),
                    r.worst_ratio.into(),
                    r.passed().into(),
                    r.failing.first().cloned().into(),
                ]);
            }
            rep.tables.push(table);
            if !failed.is_empty() {
                failure = Some(format!("suites failed: {}", failed.join(", ")));
            }
            rep
        }
        Command::Tau { n, all } => {
            let mut rep = Report::new("tau");
            rep.param("n", *n);
            rep.param("all", *all);
            let mut table = Table::new("values", &["n", "tau"]);
            let from = if *all { 1 } else { *n };
            for i in from..=*n {
                table.push(vec![i.into(), ramanujan_tau(i)?.into()]);
            }
            if table.rows.is_empty() {
                // n = 0 with --all: still report the range error
                ramanujan_tau(*n)?;
            }
            rep.tables.push(table);
            rep
        }
    };
    Ok(Outcome { report, failure })
}
