//! One line per acceptance criterion, run on the default configuration
//! (`δ = 5/2`, seed 42). Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use gjs_core::verify::{run_suites, Report, SuiteConfig};

struct Criterion {
    title: &'static str,
    checks: &'static [&'static str],
    /// Time limit in seconds for the listed checks.
    limit: Option<f64>,
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        title: "zig-zag and balancing, levels up to 5",
        checks: &["zig-zag", "nested loops", "balancing"],
        limit: Some(5.0),
    },
    Criterion {
        title: "Frobenius reciprocity on 200 pairs",
        checks: &["frobenius reciprocity"],
        limit: Some(10.0),
    },
    Criterion {
        title: "products: associativity, involution, Walker action",
        checks: &["wedge associativity", "walker associativity", "star anti-homomorphism", "walker representation"],
        limit: Some(30.0),
    },
    Criterion {
        title: "traces: traciality, positivity, corner normalisation",
        checks: &["wedge traciality", "trace positivity", "normalized corner traces"],
        limit: None,
    },
    Criterion {
        title: "tower: inclusions, expectations, Pimsner-Popa",
        checks: &["iota homomorphism", "conditional expectation", "pimsner-popa"],
        limit: Some(60.0),
    },
    Criterion {
        title: "Fock: Pimsner relations and L + L*",
        checks: &["pimsner relation", "walker equals creation plus annihilation"],
        limit: None,
    },
    Criterion {
        title: "bimodules: trace compatibility, fusion, functor",
        checks: &["trace compatibility", "fusion isometry", "functor", "faithful functor"],
        limit: None,
    },
    Criterion {
        title: "quantitative: moment norm estimate and index",
        checks: &["jones idempotent norm", "jones moment estimate", "index"],
        limit: None,
    },
];

fn detail(report: &Report, name: &str) -> String {
    match report.find(name) {
        None => format!("{name}: missing"),
        Some(r) => {
            let status = if r.pass { "ok" } else { "FAILED" };
            let figure = match (r.residual, r.value, &r.error) {
                (_, _, Some(e)) => format!("error {e}"),
                (Some(res), _, _) => format!("{} of {} samples failing", res, r.samples),
                (_, Some(v), _) => format!("value {v:.6e}, margin {:.3e}", r.margin.unwrap_or(f64::NAN)),
                _ => String::new(),
            };
            format!("{name} {status} ({figure})")
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let report = match run_suites(&SuiteConfig::default()) {
        Ok(r) => r,
        Err(e) => {
            println!("acceptance: suite runner failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let total = start.elapsed().as_secs_f64();

    let mut all = true;
    for (i, c) in CRITERIA.iter().enumerate() {
        let records: Vec<_> = c.checks.iter().map(|n| report.find(n)).collect();
        let seconds: f64 = records.iter().flatten().map(|r| r.elapsed_ms).sum::<f64>() / 1e3;
        let mut pass = records.iter().all(|r| r.is_some_and(|r| r.pass));
        if let Some(limit) = c.limit {
            pass &= seconds < limit;
        }
        if i == 7 {
            pass &= total < 300.0;
        }
        all &= pass;
        let verdict = if pass { "PASS" } else { "FAIL" };
        let details: Vec<String> = c.checks.iter().map(|n| detail(&report, n)).collect();
        let limit = c.limit.map(|l| format!(", limit {l} s")).unwrap_or_default();
        println!("criterion {}: {verdict}  {} [{seconds:.2} s{limit}]  {}", i + 1, c.title, details.join("; "));
    }
    println!("full run: {total:.1} s (limit 300 s), {} checks, all gates {}", report.records.len(), if report.gates_pass() { "pass" } else { "FAIL" });
    for r in report.records.iter().filter(|r| !r.gates()) {
        println!("reported only: {}", detail(&report, &r.name));
    }

    if all && report.gates_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
