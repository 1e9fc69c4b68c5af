//! One line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use reldual_cli::report::{render, Line};
use reldual_cli::suites::{criterion, run_suite, CRITERIA};
use reldual_cli::workspace::Config;

struct Outcome {
    checks: usize,
    failure: Option<String>,
}

fn from_lines(lines: &[Line]) -> Outcome {
    Outcome {
        checks: lines.len(),
        failure: lines
            .iter()
            .find(|l| !l.passed())
            .map(|l| format!("{}: {}", l.item, l.witness.as_deref().unwrap_or(""))),
    }
}

fn budget(n: u8) -> Option<Duration> {
    match n {
        1 => Some(Duration::from_secs(60)),
        6 => Some(Duration::from_secs(300)),
        _ => None,
    }
}

fn reproducibility() -> Outcome {
    let mut checks = 0;
    for (name, text) in common::corpus() {
        checks += 1;
        if let Some(w) = common::roundtrip(&name, &text) {
            return Outcome { checks, failure: Some(w) };
        }
    }
    let cfg = Config {
        seed: 11,
        ..Config::default()
    };
    let runs: Vec<String> = [Some(1), Some(3), Some(1)]
        .into_iter()
        .map(|jobs| {
            let cfg = Config { jobs, ..cfg.clone() };
            render(&run_suite("all", &cfg).expect("known suite"), false)
        })
        .collect();
    checks += runs.len();
    let failure = runs
        .windows(2)
        .position(|w| w[0] != w[1])
        .map(|k| format!("reports of runs {} and {} differ", k + 1, k + 2));
    Outcome { checks, failure }
}

fn main() -> ExitCode {
    let cfg = Config::default();
    let mut all = true;
    let mut run = |n: u8, title: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let mut out = f();
        let took = start.elapsed();
        if let Some(b) = budget(n) {
            if took > b && out.failure.is_none() {
                out.failure = Some(format!("took {took:.1?}, budget {b:?}"));
            }
        }
        let status = if out.failure.is_none() { "PASS" } else { "FAIL" };
        println!("criterion {n}: {status}  {title} ({} checks, {:.2?})", out.checks, took);
        if let Some(w) = out.failure {
            println!("    {w}");
            all = false;
        }
    };
    for (n, _, title) in CRITERIA {
        run(n, title, &|| from_lines(&criterion(n, &cfg)));
    }
    run(9, "corpus round trip and reproducible reports", &reproducibility);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
