use std::collections::BTreeMap;

use reldual::catalog::posets_up_to;
use reldual::finstruct::FinPoset;
use reldual_cli::error::InputError;
use reldual_cli::report::{all_passed, render};
use reldual_cli::suites::run_suite;
use reldual_cli::workspace::Config;

fn caps(sets: usize, posets: usize, pairs: usize, tensor: usize) -> Config {
    Config {
        cap_sets: sets,
        cap_posets: posets,
        cap_pairs: pairs,
        cap_tensor: tensor,
        seed: 0,
        jobs: Some(2),
    }
}

/// Subsets of `X x Y` closed under `x' <= x r y <= y'` implies `x' r y'`.
fn brute_count(x: &FinPoset, y: &FinPoset) -> usize {
    let (n, m) = (x.len(), y.len());
    let cells = n * m;
    (0u32..1 << cells)
        .filter(|&s| {
            let has = |a: usize, b: usize| s & (1 << (a * m + b)) != 0;
            (0..n).all(|a| {
                (0..m).all(|b| {
                    !has(a, b) || (0..n).all(|a2| (0..m).all(|b2| !(x.le(a2, a) && y.le(b, b2)) || has(a2, b2)))
                })
            })
        })
        .count()
}

#[test]
fn monad_laws_on_small_sets() {
    let lines = run_suite("monad-laws", &caps(3, 0, 0, 0)).unwrap();
    assert!(all_passed(&lines));
    let mut per: BTreeMap<&str, usize> = BTreeMap::new();
    for l in &lines {
        *per.entry(l.item.split('/').next().unwrap()).or_default() += 1;
    }
    assert_eq!(per.keys().copied().collect::<Vec<_>>(), ["filter", "powerset", "vhat", "vietoris"]);
    let counts: Vec<usize> = per.values().copied().collect();
    assert!(counts.iter().all(|&c| c == counts[0] && c % 4 == 0), "{per:?}");
}

#[test]
fn duality_reports_brute_force_counts() {
    let lines = run_suite("duality", &caps(2, 2, 2, 1)).unwrap();
    assert!(all_passed(&lines));
    let posets = posets_up_to(2);
    let mut seen = 0;
    for x in &posets {
        for y in &posets {
            let k = brute_count(x, y);
            let prefix = format!("homset/{x} -> {y}/{k} relations, {k} hemimorphisms");
            assert!(lines.iter().any(|l| l.item == prefix), "{prefix}");
            seen += 1;
        }
    }
    assert_eq!(seen, 16);
}

#[test]
fn frozen_counts_on_two_points() {
    let lines = run_suite("duality", &caps(0, 0, 2, 0)).unwrap();
    for (pair, k) in [
        ("{a, b} -> {a, b}", 16),
        ("{a, b | a<b} -> {a, b | a<b}", 6),
        ("{a, b} -> {a, b | a<b}", 9),
        ("{a, b | a<b} -> {a, b}", 9),
    ] {
        let item = format!("homset/{pair}/{k} relations, {k} hemimorphisms");
        assert!(lines.iter().any(|l| l.item == item), "{item}");
    }
}

#[test]
fn empty_caps_pass() {
    for suite in ["monad-laws", "duality", "monoidal", "dictionary", "all"] {
        let lines = run_suite(suite, &caps(0, 0, 0, 0)).unwrap();
        assert!(all_passed(&lines), "{suite}");
    }
}

#[test]
fn unknown_suite_is_rejected() {
    assert_eq!(run_suite("laws", &Config::default()), Err(InputError::UnknownSuite("laws".into())));
}

#[test]
fn reports_do_not_depend_on_workers() {
    let a = render(&run_suite("monoidal", &caps(2, 2, 2, 1)).unwrap(), false);
    let b = render(&run_suite("monoidal", &Config { jobs: Some(1), ..caps(2, 2, 2, 1) }).unwrap(), false);
    assert_eq!(a, b);
    assert!(!a.contains("millis"));
    let timed = render(&run_suite("monoidal", &caps(1, 1, 1, 1)).unwrap(), true);
    assert!(timed.lines().all(|l| l.contains("\"millis\"")));
}
