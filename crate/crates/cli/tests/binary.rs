use std::process::Command;

fn corpus(name: &str) -> String {
    format!("{}/tests/corpus/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_reldual")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["validate", &corpus("relations")]).0, 0);
    assert_eq!(run(&["validate", &corpus("invalid_weakening")]).0, 2);
    assert_eq!(run(&["validate", "/nonexistent.json"]).0, 2);
    assert_eq!(run(&["render", &corpus("relations"), "missing"]).0, 2);
    assert_eq!(run(&["check", "nothing"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let (code, out) = run(&["check", "dictionary", "--cap-pairs", "1", "--cap-tensor", "1"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.contains("\"status\":\"pass\"")));
}

#[test]
fn validate_output_parses_to_the_same_workspace() {
    let (_, out) = run(&["validate", &corpus("structures")]);
    let a = reldual_cli::workspace::parse_str(&out).unwrap();
    let b = reldual_cli::workspace::parse_str(&std::fs::read_to_string(corpus("structures")).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn render_dot() {
    let (code, out) = run(&["render", &corpus("structures"), "j", "--format", "dot"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains("->")).count(), 2);
    assert!(out.starts_with("digraph"));
}

#[test]
fn conversions_emit_workspaces() {
    let f = corpus("structures");
    for args in [
        vec!["coalg", &f, "step"],
        vec!["coalg", &f, "box"],
        vec!["factor", &f, "meet"],
        vec!["tensor", &f, "j", "j"],
        vec!["product", &f, "c2", "c2"],
        vec!["spectrum", &f, "j"],
    ] {
        let (code, out) = run(&args);
        assert_eq!(code, 0, "{args:?}");
        assert!(reldual_cli::workspace::parse_str(&out).is_ok(), "{args:?}: {out}");
    }
    let r = corpus("relations");
    for args in [vec!["dualize", &r, "r"], vec!["dualize", &r, "t", "--package", "rel_cabool"], vec!["compose", &r, "r", "s"]] {
        let (code, out) = run(&args);
        assert_eq!(code, 0, "{args:?}");
        assert!(reldual_cli::workspace::parse_str(&out).is_ok(), "{args:?}: {out}");
    }
    assert_eq!(run(&["dualize", &r, "r", "--package", "rel_cabool"]).0, 2);
}

#[test]
fn enumerate_counts() {
    let (_, out) = run(&["enumerate", "posets", "3"]);
    let ws = reldual_cli::workspace::parse_str(&out).unwrap();
    assert_eq!(ws.bindings.len(), 9);
    let (_, out) = run(&["enumerate", "lattices", "5"]);
    assert_eq!(reldual_cli::workspace::parse_str(&out).unwrap().bindings.len(), 1 + 1 + 1 + 2 + 3);
}
