use std::io::Write;
use std::process::{Command, Stdio};

use koszulkit_cli::{run, Outcome};
use serde_json::Value;

fn cli(args: &[&str]) -> Outcome {
    cli_with_input(args, "")
}

fn cli_with_input(args: &[&str], stdin: &str) -> Outcome {
    let mut full = vec!["koszulkit".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    run(&full, stdin)
}

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../schema/report.schema.json");
    let value: Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap()
}

fn validate(out: &Outcome) -> Value {
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    let schema = schema();
    if let Err(errors) = schema.validate(&report) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("schema violations: {msgs:?}\n{}", out.stdout);
    }
    report
}

const CASE54_TABLE: &str = "            0 1  2  3 4
     total: 1 6 13 12 4
         0: 1 .  .  . .
         1: . 6  4  . .
         2: . .  9 12 4
";

#[test]
fn case54_table_both_routes() {
    for via in ["resolution", "homology"] {
        let out = cli(&["betti", "case54", "--over-poly", "--via", via]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, CASE54_TABLE, "{via}");
    }
}

#[test]
fn golod_series_first_line() {
    let out = cli(&["series", "golod", "socle4", "--s", "4"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().next(), Some("(1+z)^3/(1-z-12z^2-10z^3-z^4+2z^5)"));
    assert!(out.stdout.contains("h: 1+15z+30z^2+23z^3+7z^4\n"));
    assert!(out.stdout.contains("expansion: 1 4 19 78 347 1475 6430\n"));
    assert!(!out.stdout.contains("[failed]"));
}

#[test]
fn series_compare_exit_codes() {
    let ok = cli(&["series", "compare", "stretched323", "--formula", "stretched:3,2", "--limit", "4"]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    let explicit = cli(&["series", "compare", "stretched223", "--formula", "1/(1-2*z)", "--limit", "5"]);
    assert_eq!(explicit.code, 0, "{}", explicit.stdout);
    let wrong = cli(&["series", "compare", "stretched223", "--formula", "1/(1-3*z)", "--limit", "3"]);
    assert_eq!(wrong.code, 1);
    assert!(wrong.stdout.contains("match: no"));
    let quotient = cli(&["series", "compare", "stretched223", "--formula", "golod-quotient", "--limit", "5"]);
    assert_eq!(quotient.code, 0);
}

#[test]
fn gb_from_standard_input_through_the_binary() {
    let exe = env!("CARGO_BIN_EXE_koszulkit");
    let def = Command::new(exe).args(["corpus", "get", "socle4"]).output().unwrap();
    assert!(def.status.success());
    let mut child = Command::new(exe).args(["gb", "-", "--order", "lex"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(&def.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 17);
    for g in ["a*b*d - c^3", "a*d^3 + c^4", "a*b^2 + c*d^2", "b*c*d + d^3", "c^5"] {
        assert!(lines.contains(&g), "{g}");
    }
    let direct = cli(&["gb", "socle4", "--order", "lex"]);
    assert_eq!(direct.stdout, text);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["gb", "no-such-ring"]).code, 3);
    assert_eq!(cli(&["gb"]).code, 3);
    assert_eq!(cli(&["frobnicate"]).code, 3);
    assert_eq!(cli(&["--help"]).code, 0);
    assert_eq!(cli_with_input(&["gb", "-"], "field GF(4)\nvars x\nideal:\nx^2\n").code, 3);
    assert_eq!(cli_with_input(&["gb", "-"], "vars x,y\nideal:\nx^2 + q\n").code, 3);
    let cycle = "z*T1 + (y+u)*T2 + (z+u)*T3 + u*T4";
    assert_eq!(cli(&["check", "nonlinear-gen", "case66", "--classes", cycle]).code, 0);
    assert_eq!(cli(&["check", "p-cond", "case54", "--t", "2", "--r", "1", "--cycle", "G1"]).code, 1);
    assert_eq!(cli(&["check", "z-cond", "case54", "--t", "1", "--b", "0", "--s", "2", "--cycles", "x*T1"]).code, 2);
    // socle needs a finite-dimensional ring
    assert_eq!(cli(&["socle", "case66"]).code, 2);
    // a boundary is rejected where a cycle is required
    assert_eq!(cli(&["check", "trivial-products", "case54", "--cycles", "x*T1*T2"]).code, 3);
}

#[test]
fn case54_condition_through_generator_labels_and_expressions() {
    let set = ["x*T1", "z*T3", "z*T1", "z*T1*T3", "x*T1*T3"];
    let mut args = vec!["check", "trivial-products", "case54", "--cycles"];
    args.extend(set);
    let out = cli(&args);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.starts_with("condition: "));
    assert!(out.stdout.contains("verdict: holds\n"));
    let mut args = vec!["check", "z-cond", "case54", "--t", "1", "--b", "1", "--s", "2", "--cycles"];
    args.extend(set);
    assert_eq!(cli(&args).code, 0);
}

#[test]
fn json_reports_follow_the_schema() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["--json", "check", "z-cond", "socle4", "--t", "2", "--b", "2", "--s", "4", "--cycles", "(a*c - b*d)*T1 + c^2*T3"],
        vec!["--json", "check", "p-cond", "case54", "--t", "2", "--r", "1", "--cycle", "G2"],
        vec!["--json", "check", "p-cond", "stretched323", "--t", "2", "--r", "1", "--cycle", "t^2*T1 - z*T2", "--local"],
        vec!["--json", "check", "nonlinear-gen", "case55", "--classes", "G1", "G2"],
        vec!["--json", "gb", "case54"],
        vec!["--json", "betti", "case54"],
        vec!["--json", "betti", "stretched323", "--of-k", "--limit", "3"],
        vec!["--json", "homology", "stretched223"],
        vec!["--json", "socle", "socle4"],
        vec!["--json", "series", "golod", "socle4", "--s", "4"],
        vec!["--json", "series", "stretched", "--v", "3", "--r", "2"],
        vec!["--json", "stretched", "build", "--v", "2", "--r", "2", "--h", "3"],
        vec!["--json", "corpus", "list"],
        vec!["--json", "--timing", "corpus", "get", "case66"],
    ];
    for args in runs {
        let out = cli(&args);
        assert!(out.code <= 2, "{args:?}: {}", out.stderr);
        let report = validate(&out);
        assert_eq!(report["command"].as_array().unwrap().len(), args.len());
        if report["results"].get("verdict").is_some() {
            for key in ["hypotheses", "witnesses"] {
                assert!(report["results"][key].is_array(), "{args:?}");
            }
        }
    }
    let p = validate(&cli(&["--json", "check", "p-cond", "case54", "--t", "2", "--r", "1", "--cycle", "G2"]));
    assert_eq!(p["results"]["verdict"], "fails");
    assert!(!p["results"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn schema_rejects_a_verdict_without_witnesses() {
    let bad = serde_json::json!({
        "command": [],
        "config": { "field": "Q", "order": "lex" },
        "results": { "condition": "P(2,1)", "verdict": "holds", "hypotheses": [], "pieces": [] }
    });
    assert!(!schema().is_valid(&bad));
}

#[test]
fn output_is_deterministic_without_timing() {
    let args = ["--json", "check", "nonlinear-gen", "case71v16", "--classes", "G1"];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a, b);
    assert!(a.stderr.is_empty());
    let timed = cli(&["--timing", "corpus", "list"]);
    assert!(timed.stderr.starts_with("time: "));
}

#[test]
fn corpus_definitions_round_trip() {
    let list = cli(&["corpus", "list"]);
    for line in list.stdout.lines() {
        let name = line.split_whitespace().next().unwrap();
        let text = cli(&["corpus", "get", name]).stdout;
        let def = koszulkit::parse_ring(&text).unwrap();
        assert_eq!(koszulkit::parse_ring(&def.print()).unwrap(), def, "{name}");
        // the same ring read from standard input gives the same basis
        assert_eq!(cli_with_input(&["gb", "-"], &text).stdout, cli(&["gb", name]).stdout, "{name}");
    }
}

#[test]
fn field_override() {
    let q = cli(&["betti", "socle4"]);
    let p = cli(&["--field", "GF(32003)", "betti", "socle4"]);
    assert_eq!(q.stdout, p.stdout);
    let json = validate(&cli(&["--json", "--field", "GF(7)", "gb", "case54"]));
    assert_eq!(json["config"]["field"], "GF(7)");
    assert_eq!(cli(&["--field", "GF(9)", "gb", "case54"]).code, 3);
}

#[test]
fn stretched_build_output_is_a_ring_definition() {
    let out = cli(&["stretched", "build", "--v", "3", "--r", "2", "--h", "3", "--a", "1"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("# F = t^2*T1 - z*T2\n"));
    assert!(!out.stdout.contains("[failed]"));
    let betti = cli_with_input(&["betti", "-", "--of-k", "--limit", "4"], &out.stdout);
    assert_eq!(betti.code, 0, "{}", betti.stderr);
    assert!(betti.stdout.starts_with("betti: 1 3 8 21 55\n"));
    let p = cli_with_input(&["check", "p-cond", "-", "--t", "2", "--r", "1", "--cycle", "t^2*T1 - z*T2", "--local"], &out.stdout);
    assert_eq!(p.code, 0, "{}", p.stdout);
    // a singular matrix is refused
    assert_eq!(cli(&["stretched", "build", "--v", "3", "--r", "1", "--h", "3", "--a", "1,1;1,1"]).code, 3);
}

#[test]
fn socle_listing() {
    let out = cli(&["socle", "socle4"]);
    assert_eq!(out.stdout, "dimension: 2\na*c*d^2\nc^4\n");
}
