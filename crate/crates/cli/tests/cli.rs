use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use stackavg_cli::format::{parse_automaton, parse_model, serialize_automaton, Model};
use stackavg_cli::{parse_threshold, RelArg};

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stackavg"))
        .args(args)
        .current_dir(models())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn e1_iasc_yes() {
    let (code, out, _) = run(&["asc", "e1.pda", "--mode", "inf", "--rel", "le", "--lambda", "0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("YES"));
}

#[test]
fn e1_sasc_strict_no() {
    let (code, out, _) = run(&["asc", "e1.pda", "--mode", "sup", "--rel", "lt", "--lambda", "1"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("NO"));
}

#[test]
fn json_matches_human() {
    let cases: &[&[&str]] = &[
        &["asc", "e1.pda", "--mode", "sup", "--rel", "le", "--lambda", "1"],
        &["asc", "e1.pda", "--mode", "sup", "--rel", "le", "--lambda", "0.5"],
        &["avglc", "zeros_twos.pda", "--mode", "inf", "--rel", "lt", "--lambda", "0"],
        &["avglc", "zeros_twos.cfg", "--rel", "le", "--lambda", "1"],
        &["game", "counter.wps", "--mode", "sup", "--rel", "le", "--lambda", "1"],
        &["art", "immediate.cs", "--rel", "lt", "--lambda", "1"],
        &["oracle", "e1.pda", "--stack-bound", "2", "--rel", "le", "--lambda", "1"],
    ];
    for args in cases {
        let (code, human, _) = run(args);
        let mut json_args = args.to_vec();
        json_args.extend(["--format", "json"]);
        let (jcode, json, _) = run(&json_args);
        assert_eq!(code, jcode, "{args:?}");
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], "stackavg-report/1");
        assert_eq!(v["command"], args[0]);
        assert!(v["elapsed_ms"].is_number());
        assert_eq!(human.lines().next().unwrap(), v["answer"].as_str().unwrap(), "{args:?}");
        assert_eq!(v["input"]["file"], args[1]);
    }
}

#[test]
fn malformed_file_exits_2() {
    let dir = std::env::temp_dir().join(format!("stackavg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.pda");
    std::fs::write(&bad, "states: p\ninitial: p\ninput: a\ntrans:\n  p a _ -> q -\n").unwrap();
    let (code, _, err) = run(&["asc", bad.to_str().unwrap(), "--lambda", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 5, column 12") && err.contains("'q'"), "{err}");
    let (code, out, _) = run(&["asc", bad.to_str().unwrap(), "--lambda", "0", "--format", "json"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["error"].as_str().unwrap().contains("undeclared state"));
    let (code, _, _) = run(&["asc", "e1.pda", "--lambda", "one"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["asc", "missing.pda", "--lambda", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn computations_without_answers() {
    let (code, out, _) = run(&["mincost", "zeros_twos.cfg", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], "2");
    assert!(v["answer"].is_null());
    let (code, out, _) = run(&["factorize", "e1.pda", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["components"], serde_json::json!(["(A, ⊥)"]));
}

#[test]
fn oracle_unknown_exits_3() {
    let (code, out, _) = run(&["oracle", "e1.pda", "--stack-bound", "3", "--rel", "lt", "--lambda", "1"]);
    assert_eq!(code, 3);
    assert!(out.starts_with("UNKNOWN"));
}

#[test]
fn bundled_models_round_trip() {
    for entry in std::fs::read_dir(models()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let m = parse_model(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let again = match &m {
            Model::Automaton(f) => parse_model(&serialize_automaton(f)),
            Model::Grammar(g) => parse_model(&stackavg_cli::format::serialize_grammar(g)),
            Model::ClientServer(s) => parse_model(&stackavg_cli::format::serialize_client_server(s)),
        }
        .unwrap();
        assert_eq!(m, again, "{}", path.display());
    }
}

#[test]
fn e1_file_serializes_back_to_itself() {
    let text = std::fs::read_to_string(models().join("e1.pda")).unwrap();
    let f = parse_automaton(&text).unwrap();
    let once = serialize_automaton(&f);
    assert_eq!(serialize_automaton(&parse_automaton(&once).unwrap()), once);
}

#[test]
fn thresholds_round_trip() {
    for (text, shown) in [("1", "<= 1"), ("0.25", "<= 1/4"), ("-3/6", "<= -1/2"), ("2.50", "<= 5/2")] {
        let th = parse_threshold(RelArg::Le, text).unwrap();
        assert_eq!(th.to_string(), shown);
        let back = parse_threshold(RelArg::Le, &th.bound.to_string()).unwrap();
        assert_eq!(back, th);
    }
    assert!(parse_threshold(RelArg::Lt, "1/0").is_err());
}
