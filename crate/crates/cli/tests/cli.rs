use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn dfoperad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dfoperad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn gen(dir: &Path, kind: &str, name: &str, file: &str) -> PathBuf {
    let path = dir.join(file);
    let o = dfoperad(&["gen", kind, name, "--site-bound", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn passing_monoid_exits_zero_with_bounds_banner() {
    let dir = tempfile::tempdir().unwrap();
    let z3 = gen(dir.path(), "monoid", "cyclic:3", "z3.json");
    let o = dfoperad(&["check", "monoid", s(&z3), "--site-bound", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("bounds: site_bound=3"));
    assert!(out.contains("PASS mackey_squares (4348 instances)"));
    assert!(out.ends_with("verdict: PASS\n"));
}

#[test]
fn products_on_the_two_chain_fail_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let chain = gen(dir.path(), "category", "chain:2", "chain.json");
    let args = |mode| {
        vec![
            "check", "monoidal", s(&chain), "--mode", mode, "--fibration", "--site-bound", "2", "--format", "json",
        ]
    };
    let sums = dfoperad(&args("cocartesian"));
    assert_eq!(sums.status.code(), Some(0));
    let prods = dfoperad(&args("cartesian"));
    assert_eq!(prods.status.code(), Some(1));
    let j: Value = serde_json::from_str(&stdout(&prods)).unwrap();
    assert_eq!(j["verdict"], "FAIL");
    assert_eq!(j["bounds"]["site_bound"], 2);
    assert_eq!(j["reports"][2]["checks"][0]["check"], "corepresented_by_reindexing");
}

#[test]
fn missing_file_exits_two() {
    let o = dfoperad(&["check", "monoid", "/nonexistent/m.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: cannot read /nonexistent/m.json"));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, "{\n  \"schema\": \"dfoperad/1\",\n  \"kind\": \n}\n").unwrap();
    let o = dfoperad(&["check", "monoid", s(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&format!("{}:4:1", s(&p))), "{}", stderr(&o));
}

#[test]
fn unknown_fields_and_kinds_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = gen(dir.path(), "monoid", "cyclic:2", "z2.json");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&z2).unwrap()).unwrap();
    v["colour"] = Value::from("red");
    let extra = dir.path().join("extra.json");
    fs::write(&extra, v.to_string()).unwrap();
    assert_eq!(dfoperad(&["check", "monoid", s(&extra)]).status.code(), Some(2));
    v.as_object_mut().unwrap().remove("colour");
    v["kind"] = Value::from("groupoid");
    let kind = dir.path().join("kind.json");
    fs::write(&kind, v.to_string()).unwrap();
    assert_eq!(dfoperad(&["check", "monoid", s(&kind)]).status.code(), Some(2));
}

#[test]
fn bad_mode_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let chain = gen(dir.path(), "category", "chain:2", "chain.json");
    let o = dfoperad(&["check", "monoidal", s(&chain), "--mode", "tensor"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn noncommutative_table_is_a_failing_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("left.json");
    // x*y = x: associative with no two-sided unit
    fs::write(
        &p,
        r#"{"schema": "dfoperad/1", "kind": "monoid", "name": "left", "elements": ["a", "b"], "unit": "a",
            "table": [["a", "a"], ["b", "b"]]}"#,
    )
    .unwrap();
    let o = dfoperad(&["check", "monoid", s(&p), "--site-bound", "2"]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn broken_composition_entry_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "multicat", "discrete:or", "or.json");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    let comps = v["compositions"].as_array_mut().unwrap();
    comps[0]["table"] = Value::Array(vec![]);
    fs::write(&p, v.to_string()).unwrap();
    let o = dfoperad(&["check", "multicat", s(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("composition ("), "{}", stderr(&o));
}

#[test]
fn generated_documents_reload_and_pass() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, name, check) in [
        ("monoid", "klein", "monoid"),
        ("multicat", "discrete:and", "multicat"),
        ("multicat", "endomorphism:2", "multicat"),
        ("df-monoid", "or", "monoid"),
    ] {
        let p = gen(dir.path(), kind, name, &format!("{kind}.json"));
        let o = dfoperad(&["check", check, s(&p), "--site-bound", "3", "--arity-bound", "2"]);
        assert_eq!(o.status.code(), Some(0), "{kind} {name}: {}", stdout(&o));
    }
}

#[test]
fn df_monoid_documents_fix_their_own_bound() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "df-monoid", "cyclic:2", "z2.json");
    let o = dfoperad(&["check", "monoid", s(&p), "--site-bound", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("disagrees with the document's site bound 3"));
}

#[test]
fn extracted_multicategory_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let or = gen(dir.path(), "monoid", "or", "or.json");
    let ext = dir.path().join("ext.json");
    let o = dfoperad(&["extract", "multicat", s(&or), "--site-bound", "2", "--out", s(&ext)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("artifact written to"));
    let o = dfoperad(&["check", "multicat", s(&ext)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let chain = gen(dir.path(), "category", "chain:2", "chain.json");
    let args = [
        "check", "monoidal", s(&chain), "--mode", "cartesian", "--fibration", "--site-bound", "2", "--format", "json",
    ];
    let (a, b) = (dfoperad(&args), dfoperad(&args));
    assert_eq!(a.stdout, b.stdout);
    let r1 = gen(dir.path(), "category", "random", "r1.json");
    let r2 = gen(dir.path(), "category", "random", "r2.json");
    assert_eq!(fs::read(r1).unwrap(), fs::read(r2).unwrap());
}

#[test]
fn timing_goes_to_stderr_only() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = gen(dir.path(), "monoid", "cyclic:2", "z2.json");
    let o = dfoperad(&["check", "monoid", s(&z2), "--site-bound", "2", "--timing"]);
    assert!(stderr(&o).contains("elapsed:"));
    assert!(!stdout(&o).contains("elapsed"));
}
