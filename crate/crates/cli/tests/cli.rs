use std::process::{Command, Output};

use serde_json::Value;

fn gsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsig"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let o = gsig(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).unwrap()
}

const S3: &str = "perm 3; (1 2 3); (1 2)";

#[test]
fn bg_structures() {
    assert_eq!(json(&["bg", "cyclic 5"])["shape"], "Z^2");
    assert_eq!(json(&["bg", S3])["shape"], "Z/2");
    assert_eq!(json(&["bg", S3])["basis"][0], "[a]");
    let v = json(&["bg", "abelian 5 5"]);
    assert_eq!(
        (v["free_rank"].as_u64(), v["two_torsion"].as_u64()),
        (Some(12), Some(0))
    );
}

#[test]
fn theta_and_index() {
    assert_eq!(
        json(&["theta", "cyclic 3", "[x^3]"])["theta"],
        serde_json::json!(["0", "0", "-1"])
    );
    let v = json(&["theta", S3, "[a]", "--variant", "dprime"]);
    assert_eq!(v["theta"], serde_json::json!(["0", "0", "1"]));
    assert_eq!(json(&["index", "cyclic 7"])["index"], "1");
    assert_eq!(json(&["report", "cp", "23"])["index"], "3");
    let t = stdout(&["report", "cpcp", "3"]);
    assert!(t.lines().any(|l| l == "index: 1"), "{t}");
}

#[test]
fn data_operations() {
    assert_eq!(json(&["restrict", S3, "[a]", "--to", "a"])["data"], "[]");
    assert_eq!(
        json(&["induce", "cyclic 3", "[x, x, x]", "--into", S3])["data"],
        "[a]"
    );
    let v = json(&["realize", S3, "[a]"]);
    assert_eq!(v["verified"], true);
    assert_eq!(json(&["class-number", "23"])["h_minus"], "3");
}

#[test]
fn json_data_input_matches_text_input() {
    let text = json(&["theta", "cyclic 5", "[x, x, x^3]"]);
    let entries = json(&["restrict", "cyclic 5", "[x, x, x^3]", "--to", "x"])["entries"].clone();
    let j = serde_json::json!({ "group": "cyclic 5", "entries": entries }).to_string();
    assert_eq!(json(&["theta", "cyclic 5", &j]), text);
}

#[test]
fn output_is_byte_identical_on_repeat() {
    for args in [
        &["--format", "json", "index", "abelian 3 3"][..],
        &["bg", "cyclic 12"],
        &["report", "cp", "11"],
    ] {
        assert_eq!(gsig(args).stdout, gsig(args).stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| gsig(args).status.code();
    assert_eq!(code(&["bg", "cyclic"]), Some(2));
    assert_eq!(code(&["bg", "cyclic 3000"]), Some(3));
    assert_eq!(code(&["report", "cp", "37"]), Some(3));
    assert_eq!(code(&["report", "cpcp", "7"]), Some(3));
    assert_eq!(code(&["theta", "cyclic 3", "[x]"]), Some(4));
    assert_eq!(code(&["theta", "perm 4; (1 2 3 4); (1 3)", "[]"]), Some(5));
    assert_eq!(code(&["verify", "--tamper-reduction"]), Some(1));
}

#[test]
fn quick_verify_passes() {
    let v = json(&["verify"]);
    assert_eq!(v["passed"], true, "{v}");
}
