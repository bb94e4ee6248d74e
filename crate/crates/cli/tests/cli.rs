use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).display().to_string()
}

fn cac(args: &[&str], fuel_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cac"));
    cmd.args(args).env_remove("CAC_FUEL");
    if let Some(f) = fuel_env {
        cmd.env("CAC_FUEL", f);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn accepted_file_exits_zero() {
    let out = cac(&["check", &corpus("nat.cac")], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 error(s)"));
}

#[test]
fn rejected_file_exits_one() {
    assert_eq!(cac(&["check", &corpus("fin.cac")], None).status.code(), Some(1));
}

#[test]
fn missing_file_exits_two() {
    let out = cac(&["check", "/nonexistent/file.cac", "--json"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["diagnostics"][0]["code"], "IO-ERROR");
}

#[test]
fn unparsable_term_exits_two() {
    let out = cac(&["eval", &corpus("nat.cac"), "-e", "(s 0", "--json"], None);
    assert_eq!(out.status.code(), Some(2));
    let d = &json(&out)["diagnostics"][0];
    assert_eq!(d["code"], "PARSE-ERROR");
    assert_eq!(d["span"]["line"], 1);
}

#[test]
fn diagnostics_follow_the_schema() {
    let out = cac(&["check", &corpus("mendler.cac"), "--json"], None);
    let v = json(&out);
    for d in v["diagnostics"].as_array().unwrap() {
        let keys: Vec<&str> = d.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["severity", "code", "message", "span"] {
            assert!(keys.contains(&k), "missing {k} in {d}");
        }
        assert!(keys.iter().all(|k| ["severity", "code", "message", "span", "position", "condition"].contains(k)));
        for k in ["line", "col", "len"] {
            assert!(d["span"][k].is_u64());
        }
        if let Some(p) = d["position"].as_str() {
            assert!(p.split('.').all(|digit| digit == "1" || digit == "2"), "{p}");
        }
    }
}

#[test]
fn fuel_flag_and_environment() {
    let term = "× (s (s 0)) (s (s 0))";
    assert_eq!(cac(&["eval", &corpus("nat.cac"), "-e", term, "--fuel", "2"], None).status.code(), Some(1));
    assert_eq!(cac(&["eval", &corpus("nat.cac"), "-e", term], Some("2")).status.code(), Some(1));
    assert_eq!(cac(&["eval", &corpus("nat.cac"), "-e", term, "--fuel", "1000"], Some("2")).status.code(), Some(0));
}

#[test]
fn eval_accepts_open_terms_and_type_rejects_them() {
    let out = cac(&["eval", &corpus("nat.cac"), "-e", "+ x (s 0)"], None);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "s x");
    let out = cac(&["type", &corpus("nat.cac"), "-e", "+ x 0", "--json"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["diagnostics"][0]["code"], "UNBOUND-VARIABLE");
}

#[test]
fn type_of_a_closed_term() {
    let out = cac(&["type", &corpus("trm.cac"), "-e", "cons nat 0 (nil nat)", "--json"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["type"], "list nat");
}

#[test]
fn genrec_prints_declarations() {
    let out = cac(&["genrec", &corpus("nat.cac"), "-t", "nat"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("symbol rec_nat : "));
    assert!(text.contains("recursor rec_nat for nat."));
}

#[test]
fn genrec_on_a_non_strictly_positive_type_fails() {
    let out = cac(&["genrec", &corpus("trm.cac"), "-t", "trm", "--json"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["diagnostics"][0]["code"], "NOT-STRICTLY-POSITIVE");
}
