use std::path::PathBuf;

use cac_core::syntax::parse_term;
use cac_core::{check_source, normalize, Session, Severity};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load(name: &str) -> Session {
    let src = std::fs::read_to_string(corpus_dir().join(format!("{name}.cac"))).unwrap();
    check_source(&src, None).unwrap()
}

fn golden(name: &str) {
    let s = load(name);
    let got: Vec<String> = s.diagnostics.iter().map(|d| d.to_string()).collect();
    let expected = std::fs::read_to_string(corpus_dir().join(format!("expected/{name}.diag"))).unwrap();
    let expected: Vec<&str> = expected.lines().collect();
    assert_eq!(got, expected, "diagnostics of {name}.cac");
}

fn codes(s: &Session, severity: Severity) -> Vec<&str> {
    s.diagnostics.iter().filter(|d| d.severity == severity).map(|d| d.code.as_str()).collect()
}

fn eval(s: &Session, src: &str) -> String {
    let t = s.resolve(&parse_term(src).unwrap());
    normalize(&s.sig, &t, s.fuel).unwrap().to_string()
}

#[test]
fn nat_golden() {
    golden("nat");
    let s = load("nat");
    assert!(!s.has_errors());
    assert_eq!(eval(&s, "× (s (s 0)) (+ (s 0) (s 0))"), "s (s (s (s 0)))");
}

#[test]
fn int_golden() {
    golden("int");
    let s = load("int");
    assert_eq!(eval(&s, "+ (s (s 0)) (p (p (p 0)))"), "p 0");
}

#[test]
fn list_golden() {
    golden("list");
    let s = load("list");
    assert_eq!(eval(&s, "app A (cons A a (nil A)) (cons A b (nil A))"), "cons A a (cons A b (nil A))");
}

#[test]
fn fin_without_recursor_violates_i6() {
    golden("fin");
    let s = load("fin");
    assert_eq!(codes(&s, Severity::Error), ["I6-VIOLATION"]);
    assert_eq!(s.diagnostics[0].condition.as_deref(), Some("I6"));
}

#[test]
fn fin_with_recursor_is_accepted() {
    golden("fin_rec");
    let s = load("fin_rec");
    assert!(!s.has_errors());
    assert!(codes(&s, Severity::Note).contains(&"I6-VIOLATION"));
}

#[test]
fn jmeq_golden() {
    golden("jmeq");
    golden("jmeq_rec");
    assert_eq!(codes(&load("jmeq"), Severity::Error), ["SAFETY"]);
    assert!(codes(&load("jmeq_rec"), Severity::Note).contains(&"SAFETY"));
}

#[test]
fn trm_golden() {
    golden("trm");
    let s = load("trm");
    assert!(!s.has_errors());
    assert_eq!(eval(&s, "rec A y1 y2 y3 (var (s 0))"), "y1 (s 0)");
}

#[test]
fn dlist_golden() {
    golden("dlist");
    let s = load("dlist");
    assert_eq!(eval(&s, "fresh nat neq 0 (nil nat neq)"), "⊤");
}

#[test]
fn mendler_golden() {
    golden("mendler");
    let s = load("mendler");
    let d = s.errors().next().unwrap();
    assert_eq!(d.code, "NEGATIVE-POSITIVITY");
    assert_eq!(d.position.as_ref().map(|p| p.to_string()).as_deref(), Some("1.1"));
}

#[test]
fn corpus_round_trips_through_the_printer() {
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cac") {
            let src = std::fs::read_to_string(&path).unwrap();
            let file = cac_core::syntax::parse_file(&src).unwrap();
            let again = cac_core::syntax::parse_file(&file.to_string()).unwrap();
            assert!(file.same_decls(&again), "{}", path.display());
        }
    }
}
