use cac_core::recursor::{
    admissibility_report, generate_and_validate, generate_canonical_recursor, validate_extended_recursor, Clause, Mode, Outcome,
    RecursorError, RecursorKind, Status,
};
use cac_core::syntax::parse_term;
use cac_core::{check_source, normalize, RewriteRule, Session};

const NAT: &str = "inductive nat : * := 0 : nat | s : nat => nat.\n";

fn session(src: &str) -> Session {
    let s = check_source(src, None).unwrap();
    assert!(!s.has_errors(), "{:?}", s.diagnostics);
    s
}

fn outcome(s: &Session, f: &str, c: &str, clause: Clause) -> Outcome {
    let v = validate_extended_recursor(&s.sig, f, c);
    v.clauses.iter().find(|r| r.clause == clause).unwrap().outcome
}

#[test]
fn canonical_nat_recursor_has_the_schema_type() {
    let s = session(NAT);
    let rec = generate_canonical_recursor(&s.sig, "nat", s.fuel).unwrap();
    assert_eq!(rec.symbol.as_ref(), "rec_nat");
    assert_eq!(rec.ty.to_string(), "(z:nat)(P:nat => *)(y1:P 0)(y2:(x:nat)(x':P x)P (s x))P z");
    assert_eq!(rec.kind, RecursorKind::Weak);
    assert_eq!(rec.rules.len(), 2);
}

#[test]
fn canonical_nat_recursor_computes() {
    let s = session(NAT);
    let g = generate_and_validate(&s.sig, "nat", s.fuel).unwrap();
    let t = parse_term("rec_nat (s (s 0)) P u v").unwrap();
    let t = cac_core::syntax::resolve(&t, &|n| g.signature.contains(n));
    let nf = normalize(&g.signature, &t, s.fuel).unwrap();
    assert_eq!(nf.to_string(), "v (s 0) (v 0 u)");
}

#[test]
fn generated_recursors_are_admissible() {
    let list = "inductive list : * => * := nil : (A:*)list A | cons : (A:*)A => list A => list A.";
    for (src, c) in [(NAT.to_string(), "nat"), (list.to_string(), "list")] {
        let s = session(&src);
        let g = generate_and_validate(&s.sig, c, s.fuel).unwrap();
        assert!(g.verdict.all_passed(), "{c}: {:?}", g.verdict);
        assert_eq!(g.report.mode, Mode::EliminationBased);
        assert_eq!(g.report.completeness, Status::Proven);
        assert_eq!(g.report.head_computability, Status::Proven);
    }
}

#[test]
fn indexed_recursor_substitutes_indices() {
    let src = format!("{NAT}inductive vec : nat => * := vnil : vec 0 | vcons : (n:nat)nat => vec n => vec (s n).");
    let s = session(&src);
    let g = generate_and_validate(&s.sig, "vec", s.fuel).unwrap();
    assert!(g.verdict.all_passed());
    let rho: Vec<String> = g.decl.rules[1].rho.iter().map(|(x, t)| format!("{x}={t}")).collect();
    assert_eq!(rho, ["z1=s n"]);
}

#[test]
fn non_strictly_positive_type_has_no_canonical_recursor() {
    let src = "symbol ⊥ : *.\nsymbol ¬ : * => * mon- 1.\nrule ¬ A --> A => ⊥.\ninductive trm : * := mu : ¬ (¬ trm) => trm.";
    let s = session(src);
    let e = generate_canonical_recursor(&s.sig, "trm", s.fuel).unwrap_err();
    assert_eq!(e, RecursorError::NotStrictlyPositive { constructor: "mu".into(), arg: 1 });
}

#[test]
fn monotone_parameter_breaks_the_mon_clause() {
    let src = "inductive list : * => * := nil : (A:*)list A | cons : (A:*)A => list A => list A mon+ 1.";
    let s = session(src);
    let g = generate_and_validate(&s.sig, "list", s.fuel).unwrap();
    let failures: Vec<_> = g.verdict.failures().map(|r| r.clause).collect();
    assert_eq!(failures, [Clause::Mon]);
}

#[test]
fn escaping_index_is_rejected() {
    let src = format!(
        "{NAT}inductive vec : nat => * := vnil : vec 0 | vcons : (n:nat)nat => vec n => vec (s n).\nsymbol len : (n:nat)vec n => nat."
    );
    let mut s = session(&src);
    let lhs = s.resolve(&parse_term("len n (vcons m x v)").unwrap());
    s.sig.add_rule(RewriteRule::from_lhs(&lhs, parse_term("n").unwrap()).unwrap()).unwrap();
    assert_eq!(outcome(&s, "len", "vec", Clause::Escape), Outcome::Fail);
    assert_eq!(outcome(&s, "len", "vec", Clause::Guard), Outcome::Pass);
}

#[test]
fn unguarded_rule_is_rejected() {
    let s = session(&format!("{NAT}symbol id : (n:nat)(P:nat => *)P n => P n.\nrule id n P x --> x."));
    assert_eq!(outcome(&s, "id", "nat", Clause::Guard), Outcome::Fail);
}

#[test]
fn negative_occurrence_in_w_is_rejected() {
    let s = session(&format!("{NAT}symbol g : (n:nat)(P:nat => *)((nat => nat) => nat) => P n."));
    let v = validate_extended_recursor(&s.sig, "g", "nat");
    let r = v.clauses.iter().find(|r| r.clause == Clause::Positivity).unwrap();
    assert_eq!(r.outcome, Outcome::Fail);
    assert_eq!(r.position.as_ref().unwrap().to_string(), "2.1.1.1");
}

#[test]
fn greater_predicate_in_w_is_rejected() {
    let s = session(&format!("{NAT}symbol Q : *.\nsymbol g : nat => Q => Q."));
    assert_eq!(outcome(&s, "g", "nat", Clause::Greater), Outcome::Fail);
}

#[test]
fn constructor_is_not_a_recursor() {
    let s = session(NAT);
    let v = validate_extended_recursor(&s.sig, "s", "nat");
    assert_eq!(v.clauses[0].outcome, Outcome::Fail);
    assert!(v.clauses[1..].iter().all(|r| r.outcome == Outcome::Skipped));
}

#[test]
fn introduction_mode_without_recursors() {
    let s = session(NAT);
    let r = admissibility_report(&s.sig, "nat");
    assert_eq!(r.mode, Mode::IntroductionBased);
    assert_eq!(r.completeness, Status::NotApplicable);
}
