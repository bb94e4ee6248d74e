use std::collections::BTreeSet;

use cac_core::inductive::compute_pos_sets;
use cac_core::reduction::normalize_random;
use cac_core::syntax::{parse_term, resolve};
use cac_core::term::subst1;
use cac_core::{alpha_equal, check_source, free_vars, normalize, substitute, Fuel, Position, Session, Sort, Term, TermSubstitution};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const SIG: &str = "
inductive nat : * := 0 : nat | s : nat => nat.
symbol + : nat => nat => nat.
rule + x 0 --> x.
rule + x (s y) --> s (+ x y).
symbol × : nat => nat => nat.
rule × x 0 --> 0.
rule × x (s y) --> + (× x y) x.
symbol ⊥ : *.
symbol ¬ : * => * mon- 1.
rule ¬ A --> A => ⊥.
";

fn session() -> Session {
    check_source(SIG, None).unwrap()
}

fn name() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("x"), Just("y"), Just("z")]
}

fn binder() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("x"), Just("y"), Just("z"), Just("_")]
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Sort(Sort::Star)),
        Just(Term::Sort(Sort::Box)),
        name().prop_map(Term::var),
        prop_oneof![Just("nat"), Just("0"), Just("s"), Just("¬"), Just("⊥")].prop_map(Term::sym),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (binder(), inner.clone(), inner.clone()).prop_map(|(x, a, b)| Term::abs(x, a, b)),
            (binder(), inner.clone(), inner.clone()).prop_map(|(x, a, b)| Term::prod(x, a, b)),
        ]
    })
}

fn numeral(n: usize) -> Term {
    (0..n).fold(Term::sym("0"), |t, _| Term::app(Term::sym("s"), t))
}

fn arith() -> impl Strategy<Value = Term> {
    let leaf = (0usize..3).prop_map(numeral);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app(Term::sym("s"), t)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::apps(Term::sym("+"), [a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::apps(Term::sym("×"), [a, b])),
        ]
    })
}

/// Counts `s` constructors down to `0`, independent of the reduction engine.
fn value(t: &Term) -> Option<usize> {
    match t.spine() {
        (Term::Sym(f), args) if &**f == "0" && args.is_empty() => Some(0),
        (Term::Sym(f), args) if &**f == "s" && args.len() == 1 => value(args[0]).map(|n| n + 1),
        (Term::Sym(f), args) if &**f == "+" && args.len() == 2 => Some(value(args[0])? + value(args[1])?),
        (Term::Sym(f), args) if &**f == "×" && args.len() == 2 => Some(value(args[0])? * value(args[1])?),
        _ => None,
    }
}

fn all_positions(t: &Term, here: Position, out: &mut BTreeSet<Position>) {
    out.insert(here.clone());
    for d in [1u8, 2] {
        if let Some(c) = t.child(d) {
            all_positions(c, here.child(d), out);
        }
    }
}

proptest! {
    #[test]
    fn empty_substitution_is_identity(t in term()) {
        prop_assert_eq!(substitute(&t, &TermSubstitution::new()), t);
    }

    #[test]
    fn substituting_a_variable_for_itself_is_identity(t in term(), x in name()) {
        prop_assert!(alpha_equal(&subst1(&t, x, &Term::var(x)), &t));
    }

    #[test]
    fn substitution_removes_the_variable(t in term(), x in name()) {
        let u = subst1(&t, x, &Term::sym("0"));
        prop_assert!(!free_vars(&u).iter().any(|y| &**y == x));
    }

    #[test]
    fn printing_then_parsing_is_alpha_equivalent(t in term()) {
        let s = session();
        let back = resolve(&parse_term(&t.to_string()).unwrap(), &|n| s.sig.contains(n));
        prop_assert!(alpha_equal(&back, &t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn pos_sets_are_positions_of_the_term(t in term()) {
        let s = session();
        let sets = compute_pos_sets(&s.sig, &t).unwrap();
        let mut every = BTreeSet::new();
        all_positions(&t, Position::root(), &mut every);
        prop_assert!(sets.positive.is_subset(&every));
        prop_assert!(sets.negative.is_subset(&every));
        prop_assert!(sets.positive.is_disjoint(&sets.negative));
    }

    #[test]
    fn domain_flips_polarity(a in term(), b in term()) {
        let s = session();
        let p = Term::arrow(a.clone(), b);
        let outer = compute_pos_sets(&s.sig, &p).unwrap();
        let inner = compute_pos_sets(&s.sig, &a).unwrap();
        let shift = |set: &BTreeSet<Position>| set.iter().map(|q| Position(vec![1]).concat(q)).collect::<BTreeSet<_>>();
        prop_assert!(shift(&inner.positive).is_subset(&outer.negative));
        prop_assert!(shift(&inner.negative).is_subset(&outer.positive));
    }

    #[test]
    fn arithmetic_normalizes_to_its_value(t in arith()) {
        let s = session();
        let nf = normalize(&s.sig, &t, Fuel::new(100_000)).unwrap();
        prop_assert_eq!(Some(&nf), Some(&numeral(value(&t).unwrap())));
        prop_assert_eq!(normalize(&s.sig, &nf, Fuel::new(10)).unwrap(), nf);
    }

    #[test]
    fn random_strategy_agrees_with_leftmost_outermost(t in arith(), seed in any::<u64>()) {
        let s = session();
        let mut rng = StdRng::seed_from_u64(seed);
        let lo = normalize(&s.sig, &t, Fuel::new(100_000)).unwrap();
        let rnd = normalize_random(&s.sig, &t, Fuel::new(100_000), &mut rng).unwrap();
        prop_assert_eq!(lo, rnd);
    }
}
