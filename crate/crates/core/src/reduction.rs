//! β-reduction, first-order matching of rule left-hand sides, combined βR
//! steps, fuel-bounded normalization and conversion.
//!
//! The reported normal form is the one reached by the leftmost-outermost
//! strategy. [`normalize_random`] picks redexes at random and is used to
//! test that the choice does not matter on confluent rule sets.

use rand::Rng;
use thiserror::Error;

use crate::signature::{RewriteRule, Signature};
use crate::term::{alpha_equal, subst1, substitute, Position, Term, TermSubstitution};

pub const DEFAULT_FUEL: usize = 10_000;

/// Upper bound on the number of reduction steps of one normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel(usize);

impl Fuel {
    /// Zero is bumped to one.
    pub fn new(max_steps: usize) -> Fuel {
        Fuel(max_steps.max(1))
    }

    pub fn max_steps(self) -> usize {
        self.0
    }
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel(DEFAULT_FUEL)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("fuel exhausted after {steps} steps")]
pub struct FuelExhausted {
    pub steps: usize,
}

/// One first-order match of a left-hand side. The pattern is algebraic, so
/// it contains no binders.
pub fn match_pattern(pattern: &Term, t: &Term, theta: &mut TermSubstitution) -> bool {
    match pattern {
        Term::Var(x) => match theta.get(x) {
            Some(bound) => alpha_equal(bound, t),
            None => {
                theta.insert(x.clone(), t.clone());
                true
            }
        },
        Term::Sym(f) => matches!(t, Term::Sym(g) if f == g),
        Term::App(pf, pa) => match t {
            Term::App(tf, ta) => match_pattern(pf, tf, theta) && match_pattern(pa, ta, theta),
            _ => false,
        },
        _ => pattern == t,
    }
}

pub fn match_lhs(rule: &RewriteRule, t: &Term) -> Option<TermSubstitution> {
    let mut theta = TermSubstitution::new();
    match_pattern(&rule.lhs(), t, &mut theta).then_some(theta)
}

/// Contracts `t` itself if it is a β-redex.
fn beta_root(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, u) => match &**f {
            Term::Abs(x, _, body) => Some(subst1(body, x, u)),
            _ => None,
        },
        _ => None,
    }
}

/// Rewrites `t` itself with the first admitted rule that matches.
fn rule_root(sig: &Signature, t: &Term) -> Option<Term> {
    let f = t.head_symbol()?;
    sig.rules_for(f).find_map(|r| match_lhs(r, t).map(|theta| substitute(&r.rhs, &theta)))
}

/// Every rewrite of `t` at the root: one per matching rule.
fn rule_root_all(sig: &Signature, t: &Term) -> Vec<Term> {
    let Some(f) = t.head_symbol() else {
        return Vec::new();
    };
    sig.rules_for(f).filter_map(|r| match_lhs(r, t).map(|theta| substitute(&r.rhs, &theta))).collect()
}

fn contract_root(sig: &Signature, t: &Term) -> Option<Term> {
    beta_root(t).or_else(|| rule_root(sig, t))
}

/// Leftmost-outermost search for a node accepted by `root`.
fn step_with(t: &Term, root: &dyn Fn(&Term) -> Option<Term>) -> Option<Term> {
    if let Some(r) = root(t) {
        return Some(r);
    }
    let rebuild = |d: u8, new: Term| t.replace_at(&[d], new).expect("child exists");
    match t {
        Term::Sort(_) | Term::Var(_) | Term::Sym(_) => None,
        Term::App(a, b) | Term::Abs(_, a, b) | Term::Prod(_, a, b) => {
            step_with(a, root).map(|a2| rebuild(1, a2)).or_else(|| step_with(b, root).map(|b2| rebuild(2, b2)))
        }
    }
}

/// One leftmost-outermost β step, or `None` if there is no β-redex.
pub fn beta_step(t: &Term) -> Option<Term> {
    step_with(t, &beta_root)
}

/// One leftmost-outermost rule step, or `None` if no rule applies anywhere.
pub fn rewrite_step(sig: &Signature, t: &Term) -> Option<Term> {
    step_with(t, &|u| rule_root(sig, u))
}

/// One leftmost-outermost βR step.
pub fn step(sig: &Signature, t: &Term) -> Option<Term> {
    step_with(t, &|u| contract_root(sig, u))
}

pub fn is_redex(sig: &Signature, t: &Term) -> bool {
    beta_root(t).is_some() || rule_root(sig, t).is_some()
}

/// All βR-redex positions, in leftmost-outermost order.
pub fn redex_positions(sig: &Signature, t: &Term) -> Vec<Position> {
    let mut out = Vec::new();
    collect_redexes(sig, t, &mut Vec::new(), &mut out);
    out
}

fn collect_redexes(sig: &Signature, t: &Term, here: &mut Vec<u8>, out: &mut Vec<Position>) {
    if is_redex(sig, t) {
        out.push(Position(here.clone()));
    }
    for d in [1, 2] {
        if let Some(c) = t.child(d) {
            here.push(d);
            collect_redexes(sig, c, here, out);
            here.pop();
        }
    }
}

/// Contracts the redex at `pos` (β first, then the first matching rule).
pub fn contract_at(sig: &Signature, t: &Term, pos: &Position) -> Option<Term> {
    let sub = t.subterm_at(pos)?;
    let new = contract_root(sig, sub)?;
    t.replace_at(&pos.0, new)
}

/// Every one-step reduct of `t`: all positions, and every matching rule at
/// each position.
pub fn all_reducts(sig: &Signature, t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for pos in redex_positions(sig, t) {
        let sub = t.subterm_at(&pos).expect("redex position exists");
        let mut here: Vec<Term> = beta_root(sub).into_iter().collect();
        here.extend(rule_root_all(sig, sub));
        out.extend(here.into_iter().map(|n| t.replace_at(&pos.0, n).expect("position exists")));
    }
    out
}

pub fn normalize(sig: &Signature, t: &Term, fuel: Fuel) -> Result<Term, FuelExhausted> {
    let mut cur = t.clone();
    for _ in 0..fuel.max_steps() {
        match step(sig, &cur) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    match step(sig, &cur) {
        None => Ok(cur),
        Some(_) => Err(FuelExhausted { steps: fuel.max_steps() }),
    }
}

/// Normalizes by contracting a uniformly chosen redex at every step.
pub fn normalize_random<R: Rng + ?Sized>(sig: &Signature, t: &Term, fuel: Fuel, rng: &mut R) -> Result<Term, FuelExhausted> {
    let mut cur = t.clone();
    for _ in 0..=fuel.max_steps() {
        let redexes = redex_positions(sig, &cur);
        if redexes.is_empty() {
            return Ok(cur);
        }
        let pos = &redexes[rng.gen_range(0..redexes.len())];
        cur = contract_at(sig, &cur, pos).expect("listed redex contracts");
    }
    Err(FuelExhausted { steps: fuel.max_steps() })
}

/// `t ↓βR u`, decided by comparing normal forms.
pub fn convertible(sig: &Signature, t: &Term, u: &Term, fuel: Fuel) -> Result<bool, FuelExhausted> {
    if alpha_equal(t, u) {
        return Ok(true);
    }
    let nt = normalize(sig, t, fuel)?;
    let nu = normalize(sig, u, fuel)?;
    Ok(alpha_equal(&nt, &nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Sort;

    fn v(x: &str) -> Term {
        Term::var(x)
    }
    fn s(x: &str) -> Term {
        Term::sym(x)
    }
    fn num(n: usize) -> Term {
        (0..n).fold(s("0"), |t, _| Term::app(s("s"), t))
    }
    fn plus(a: Term, b: Term) -> Term {
        Term::apps(s("+"), [a, b])
    }
    fn times(a: Term, b: Term) -> Term {
        Term::apps(s("×"), [a, b])
    }

    fn nat_sig() -> Signature {
        let mut sig = Signature::new();
        let nat = s("nat");
        let bin = Term::arrow(nat.clone(), Term::arrow(nat.clone(), nat.clone()));
        sig.declare("nat", Term::star(), Sort::Box).unwrap();
        sig.declare("0", nat.clone(), Sort::Star).unwrap();
        sig.declare("s", Term::arrow(nat.clone(), nat.clone()), Sort::Star).unwrap();
        sig.declare("p", Term::arrow(nat.clone(), nat.clone()), Sort::Star).unwrap();
        sig.declare("+", bin.clone(), Sort::Star).unwrap();
        sig.declare("×", bin, Sort::Star).unwrap();
        sig.add_rule(RewriteRule::new("+", vec![v("x"), s("0")], v("x"))).unwrap();
        sig.add_rule(RewriteRule::new("+", vec![v("x"), Term::app(s("s"), v("y"))], Term::app(s("s"), plus(v("x"), v("y"))))).unwrap();
        sig.add_rule(RewriteRule::new("×", vec![v("x"), plus(v("y"), v("z"))], plus(times(v("x"), v("y")), times(v("x"), v("z")))))
            .unwrap();
        sig.add_rule(RewriteRule::new("s", vec![Term::app(s("p"), v("x"))], v("x"))).unwrap();
        sig
    }

    #[test]
    fn beta_identity() {
        let t = Term::app(Term::abs("x", s("nat"), v("x")), s("0"));
        assert_eq!(beta_step(&t), Some(s("0")));
        assert_eq!(beta_step(&s("0")), None);
    }

    #[test]
    fn beta_substitutes_under_application() {
        // ([x:¬A](f c)) g  ->  f c[x := g]
        let c = Term::app(v("x"), v("y"));
        let t = Term::app(Term::abs("x", Term::app(s("¬"), v("A")), Term::app(v("f"), c)), v("g"));
        let expected = Term::app(v("f"), Term::app(v("g"), v("y")));
        assert_eq!(beta_step(&t), Some(expected));
    }

    #[test]
    fn match_plus_zero() {
        let sig = nat_sig();
        let rule = &sig.rules()[0];
        let theta = match_lhs(rule, &plus(num(1), s("0"))).unwrap();
        assert_eq!(theta.get("x"), Some(&num(1)));
        assert!(match_lhs(rule, &plus(s("0"), num(1))).is_none());
    }

    #[test]
    fn rewrite_examples() {
        let sig = nat_sig();
        assert_eq!(rewrite_step(&sig, &Term::app(s("s"), Term::app(s("p"), s("0")))), Some(s("0")));
        let t = times(num(2), plus(num(1), num(1)));
        assert_eq!(rewrite_step(&sig, &t), Some(plus(times(num(2), num(1)), times(num(2), num(1)))));
        assert_eq!(rewrite_step(&sig, &v("x")), None);
    }

    #[test]
    fn normalize_two_plus_two() {
        let sig = nat_sig();
        assert_eq!(normalize(&sig, &plus(num(2), num(2)), Fuel::default()).unwrap(), num(4));
        assert_eq!(normalize(&sig, &s("0"), Fuel::default()).unwrap(), s("0"));
    }

    #[test]
    fn conversion() {
        let sig = nat_sig();
        let f = Fuel::default();
        assert!(convertible(&sig, &Term::app(v("P"), plus(num(2), num(2))), &Term::app(v("P"), num(4)), f).unwrap());
        assert!(convertible(&sig, &Term::app(s("s"), Term::app(s("p"), v("x"))), &v("x"), f).unwrap());
        assert!(!convertible(&sig, &num(1), &num(2), f).unwrap());
    }

    #[test]
    fn fuel_exhaustion_is_reported() {
        // ω ω loops under β
        let omega = Term::abs("x", s("nat"), Term::app(v("x"), v("x")));
        let t = Term::app(omega.clone(), omega);
        let sig = Signature::new();
        assert_eq!(normalize(&sig, &t, Fuel::new(50)), Err(FuelExhausted { steps: 50 }));
        assert_eq!(Fuel::new(0).max_steps(), 1);
    }

    #[test]
    fn all_reducts_includes_inner_redexes() {
        let sig = nat_sig();
        let t = plus(plus(num(1), s("0")), s("0"));
        // root by x+0, and the inner x+0
        let rs = all_reducts(&sig, &t);
        assert_eq!(rs.len(), 2);
        assert!(rs.contains(&plus(num(1), s("0"))));
        assert!(rs.contains(&plus(num(1), s("0"))));
    }
}
