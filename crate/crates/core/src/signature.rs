//! Symbol declarations, precedence, rewrite-rule admission, safety and
//! neutrality.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::term::{free_vars, Environment, Name, Sort, Term, TermSubstitution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: Name,
    pub sort: Sort,
    pub arity: usize,
    pub ty: Term,
    pub mon_plus: BTreeSet<usize>,
    pub mon_minus: BTreeSet<usize>,
}

impl SymbolDecl {
    /// `(x1:T1)...(xn:Tn)` with `n` the arity, and the output type.
    pub fn split_type(&self) -> (Vec<(Name, Term)>, Term) {
        let (tele, _) = self.ty.telescope();
        let binders: Vec<_> = tele.into_iter().take(self.arity).collect();
        let mut out = &self.ty;
        for _ in 0..self.arity {
            if let Term::Prod(_, _, b) = out {
                out = b;
            }
        }
        (binders, out.clone())
    }

    /// Argument positions (1-based) whose declared type is a kind.
    pub fn predicate_arguments(&self) -> BTreeSet<usize> {
        self.split_type().0.iter().enumerate().filter(|(_, (_, t))| t.is_kind()).map(|(i, _)| i + 1).collect()
    }
}

/// Symbol ranks: equal rank means equivalent, higher rank means greater.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Precedence {
    rank: BTreeMap<Name, usize>,
    next: usize,
}

impl Precedence {
    pub fn rank(&self, f: &str) -> Option<usize> {
        self.rank.get(f).copied()
    }

    fn push(&mut self, f: Name) {
        self.rank.insert(f, self.next);
        self.next += 1;
    }

    /// Merges the equivalence class of `g` into the class of `f`.
    pub fn make_equivalent(&mut self, f: &str, g: &str) -> bool {
        let (Some(rf), Some(rg)) = (self.rank(f), self.rank(g)) else {
            return false;
        };
        for r in self.rank.values_mut() {
            if *r == rg {
                *r = rf;
            }
        }
        true
    }

    pub fn equivalent(&self, f: &str, g: &str) -> bool {
        matches!((self.rank(f), self.rank(g)), (Some(a), Some(b)) if a == b)
    }

    pub fn greater(&self, f: &str, g: &str) -> bool {
        matches!((self.rank(f), self.rank(g)), (Some(a), Some(b)) if a > b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub head: Name,
    pub lhs_args: Vec<Term>,
    pub rhs: Term,
    /// Typing environment of the rule; empty until declared or inferred.
    pub env: Environment,
    pub env_declared: bool,
    pub rho: TermSubstitution,
}

impl RewriteRule {
    pub fn new(head: &str, lhs_args: Vec<Term>, rhs: Term) -> RewriteRule {
        RewriteRule { head: head.into(), lhs_args, rhs, env: Environment::new(), env_declared: false, rho: TermSubstitution::new() }
    }

    pub fn with_env(mut self, env: Environment) -> RewriteRule {
        self.env = env;
        self.env_declared = true;
        self
    }

    pub fn with_rho(mut self, rho: TermSubstitution) -> RewriteRule {
        self.rho = rho;
        self
    }

    pub fn lhs(&self) -> Term {
        Term::apps(Term::Sym(self.head.clone()), self.lhs_args.iter().cloned())
    }

    /// Splits a full left-hand side `f l1 ... ln` into head and arguments.
    pub fn from_lhs(lhs: &Term, rhs: Term) -> Result<RewriteRule, RuleError> {
        let (head, args) = lhs.spine();
        match head {
            Term::Sym(f) => Ok(RewriteRule::new(f, args.into_iter().cloned().collect(), rhs)),
            Term::Var(_) if args.is_empty() => Err(RuleError::LhsIsVariable),
            _ => Err(RuleError::NotAlgebraic("left-hand side is not headed by a symbol".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("left-hand side is not algebraic: {0}")]
    NotAlgebraic(String),
    #[error("left-hand side is a variable")]
    LhsIsVariable,
    #[error("right-hand side variables {0:?} do not occur in the left-hand side")]
    EscapingVariable(Vec<Name>),
    #[error("symbol `{symbol}` in the right-hand side is greater than the head `{head}`")]
    PrecedenceViolation { head: Name, symbol: Name },
}

impl RuleError {
    pub fn code(&self) -> &'static str {
        match self {
            RuleError::UnknownSymbol(_) => "UNKNOWN-SYMBOL",
            RuleError::NotAlgebraic(_) => "RULE-NOT-ALGEBRAIC",
            RuleError::LhsIsVariable => "RULE-LHS-VARIABLE",
            RuleError::EscapingVariable(_) => "RULE-ESCAPING-VARIABLE",
            RuleError::PrecedenceViolation { .. } => "RULE-PRECEDENCE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("symbol `{0}` is already declared")]
    Duplicate(Name),
    #[error("Mon index {index} of `{symbol}` is not a predicate argument")]
    BadMonIndex { symbol: Name, index: usize },
}

impl SignatureError {
    pub fn code(&self) -> &'static str {
        match self {
            SignatureError::UnknownSymbol(_) => "UNKNOWN-SYMBOL",
            SignatureError::Duplicate(_) => "DUPLICATE-SYMBOL",
            SignatureError::BadMonIndex { .. } => "MON-INVALID",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecursorOrigin {
    Canonical,
    User,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductiveSpec {
    pub name: Name,
    pub constructors: Vec<Name>,
}

#[derive(Clone, Debug, Default)]
pub struct Signature {
    symbols: Vec<SymbolDecl>,
    index: BTreeMap<Name, usize>,
    rules: Vec<RewriteRule>,
    pub precedence: Precedence,
    inductives: Vec<InductiveSpec>,
    recursors: BTreeMap<Name, Vec<(Name, RecursorOrigin)>>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// Declares a symbol whose type has already been sorted. The arity is
    /// the number of leading products of the type.
    pub fn declare(&mut self, name: &str, ty: Term, sort: Sort) -> Result<(), SignatureError> {
        if self.index.contains_key(name) {
            return Err(SignatureError::Duplicate(name.into()));
        }
        let arity = ty.telescope().0.len();
        let name: Name = name.into();
        self.index.insert(name.clone(), self.symbols.len());
        self.precedence.push(name.clone());
        self.symbols.push(SymbolDecl { name, sort, arity, ty, mon_plus: BTreeSet::new(), mon_minus: BTreeSet::new() });
        Ok(())
    }

    pub fn get(&self, f: &str) -> Option<&SymbolDecl> {
        self.index.get(f).map(|&i| &self.symbols[i])
    }

    pub fn contains(&self, f: &str) -> bool {
        self.index.contains_key(f)
    }

    pub fn symbols(&self) -> &[SymbolDecl] {
        &self.symbols
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn rules_for<'a>(&'a self, f: &'a str) -> impl Iterator<Item = &'a RewriteRule> + 'a {
        self.rules.iter().filter(move |r| &*r.head == f)
    }

    pub fn is_defined(&self, f: &str) -> bool {
        self.rules.iter().any(|r| &*r.head == f)
    }

    pub fn is_predicate(&self, f: &str) -> bool {
        self.get(f).is_some_and(|d| d.sort == Sort::Box)
    }

    pub fn is_constant_predicate(&self, f: &str) -> bool {
        self.is_predicate(f) && !self.is_defined(f)
    }

    pub fn is_defined_predicate(&self, f: &str) -> bool {
        self.is_predicate(f) && self.is_defined(f)
    }

    /// The symbol heading the output type of `f`, if any.
    pub fn output_head(&self, f: &str) -> Option<Name> {
        let d = self.get(f)?;
        d.split_type().1.head_symbol().cloned()
    }

    /// For an extended constructor `c : (x:T)C v` with `C` a constant
    /// predicate symbol, returns `C`.
    pub fn constructor_target(&self, c: &str) -> Option<Name> {
        let d = self.get(c)?;
        if d.sort == Sort::Box {
            return None;
        }
        let head = self.output_head(c)?;
        self.is_constant_predicate(&head).then_some(head)
    }

    /// All symbols whose output type is headed by `target`, in declaration order.
    pub fn extended_constructors_of(&self, target: &str) -> Vec<Name> {
        self.symbols.iter().filter(|d| self.constructor_target(&d.name).as_deref() == Some(target)).map(|d| d.name.clone()).collect()
    }

    /// Predicate symbols equivalent to `c` in the precedence, `c` included.
    pub fn equivalence_class(&self, c: &str) -> Vec<Name> {
        self.symbols.iter().filter(|d| d.sort == Sort::Box && self.precedence.equivalent(&d.name, c)).map(|d| d.name.clone()).collect()
    }

    pub fn set_mon(&mut self, f: &str, plus: BTreeSet<usize>, minus: BTreeSet<usize>) -> Result<(), SignatureError> {
        let i = *self.index.get(f).ok_or_else(|| SignatureError::UnknownSymbol(f.into()))?;
        let preds = self.symbols[i].predicate_arguments();
        if let Some(&bad) = plus.iter().chain(minus.iter()).find(|j| !preds.contains(j)) {
            return Err(SignatureError::BadMonIndex { symbol: f.into(), index: bad });
        }
        self.symbols[i].mon_plus.extend(plus);
        self.symbols[i].mon_minus.extend(minus);
        Ok(())
    }

    pub fn mon_plus(&self, f: &str) -> BTreeSet<usize> {
        self.get(f).map(|d| d.mon_plus.clone()).unwrap_or_default()
    }

    pub fn mon_minus(&self, f: &str) -> BTreeSet<usize> {
        self.get(f).map(|d| d.mon_minus.clone()).unwrap_or_default()
    }

    pub fn add_inductive(&mut self, spec: InductiveSpec) {
        self.inductives.retain(|i| i.name != spec.name);
        self.inductives.push(spec);
    }

    pub fn inductive(&self, c: &str) -> Option<&InductiveSpec> {
        self.inductives.iter().find(|i| &*i.name == c)
    }

    pub fn inductives(&self) -> &[InductiveSpec] {
        &self.inductives
    }

    pub fn add_recursor(&mut self, target: &str, f: &str, origin: RecursorOrigin) {
        let set = self.recursors.entry(target.into()).or_default();
        if !set.iter().any(|(g, _)| &**g == f) {
            set.push((f.into(), origin));
        }
    }

    /// Empties `Rec(C)`; the recursor symbols and their rules stay declared.
    pub fn clear_recursors(&mut self, target: &str) {
        self.recursors.remove(target);
    }

    /// `Rec(C)`, possibly empty.
    pub fn recursors_of(&self, target: &str) -> &[(Name, RecursorOrigin)] {
        self.recursors.get(target).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The inductive type whose recursor set contains `f`, if any.
    pub fn recursor_target(&self, f: &str) -> Option<Name> {
        self.recursors.iter().find(|(_, set)| set.iter().any(|(g, _)| &**g == f)).map(|(c, _)| c.clone())
    }

    /// Admits a rewrite rule after the algebraicity, variable and precedence
    /// checks. The head becomes a defined symbol.
    pub fn add_rule(&mut self, rule: RewriteRule) -> Result<(), RuleError> {
        self.check_rule(&rule)?;
        self.rules.push(rule);
        Ok(())
    }

    pub fn check_rule(&self, rule: &RewriteRule) -> Result<(), RuleError> {
        let head = self.get(&rule.head).ok_or_else(|| RuleError::UnknownSymbol(rule.head.clone()))?;
        if rule.lhs_args.len() != head.arity {
            return Err(RuleError::NotAlgebraic(format!(
                "`{}` has arity {} but is applied to {} arguments",
                head.name,
                head.arity,
                rule.lhs_args.len()
            )));
        }
        for arg in &rule.lhs_args {
            self.check_algebraic(arg)?;
        }
        let lhs_vars = free_vars(&rule.lhs());
        let escaping: Vec<Name> = free_vars(&rule.rhs).into_iter().filter(|x| !lhs_vars.contains(x)).collect();
        if !escaping.is_empty() {
            return Err(RuleError::EscapingVariable(escaping));
        }
        for g in rule.rhs.symbols() {
            if !self.contains(&g) {
                return Err(RuleError::UnknownSymbol(g));
            }
            if self.precedence.greater(&g, &rule.head) {
                return Err(RuleError::PrecedenceViolation { head: rule.head.clone(), symbol: g });
            }
        }
        Ok(())
    }

    fn check_algebraic(&self, t: &Term) -> Result<(), RuleError> {
        let (head, args) = t.spine();
        match head {
            Term::Var(_) if args.is_empty() => Ok(()),
            Term::Sym(g) => {
                let d = self.get(g).ok_or_else(|| RuleError::UnknownSymbol(g.clone()))?;
                if d.arity != args.len() {
                    return Err(RuleError::NotAlgebraic(format!("`{g}` has arity {} but is applied to {} arguments", d.arity, args.len())));
                }
                args.into_iter().try_for_each(|a| self.check_algebraic(a))
            }
            Term::Var(x) => Err(RuleError::NotAlgebraic(format!("applied variable `{x}`"))),
            _ => Err(RuleError::NotAlgebraic("abstraction, product or sort in a pattern".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Safety {
    Safe,
    Unsafe {
        /// Predicate argument indices whose pattern is not a variable.
        non_variable: Vec<usize>,
        /// Pairs of predicate argument indices matched by the same variable.
        duplicates: Vec<(usize, usize)>,
    },
}

/// A rule is safe when its predicate arguments are pairwise distinct variables.
pub fn check_safe_rule(sig: &Signature, rule: &RewriteRule) -> Safety {
    let Some(decl) = sig.get(&rule.head) else {
        return Safety::Safe;
    };
    let preds: Vec<usize> = decl.predicate_arguments().into_iter().filter(|&i| i <= rule.lhs_args.len()).collect();
    let mut non_variable = Vec::new();
    let mut duplicates = Vec::new();
    for (k, &i) in preds.iter().enumerate() {
        let li = &rule.lhs_args[i - 1];
        if !matches!(li, Term::Var(_)) {
            non_variable.push(i);
            continue;
        }
        for &j in &preds[k + 1..] {
            if &rule.lhs_args[j - 1] == li {
                duplicates.push((i, j));
            }
        }
    }
    if non_variable.is_empty() && duplicates.is_empty() {
        Safety::Safe
    } else {
        Safety::Unsafe { non_variable, duplicates }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NonNeutral {
    Abstraction,
    ConstructorHeaded { constructor: Name, inductive: Name },
    PartialDefined { symbol: Name, args: usize, arity: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Neutrality {
    Neutral,
    NonNeutral(NonNeutral),
}

pub fn classify_neutral(sig: &Signature, t: &Term) -> Result<Neutrality, SignatureError> {
    if let Some(g) = t.symbols().into_iter().find(|g| !sig.contains(g)) {
        return Err(SignatureError::UnknownSymbol(g));
    }
    if matches!(t, Term::Abs(..)) {
        return Ok(Neutrality::NonNeutral(NonNeutral::Abstraction));
    }
    let (head, args) = t.spine();
    if let Term::Sym(f) = head {
        if let Some(c) = sig.constructor_target(f) {
            return Ok(Neutrality::NonNeutral(NonNeutral::ConstructorHeaded { constructor: f.clone(), inductive: c }));
        }
        let arity = sig.get(f).map(|d| d.arity).unwrap_or(0);
        if sig.is_defined(f) && args.len() < arity {
            return Ok(Neutrality::NonNeutral(NonNeutral::PartialDefined { symbol: f.clone(), args: args.len(), arity }));
        }
    }
    Ok(Neutrality::Neutral)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }
    fn s(x: &str) -> Term {
        Term::sym(x)
    }

    fn arith() -> Signature {
        let mut sig = Signature::new();
        sig.declare("nat", Term::star(), Sort::Box).unwrap();
        sig.declare("0", s("nat"), Sort::Star).unwrap();
        sig.declare("s", Term::arrow(s("nat"), s("nat")), Sort::Star).unwrap();
        sig.declare("p", Term::arrow(s("nat"), s("nat")), Sort::Star).unwrap();
        sig.declare("+", Term::arrow(s("nat"), Term::arrow(s("nat"), s("nat"))), Sort::Star).unwrap();
        sig
    }

    #[test]
    fn admits_plus_zero() {
        let mut sig = arith();
        let rule = RewriteRule::new("+", vec![v("x"), s("0")], v("x"));
        sig.add_rule(rule).unwrap();
        assert!(sig.is_defined("+"));
    }

    #[test]
    fn rejects_variable_lhs() {
        assert_eq!(RewriteRule::from_lhs(&v("x"), s("0")), Err(RuleError::LhsIsVariable));
    }

    #[test]
    fn admits_s_of_p() {
        let mut sig = arith();
        assert!(!sig.is_defined("s"));
        let rule = RewriteRule::new("s", vec![Term::app(s("p"), v("x"))], v("x"));
        sig.add_rule(rule).unwrap();
        assert!(sig.is_defined("s"));
    }

    #[test]
    fn rejects_escaping_and_nonalgebraic() {
        let sig = arith();
        let r = RewriteRule::new("+", vec![v("x"), s("0")], v("y"));
        assert!(matches!(sig.check_rule(&r), Err(RuleError::EscapingVariable(_))));
        let r = RewriteRule::new("+", vec![v("x")], v("x"));
        assert!(matches!(sig.check_rule(&r), Err(RuleError::NotAlgebraic(_))));
        let r = RewriteRule::new("+", vec![Term::app(v("f"), v("x")), s("0")], v("x"));
        assert!(matches!(sig.check_rule(&r), Err(RuleError::NotAlgebraic(_))));
        let r = RewriteRule::new("q", vec![], v("x"));
        assert!(matches!(sig.check_rule(&r), Err(RuleError::UnknownSymbol(_))));
    }

    #[test]
    fn rejects_greater_symbol_in_rhs() {
        let mut sig = arith();
        sig.declare("×", Term::arrow(s("nat"), Term::arrow(s("nat"), s("nat"))), Sort::Star).unwrap();
        let r = RewriteRule::new("+", vec![v("x"), s("0")], Term::apps(s("×"), [v("x"), v("x")]));
        assert!(matches!(sig.check_rule(&r), Err(RuleError::PrecedenceViolation { .. })));
        sig.precedence.make_equivalent("+", "×");
        assert!(sig.check_rule(&r).is_ok());
    }

    #[test]
    fn safety_of_plus_rule() {
        let sig = arith();
        let r = RewriteRule::new("+", vec![v("x"), s("0")], v("x"));
        assert_eq!(check_safe_rule(&sig, &r), Safety::Safe);
    }

    #[test]
    fn neutrality() {
        let mut sig = arith();
        assert_eq!(classify_neutral(&sig, &Term::app(v("x"), v("u"))).unwrap(), Neutrality::Neutral);
        assert!(matches!(
            classify_neutral(&sig, &Term::app(s("s"), s("0"))).unwrap(),
            Neutrality::NonNeutral(NonNeutral::ConstructorHeaded { .. })
        ));
        assert_eq!(classify_neutral(&sig, &Term::abs("x", s("nat"), v("x"))).unwrap(), Neutrality::NonNeutral(NonNeutral::Abstraction));
        assert!(classify_neutral(&sig, &s("zz")).is_err());
        // a defined, non-constructor symbol applied partially
        sig.declare("double", Term::arrow(s("nat"), Term::arrow(s("nat"), Term::star())), Sort::Box).unwrap();
        sig.add_rule(RewriteRule::new("double", vec![v("x"), v("y")], s("nat"))).unwrap();
        assert!(matches!(
            classify_neutral(&sig, &Term::app(s("double"), s("0"))).unwrap(),
            Neutrality::NonNeutral(NonNeutral::PartialDefined { args: 1, arity: 2, .. })
        ));
        assert_eq!(classify_neutral(&sig, &Term::apps(s("double"), [s("0"), s("0")])).unwrap(), Neutrality::Neutral);
    }
}
