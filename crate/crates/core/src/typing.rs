//! Bidirectional type checking for the Calculus of Constructions extended
//! with symbols, rewrite-aware conversion, and the per-rule subject
//! reduction check.
//!
//! Sorts are `*` and `[]` with the axiom `* : []`; products are allowed over
//! all four pairs of sorts. Conversion compares βR normal forms.

use serde::Serialize;
use thiserror::Error;

use crate::reduction::{convertible, normalize, Fuel, FuelExhausted};
use crate::signature::{RewriteRule, Signature, SignatureError};
use crate::term::{free_vars, fresh_name, occurs_free, subst1, substitute, Environment, Name, Sort, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("`{term}` has type `{ty}`, which is not a product")]
    NotAProduct { term: Term, ty: Term },
    #[error("`{term}` has type `{ty}`, which is not a sort")]
    SortMismatch { term: Term, ty: Term },
    #[error("`{term}` has type `{found}` but `{expected}` was expected")]
    ConversionFailure { term: Term, expected: Term, found: Term },
    #[error("`[]` has no type")]
    UntypableSort,
    #[error("type of `{symbol}` is ill-typed: {detail}")]
    IllTypedSymbolType { symbol: Name, detail: String },
    #[error(transparent)]
    FuelExhausted(#[from] FuelExhausted),
}

impl TypeError {
    pub fn code(&self) -> &'static str {
        match self {
            TypeError::UnboundVariable(_) => "UNBOUND-VARIABLE",
            TypeError::UnknownSymbol(_) => "UNKNOWN-SYMBOL",
            TypeError::NotAProduct { .. } => "NOT-A-PRODUCT",
            TypeError::SortMismatch { .. } | TypeError::UntypableSort => "SORT-MISMATCH",
            TypeError::ConversionFailure { .. } => "CONVERSION-FAILURE",
            TypeError::IllTypedSymbolType { .. } => "ILL-TYPED-SYMBOL",
            TypeError::FuelExhausted(_) => "FUEL-EXHAUSTED",
        }
    }
}

/// `Γ ⊢ t : T`, only built by [`judge`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypingJudgment {
    pub env: Environment,
    pub term: Term,
    pub ty: Term,
}

pub fn judge(sig: &Signature, env: &Environment, t: &Term, fuel: Fuel) -> Result<TypingJudgment, TypeError> {
    let ty = infer_type(sig, env, t, fuel)?;
    Ok(TypingJudgment { env: env.clone(), term: t.clone(), ty })
}

struct Checker<'a> {
    sig: &'a Signature,
    env: Environment,
    fuel: Fuel,
}

impl Checker<'_> {
    fn with_binder<R>(&mut self, x: &Name, annot: &Term, body: &Term, f: impl FnOnce(&mut Self, &Term, &Name) -> R) -> R {
        let (x2, body2) = if self.env.contains(x) {
            let env = &self.env;
            let fresh = fresh_name(x, &|n| env.contains(n) || occurs_free(n, body));
            let renamed = subst1(body, x, &Term::Var(fresh.clone()));
            (fresh, renamed)
        } else {
            (x.clone(), body.clone())
        };
        self.env.push(x2.clone(), annot.clone());
        let r = f(self, &body2, &x2);
        self.env.pop();
        r
    }

    fn whnf_sort(&self, t: &Term, ty: Term) -> Result<Sort, TypeError> {
        if let Term::Sort(s) = ty {
            return Ok(s);
        }
        match normalize(self.sig, &ty, self.fuel)? {
            Term::Sort(s) => Ok(s),
            _ => Err(TypeError::SortMismatch { term: t.clone(), ty }),
        }
    }

    fn whnf_prod(&self, t: &Term, ty: Term) -> Result<(Name, Term, Term), TypeError> {
        let ty = match ty {
            Term::Prod(..) => ty,
            other => normalize(self.sig, &other, self.fuel)?,
        };
        match ty {
            Term::Prod(x, a, b) => Ok((x, (*a).clone(), (*b).clone())),
            ty => Err(TypeError::NotAProduct { term: t.clone(), ty }),
        }
    }

    fn sort_of(&mut self, t: &Term) -> Result<Sort, TypeError> {
        let ty = self.infer(t)?;
        self.whnf_sort(t, ty)
    }

    fn infer(&mut self, t: &Term) -> Result<Term, TypeError> {
        match t {
            Term::Sort(Sort::Star) => Ok(Term::boxed()),
            Term::Sort(Sort::Box) => Err(TypeError::UntypableSort),
            Term::Var(x) => self.env.lookup(x).cloned().ok_or_else(|| TypeError::UnboundVariable(x.clone())),
            Term::Sym(f) => self.sig.get(f).map(|d| d.ty.clone()).ok_or_else(|| TypeError::UnknownSymbol(f.clone())),
            Term::Prod(x, a, b) => {
                self.sort_of(a)?;
                let s = self.with_binder(x, a, b, |c, body, _| c.sort_of(body))?;
                Ok(Term::Sort(s))
            }
            Term::Abs(x, a, b) => {
                self.sort_of(a)?;
                self.with_binder(x, a, b, |c, body, x2| {
                    let bt = c.infer(body)?;
                    // (x:A)B must itself be typable, so B cannot be [].
                    c.sort_of(&bt)?;
                    Ok(Term::prod(x2, (**a).clone(), bt))
                })
            }
            Term::App(f, u) => {
                let ft = self.infer(f)?;
                let (x, a, b) = self.whnf_prod(f, ft)?;
                self.check(u, &a)?;
                Ok(subst1(&b, &x, u))
            }
        }
    }

    fn check(&mut self, t: &Term, expected: &Term) -> Result<(), TypeError> {
        if let Term::Abs(x, a, b) = t {
            let exp = match expected {
                Term::Prod(..) => expected.clone(),
                _ => normalize(self.sig, expected, self.fuel)?,
            };
            if let Term::Prod(y, ea, eb) = &exp {
                self.sort_of(a)?;
                if !convertible(self.sig, a, ea, self.fuel)? {
                    return Err(TypeError::ConversionFailure { term: (**a).clone(), expected: (**ea).clone(), found: (**a).clone() });
                }
                return self.with_binder(x, a, b, |c, body, x2| {
                    let eb2 = subst1(eb, y, &Term::Var(x2.clone()));
                    c.check(body, &eb2)
                });
            }
        }
        let found = self.infer(t)?;
        if convertible(self.sig, &found, expected, self.fuel)? {
            Ok(())
        } else {
            Err(TypeError::ConversionFailure { term: t.clone(), expected: expected.clone(), found })
        }
    }
}

pub fn infer_type(sig: &Signature, env: &Environment, t: &Term, fuel: Fuel) -> Result<Term, TypeError> {
    Checker { sig, env: env.clone(), fuel }.infer(t)
}

/// Checks `Γ ⊢ t : T`. `T` must be `[]` or itself have a sort.
pub fn check_type(sig: &Signature, env: &Environment, t: &Term, ty: &Term, fuel: Fuel) -> Result<(), TypeError> {
    let mut c = Checker { sig, env: env.clone(), fuel };
    if ty != &Term::boxed() {
        c.sort_of(ty)?;
    }
    c.check(t, ty)
}

pub fn infer_sort(sig: &Signature, env: &Environment, t: &Term, fuel: Fuel) -> Result<Sort, TypeError> {
    Checker { sig, env: env.clone(), fuel }.sort_of(t)
}

/// Each binding's type must have a sort under the bindings before it.
pub fn check_env(sig: &Signature, env: &Environment, fuel: Fuel) -> Result<(), TypeError> {
    let mut c = Checker { sig, env: Environment::new(), fuel };
    for (x, t) in env.bindings() {
        c.sort_of(t)?;
        c.env.push(x.clone(), t.clone());
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DeclareError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

impl DeclareError {
    pub fn code(&self) -> &'static str {
        match self {
            DeclareError::Signature(e) => e.code(),
            DeclareError::Type(e) => e.code(),
        }
    }
}

/// Checks `⊢ τ : s` for a closed `τ` and declares the symbol with sort `s`.
pub fn declare_symbol(sig: &mut Signature, name: &str, ty: Term, fuel: Fuel) -> Result<Sort, DeclareError> {
    if sig.contains(name) {
        return Err(SignatureError::Duplicate(name.into()).into());
    }
    let fv = free_vars(&ty);
    if !fv.is_empty() {
        let names: Vec<_> = fv.iter().map(|n| n.to_string()).collect();
        return Err(TypeError::IllTypedSymbolType { symbol: name.into(), detail: format!("free variables {}", names.join(", ")) }.into());
    }
    let sort = infer_sort(sig, &Environment::new(), &ty, fuel)
        .map_err(|e| TypeError::IllTypedSymbolType { symbol: name.into(), detail: e.to_string() })?;
    sig.declare(name, ty, sort)?;
    Ok(sort)
}

/// Instantiates the leading products of `ty` with `args`, one at a time.
pub fn instantiate(ty: &Term, args: &[Term]) -> Option<Term> {
    let mut cur = ty.clone();
    for a in args {
        match cur {
            Term::Prod(x, _, b) => cur = subst1(&b, &x, a),
            _ => return None,
        }
    }
    Some(cur)
}

/// Collects the types of the pattern variables of a rule by matching its
/// left-hand side against the declared symbol types. Variables in the
/// domain of ρ are left out and ρ is applied to every collected type.
pub fn infer_rule_env(sig: &Signature, rule: &RewriteRule) -> Result<Environment, TypeError> {
    let mut env = Environment::new();
    collect_pattern_env(sig, rule, &rule.lhs(), None, &mut env)?;
    Ok(env)
}

fn collect_pattern_env(
    sig: &Signature,
    rule: &RewriteRule,
    pat: &Term,
    expected: Option<&Term>,
    env: &mut Environment,
) -> Result<(), TypeError> {
    let (head, args) = pat.spine();
    match head {
        Term::Var(x) if args.is_empty() => {
            if rule.rho.get(x).is_none() && !env.contains(x) {
                if let Some(t) = expected {
                    env.push(x.clone(), substitute(t, &rule.rho));
                }
            }
            Ok(())
        }
        Term::Sym(f) => {
            let mut ty = sig.get(f).ok_or_else(|| TypeError::UnknownSymbol(f.clone()))?.ty.clone();
            for a in args {
                let Term::Prod(x, dom, cod) = ty else {
                    return Err(TypeError::NotAProduct { term: pat.clone(), ty });
                };
                collect_pattern_env(sig, rule, a, Some(&dom), env)?;
                ty = subst1(&cod, &x, a);
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleSide {
    Env,
    Lhs,
    Rhs,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("subject reduction fails on the {side:?} side: {error}")]
pub struct SubjectReductionFailure {
    pub side: RuleSide,
    pub error: Box<TypeError>,
}

/// The environment used to type a rule: the declared one, or the inferred one.
pub fn rule_env(sig: &Signature, rule: &RewriteRule) -> Result<Environment, TypeError> {
    if rule.env_declared {
        Ok(rule.env.clone())
    } else {
        infer_rule_env(sig, rule)
    }
}

/// Checks `Γ ⊢ f l ρ : U γ ρ` and `Γ ⊢ r : U γ ρ` with `γ = {x ↦ l}`.
pub fn check_rule_subject_reduction(sig: &Signature, rule: &RewriteRule, fuel: Fuel) -> Result<(), SubjectReductionFailure> {
    let fail = |side| move |error| SubjectReductionFailure { side, error: Box::new(error) };
    let env = rule_env(sig, rule).map_err(fail(RuleSide::Env))?;
    check_env(sig, &env, fuel).map_err(fail(RuleSide::Env))?;
    let decl = sig.get(&rule.head).ok_or_else(|| fail(RuleSide::Lhs)(TypeError::UnknownSymbol(rule.head.clone())))?;
    let lhs = rule.lhs();
    let u = instantiate(&decl.ty, &rule.lhs_args)
        .ok_or_else(|| fail(RuleSide::Lhs)(TypeError::NotAProduct { term: lhs.clone(), ty: decl.ty.clone() }))?;
    let expected = substitute(&u, &rule.rho);
    let lhs_rho = substitute(&lhs, &rule.rho);
    check_type(sig, &env, &lhs_rho, &expected, fuel).map_err(fail(RuleSide::Lhs))?;
    check_type(sig, &env, &rule.rhs, &expected, fuel).map_err(fail(RuleSide::Rhs))?;
    Ok(())
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
    fn f() -> Fuel {
        Fuel::default()
    }

    fn base() -> Signature {
        let mut sig = Signature::new();
        declare_symbol(&mut sig, "nat", Term::star(), f()).unwrap();
        declare_symbol(&mut sig, "0", s("nat"), f()).unwrap();
        declare_symbol(&mut sig, "s", Term::arrow(s("nat"), s("nat")), f()).unwrap();
        declare_symbol(&mut sig, "+", Term::arrow(s("nat"), Term::arrow(s("nat"), s("nat"))), f()).unwrap();
        sig
    }

    #[test]
    fn sorts_of_declarations() {
        let sig = base();
        assert_eq!(sig.get("nat").unwrap().sort, Sort::Box);
        assert_eq!(sig.get("0").unwrap().sort, Sort::Star);
        assert_eq!(sig.get("+").unwrap().arity, 2);
    }

    #[test]
    fn symbol_typing() {
        let sig = base();
        assert_eq!(infer_type(&sig, &Environment::new(), &s("0"), f()).unwrap(), s("nat"));
    }

    #[test]
    fn refl_instance() {
        let mut sig = base();
        // JMeq : (A:*)A => (B:*)B => *
        let jmeq_ty = Term::prod("A", Term::star(), Term::arrow(v("A"), Term::prod("B", Term::star(), Term::arrow(v("B"), Term::star()))));
        declare_symbol(&mut sig, "JMeq", jmeq_ty, f()).unwrap();
        let refl_ty = Term::prod("A", Term::star(), Term::prod("x", v("A"), Term::apps(s("JMeq"), [v("A"), v("x"), v("A"), v("x")])));
        declare_symbol(&mut sig, "refl", refl_ty, f()).unwrap();
        let t = Term::apps(s("refl"), [s("nat"), s("0")]);
        let ty = infer_type(&sig, &Environment::new(), &t, f()).unwrap();
        assert_eq!(ty, Term::apps(s("JMeq"), [s("nat"), s("0"), s("nat"), s("0")]));
    }

    #[test]
    fn conversion_through_rules() {
        let mut sig = base();
        let num = |n: usize| (0..n).fold(s("0"), |t, _| Term::app(s("s"), t));
        sig.add_rule(RewriteRule::new("+", vec![v("x"), s("0")], v("x"))).unwrap();
        sig.add_rule(RewriteRule::new(
            "+",
            vec![v("x"), Term::app(s("s"), v("y"))],
            Term::app(s("s"), Term::apps(s("+"), [v("x"), v("y")])),
        ))
        .unwrap();
        let env = Environment::from_bindings(vec![
            ("P".into(), Term::arrow(s("nat"), Term::star())),
            ("t".into(), Term::app(v("P"), Term::apps(s("+"), [num(2), num(2)]))),
        ])
        .unwrap();
        check_type(&sig, &env, &v("t"), &Term::app(v("P"), num(4)), f()).unwrap();
        let err = check_type(&sig, &env, &v("t"), &Term::app(v("P"), num(3)), f()).unwrap_err();
        assert_eq!(err.code(), "CONVERSION-FAILURE");
    }

    #[test]
    fn rule_checks() {
        let mut sig = base();
        let r = RewriteRule::new("+", vec![v("x"), s("0")], v("x"));
        sig.add_rule(r.clone()).unwrap();
        assert_eq!(infer_rule_env(&sig, &r).unwrap().bindings(), &[("x".into(), s("nat"))]);
        check_rule_subject_reduction(&sig, &r, f()).unwrap();
        let bad = RewriteRule::new("+", vec![v("x"), s("0")], s("nat"));
        let e = check_rule_subject_reduction(&sig, &bad, f()).unwrap_err();
        assert_eq!(e.side, RuleSide::Rhs);
    }

    #[test]
    fn pred_rule_int() {
        let mut sig = Signature::new();
        declare_symbol(&mut sig, "int", Term::star(), f()).unwrap();
        declare_symbol(&mut sig, "s", Term::arrow(s("int"), s("int")), f()).unwrap();
        declare_symbol(&mut sig, "p", Term::arrow(s("int"), s("int")), f()).unwrap();
        let r = RewriteRule::new("s", vec![Term::app(s("p"), v("x"))], v("x"))
            .with_env(Environment::from_bindings(vec![("x".into(), s("int"))]).unwrap());
        check_rule_subject_reduction(&sig, &r, f()).unwrap();
    }

    #[test]
    fn errors() {
        let sig = base();
        let e = Environment::new();
        assert_eq!(infer_type(&sig, &e, &v("y"), f()).unwrap_err().code(), "UNBOUND-VARIABLE");
        assert_eq!(infer_type(&sig, &e, &Term::app(s("0"), s("0")), f()).unwrap_err().code(), "NOT-A-PRODUCT");
        assert_eq!(infer_type(&sig, &e, &Term::boxed(), f()).unwrap_err().code(), "SORT-MISMATCH");
        assert_eq!(infer_type(&sig, &e, &Term::prod("x", s("0"), s("nat")), f()).unwrap_err().code(), "SORT-MISMATCH");
        let mut sig2 = base();
        let err = declare_symbol(&mut sig2, "bad", Term::app(s("s"), s("nat")), f()).unwrap_err();
        assert_eq!(err.code(), "ILL-TYPED-SYMBOL");
        let err = declare_symbol(&mut sig2, "bad", v("A"), f()).unwrap_err();
        assert_eq!(err.code(), "ILL-TYPED-SYMBOL");
    }

    #[test]
    fn abstraction_and_shadowing() {
        let sig = base();
        let env = Environment::from_bindings(vec![("x".into(), s("nat"))]).unwrap();
        // [x:nat => nat] x 0   under x:nat: inner binder shadows
        let t = Term::abs("x", Term::arrow(s("nat"), s("nat")), Term::app(v("x"), s("0")));
        let ty = infer_type(&sig, &env, &t, f()).unwrap();
        assert!(crate::term::alpha_equal(&ty, &Term::arrow(Term::arrow(s("nat"), s("nat")), s("nat"))));
        // kind-valued abstraction is not typable
        let k = Term::abs("x", s("nat"), Term::star());
        assert!(infer_type(&sig, &env, &k, f()).is_err());
        // checking mode
        let id = Term::abs("y", s("nat"), v("y"));
        check_type(&sig, &env, &id, &Term::prod("z", s("nat"), s("nat")), f()).unwrap();
    }
}
