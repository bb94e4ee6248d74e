//! Checking a whole source file: declarations are processed in order, then
//! the inductive types are analysed once every recursor is known.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::diagnostic::{Diagnostic, Severity};
use crate::inductive::{analyze_inductive, check_defined_predicate_rule, InductiveDecl, Positivity, PredicateRuleViolation, I6};
use crate::recursor::{
    admissibility_report, generate_canonical_recursor, install_recursor, validate_extended_recursor, AdmissibilityReport, RecursorKind,
    RecursorVerdict, Status,
};
use crate::reduction::{Fuel, DEFAULT_FUEL};
use crate::signature::{check_safe_rule, InductiveSpec, RecursorOrigin, RewriteRule, Safety, Signature};
use crate::syntax::{parse_file, resolve, Decl, MonSpec, ParseError, RecursorRef, SourceFile, Span};
use crate::term::{free_vars, Environment, Name, Term, TermSubstitution};
use crate::typing::{check_rule_subject_reduction, declare_symbol, infer_rule_env};

/// Analyses of one inductive type, in the order they were declared.
#[derive(Clone, Debug, Serialize)]
pub struct InductiveReport {
    pub analysis: InductiveDecl,
    pub admissibility: AdmissibilityReport,
    pub recursors: Vec<RecursorVerdict>,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub sig: Signature,
    pub fuel: Fuel,
    pub diagnostics: Vec<Diagnostic>,
    pub inductives: Vec<InductiveReport>,
    rule_spans: Vec<(usize, Span)>,
    recursor_spans: Vec<(Name, Span)>,
    inductive_spans: Vec<(Name, Span)>,
}

impl Session {
    fn new(fuel: Fuel) -> Session {
        Session {
            sig: Signature::new(),
            fuel,
            diagnostics: Vec::new(),
            inductives: Vec::new(),
            rule_spans: Vec::new(),
            recursor_spans: Vec::new(),
            inductive_spans: Vec::new(),
        }
    }

    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }

    /// Resolves declared symbol names in a term read from the surface syntax.
    pub fn resolve(&self, t: &Term) -> Term {
        resolve(t, &|n| self.sig.contains(n))
    }

    pub fn report(&self, c: &str) -> Option<&InductiveReport> {
        self.inductives.iter().find(|r| &*r.analysis.name == c)
    }

    fn push(&mut self, d: Diagnostic) {
        self.diagnostics.push(d);
    }
}

/// Parses and checks a source file. `fuel` overrides any `#fuel` pragma.
pub fn check_source(src: &str, fuel: Option<Fuel>) -> Result<Session, ParseError> {
    let file = parse_file(src)?;
    Ok(check_file(&file, fuel))
}

pub fn check_file(file: &SourceFile, fuel: Option<Fuel>) -> Session {
    let mut s = Session::new(fuel.unwrap_or(Fuel::new(DEFAULT_FUEL)));
    for d in &file.decls {
        let span = d.span;
        match &d.node {
            Decl::Symbol { name, ty, mon } => {
                if declare(&mut s, name, ty, span) {
                    set_mon(&mut s, name, mon, span);
                }
            }
            Decl::Inductive { name, ty, constructors, mon } => inductive(&mut s, name, ty.as_ref(), constructors, mon, span),
            Decl::Rule { lhs, rhs, env, rho } => rule(&mut s, lhs, rhs, env.as_deref(), rho, span),
            Decl::Recursor { symbol, target } => recursor(&mut s, symbol, target, span),
            Decl::Fuel(n) => {
                if fuel.is_none() {
                    s.fuel = Fuel::new(*n);
                }
            }
            Decl::Equiv(names) => {
                if let Some(g) = names.iter().find(|g| !s.sig.contains(g)) {
                    let g = g.clone();
                    s.push(Diagnostic::error("UNKNOWN-SYMBOL", format!("unknown symbol `{g}`"), span));
                    continue;
                }
                for g in &names[1..] {
                    s.sig.precedence.make_equivalent(&names[0], g);
                }
            }
        }
    }
    finish(&mut s);
    s
}

fn declare(s: &mut Session, name: &Name, ty: &Term, span: Span) -> bool {
    let ty = s.resolve(ty);
    if let Some(x) = free_vars(&ty).into_iter().next() {
        s.push(Diagnostic::error("UNKNOWN-SYMBOL", format!("unknown symbol `{x}` in the type of `{name}`"), span));
        return false;
    }
    match declare_symbol(&mut s.sig, name, ty, s.fuel) {
        Ok(_) => true,
        Err(e) => {
            s.push(Diagnostic::error(e.code(), e.to_string(), span));
            false
        }
    }
}

fn set_mon(s: &mut Session, name: &str, mon: &MonSpec, span: Span) {
    if mon.is_empty() {
        return;
    }
    let plus: BTreeSet<usize> = mon.plus.iter().copied().collect();
    let minus: BTreeSet<usize> = mon.minus.iter().copied().collect();
    if let Some(&i) = plus.intersection(&minus).next() {
        s.push(
            Diagnostic::warning("MON-BOTH", format!("argument {i} of `{name}` is both monotone and anti-monotone"), span).condition("MON"),
        );
    }
    if s.sig.get(name).is_some_and(|d| d.sort != crate::term::Sort::Box) {
        s.push(Diagnostic::error("MON-INVALID", format!("`{name}` is not a predicate symbol"), span).condition("MON"));
        return;
    }
    if let Err(e) = s.sig.set_mon(name, plus, minus) {
        s.push(Diagnostic::error(e.code(), e.to_string(), span).condition("MON"));
    }
}

fn inductive(s: &mut Session, name: &Name, ty: Option<&Term>, constructors: &[(Name, Term)], mon: &MonSpec, span: Span) {
    match ty {
        Some(ty) => {
            if !declare(s, name, ty, span) {
                return;
            }
        }
        None if !s.sig.contains(name) => {
            s.push(Diagnostic::error("UNKNOWN-SYMBOL", format!("`{name}` has no type; declare it first"), span));
            return;
        }
        None => {}
    }
    if s.sig.get(name).is_some_and(|d| *d.ty.telescope().1 != Term::star()) {
        let ty = s.sig.get(name).map(|d| d.ty.to_string()).unwrap_or_default();
        s.push(Diagnostic::error("NOT-INDUCTIVE", format!("`{name} : {ty}` is not of the form (z:V)*"), span));
        return;
    }
    set_mon(s, name, mon, span);
    let mut declared = Vec::new();
    for (c, t) in constructors {
        if !declare(s, c, t, span) {
            continue;
        }
        if s.sig.constructor_target(c).as_deref() != Some(&**name) {
            s.push(Diagnostic::error("NOT-CONSTRUCTOR-TYPE", format!("the output type of `{c}` is not headed by `{name}`"), span));
            continue;
        }
        declared.push(c.clone());
    }
    s.sig.add_inductive(InductiveSpec { name: name.clone(), constructors: declared });
    s.inductive_spans.retain(|(n, _)| n != name);
    s.inductive_spans.push((name.clone(), span));
}

fn rule(s: &mut Session, lhs: &Term, rhs: &Term, env: Option<&[(Name, Term)]>, rho: &[(Name, Term)], span: Span) {
    let lhs = s.resolve(lhs);
    let mut rule = match RewriteRule::from_lhs(&lhs, s.resolve(rhs)) {
        Ok(r) => r,
        Err(e) => return s.push(Diagnostic::error(e.code(), e.to_string(), span)),
    };
    if !rho.is_empty() {
        let rho: TermSubstitution = rho.iter().map(|(x, t)| (x.clone(), s.resolve(t))).collect();
        rule = rule.with_rho(rho);
    }
    if let Some(env) = env {
        let bindings = env.iter().map(|(x, t)| (x.clone(), s.resolve(t))).collect();
        match Environment::from_bindings(bindings) {
            Ok(env) => rule = rule.with_env(env),
            Err(x) => {
                return s.push(Diagnostic::error("RULE-ENV", format!("`{x}` is bound twice in the rule environment"), span));
            }
        }
    }
    if let Err(e) = s.sig.check_rule(&rule) {
        return s.push(Diagnostic::error(e.code(), e.to_string(), span));
    }
    if let Err(f) = check_rule_subject_reduction(&s.sig, &rule, s.fuel) {
        let code = if f.error.code() == "FUEL-EXHAUSTED" { "FUEL-EXHAUSTED" } else { "SR-FAILURE" };
        return s.push(Diagnostic::error(code, f.to_string(), span));
    }
    if rule.env_declared {
        if let Ok(inferred) = infer_rule_env(&s.sig, &rule) {
            let declared: BTreeSet<&Name> = rule.env.names().collect();
            let found: BTreeSet<&Name> = inferred.names().collect();
            if !found.is_subset(&declared) {
                let missing: Vec<String> = found.difference(&declared).map(|n| n.to_string()).collect();
                s.push(Diagnostic::note(
                    "ENV-DIFFERS",
                    format!("pattern variables {} are not in the declared environment", missing.join(", ")),
                    span,
                ));
            }
        }
    }
    if s.sig.is_predicate(&rule.head) {
        if let Err(v) = check_defined_predicate_rule(&s.sig, &rule) {
            s.push(predicate_rule_diagnostic(&rule.head, &v, span));
        }
    }
    let index = s.sig.rules().len();
    if let Err(e) = s.sig.add_rule(rule) {
        return s.push(Diagnostic::error(e.code(), e.to_string(), span));
    }
    s.rule_spans.push((index, span));
}

fn predicate_rule_diagnostic(head: &str, v: &PredicateRuleViolation, span: Span) -> Diagnostic {
    match v {
        PredicateRuleViolation::GreaterSymbol { symbol } => {
            Diagnostic::error("RULE-PRECEDENCE", format!("`{symbol}` is greater than `{head}` and occurs in the right-hand side"), span)
        }
        PredicateRuleViolation::NotPredicateVariable { index } => Diagnostic::error(
            "MON-CONDITION",
            format!("argument {index} of `{head}` is in a Mon set but its pattern is not a variable"),
            span,
        )
        .condition("MON"),
        PredicateRuleViolation::Monotonicity { index, polarity, position } => {
            let sign = match polarity {
                crate::inductive::Polarity::Positive => "+",
                crate::inductive::Polarity::Negative => "-",
            };
            Diagnostic::error(
                "MON-CONDITION",
                format!("argument {index} of `{head}` is in Mon{sign} but occurs outside Pos{sign} of the right-hand side"),
                span,
            )
            .at(position.clone())
            .condition("MON")
        }
    }
}

fn recursor(s: &mut Session, symbol: &RecursorRef, target: &Name, span: Span) {
    if !s.sig.is_constant_predicate(target) {
        let what = if s.sig.contains(target) { "is not a constant predicate symbol" } else { "is not declared" };
        return s.push(Diagnostic::error("NOT-INDUCTIVE", format!("`{target}` {what}"), span));
    }
    match symbol {
        RecursorRef::Named(f) => {
            if !s.sig.contains(f) {
                return s.push(Diagnostic::error("UNKNOWN-SYMBOL", format!("unknown symbol `{f}`"), span));
            }
            s.sig.add_recursor(target, f, RecursorOrigin::User);
            s.recursor_spans.push((f.clone(), span));
        }
        RecursorRef::Canonical => {
            let generated = generate_canonical_recursor(&s.sig, target, s.fuel).and_then(|rec| {
                install_recursor(&mut s.sig, &rec, s.fuel)?;
                Ok(rec)
            });
            match generated {
                Ok(rec) => {
                    s.push(Diagnostic::note("RECURSOR-GENERATED", format!("generated `{} : {}`", rec.symbol, rec.ty), span));
                    s.recursor_spans.push((rec.symbol.clone(), span));
                }
                Err(e) => s.push(Diagnostic::error(e.code(), e.to_string(), span)),
            }
        }
    }
}

fn span_of(spans: &[(Name, Span)], name: &str) -> Span {
    spans.iter().rev().find(|(n, _)| &**n == name).map(|(_, s)| *s).unwrap_or_default()
}

fn finish(s: &mut Session) {
    let inductives: Vec<Name> = s.sig.inductives().iter().map(|i| i.name.clone()).collect();
    for c in inductives {
        let span = span_of(&s.inductive_spans, &c);
        let analysis = analyze_inductive(&s.sig, &c);
        let admissibility = admissibility_report(&s.sig, &c);
        let elimination = !s.sig.recursors_of(&c).is_empty();

        if let Positivity::Negative { constructor, arg, type_position, .. } = &analysis.positivity {
            s.push(
                Diagnostic::error(
                    "NEGATIVE-POSITIVITY",
                    format!("`{c}` occurs at a negative position in argument {arg} of `{constructor}`"),
                    span,
                )
                .at(type_position.clone())
                .condition("POSITIVITY"),
            );
        }
        if let I6::Violated { constructor, variable, arg } = &analysis.i6 {
            let message = format!(
                "predicate variable `{variable}` occurs in accessible argument {arg} of `{constructor}` but is not an argument of `{c}` in its output type"
            );
            let d = if elimination {
                Diagnostic::note("I6-VIOLATION", format!("{message}; waived in elimination-based mode"), span)
            } else {
                Diagnostic::error("I6-VIOLATION", message, span)
            };
            s.push(d.condition("I6"));
        }
        if elimination {
            s.push(Diagnostic::note(
                "ELIMINATION-MODE",
                format!("`{c}` is checked in elimination-based mode: (I6) and safety are not required"),
                span,
            ));
        }

        let mut verdicts = Vec::new();
        for (f, origin) in s.sig.recursors_of(&c).to_vec() {
            let rspan = span_of(&s.recursor_spans, &f);
            let verdict = validate_extended_recursor(&s.sig, &f, &c);
            for failure in verdict.failures() {
                let mut d = Diagnostic::error(
                    failure.clause.code(),
                    format!(
                        "recursor `{f}` for `{c}` fails clause ({}): {}",
                        failure.clause.letter(),
                        failure.detail.clone().unwrap_or_default()
                    ),
                    rspan,
                )
                .condition(failure.clause.condition());
                if let Some(p) = &failure.position {
                    d = d.at(p.clone());
                }
                s.diagnostics.push(d);
            }
            if origin == RecursorOrigin::User {
                s.push(Diagnostic::warning("ADMISSIBILITY-ASSUMED", format!("head-computability of `{f}` is assumed, not proven"), rspan));
            }
            if verdict.kind == RecursorKind::Strong {
                s.push(Diagnostic::warning(
                    "STRONG-RECURSOR-ASSUMED",
                    format!("the conditions on the strong recursor `{f}` are assumed"),
                    rspan,
                ));
            }
            verdicts.push(verdict);
        }
        if elimination && admissibility.completeness == Status::Assumed {
            s.push(Diagnostic::warning(
                "ADMISSIBILITY-ASSUMED",
                format!("completeness of Rec({c}) w.r.t. accessibility is assumed: no canonical recursor"),
                span,
            ));
        }
        s.inductives.push(InductiveReport { analysis, admissibility, recursors: verdicts });
    }
    safety(s);
    s.diagnostics.sort_by_key(|d| (d.span.line, d.span.col));
}

fn safety(s: &mut Session) {
    let mut out = Vec::new();
    for &(i, span) in &s.rule_spans {
        let rule = &s.sig.rules()[i];
        let Safety::Unsafe { non_variable, duplicates } = check_safe_rule(&s.sig, rule) else { continue };
        let mut what: Vec<String> = non_variable.iter().map(|i| format!("predicate argument {i} is not a variable")).collect();
        what.extend(duplicates.iter().map(|(i, j)| format!("predicate arguments {i} and {j} are the same variable")));
        let what = what.join(", ");
        let head = &rule.head;
        let d = if let Some(c) = s.sig.recursor_target(head) {
            Diagnostic::note("SAFETY", format!("rule for `{head}` is unsafe ({what}); waived since `{c}` is elimination-based"), span)
        } else if let Some(c) = rule.lhs_args.iter().find_map(|a| a.head_symbol().and_then(|k| s.sig.constructor_target(k))) {
            if s.sig.recursors_of(&c).is_empty() {
                Diagnostic::error("SAFETY", format!("rule for `{head}` on `{c}` is unsafe ({what}) and `{c}` is introduction-based"), span)
            } else {
                Diagnostic::note("SAFETY", format!("rule for `{head}` is unsafe ({what}); waived since `{c}` is elimination-based"), span)
            }
        } else {
            Diagnostic::warning("SAFETY", format!("rule for `{head}` is unsafe ({what})"), span)
        };
        out.push(d.condition("SAFE"));
    }
    s.diagnostics.extend(out);
}
