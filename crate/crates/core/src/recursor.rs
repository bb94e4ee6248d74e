//! Canonical weak recursors, validation of extended recursors and the
//! admissibility report of an inductive type.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::inductive::{class_occurrences, compute_pos_sets, constructors_of, infer_parameters, strict_argument, Polarity};
use crate::reduction::Fuel;
use crate::signature::{RecursorOrigin, RewriteRule, RuleError, Signature};
use crate::term::{free_vars, fresh_name, substitute, var_positions, Name, Position, Term, TermSubstitution, ANON};
use crate::typing::{check_rule_subject_reduction, declare_symbol, infer_rule_env, instantiate, DeclareError, SubjectReductionFailure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecursorKind {
    Weak,
    Strong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PROVEN")]
    Proven,
    #[serde(rename = "ASSUMED")]
    Assumed,
    #[serde(rename = "N/A")]
    NotApplicable,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Proven => "PROVEN",
            Status::Assumed => "ASSUMED",
            Status::NotApplicable => "N/A",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursorDecl {
    pub symbol: Name,
    pub target: Name,
    pub ty: Term,
    pub kind: RecursorKind,
    pub origin: RecursorOrigin,
    pub rules: Vec<RewriteRule>,
    pub head_computability: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RecursorError {
    #[error("`{0}` is not a constant predicate of type (z:V)*")]
    NotInductive(Name),
    #[error("argument {arg} of `{constructor}` is not strictly positive")]
    NotStrictlyPositive { constructor: Name, arg: usize },
    #[error("recursor type: {0}")]
    Declare(#[from] DeclareError),
    #[error("rule for `{constructor}`: {error}")]
    Rule { constructor: Name, error: RuleError },
    #[error("rule for `{constructor}`: {failure}")]
    SubjectReduction { constructor: Name, failure: SubjectReductionFailure },
}

impl RecursorError {
    pub fn code(&self) -> &'static str {
        match self {
            RecursorError::NotInductive(_) => "NOT-INDUCTIVE",
            RecursorError::NotStrictlyPositive { .. } => "NOT-STRICTLY-POSITIVE",
            RecursorError::Declare(e) => e.code(),
            RecursorError::Rule { error, .. } => error.code(),
            RecursorError::SubjectReduction { .. } => "SR-FAILURE",
        }
    }
}

fn kind_of(ty: &Term) -> RecursorKind {
    if ty.telescope().1.is_kind() {
        RecursorKind::Strong
    } else {
        RecursorKind::Weak
    }
}

/// Renames a telescope binder by binder, choosing each new name with `pick`
/// and substituting it in the following types and in `tail`.
fn rename_telescope(
    binders: &[(Name, Term)],
    tail: &[Term],
    theta: &mut TermSubstitution,
    mut pick: impl FnMut(usize, &Name) -> Name,
) -> (Vec<(Name, Term)>, Vec<Term>) {
    let mut out = Vec::new();
    for (i, (x, t)) in binders.iter().enumerate() {
        let t = substitute(t, theta);
        let y = pick(i, x);
        theta.insert(x.clone(), Term::Var(y.clone()));
        out.push((y, t));
    }
    let tail = tail.iter().map(|t| substitute(t, theta)).collect();
    (out, tail)
}

struct Names<'a> {
    sig: &'a Signature,
    taken: BTreeSet<Name>,
}

impl Names<'_> {
    fn fresh(&mut self, base: &str) -> Name {
        let base = if base == ANON { "x" } else { base };
        let n = fresh_name(base, &|n| self.sig.contains(n) || self.taken.contains(n));
        self.taken.insert(n.clone());
        n
    }
}

fn vars(names: &[Name]) -> Vec<Term> {
    names.iter().map(|n| Term::Var(n.clone())).collect()
}

/// Builds `rec_C` following the canonical schema and checks it in a copy of
/// the signature: the type is sorted, every rule is admitted and passes the
/// subject-reduction check.
pub fn generate_canonical_recursor(sig: &Signature, c: &str, fuel: Fuel) -> Result<RecursorDecl, RecursorError> {
    let not_inductive = || RecursorError::NotInductive(c.into());
    let decl = sig.get(c).ok_or_else(not_inductive)?;
    let (c_binders, c_out) = decl.ty.telescope();
    if *c_out != Term::star() || !sig.is_constant_predicate(c) {
        return Err(not_inductive());
    }
    let constructors = constructors_of(sig, c);
    let k = infer_parameters(sig, c);
    for ctor in &constructors {
        let d = sig.get(ctor).ok_or_else(not_inductive)?;
        for (j, (_, t)) in d.split_type().0.iter().enumerate().skip(k) {
            if !strict_argument(sig, c, t) {
                return Err(RecursorError::NotStrictlyPositive { constructor: ctor.clone(), arg: j + 1 });
            }
        }
    }

    let mut names = Names { sig, taken: BTreeSet::new() };
    let first_ctor = constructors.first().and_then(|k| sig.get(k)).map(|d| d.split_type().0).unwrap_or_default();
    let mut theta = TermSubstitution::new();
    let (qs, _) = rename_telescope(&c_binders[..k], &[], &mut theta, |i, x| {
        let base = match first_ctor.get(i) {
            Some((y, _)) if &**y != ANON => y.clone(),
            _ if &**x != ANON => x.clone(),
            _ => format!("q{}", i + 1).into(),
        };
        names.fresh(&base)
    });
    let (zs, _) = rename_telescope(&c_binders[k..], &[], &mut theta, |i, _| names.fresh(&format!("z{}", i + 1)));
    let q_names: Vec<Name> = qs.iter().map(|(x, _)| x.clone()).collect();
    let z_names: Vec<Name> = zs.iter().map(|(x, _)| x.clone()).collect();
    let major = names.fresh("z");
    let motive = names.fresh("P");
    let y_names: Vec<Name> = (0..constructors.len()).map(|i| names.fresh(&format!("y{}", i + 1))).collect();
    let q_primes: Vec<Name> = q_names.iter().map(|q| names.fresh(&format!("{q}'"))).collect();
    let rec_name = fresh_name(&format!("rec_{c}"), &|n| sig.contains(n) || names.taken.contains(n));

    let c_applied = |qz: &[Term]| Term::apps(Term::sym(c), qz.iter().cloned());
    let qz_vars: Vec<Term> = vars(&q_names).into_iter().chain(vars(&z_names)).collect();
    let motive_ty = Term::close_prods(&zs, Term::arrow(c_applied(&qz_vars), Term::star()));
    let rec_call = |w: Vec<Term>, scrutinee: Term| {
        let args = vars(&q_names).into_iter().chain(w).chain([scrutinee, Term::Var(motive.clone())]).chain(vars(&y_names));
        Term::apps(Term::sym(&rec_name), args)
    };

    let mut minors = Vec::new();
    let mut rules = Vec::new();
    for (i, ctor) in constructors.iter().enumerate() {
        let d = sig.get(ctor).ok_or_else(not_inductive)?;
        let inst = instantiate(&d.ty, &vars(&q_names)).ok_or_else(not_inductive)?;
        let (xs, out) = inst.telescope();
        let out = out.clone();
        let mut local = Names { sig, taken: names.taken.clone() };
        let mut theta = TermSubstitution::new();
        let (xs, tail) = rename_telescope(&xs, &[out], &mut theta, |_, x| local.fresh(x));
        let v: Vec<Term> = tail[0].spine().1.into_iter().skip(k).cloned().collect();
        let x_names: Vec<Name> = xs.iter().map(|(x, _)| x.clone()).collect();

        let mut primed = Vec::new();
        let mut recursive_args = Vec::new();
        for (x, t) in &xs {
            let x_prime = local.fresh(&format!("{x}'"));
            let (alphas, body) = t.telescope();
            if body.head_symbol().map(|h| &**h) == Some(c) {
                let mut th = TermSubstitution::new();
                let (alphas, tail) = rename_telescope(&alphas, std::slice::from_ref(body), &mut th, |_, a| local.fresh(a));
                let w: Vec<Term> = tail[0].spine().1.into_iter().skip(k).cloned().collect();
                let applied = Term::apps(Term::Var(x.clone()), vars(&alphas.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>()));
                let t_prime =
                    Term::close_prods(&alphas, Term::app(Term::apps(Term::Var(motive.clone()), w.iter().cloned()), applied.clone()));
                let call = rec_call(w, applied);
                let arg = alphas.iter().rev().fold(call, |acc, (a, wt)| Term::abs(a, wt.clone(), acc));
                primed.push((x_prime, t_prime));
                recursive_args.push(arg);
            } else {
                primed.push((x_prime, t.clone()));
                recursive_args.push(Term::Var(x.clone()));
            }
        }
        let ctor_applied = Term::apps(Term::Sym(ctor.clone()), vars(&q_names).into_iter().chain(vars(&x_names)));
        let result = Term::app(Term::apps(Term::Var(motive.clone()), v.iter().cloned()), ctor_applied);
        let all: Vec<(Name, Term)> = xs.iter().cloned().chain(primed).collect();
        minors.push((y_names[i].clone(), Term::close_prods(&all, result)));

        let scrutinee = Term::apps(Term::Sym(ctor.clone()), vars(&q_primes).into_iter().chain(vars(&x_names)));
        let lhs_args: Vec<Term> =
            vars(&q_names).into_iter().chain(vars(&z_names)).chain([scrutinee, Term::Var(motive.clone())]).chain(vars(&y_names)).collect();
        let rhs = Term::apps(Term::Var(y_names[i].clone()), vars(&x_names).into_iter().chain(recursive_args));
        let rho: TermSubstitution =
            q_primes.iter().cloned().zip(vars(&q_names)).chain(z_names.iter().cloned().zip(v.iter().cloned())).collect();
        rules.push((ctor.clone(), RewriteRule::new(&rec_name, lhs_args, rhs).with_rho(rho)));
    }

    let major_ty = c_applied(&qz_vars);
    let body = Term::app(Term::apps(Term::Var(motive.clone()), vars(&z_names)), Term::Var(major.clone()));
    let binders: Vec<(Name, Term)> =
        qs.into_iter().chain(zs).chain([(major, major_ty), (motive.clone(), motive_ty)]).chain(minors).collect();
    let ty = Term::close_prods(&binders, body);

    let mut scratch = sig.clone();
    declare_symbol(&mut scratch, &rec_name, ty.clone(), fuel)?;
    let mut checked = Vec::new();
    for (ctor, rule) in rules {
        let env = infer_rule_env(&scratch, &rule).map_err(|error| RecursorError::SubjectReduction {
            constructor: ctor.clone(),
            failure: SubjectReductionFailure { side: crate::typing::RuleSide::Env, error: Box::new(error) },
        })?;
        let rule = rule.with_env(env);
        scratch.add_rule(rule.clone()).map_err(|error| RecursorError::Rule { constructor: ctor.clone(), error })?;
        check_rule_subject_reduction(&scratch, &rule, fuel)
            .map_err(|failure| RecursorError::SubjectReduction { constructor: ctor.clone(), failure })?;
        checked.push(rule);
    }
    Ok(RecursorDecl {
        symbol: rec_name,
        target: c.into(),
        kind: kind_of(&ty),
        ty,
        origin: RecursorOrigin::Canonical,
        rules: checked,
        head_computability: Status::Proven,
    })
}

/// Adds a recursor, its rules and its membership in `Rec(C)` to the signature.
pub fn install_recursor(sig: &mut Signature, rec: &RecursorDecl, fuel: Fuel) -> Result<(), RecursorError> {
    declare_symbol(sig, &rec.symbol, rec.ty.clone(), fuel)?;
    for rule in &rec.rules {
        let constructor = rule.lhs_args.iter().find_map(|a| a.head_symbol().cloned()).unwrap_or_default();
        sig.add_rule(rule.clone()).map_err(|error| RecursorError::Rule { constructor, error })?;
    }
    sig.add_recursor(&rec.target, &rec.symbol, rec.origin);
    Ok(())
}

/// A canonical recursor together with its validation in a signature where it
/// is the only member of `Rec(C)`.
#[derive(Clone, Debug)]
pub struct GeneratedRecursor {
    pub decl: RecursorDecl,
    pub verdict: RecursorVerdict,
    pub report: AdmissibilityReport,
    pub signature: Signature,
}

pub fn generate_and_validate(sig: &Signature, c: &str, fuel: Fuel) -> Result<GeneratedRecursor, RecursorError> {
    let decl = generate_canonical_recursor(sig, c, fuel)?;
    let mut scratch = sig.clone();
    scratch.clear_recursors(c);
    install_recursor(&mut scratch, &decl, fuel)?;
    let verdict = validate_extended_recursor(&scratch, &decl.symbol, c);
    let report = admissibility_report(&scratch, c);
    Ok(GeneratedRecursor { decl, verdict, report, signature: scratch })
}

/// The type of a recursor brought to the form `(z:V)(z:C z)W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursorShape {
    /// Original argument indices (0-based) of the `C` arguments, in order.
    pub indices: Vec<usize>,
    /// Original argument index of the major premise.
    pub major: usize,
    /// Names of the `C` arguments.
    pub index_names: Vec<Name>,
    pub w: Term,
}

pub fn recursor_shape(sig: &Signature, f: &str, c: &str) -> Result<RecursorShape, String> {
    let decl = sig.get(f).ok_or_else(|| format!("unknown symbol `{f}`"))?;
    if constructors_of(sig, c).iter().any(|k| &**k == f) || sig.constructor_target(f).as_deref() == Some(c) {
        return Err(format!("`{f}` is a constructor of `{c}`"));
    }
    let c_arity = sig.get(c).map(|d| d.arity).ok_or_else(|| format!("unknown symbol `{c}`"))?;
    let (binders, body) = decl.ty.telescope();
    let index_of = |x: &Name| binders.iter().position(|(y, _)| y == x);
    let named: Vec<&Name> = binders.iter().map(|(x, _)| x).filter(|x| &***x != ANON).collect();
    if named.iter().collect::<BTreeSet<_>>().len() != named.len() {
        return Err("binder names are not distinct".into());
    }
    let found = binders.iter().enumerate().find_map(|(m, (_, t))| {
        let (head, args) = t.spine();
        if !matches!(head, Term::Sym(g) if &**g == c) || args.len() != c_arity {
            return None;
        }
        let idx: Option<Vec<usize>> = args
            .iter()
            .map(|a| match a {
                Term::Var(x) if &**x != ANON => index_of(x).filter(|&i| i != m),
                _ => None,
            })
            .collect();
        let idx = idx?;
        (idx.iter().collect::<BTreeSet<_>>().len() == idx.len()).then_some((m, idx))
    });
    let Some((major, indices)) = found else {
        return Err(format!("no argument of type `{c}` applied to distinct bound variables"));
    };
    let order: Vec<usize> =
        indices.iter().copied().chain([major]).chain((0..binders.len()).filter(|i| *i != major && !indices.contains(i))).collect();
    for (pos, &i) in order.iter().enumerate() {
        let fv = free_vars(&binders[i].1);
        let earlier: BTreeSet<&Name> = order[..pos].iter().map(|&j| &binders[j].0).collect();
        if let Some(x) = fv.iter().find(|x| index_of(x).is_some() && !earlier.contains(x)) {
            return Err(format!("the type of argument {} depends on `{x}`, which cannot be moved before it", i + 1));
        }
    }
    let rest: Vec<(Name, Term)> = order[indices.len() + 1..].iter().map(|&i| binders[i].clone()).collect();
    let index_names = indices.iter().map(|&i| binders[i].0.clone()).collect();
    Ok(RecursorShape { indices, major, index_names, w: Term::close_prods(&rest, body.clone()) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Shape,
    Escape,
    Guard,
    Positivity,
    Greater,
    Mon,
}

impl Clause {
    pub const ALL: [Clause; 6] = [Clause::Shape, Clause::Escape, Clause::Guard, Clause::Positivity, Clause::Greater, Clause::Mon];

    pub fn letter(self) -> char {
        match self {
            Clause::Shape => 'a',
            Clause::Escape => 'b',
            Clause::Guard => 'c',
            Clause::Positivity => 'd',
            Clause::Greater => 'e',
            Clause::Mon => 'f',
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Clause::Shape => "PRE-REC-SHAPE",
            Clause::Escape => "PRE-REC-ESCAPE",
            Clause::Guard => "PRE-REC-GUARD",
            Clause::Positivity => "REC-POSITIVITY",
            Clause::Greater => "REC-GREATER",
            Clause::Mon => "MON-CONDITION",
        }
    }

    pub fn condition(self) -> &'static str {
        match self {
            Clause::Shape | Clause::Escape | Clause::Guard => "PRE-REC",
            Clause::Positivity | Clause::Greater => "REC",
            Clause::Mon => "MON",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: Clause,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<Position>,
}

impl ClauseResult {
    fn pass(clause: Clause) -> ClauseResult {
        ClauseResult { clause, outcome: Outcome::Pass, detail: None, position: None }
    }

    fn fail(clause: Clause, detail: String, position: Option<Position>) -> ClauseResult {
        ClauseResult { clause, outcome: Outcome::Fail, detail: Some(detail), position }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursorVerdict {
    pub symbol: Name,
    pub target: Name,
    pub kind: RecursorKind,
    pub clauses: Vec<ClauseResult>,
}

impl RecursorVerdict {
    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(|c| c.outcome == Outcome::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClauseResult> {
        self.clauses.iter().filter(|c| c.outcome == Outcome::Fail)
    }
}

pub fn validate_extended_recursor(sig: &Signature, f: &str, c: &str) -> RecursorVerdict {
    let kind = sig.get(f).map(|d| kind_of(&d.ty)).unwrap_or(RecursorKind::Weak);
    let mut verdict = RecursorVerdict { symbol: f.into(), target: c.into(), kind, clauses: Vec::new() };
    let shape = match recursor_shape(sig, f, c) {
        Ok(shape) => shape,
        Err(detail) => {
            verdict.clauses.push(ClauseResult::fail(Clause::Shape, detail, None));
            for clause in &Clause::ALL[1..] {
                verdict.clauses.push(ClauseResult { clause: *clause, outcome: Outcome::Skipped, detail: None, position: None });
            }
            return verdict;
        }
    };
    verdict.clauses.push(ClauseResult::pass(Clause::Shape));
    let rules: Vec<&RewriteRule> = sig.rules_for(f).collect();

    // Parameters are shared by all rules and may be used on the right.
    let params = infer_parameters(sig, c);
    let escape = rules.iter().enumerate().find_map(|(n, rule)| {
        let fv = free_vars(&rule.rhs);
        shape.indices.iter().enumerate().find_map(|(m, &i)| match &rule.lhs_args[i] {
            Term::Var(x) if m < params || !fv.contains(x) => None,
            Term::Var(x) => Some(format!("rule {} uses `{x}` (argument {}) in its right-hand side", n + 1, i + 1)),
            t => Some(format!("rule {} has the non-variable `{t}` as argument {}", n + 1, i + 1)),
        })
    });
    verdict.clauses.push(match escape {
        None => ClauseResult::pass(Clause::Escape),
        Some(d) => ClauseResult::fail(Clause::Escape, d, None),
    });

    let guard = rules.iter().enumerate().find_map(|(n, rule)| {
        let t = &rule.lhs_args[shape.major];
        let ok = t.head_symbol().is_some_and(|k| constructors_of(sig, c).contains(k) || sig.constructor_target(k).as_deref() == Some(c));
        (!ok).then(|| format!("rule {} matches `{t}`, which is not headed by a constructor of `{c}`", n + 1))
    });
    verdict.clauses.push(match guard {
        None => ClauseResult::pass(Clause::Guard),
        Some(d) => ClauseResult::fail(Clause::Guard, d, None),
    });

    let sets = compute_pos_sets(sig, &shape.w).unwrap_or_default();
    let bad = class_occurrences(sig, c, &shape.w).into_iter().find(|p| !sets.positive.contains(p));
    verdict.clauses.push(match bad {
        None => ClauseResult::pass(Clause::Positivity),
        Some(p) => {
            let d = shape.w.subterm_at(&p).map(|t| t.to_string()).unwrap_or_default();
            ClauseResult::fail(Clause::Positivity, format!("`{d}` occurs at a non-positive position of W"), Some(p))
        }
    });

    let greater = shape.w.symbols().into_iter().find(|g| sig.is_predicate(g) && sig.precedence.greater(g, c));
    verdict.clauses.push(match greater {
        None => ClauseResult::pass(Clause::Greater),
        Some(g) => ClauseResult::fail(Clause::Greater, format!("`{g}` is greater than `{c}` and occurs in W"), None),
    });

    let signed =
        sig.mon_plus(c).into_iter().map(|i| (i, Polarity::Positive)).chain(sig.mon_minus(c).into_iter().map(|i| (i, Polarity::Negative)));
    let mut mon = ClauseResult::pass(Clause::Mon);
    for (i, polarity) in signed {
        let Some(z) = shape.index_names.get(i - 1) else { continue };
        let allowed = sets.get(polarity);
        if let Some(p) = var_positions(z, &shape.w).into_iter().find(|p| !allowed.contains(p)) {
            let sign = if polarity == Polarity::Positive { "+" } else { "-" };
            mon = ClauseResult::fail(
                Clause::Mon,
                format!("`{z}` (argument {i} of `{c}`, Mon{sign}) occurs at a position outside Pos{sign}(W)"),
                Some(p),
            );
            break;
        }
    }
    verdict.clauses.push(mon);
    verdict
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    IntroductionBased,
    EliminationBased,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursorEntry {
    pub symbol: Name,
    pub origin: RecursorOrigin,
    pub kind: RecursorKind,
    pub head_computability: Status,
    /// Conditions on strong recursors that this checker does not verify.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong_conditions: Option<Status>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub target: Name,
    pub mode: Mode,
    pub recursors: Vec<RecursorEntry>,
    pub completeness: Status,
    pub head_computability: Status,
    /// Obligations checked on the type in this mode.
    pub obligations: Vec<&'static str>,
    /// Obligations waived in this mode.
    pub waived: Vec<&'static str>,
}

pub fn admissibility_report(sig: &Signature, c: &str) -> AdmissibilityReport {
    let recursors: Vec<RecursorEntry> = sig
        .recursors_of(c)
        .iter()
        .map(|(f, origin)| {
            let kind = sig.get(f).map(|d| kind_of(&d.ty)).unwrap_or(RecursorKind::Weak);
            RecursorEntry {
                symbol: f.clone(),
                origin: *origin,
                kind,
                head_computability: if *origin == RecursorOrigin::Canonical { Status::Proven } else { Status::Assumed },
                strong_conditions: (kind == RecursorKind::Strong).then_some(Status::Assumed),
            }
        })
        .collect();
    if recursors.is_empty() {
        return AdmissibilityReport {
            target: c.into(),
            mode: Mode::IntroductionBased,
            recursors,
            completeness: Status::NotApplicable,
            head_computability: Status::NotApplicable,
            obligations: vec!["I6", "safety"],
            waived: vec![],
        };
    }
    let completeness = if recursors.iter().any(|r| r.origin == RecursorOrigin::Canonical) { Status::Proven } else { Status::Assumed };
    let head_computability =
        if recursors.iter().all(|r| r.head_computability == Status::Proven) { Status::Proven } else { Status::Assumed };
    AdmissibilityReport {
        target: c.into(),
        mode: Mode::EliminationBased,
        recursors,
        completeness,
        head_computability,
        obligations: vec!["recursor clauses"],
        waived: vec!["I6", "safety"],
    }
}
