//! Inductive declarations: positive and negative positions, parameters,
//! positivity, accessibility, (I6), primitive types and the monotonicity
//! conditions on defined-predicate rules.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::signature::{RewriteRule, Signature, SignatureError};
use crate::term::{alpha_equal, free_vars, fresh_name, substitute, var_positions, Name, Position, Term, TermSubstitution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn times(self, other: Polarity) -> Polarity {
        if self == other {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PosSets {
    pub positive: BTreeSet<Position>,
    pub negative: BTreeSet<Position>,
}

impl PosSets {
    pub fn get(&self, polarity: Polarity) -> &BTreeSet<Position> {
        match polarity {
            Polarity::Positive => &self.positive,
            Polarity::Negative => &self.negative,
        }
    }
}

pub fn compute_pos_sets(sig: &Signature, t: &Term) -> Result<PosSets, SignatureError> {
    if let Some(g) = t.symbols().into_iter().find(|g| !sig.contains(g)) {
        return Err(SignatureError::UnknownSymbol(g));
    }
    let mut sets = PosSets::default();
    pos_rec(sig, t, Polarity::Positive, &mut Vec::new(), &mut sets);
    Ok(sets)
}

/// `Pos^δ(t)` for a single sign.
pub fn positions_with(sig: &Signature, t: &Term, polarity: Polarity) -> Result<BTreeSet<Position>, SignatureError> {
    let sets = compute_pos_sets(sig, t)?;
    Ok(sets.get(polarity).clone())
}

// Computes Pos^+ and Pos^- together: a position reached with sign `s`
// relative to the root is in Pos^+ when `s` is positive.
fn pos_rec(sig: &Signature, t: &Term, sign: Polarity, here: &mut Vec<u8>, out: &mut PosSets) {
    let mark = |out: &mut PosSets, p: Position| match sign {
        Polarity::Positive => out.positive.insert(p),
        Polarity::Negative => out.negative.insert(p),
    };
    match t {
        Term::Sort(_) | Term::Var(_) => {
            mark(out, Position(here.clone()));
        }
        Term::Prod(_, u, v) => {
            here.push(1);
            pos_rec(sig, u, sign.flip(), here, out);
            here.pop();
            here.push(2);
            pos_rec(sig, v, sign, here, out);
            here.pop();
        }
        Term::Abs(_, _, v) => {
            here.push(2);
            pos_rec(sig, v, sign, here, out);
            here.pop();
        }
        Term::Sym(_) | Term::App(..) => {
            let (head, args) = t.spine();
            let Term::Sym(f) = head else {
                if let Term::App(fun, _) = t {
                    here.push(1);
                    pos_rec(sig, fun, sign, here, out);
                    here.pop();
                }
                return;
            };
            let n = args.len();
            let depth = here.len();
            here.extend(std::iter::repeat_n(1, n));
            mark(out, Position(here.clone()));
            here.truncate(depth);
            let plus = sig.mon_plus(f);
            let minus = sig.mon_minus(f);
            for (i, arg) in args.iter().enumerate() {
                let i = i + 1;
                let mut signs = Vec::new();
                if plus.contains(&i) {
                    signs.push(sign);
                }
                if minus.contains(&i) {
                    signs.push(sign.flip());
                }
                for s in signs {
                    here.extend(std::iter::repeat_n(1, n - i));
                    here.push(2);
                    pos_rec(sig, arg, s, here, out);
                    here.truncate(depth);
                }
            }
        }
    }
}

/// Positions of symbols of the precedence class of `c` in `t`.
pub fn class_occurrences(sig: &Signature, c: &str, t: &Term) -> BTreeSet<Position> {
    let class = sig.equivalence_class(c);
    crate::term::symbol_positions_where(&|g| class.iter().any(|d| &**d == g), t)
}

/// Visits every maximal application spine headed by a symbol accepted by
/// `pred`, passing the head and the arguments.
fn for_each_application<'a>(t: &'a Term, pred: &dyn Fn(&str) -> bool, f: &mut dyn FnMut(&'a Name, &[&'a Term])) {
    match t {
        Term::Sort(_) | Term::Var(_) => {}
        Term::Sym(_) | Term::App(..) => {
            let (head, args) = t.spine();
            match head {
                Term::Sym(g) if pred(g) => f(g, &args),
                Term::Sym(_) => {}
                other => for_each_application(other, pred, f),
            }
            for a in args {
                for_each_application(a, pred, f);
            }
        }
        Term::Abs(_, a, b) | Term::Prod(_, a, b) => {
            for_each_application(a, pred, f);
            for_each_application(b, pred, f);
        }
    }
}

fn collect_names(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Sort(_) | Term::Sym(_) => {}
        Term::App(a, b) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        Term::Abs(x, a, b) | Term::Prod(x, a, b) => {
            out.insert(x.clone());
            collect_names(a, out);
            collect_names(b, out);
        }
    }
}

/// A constructor type split at its arity: `(x:T) C v`.
#[derive(Clone, Debug)]
pub struct ConstructorShape {
    pub name: Name,
    pub binders: Vec<(Name, Term)>,
    pub output: Term,
}

impl ConstructorShape {
    pub fn of(sig: &Signature, c: &str) -> Option<ConstructorShape> {
        let d = sig.get(c)?;
        let (binders, output) = d.split_type();
        Some(ConstructorShape { name: d.name.clone(), binders, output })
    }

    pub fn output_args(&self) -> Vec<&Term> {
        self.output.spine().1
    }

    /// Position of the type of argument `j` (1-based) in the full type.
    pub fn arg_type_position(j: usize) -> Position {
        let mut p = vec![2; j - 1];
        p.push(1);
        Position(p)
    }
}

/// The constructors considered for `c`: the declared list if `c` was
/// declared with `inductive`, else every extended constructor.
pub fn constructors_of(sig: &Signature, c: &str) -> Vec<Name> {
    match sig.inductive(c) {
        Some(spec) => spec.constructors.clone(),
        None => sig.extended_constructors_of(c),
    }
}

/// Length of the longest prefix `q` such that `C : (q:Q)(z:V)*` and every
/// constructor has type `(q:Q)(x:T) C q v`, with every occurrence of a type
/// equivalent to `C` in `T` applied to `q` first.
pub fn infer_parameters(sig: &Signature, c: &str) -> usize {
    let Some(decl) = sig.get(c) else { return 0 };
    let (c_binders, _) = decl.split_type();
    let shapes: Vec<ConstructorShape> = constructors_of(sig, c).iter().filter_map(|k| ConstructorShape::of(sig, k)).collect();
    let class = sig.equivalence_class(c);
    let in_class = |g: &str| class.iter().any(|d| &**d == g);

    let mut names = BTreeSet::new();
    collect_names(&decl.ty, &mut names);
    for s in &shapes {
        for (x, t) in &s.binders {
            names.insert(x.clone());
            collect_names(t, &mut names);
        }
        collect_names(&s.output, &mut names);
    }
    let mut canon: Vec<Name> = Vec::new();
    let mut theta_c = TermSubstitution::new();
    let mut theta_k: Vec<TermSubstitution> = vec![TermSubstitution::new(); shapes.len()];
    let mut k = 0;
    'grow: while k < c_binders.len() {
        let q = fresh_name("q", &|n| names.contains(n) || canon.iter().any(|m| &**m == n));
        let expected = substitute(&c_binders[k].1, &theta_c);
        for (s, theta) in shapes.iter().zip(&theta_k) {
            let Some((_, t)) = s.binders.get(k) else { break 'grow };
            if !alpha_equal(&substitute(t, theta), &expected) {
                break 'grow;
            }
            let x = &s.binders[k].0;
            if !matches!(s.output_args().get(k), Some(Term::Var(y)) if y == x) {
                break 'grow;
            }
        }
        // Nested occurrences must pass the parameter through unchanged.
        for s in &shapes {
            let x = &s.binders[k].0;
            let mut ok = true;
            for (j, (_, t)) in s.binders.iter().enumerate().skip(k + 1) {
                if s.binders[k + 1..j].iter().any(|(y, _)| y == x) {
                    continue;
                }
                for_each_application(t, &in_class, &mut |_, args| {
                    if !matches!(args.get(k), Some(Term::Var(y)) if y == x) {
                        ok = false;
                    }
                });
            }
            if !ok {
                break 'grow;
            }
        }
        theta_c.insert(c_binders[k].0.clone(), Term::Var(q.clone()));
        for (s, theta) in shapes.iter().zip(theta_k.iter_mut()) {
            theta.insert(s.binders[k].0.clone(), Term::Var(q.clone()));
        }
        canon.push(q);
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Positivity {
    StrictlyPositive,
    Positive {
        /// First argument breaking strict positivity.
        constructor: Name,
        arg: usize,
    },
    Negative {
        constructor: Name,
        arg: usize,
        /// Offending occurrence inside the argument type.
        position: Position,
        /// The same occurrence inside the constructor type.
        type_position: Position,
    },
}

pub(crate) fn strict_argument(sig: &Signature, c: &str, t: &Term) -> bool {
    let occ = class_occurrences(sig, c, t);
    if occ.is_empty() {
        return true;
    }
    let (tele, body) = t.telescope();
    let class = sig.equivalence_class(c);
    let head_ok = matches!(body.head_symbol(), Some(d) if class.contains(d));
    head_ok && tele.iter().all(|(_, w)| class_occurrences(sig, c, w).is_empty()) && {
        let args = body.spine().1;
        args.iter().all(|a| class_occurrences(sig, c, a).is_empty())
    }
}

pub fn check_positivity(sig: &Signature, c: &str) -> Positivity {
    let mut weakest = Positivity::StrictlyPositive;
    for k in constructors_of(sig, c) {
        let Some(shape) = ConstructorShape::of(sig, &k) else { continue };
        for (j, (_, t)) in shape.binders.iter().enumerate() {
            let j = j + 1;
            let positive = positions_with(sig, t, Polarity::Positive).unwrap_or_default();
            if let Some(p) = class_occurrences(sig, c, t).into_iter().find(|p| !positive.contains(p)) {
                return Positivity::Negative {
                    constructor: k.clone(),
                    arg: j,
                    type_position: ConstructorShape::arg_type_position(j).concat(&p),
                    position: p,
                };
            }
            if weakest == Positivity::StrictlyPositive && !strict_argument(sig, c, t) {
                weakest = Positivity::Positive { constructor: k.clone(), arg: j };
            }
        }
    }
    weakest
}

/// `Acc(c)`: argument indices in whose type every occurrence of a type
/// equivalent to the target is positive.
pub fn accessible_arguments(sig: &Signature, c: &str) -> BTreeSet<usize> {
    let Some(target) = sig.constructor_target(c) else { return BTreeSet::new() };
    let Some(shape) = ConstructorShape::of(sig, c) else { return BTreeSet::new() };
    shape
        .binders
        .iter()
        .enumerate()
        .filter(|(_, (_, t))| {
            let positive = positions_with(sig, t, Polarity::Positive).unwrap_or_default();
            class_occurrences(sig, &target, t).is_subset(&positive)
        })
        .map(|(j, _)| j + 1)
        .collect()
}

pub fn compute_accessibility(sig: &Signature, c: &str) -> BTreeMap<Name, BTreeSet<usize>> {
    constructors_of(sig, c)
        .into_iter()
        .map(|k| {
            let acc = accessible_arguments(sig, &k);
            (k, acc)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum I6 {
    Satisfied,
    Violated {
        constructor: Name,
        variable: Name,
        /// Accessible argument whose type mentions the variable.
        arg: usize,
    },
}

pub fn check_i6(sig: &Signature, c: &str) -> I6 {
    for k in constructors_of(sig, c) {
        let Some(shape) = ConstructorShape::of(sig, &k) else { continue };
        let acc = accessible_arguments(sig, &k);
        let outputs = shape.output_args();
        for (i, (x, tx)) in shape.binders.iter().enumerate() {
            if !tx.is_kind() {
                continue;
            }
            // A later binder with the same name shadows x from its body on.
            let shadow = shape.binders[i + 1..].iter().position(|(y, _)| y == x).map(|p| i + 1 + p);
            let scope_end = shadow.unwrap_or(shape.binders.len() - 1);
            let used_at = (i + 1..=scope_end).find(|&j| acc.contains(&(j + 1)) && free_vars(&shape.binders[j].1).contains(x));
            let Some(j) = used_at else { continue };
            if shadow.is_some() || !outputs.iter().any(|v| matches!(v, Term::Var(y) if y == x)) {
                return I6::Violated { constructor: k.clone(), variable: x.clone(), arg: j + 1 };
            }
        }
    }
    I6::Satisfied
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Primitive {
    Primitive,
    NotPrimitive { symbol: Name, reason: String },
}

pub fn classify_primitive(sig: &Signature, c: &str) -> Primitive {
    let class = sig.equivalence_class(c);
    let mut alive: BTreeSet<Name> = class.iter().cloned().collect();
    let mut reasons: BTreeMap<Name, String> = BTreeMap::new();
    loop {
        let mut removed = false;
        for d in class.iter().filter(|d| alive.contains(*d)) {
            if let Some(reason) = primitive_violation(sig, c, d, &alive) {
                reasons.insert(d.clone(), reason);
                alive.remove(d);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }
    match class.iter().find(|d| !alive.contains(*d)) {
        None => Primitive::Primitive,
        Some(d) => Primitive::NotPrimitive { symbol: d.clone(), reason: reasons[d].clone() },
    }
}

fn primitive_violation(sig: &Signature, c: &str, d: &Name, alive: &BTreeSet<Name>) -> Option<String> {
    let decl = sig.get(d)?;
    if decl.ty != Term::star() {
        return Some(format!("`{d}` has type `{}`, not `*`", decl.ty));
    }
    for k in sig.extended_constructors_of(d) {
        let shape = ConstructorShape::of(sig, &k)?;
        let acc = accessible_arguments(sig, &k);
        for (j, (_, t)) in shape.binders.iter().enumerate() {
            if !acc.contains(&(j + 1)) {
                return Some(format!("argument {} of `{k}` is not accessible", j + 1));
            }
            let ok = match t {
                Term::Sym(e) if alive.contains(e) => true,
                Term::Sym(e) if sig.precedence.greater(c, e) && sig.is_constant_predicate(e) => {
                    classify_primitive(sig, e) == Primitive::Primitive
                }
                _ => false,
            };
            if !ok {
                return Some(format!("argument {} of `{k}` has type `{t}`, not a primitive type", j + 1));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum PredicateRuleViolation {
    GreaterSymbol { symbol: Name },
    NotPredicateVariable { index: usize },
    Monotonicity { index: usize, polarity: Polarity, position: Position },
}

/// For a rule `F l --> r` defining a predicate: no `G > F` in `r`, and for
/// every `i` in `Mon^ε(F)`, `l_i` is a variable occurring in `r` only at
/// `Pos^ε(r)` positions.
pub fn check_defined_predicate_rule(sig: &Signature, rule: &RewriteRule) -> Result<(), PredicateRuleViolation> {
    if let Some(g) = rule.rhs.symbols().into_iter().find(|g| sig.precedence.greater(g, &rule.head)) {
        return Err(PredicateRuleViolation::GreaterSymbol { symbol: g });
    }
    let sets = compute_pos_sets(sig, &rule.rhs).unwrap_or_default();
    let signed = sig
        .mon_plus(&rule.head)
        .into_iter()
        .map(|i| (i, Polarity::Positive))
        .chain(sig.mon_minus(&rule.head).into_iter().map(|i| (i, Polarity::Negative)));
    for (i, polarity) in signed {
        let Some(Term::Var(x)) = rule.lhs_args.get(i - 1) else {
            return Err(PredicateRuleViolation::NotPredicateVariable { index: i });
        };
        let allowed = sets.get(polarity);
        if let Some(p) = var_positions(x, &rule.rhs).into_iter().find(|p| !allowed.contains(p)) {
            return Err(PredicateRuleViolation::Monotonicity { index: i, polarity, position: p });
        }
    }
    Ok(())
}

/// Summary of the analyses for one inductive type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InductiveDecl {
    pub name: Name,
    pub constructors: Vec<Name>,
    pub params: usize,
    pub acc: BTreeMap<Name, BTreeSet<usize>>,
    pub positivity: Positivity,
    pub i6: I6,
    pub primitive: Primitive,
}

pub fn analyze_inductive(sig: &Signature, c: &str) -> InductiveDecl {
    InductiveDecl {
        name: c.into(),
        constructors: constructors_of(sig, c),
        params: infer_parameters(sig, c),
        acc: compute_accessibility(sig, c),
        positivity: check_positivity(sig, c),
        i6: check_i6(sig, c),
        primitive: classify_primitive(sig, c),
    }
}
