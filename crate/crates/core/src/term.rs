//! Terms, positions, environments and capture-avoiding substitution.
//!
//! Variables are named. Binders are renamed on the fly when substitution
//! would otherwise capture a free variable, and [`alpha_equal`] compares
//! terms up to the names of bound variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

pub type Name = Arc<str>;

/// Binder name used for non-dependent products (`A => B`).
pub const ANON: &str = "_";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Star,
    Box,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Sort(Sort),
    Var(Name),
    Sym(Name),
    Abs(Name, Arc<Term>, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Prod(Name, Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn star() -> Term {
        Term::Sort(Sort::Star)
    }

    pub fn boxed() -> Term {
        Term::Sort(Sort::Box)
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn sym(name: &str) -> Term {
        Term::Sym(name.into())
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Arc::new(fun), Arc::new(arg))
    }

    pub fn abs(binder: &str, annot: Term, body: Term) -> Term {
        Term::Abs(binder.into(), Arc::new(annot), Arc::new(body))
    }

    pub fn prod(binder: &str, domain: Term, codomain: Term) -> Term {
        Term::Prod(binder.into(), Arc::new(domain), Arc::new(codomain))
    }

    pub fn arrow(domain: Term, codomain: Term) -> Term {
        Term::prod(ANON, domain, codomain)
    }

    /// `head a1 ... an` as a left-nested application spine.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// The symbol heading an application spine, if any.
    pub fn head_symbol(&self) -> Option<&Name> {
        match self.spine().0 {
            Term::Sym(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, Term::Sort(_))
    }

    /// Peels leading products: binders with their domains, then the codomain.
    pub fn telescope(&self) -> (Vec<(Name, Term)>, &Term) {
        let mut binders = Vec::new();
        let mut cur = self;
        while let Term::Prod(x, a, b) = cur {
            binders.push((x.clone(), (**a).clone()));
            cur = b;
        }
        (binders, cur)
    }

    /// Rebuilds `(x1:T1)...(xn:Tn)body`.
    pub fn close_prods(binders: &[(Name, Term)], body: Term) -> Term {
        binders.iter().rev().fold(body, |acc, (x, t)| Term::Prod(x.clone(), Arc::new(t.clone()), Arc::new(acc)))
    }

    /// Kinds are `*` and products whose codomain is a kind.
    pub fn is_kind(&self) -> bool {
        match self {
            Term::Sort(Sort::Star) => true,
            Term::Prod(_, _, b) => b.is_kind(),
            _ => false,
        }
    }

    /// Every symbol name occurring in the term.
    pub fn symbols(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Sym(f) => {
                out.insert(f.clone());
            }
            Term::Sort(_) | Term::Var(_) => {}
            Term::App(a, b) | Term::Abs(_, a, b) | Term::Prod(_, a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Sort(_) | Term::Var(_) | Term::Sym(_) => 1,
            Term::App(a, b) | Term::Abs(_, a, b) | Term::Prod(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// The direct child addressed by one position digit.
    pub fn child(&self, digit: u8) -> Option<&Term> {
        match (self, digit) {
            (Term::App(f, _), 1) => Some(f),
            (Term::App(_, a), 2) => Some(a),
            (Term::Abs(_, a, _), 1) | (Term::Prod(_, a, _), 1) => Some(a),
            (Term::Abs(_, _, b), 2) | (Term::Prod(_, _, b), 2) => Some(b),
            _ => None,
        }
    }

    pub fn subterm_at(&self, pos: &Position) -> Option<&Term> {
        pos.0.iter().try_fold(self, |t, &d| t.child(d))
    }

    /// Replaces the subterm at `pos`. No renaming happens: the caller is
    /// responsible for scoping of the inserted term.
    pub fn replace_at(&self, pos: &[u8], new: Term) -> Option<Term> {
        let Some((&d, rest)) = pos.split_first() else {
            return Some(new);
        };
        Some(match (self, d) {
            (Term::App(f, a), 1) => Term::App(Arc::new(f.replace_at(rest, new)?), a.clone()),
            (Term::App(f, a), 2) => Term::App(f.clone(), Arc::new(a.replace_at(rest, new)?)),
            (Term::Abs(x, a, b), 1) => Term::Abs(x.clone(), Arc::new(a.replace_at(rest, new)?), b.clone()),
            (Term::Abs(x, a, b), 2) => Term::Abs(x.clone(), a.clone(), Arc::new(b.replace_at(rest, new)?)),
            (Term::Prod(x, a, b), 1) => Term::Prod(x.clone(), Arc::new(a.replace_at(rest, new)?), b.clone()),
            (Term::Prod(x, a, b), 2) => Term::Prod(x.clone(), a.clone(), Arc::new(b.replace_at(rest, new)?)),
            _ => return None,
        })
    }
}

/// A Dewey position: `1` is the function of an application, the domain of a
/// product or the annotation of an abstraction; `2` is the argument, the
/// codomain or the body.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<u8>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, digit: u8) -> Position {
        let mut p = self.0.clone();
        p.push(digit);
        Position(p)
    }

    /// `self · other`
    pub fn concat(&self, other: &Position) -> Position {
        let mut p = self.0.clone();
        p.extend_from_slice(&other.0);
        Position(p)
    }

    pub fn parse(s: &str) -> Option<Position> {
        if s.is_empty() || s == "ε" {
            return Some(Position::root());
        }
        s.split('.')
            .map(|d| match d {
                "1" => Some(1),
                "2" => Some(2),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Position)
    }

    /// Dot-joined digits; the root is the empty string.
    pub fn dotted(&self) -> String {
        self.0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.dotted())
        }
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.dotted())
    }
}

/// Ordered typing environment `x1:T1, ..., xn:Tn`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Environment {
    bindings: Vec<(Name, Term)>,
}

impl Environment {
    pub fn new() -> Environment {
        Environment::default()
    }

    pub fn from_bindings(bindings: Vec<(Name, Term)>) -> Result<Environment, Name> {
        let mut env = Environment::new();
        for (x, t) in bindings {
            if env.contains(&x) {
                return Err(x);
            }
            env.bindings.push((x, t));
        }
        Ok(env)
    }

    pub fn bindings(&self) -> &[(Name, Term)] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn lookup(&self, x: &str) -> Option<&Term> {
        self.bindings.iter().rev().find(|(y, _)| &**y == x).map(|(_, t)| t)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.lookup(x).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.bindings.iter().map(|(x, _)| x)
    }

    /// Extends the environment. Panics on a duplicate name; callers rename
    /// binders first (see [`fresh_name`]).
    pub fn push(&mut self, x: Name, t: Term) {
        assert!(!self.contains(&x), "duplicate binding {x}");
        self.bindings.push((x, t));
    }

    pub fn pop(&mut self) -> Option<(Name, Term)> {
        self.bindings.pop()
    }
}

/// A finite map from variables to terms, applied simultaneously.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermSubstitution {
    map: BTreeMap<Name, Term>,
}

impl TermSubstitution {
    pub fn new() -> TermSubstitution {
        TermSubstitution::default()
    }

    pub fn single(x: &str, t: Term) -> TermSubstitution {
        let mut s = TermSubstitution::new();
        s.insert(x.into(), t);
        s
    }

    pub fn insert(&mut self, x: Name, t: Term) -> Option<Term> {
        self.map.insert(x, t)
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.map.get(x)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Name> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.map.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    fn without(&self, x: &str) -> TermSubstitution {
        let mut s = self.clone();
        s.map.remove(x);
        s
    }

    /// Free variables of the terms in the range of the substitution.
    fn range_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for t in self.map.values() {
            collect_free(t, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl FromIterator<(Name, Term)> for TermSubstitution {
    fn from_iter<I: IntoIterator<Item = (Name, Term)>>(iter: I) -> Self {
        TermSubstitution { map: iter.into_iter().collect() }
    }
}

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn collect_free(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Sort(_) | Term::Sym(_) => {}
        Term::App(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::Abs(x, a, b) | Term::Prod(x, a, b) => {
            collect_free(a, bound, out);
            bound.push(x.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
    }
}

pub fn occurs_free(x: &str, t: &Term) -> bool {
    match t {
        Term::Var(y) => &**y == x,
        Term::Sort(_) | Term::Sym(_) => false,
        Term::App(a, b) => occurs_free(x, a) || occurs_free(x, b),
        Term::Abs(y, a, b) | Term::Prod(y, a, b) => occurs_free(x, a) || (&**y != x && occurs_free(x, b)),
    }
}

/// A variant of `base` (`base0`, `base1`, ...) not in `avoid`.
pub fn fresh_name(base: &str, avoid: &dyn Fn(&str) -> bool) -> Name {
    if !avoid(base) {
        return base.into();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() || stem == ANON { "x" } else { stem };
    (0..).map(|i| format!("{stem}{i}")).find(|n| !avoid(n)).map(Into::into).expect("unbounded supply of names")
}

pub fn substitute(t: &Term, theta: &TermSubstitution) -> Term {
    if theta.is_empty() {
        return t.clone();
    }
    let range = theta.range_vars();
    subst_rec(t, theta, &range)
}

fn subst_rec(t: &Term, theta: &TermSubstitution, range: &BTreeSet<Name>) -> Term {
    match t {
        Term::Var(x) => theta.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::Sort(_) | Term::Sym(_) => t.clone(),
        Term::App(a, b) => Term::App(Arc::new(subst_rec(a, theta, range)), Arc::new(subst_rec(b, theta, range))),
        Term::Abs(x, a, b) | Term::Prod(x, a, b) => {
            let a2 = subst_rec(a, theta, range);
            let inner = theta.without(x);
            let (x2, b2) = if inner.is_empty() {
                (x.clone(), (**b).clone())
            } else if range.contains(x) && free_vars(b).iter().any(|y| inner.get(y).is_some()) {
                // The binder would capture a variable of the range: rename it.
                let body_fv = free_vars(b);
                let fresh = fresh_name(x, &|n| range.contains(n) || body_fv.contains(n) || inner.get(n).is_some());
                let renamed = subst_rec(b, &TermSubstitution::single(x, Term::Var(fresh.clone())), &[fresh.clone()].into());
                let inner_range = inner.range_vars();
                (fresh, subst_rec(&renamed, &inner, &inner_range))
            } else {
                let inner_range = inner.range_vars();
                (x.clone(), subst_rec(b, &inner, &inner_range))
            };
            match t {
                Term::Abs(..) => Term::Abs(x2, Arc::new(a2), Arc::new(b2)),
                _ => Term::Prod(x2, Arc::new(a2), Arc::new(b2)),
            }
        }
    }
}

/// `t[x := u]`
pub fn subst1(t: &Term, x: &str, u: &Term) -> Term {
    substitute(t, &TermSubstitution::single(x, u.clone()))
}

pub fn alpha_equal(t: &Term, u: &Term) -> bool {
    alpha_rec(t, u, &mut Vec::new(), &mut Vec::new())
}

fn alpha_rec(t: &Term, u: &Term, lt: &mut Vec<Name>, ru: &mut Vec<Name>) -> bool {
    match (t, u) {
        (Term::Sort(a), Term::Sort(b)) => a == b,
        (Term::Sym(f), Term::Sym(g)) => f == g,
        (Term::Var(x), Term::Var(y)) => {
            let ix = lt.iter().rposition(|n| n == x);
            let iy = ru.iter().rposition(|n| n == y);
            match (ix, iy) {
                (None, None) => x == y,
                (Some(i), Some(j)) => lt.len() - i == ru.len() - j,
                _ => false,
            }
        }
        (Term::App(f, a), Term::App(g, b)) => alpha_rec(f, g, lt, ru) && alpha_rec(a, b, lt, ru),
        (Term::Abs(x, a, b), Term::Abs(y, c, d)) | (Term::Prod(x, a, b), Term::Prod(y, c, d)) => {
            if !alpha_rec(a, c, lt, ru) {
                return false;
            }
            lt.push(x.clone());
            ru.push(y.clone());
            let r = alpha_rec(b, d, lt, ru);
            lt.pop();
            ru.pop();
            r
        }
        _ => false,
    }
}

/// Positions of the free occurrences of `x` in `t`.
pub fn var_positions(x: &str, t: &Term) -> BTreeSet<Position> {
    let mut out = BTreeSet::new();
    var_pos_rec(x, t, &mut Vec::new(), &mut out);
    out
}

fn var_pos_rec(x: &str, t: &Term, here: &mut Vec<u8>, out: &mut BTreeSet<Position>) {
    match t {
        Term::Var(y) if &**y == x => {
            out.insert(Position(here.clone()));
        }
        Term::Var(_) | Term::Sort(_) | Term::Sym(_) => {}
        Term::App(a, b) => {
            here.push(1);
            var_pos_rec(x, a, here, out);
            here.pop();
            here.push(2);
            var_pos_rec(x, b, here, out);
            here.pop();
        }
        Term::Abs(y, a, b) | Term::Prod(y, a, b) => {
            here.push(1);
            var_pos_rec(x, a, here, out);
            here.pop();
            if &**y != x {
                here.push(2);
                var_pos_rec(x, b, here, out);
                here.pop();
            }
        }
    }
}

/// Positions at which the symbol `f` occurs in `t`.
pub fn symbol_positions(f: &str, t: &Term) -> BTreeSet<Position> {
    let mut out = BTreeSet::new();
    sym_pos_rec(&|g| g == f, t, &mut Vec::new(), &mut out);
    out
}

/// Positions at which any symbol accepted by `pred` occurs in `t`.
pub fn symbol_positions_where(pred: &dyn Fn(&str) -> bool, t: &Term) -> BTreeSet<Position> {
    let mut out = BTreeSet::new();
    sym_pos_rec(pred, t, &mut Vec::new(), &mut out);
    out
}

fn sym_pos_rec(pred: &dyn Fn(&str) -> bool, t: &Term, here: &mut Vec<u8>, out: &mut BTreeSet<Position>) {
    match t {
        Term::Sym(g) if pred(g) => {
            out.insert(Position(here.clone()));
        }
        Term::Var(_) | Term::Sort(_) | Term::Sym(_) => {}
        Term::App(a, b) | Term::Abs(_, a, b) | Term::Prod(_, a, b) => {
            here.push(1);
            sym_pos_rec(pred, a, here, out);
            here.pop();
            here.push(2);
            sym_pos_rec(pred, b, here, out);
            here.pop();
        }
    }
}
