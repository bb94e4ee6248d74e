//! Surface syntax: lexer, parser and printer for `.cac` source files.
//!
//! ```text
//! symbol f : T [mon+ i ...] [mon- j ...].
//! inductive C : T := c1 : T1 | c2 : T2 [mon+ i ...] [mon- j ...].
//! inductive C := c1 : T1 | ...                     // C declared earlier
//! rule lhs --> rhs [in x:T, ...] [with x'=t, ...].
//! recursor f for C.
//! recursor canonical for C.                        // generate rec_C
//! #fuel N.
//! #equiv f g ...
//! ```
//!
//! Terms: `*`, `[]`, `(x:A)B`, `A => B`, `[x:A]b`, application by
//! juxtaposition. `//` starts a line comment. Identifiers are parsed as
//! variables; [`resolve`] turns the ones naming declared symbols into
//! symbols.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::signature::RewriteRule;
use crate::term::{Name, Sort, Term, ANON};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonSpec {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

impl MonSpec {
    pub fn is_empty(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecursorRef {
    Named(Name),
    Canonical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Symbol { name: Name, ty: Term, mon: MonSpec },
    Inductive { name: Name, ty: Option<Term>, constructors: Vec<(Name, Term)>, mon: MonSpec },
    Rule { lhs: Term, rhs: Term, env: Option<Vec<(Name, Term)>>, rho: Vec<(Name, Term)> },
    Recursor { symbol: RecursorRef, target: Name },
    Fuel(usize),
    Equiv(Vec<Name>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned<T> {
    pub node: T,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceFile {
    pub decls: Vec<Spanned<Decl>>,
}

impl SourceFile {
    /// Structural equality of the declarations, ignoring source spans.
    pub fn same_decls(&self, other: &SourceFile) -> bool {
        self.decls.len() == other.decls.len() && self.decls.iter().zip(&other.decls).all(|(a, b)| a.node == b.node)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Star,
    Box,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Colon,
    Define,
    Dot,
    Comma,
    Bar,
    Arrow,
    RuleArrow,
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Box => f.write_str("`[]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Define => f.write_str("`:=`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`=>`"),
            Tok::RuleArrow => f.write_str("`-->`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    /// Char offset in the source.
    offset: usize,
    /// Char offset just past the token.
    end: usize,
}

const KEYWORDS: &[&str] = &["symbol", "inductive", "rule", "recursor", "for", "in", "with", "mon+", "mon-"];

fn is_ident_char(c: char) -> bool {
    if c.is_alphanumeric() {
        return true;
    }
    match c {
        '_' | '\'' | '#' | '+' | '~' | '!' | '?' | '&' | '@' | '$' | '%' | '^' | '<' | '>' => true,
        '⋆' | '□' | '⇒' | '→' | '⟶' => false,
        c => !c.is_ascii() && !c.is_whitespace(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (sl, sc, start) = (line, col, i);
        let at = |k: usize| chars.get(i + k).copied();
        let (tok, n) = match c {
            '*' | '⋆' => (Tok::Star, 1),
            '□' => (Tok::Box, 1),
            '[' if at(1) == Some(']') => (Tok::Box, 2),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ':' if at(1) == Some('=') => (Tok::Define, 2),
            ':' => (Tok::Colon, 1),
            '.' => (Tok::Dot, 1),
            ',' => (Tok::Comma, 1),
            '|' => (Tok::Bar, 1),
            '=' if at(1) == Some('>') => (Tok::Arrow, 2),
            '⇒' => (Tok::Arrow, 1),
            '=' => (Tok::Eq, 1),
            '-' if at(1) == Some('-') && at(2) == Some('>') => (Tok::RuleArrow, 3),
            '→' | '⟶' => (Tok::RuleArrow, 1),
            c if is_ident_char(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let mut word: String = chars[i..j].iter().collect();
                if word == "mon" && chars.get(j) == Some(&'-') && chars.get(j + 1) != Some(&'-') {
                    word.push('-');
                    j += 1;
                }
                (Tok::Ident(word), j - i)
            }
            c => {
                return Err(ParseError { line, col, message: format!("unexpected character `{c}`") });
            }
        };
        advance(&mut i, &mut line, &mut col, n);
        out.push(Token { tok, line: sl, col: sc, offset: start, end: i });
    }
    out.push(Token { tok: Tok::Eof, line, col, offset: i, end: i });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let t = self.here();
        Err(ParseError { line: t.line, col: t.col, message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s.into())
            }
            t => self.error(format!("expected an identifier, found {t}")),
        }
    }

    fn number(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Ident(s) => match s.parse() {
                Ok(n) => {
                    self.bump();
                    Ok(n)
                }
                Err(_) => self.error(format!("expected a number, found `{s}`")),
            },
            t => self.error(format!("expected a number, found {t}")),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let lhs = self.app()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.term()?;
            return Ok(Term::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()),
            Tok::Star | Tok::Box | Tok::LParen | Tok::LBrack => true,
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        if !self.starts_atom() {
            return self.error(format!("expected a term, found {}", self.peek()));
        }
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn binder_ahead(&self) -> bool {
        matches!(self.toks.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Ident(_)))
            && matches!(self.toks.get(self.pos + 2).map(|t| &t.tok), Some(Tok::Colon))
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                Ok(Term::star())
            }
            Tok::Box => {
                self.bump();
                Ok(Term::boxed())
            }
            Tok::Ident(_) => Ok(Term::Var(self.ident()?)),
            Tok::LParen if self.binder_ahead() => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let a = self.term()?;
                self.expect(Tok::RParen)?;
                let b = self.term()?;
                Ok(Term::Prod(x, Arc::new(a), Arc::new(b)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::LBrack => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let a = self.term()?;
                self.expect(Tok::RBrack)?;
                let b = self.term()?;
                Ok(Term::Abs(x, Arc::new(a), Arc::new(b)))
            }
            t => self.error(format!("expected a term, found {t}")),
        }
    }

    fn mon(&mut self) -> PResult<MonSpec> {
        let mut mon = MonSpec::default();
        loop {
            let plus = if self.is_keyword("mon+") {
                true
            } else if self.is_keyword("mon-") {
                false
            } else {
                return Ok(mon);
            };
            self.bump();
            loop {
                let n = self.number()?;
                if plus {
                    mon.plus.push(n);
                } else {
                    mon.minus.push(n);
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else if !matches!(self.peek(), Tok::Ident(s) if s.parse::<usize>().is_ok()) {
                    break;
                }
            }
        }
    }

    fn bindings(&mut self, sep: Tok) -> PResult<Vec<(Name, Term)>> {
        let mut out = Vec::new();
        loop {
            let x = self.ident()?;
            self.expect(sep.clone())?;
            out.push((x, self.term()?));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.error(format!("expected a declaration, found {}", self.peek()));
        };
        self.bump();
        match kw.as_str() {
            "symbol" => {
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.term()?;
                let mon = self.mon()?;
                Ok(Decl::Symbol { name, ty, mon })
            }
            "inductive" => {
                let name = self.ident()?;
                let ty = if *self.peek() == Tok::Colon {
                    self.bump();
                    Some(self.term()?)
                } else {
                    None
                };
                let mut constructors = Vec::new();
                if *self.peek() == Tok::Define {
                    self.bump();
                    if matches!(self.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str())) {
                        loop {
                            let c = self.ident()?;
                            self.expect(Tok::Colon)?;
                            constructors.push((c, self.term()?));
                            if *self.peek() == Tok::Bar {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                }
                let mon = self.mon()?;
                Ok(Decl::Inductive { name, ty, constructors, mon })
            }
            "rule" => {
                let lhs = self.term()?;
                self.expect(Tok::RuleArrow)?;
                let rhs = self.term()?;
                let env = if self.is_keyword("in") {
                    self.bump();
                    Some(self.bindings(Tok::Colon)?)
                } else {
                    None
                };
                let rho = if self.is_keyword("with") {
                    self.bump();
                    self.bindings(Tok::Eq)?
                } else {
                    Vec::new()
                };
                Ok(Decl::Rule { lhs, rhs, env, rho })
            }
            "recursor" => {
                let symbol = match self.peek() {
                    Tok::Ident(s) if s == "canonical" => {
                        self.bump();
                        RecursorRef::Canonical
                    }
                    _ => RecursorRef::Named(self.ident()?),
                };
                if !self.is_keyword("for") {
                    return self.error("expected `for`");
                }
                self.bump();
                let target = self.ident()?;
                Ok(Decl::Recursor { symbol, target })
            }
            "#fuel" => Ok(Decl::Fuel(self.number()?)),
            "#equiv" => {
                let mut names = vec![self.ident()?];
                while matches!(self.peek(), Tok::Ident(_)) {
                    names.push(self.ident()?);
                }
                if names.len() < 2 {
                    return self.error("`#equiv` needs at least two symbols");
                }
                Ok(Decl::Equiv(names))
            }
            other => {
                self.pos -= 1;
                self.error(format!("unknown declaration `{other}`"))
            }
        }
    }
}

pub fn parse_file(src: &str) -> Result<SourceFile, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut decls = Vec::new();
    while *p.peek() != Tok::Eof {
        let start = p.here().clone();
        let node = p.decl()?;
        if *p.peek() != Tok::Dot {
            return p.error(format!("expected `.` to end the declaration, found {}", p.peek()));
        }
        let end = p.bump().end;
        decls.push(Spanned { node, span: Span { line: start.line, col: start.col, len: end - start.offset } });
    }
    Ok(SourceFile { decls })
}

/// Parses a standalone term (as given on the command line).
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after term", p.peek()));
    }
    Ok(t)
}

/// Turns free variables naming symbols into symbols. Bound names shadow
/// symbols.
pub fn resolve(t: &Term, is_symbol: &dyn Fn(&str) -> bool) -> Term {
    resolve_rec(t, is_symbol, &mut Vec::new())
}

fn resolve_rec(t: &Term, is_symbol: &dyn Fn(&str) -> bool, bound: &mut Vec<Name>) -> Term {
    match t {
        Term::Var(x) if !bound.contains(x) && is_symbol(x) => Term::Sym(x.clone()),
        Term::Var(_) | Term::Sym(_) | Term::Sort(_) => t.clone(),
        Term::App(a, b) => Term::app(resolve_rec(a, is_symbol, bound), resolve_rec(b, is_symbol, bound)),
        Term::Abs(x, a, b) | Term::Prod(x, a, b) => {
            let a2 = resolve_rec(a, is_symbol, bound);
            bound.push(x.clone());
            let b2 = resolve_rec(b, is_symbol, bound);
            bound.pop();
            match t {
                Term::Abs(..) => Term::Abs(x.clone(), Arc::new(a2), Arc::new(b2)),
                _ => Term::Prod(x.clone(), Arc::new(a2), Arc::new(b2)),
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    ArrowLeft,
    AppFun,
    AppArg,
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, ctx: Ctx) -> fmt::Result {
    let paren = match t {
        Term::Prod(..) | Term::Abs(..) => ctx != Ctx::Top,
        Term::App(..) => ctx == Ctx::AppArg,
        _ => false,
    };
    if paren {
        f.write_str("(")?;
    }
    match t {
        Term::Sort(Sort::Star) => f.write_str("*")?,
        Term::Sort(Sort::Box) => f.write_str("[]")?,
        Term::Var(x) | Term::Sym(x) => f.write_str(x)?,
        Term::App(a, b) => {
            write_term(f, a, Ctx::AppFun)?;
            f.write_str(" ")?;
            write_term(f, b, Ctx::AppArg)?;
        }
        Term::Prod(x, a, b) if &**x == ANON => {
            write_term(f, a, Ctx::ArrowLeft)?;
            f.write_str(" => ")?;
            write_term(f, b, Ctx::Top)?;
        }
        Term::Prod(x, a, b) => {
            write!(f, "({x}:")?;
            write_term(f, a, Ctx::Top)?;
            f.write_str(")")?;
            write_term(f, b, Ctx::Top)?;
        }
        Term::Abs(x, a, b) => {
            write!(f, "[{x}:")?;
            write_term(f, a, Ctx::Top)?;
            f.write_str("]")?;
            write_term(f, b, Ctx::Top)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, Ctx::Top)
    }
}

impl fmt::Display for MonSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ");
        if !self.plus.is_empty() {
            write!(f, " mon+ {}", join(&self.plus))?;
        }
        if !self.minus.is_empty() {
            write!(f, " mon- {}", join(&self.minus))?;
        }
        Ok(())
    }
}

fn join_bindings(bs: &[(Name, Term)], sep: &str) -> String {
    bs.iter().map(|(x, t)| format!("{x}{sep}{t}")).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Symbol { name, ty, mon } => write!(f, "symbol {name} : {ty}{mon}."),
            Decl::Inductive { name, ty, constructors, mon } => {
                write!(f, "inductive {name}")?;
                if let Some(ty) = ty {
                    write!(f, " : {ty}")?;
                }
                if !constructors.is_empty() {
                    let cs: Vec<_> = constructors.iter().map(|(c, t)| format!("{c} : {t}")).collect();
                    write!(f, " := {}", cs.join(" | "))?;
                }
                write!(f, "{mon}.")
            }
            Decl::Rule { lhs, rhs, env, rho } => {
                write!(f, "rule {lhs} --> {rhs}")?;
                if let Some(env) = env {
                    write!(f, " in {}", join_bindings(env, ":"))?;
                }
                if !rho.is_empty() {
                    write!(f, " with {}", join_bindings(rho, "="))?;
                }
                f.write_str(".")
            }
            Decl::Recursor { symbol: RecursorRef::Named(s), target } => write!(f, "recursor {s} for {target}."),
            Decl::Recursor { symbol: RecursorRef::Canonical, target } => write!(f, "recursor canonical for {target}."),
            Decl::Fuel(n) => write!(f, "#fuel {n}."),
            Decl::Equiv(names) => {
                let ns: Vec<_> = names.iter().map(|n| n.to_string()).collect();
                write!(f, "#equiv {}.", ns.join(" "))
            }
        }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} --> {}", self.lhs(), self.rhs)?;
        if !self.env.is_empty() {
            write!(f, " in {}", join_bindings(self.env.bindings(), ":"))?;
        }
        if !self.rho.is_empty() {
            let rho: Vec<(Name, Term)> = self.rho.iter().map(|(x, t)| (x.clone(), t.clone())).collect();
            write!(f, " with {}", join_bindings(&rho, "="))?;
        }
        f.write_str(".")
    }
}

impl fmt::Display for SourceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{}", d.node)?;
        }
        Ok(())
    }
}
