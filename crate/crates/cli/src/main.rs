use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cac_core::inductive::compute_pos_sets;
use cac_core::recursor::generate_and_validate;
use cac_core::syntax::{parse_term, ParseError, Span};
use cac_core::typing::infer_type;
use cac_core::{check_source, normalize, Diagnostic, Environment, Fuel, Position, Session, Term};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cac", version, about = "Checker and evaluator for the Calculus of Algebraic Constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Source file
    file: PathBuf,
    /// Print a single JSON object on stdout
    #[arg(long)]
    json: bool,
    /// Maximum number of reduction steps per normalization
    #[arg(long, env = "CAC_FUEL")]
    fuel: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every declaration, rule and inductive type of a file
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Normalize a term in the signature of a file
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'e', long = "expr")]
        term: String,
    },
    /// Infer the type of a closed term
    Type {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'e', long = "expr")]
        term: String,
    },
    /// Generate and validate the canonical recursor of an inductive type
    Genrec {
        #[command(flatten)]
        common: Common,
        #[arg(short = 't', long = "type")]
        target: String,
    },
    /// Print the positive and negative positions of a term
    Pos {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'e', long = "expr")]
        term: String,
    },
}

/// Why a command stopped: bad input (exit 2) or a failed check (exit 1).
enum Failure {
    Input(Vec<Diagnostic>),
    Check(Vec<Diagnostic>),
}

struct Output {
    human: String,
    json: Value,
}

fn parse_diagnostic(e: &ParseError, len: usize) -> Diagnostic {
    Diagnostic::error("PARSE-ERROR", e.message.clone(), Span { line: e.line, col: e.col, len })
}

fn io_diagnostic(path: &Path, e: &std::io::Error) -> Diagnostic {
    Diagnostic::error("IO-ERROR", format!("cannot read {}: {e}", path.display()), Span::default())
}

fn load(common: &Common) -> Result<Session, Failure> {
    let src = std::fs::read_to_string(&common.file).map_err(|e| Failure::Input(vec![io_diagnostic(&common.file, &e)]))?;
    check_source(&src, common.fuel.map(Fuel::new)).map_err(|e| Failure::Input(vec![parse_diagnostic(&e, 1)]))
}

/// Loads a file for commands that need a well-formed signature.
fn load_checked(common: &Common) -> Result<Session, Failure> {
    let s = load(common)?;
    if s.has_errors() {
        return Err(Failure::Check(s.errors().cloned().collect()));
    }
    Ok(s)
}

fn read_term(s: &Session, src: &str) -> Result<Term, Failure> {
    let t = parse_term(src).map_err(|e| Failure::Input(vec![parse_diagnostic(&e, 1)]))?;
    Ok(s.resolve(&t))
}

fn whole(src: &str) -> Span {
    Span { line: 1, col: 1, len: src.chars().count() }
}

fn check(common: &Common) -> Result<Output, Failure> {
    let s = load(common)?;
    let file = common.file.display();
    let human: Vec<String> = s.diagnostics.iter().map(|d| format!("{file}:{d}")).collect();
    let errors = s.errors().count();
    let mut human = human.join("\n");
    if !human.is_empty() {
        human.push('\n');
    }
    human.push_str(&format!("{file}: {} declarations checked, {errors} error(s)", s.sig.symbols().len()));
    let json = json!({
        "ok": errors == 0,
        "file": file.to_string(),
        "diagnostics": s.diagnostics,
        "inductives": s.inductives,
    });
    if errors > 0 {
        println!("{}", render(common.json, &Output { human, json }));
        return Err(Failure::Check(Vec::new()));
    }
    Ok(Output { human, json })
}

fn eval(common: &Common, src: &str) -> Result<Output, Failure> {
    let s = load_checked(common)?;
    let t = read_term(&s, src)?;
    let nf =
        normalize(&s.sig, &t, s.fuel).map_err(|e| Failure::Check(vec![Diagnostic::error("FUEL-EXHAUSTED", e.to_string(), whole(src))]))?;
    Ok(Output { human: nf.to_string(), json: json!({ "ok": true, "term": t.to_string(), "normal_form": nf.to_string() }) })
}

fn type_of(common: &Common, src: &str) -> Result<Output, Failure> {
    let s = load_checked(common)?;
    let t = read_term(&s, src)?;
    let ty = infer_type(&s.sig, &Environment::new(), &t, s.fuel)
        .map_err(|e| Failure::Check(vec![Diagnostic::error(e.code(), e.to_string(), whole(src))]))?;
    let nf = normalize(&s.sig, &ty, s.fuel).unwrap_or_else(|_| ty.clone());
    Ok(Output {
        human: format!("{t} : {ty}"),
        json: json!({ "ok": true, "term": t.to_string(), "type": ty.to_string(), "type_normal_form": nf.to_string() }),
    })
}

fn genrec(common: &Common, target: &str) -> Result<Output, Failure> {
    let s = load_checked(common)?;
    let span = Span::default();
    if !s.sig.contains(target) {
        return Err(Failure::Check(vec![Diagnostic::error("UNKNOWN-SYMBOL", format!("unknown symbol `{target}`"), span)]));
    }
    let g = generate_and_validate(&s.sig, target, s.fuel)
        .map_err(|e| Failure::Check(vec![Diagnostic::error(e.code(), e.to_string(), span)]))?;
    let rules: Vec<String> = g.decl.rules.iter().map(|r| r.to_string()).collect();
    let mut human = format!("symbol {} : {}.\n", g.decl.symbol, g.decl.ty);
    for r in &rules {
        human.push_str(r);
        human.push('\n');
    }
    human.push_str(&format!("recursor {} for {target}.\n", g.decl.symbol));
    for c in &g.verdict.clauses {
        human.push_str(&format!("// ({}) {}: {:?}\n", c.clause.letter(), c.clause.code(), c.outcome));
    }
    human.push_str(&format!("// completeness: {}, head-computability: {}", g.report.completeness, g.report.head_computability));
    let ok = g.verdict.all_passed();
    let out = Output {
        human,
        json: json!({
            "ok": ok,
            "recursor": {
                "symbol": g.decl.symbol.to_string(),
                "type": g.decl.ty.to_string(),
                "kind": g.decl.kind,
                "rules": rules,
                "subject_reduction": "passed",
            },
            "verdict": g.verdict,
            "admissibility": g.report,
        }),
    };
    if !ok {
        println!("{}", render(common.json, &out));
        return Err(Failure::Check(Vec::new()));
    }
    Ok(out)
}

struct PosList<'a>(&'a std::collections::BTreeSet<Position>);

impl fmt::Display for PosList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", ps.join(", "))
    }
}

fn pos(common: &Common, src: &str) -> Result<Output, Failure> {
    let s = load_checked(common)?;
    let t = read_term(&s, src)?;
    let sets = compute_pos_sets(&s.sig, &t).map_err(|e| Failure::Check(vec![Diagnostic::error("POS-ERROR", e.to_string(), whole(src))]))?;
    Ok(Output {
        human: format!("Pos+ = {}\nPos- = {}", PosList(&sets.positive), PosList(&sets.negative)),
        json: json!({ "ok": true, "term": t.to_string(), "positive": sets.positive, "negative": sets.negative }),
    })
}

fn render(json: bool, out: &Output) -> String {
    if json {
        serde_json::to_string_pretty(&out.json).expect("JSON values always serialize")
    } else {
        out.human.clone()
    }
}

fn report_failure(common: &Common, diagnostics: &[Diagnostic]) {
    if diagnostics.is_empty() {
        return;
    }
    if common.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "ok": false, "diagnostics": diagnostics })).expect("JSON values always serialize")
        );
    } else {
        for d in diagnostics {
            eprintln!("{}:{d}", common.file.display());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Check { common } => (common, check(common)),
        Command::Eval { common, term } => (common, eval(common, term)),
        Command::Type { common, term } => (common, type_of(common, term)),
        Command::Genrec { common, target } => (common, genrec(common, target)),
        Command::Pos { common, term } => (common, pos(common, term)),
    };
    match result {
        Ok(out) => {
            println!("{}", render(common.json, &out));
            ExitCode::SUCCESS
        }
        Err(Failure::Check(ds)) => {
            report_failure(common, &ds);
            ExitCode::from(1)
        }
        Err(Failure::Input(ds)) => {
            report_failure(common, &ds);
            ExitCode::from(2)
        }
    }
}
