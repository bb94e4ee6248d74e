//! Kernel for the Calculus of Algebraic Constructions.

pub mod check;
pub mod diagnostic;
pub mod inductive;
pub mod recursor;
pub mod reduction;
pub mod signature;
pub mod syntax;
pub mod term;
pub mod typing;

pub use check::{check_source, Session};
pub use diagnostic::{Diagnostic, Severity};
pub use reduction::{convertible, normalize, Fuel, FuelExhausted};
pub use signature::{RewriteRule, Signature};
pub use term::{alpha_equal, free_vars, substitute, var_positions, Environment, Name, Position, Sort, Term, TermSubstitution};
