//! Raw syntax: terms, explicit substitutions, the parser and the printer.

pub mod parser;
pub mod printer;
pub mod term;

pub use parser::{parse_file, parse_term, Decl, ParseError};
pub use printer::{print, Printer};
pub use term::{alpha_eq, apply_subst, resolve, rc, Rt, Side, Subst, Term};
