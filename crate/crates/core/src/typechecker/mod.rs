//! The bidirectional checker, conversion, and whole-file checking.

pub mod check;
pub mod conv;
pub mod error;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::semantics::eval::{define_global, eval, global_names};
use crate::semantics::value::{Env, Value};
use crate::syntax::parser::{parse_file, Decl};
use crate::syntax::term::Term;

pub use check::{check, check_type, infer, Ctx};
pub use conv::{conv, sub_type};
pub use error::{CheckError, ErrorKind, TcResult};

/// A declaration after checking: elaborated body and its type.
#[derive(Clone, Debug)]
pub struct Checked {
    pub ty_term: Term,
    pub body: Term,
    pub ty: Value,
    pub value: Value,
}

#[derive(Debug)]
pub struct DeclReport {
    pub name: String,
    pub line: usize,
    pub col: usize,
    pub result: Result<Checked, CheckError>,
    pub elapsed: Duration,
}

/// Check one declaration in the current global scope.
pub fn check_decl(decl: &Decl) -> TcResult<Checked> {
    let ctx = Ctx::new();
    let (ty_term, body, ty) = match &decl.ty {
        Some(t) => {
            let (t_el, _) = check_type(&ctx, t)?;
            let tv = ctx.eval(&t_el);
            let b = check(&ctx, &decl.body, &tv)?;
            (t_el, b, tv)
        }
        None => {
            let (b, tv) = infer(&ctx, &decl.body)?;
            (ctx.quote(&tv), b, tv)
        }
    };
    let value = eval(&Env::empty(), &body);
    Ok(Checked { ty_term, body, ty, value })
}

/// Check declarations in order, committing each one that succeeds so later
/// declarations can use it.
pub fn check_declarations(decls: &[Decl]) -> Vec<DeclReport> {
    decls.iter().map(check_and_define).collect()
}

/// Check one declaration and, if it is accepted, add it to the global scope.
pub fn check_and_define(d: &Decl) -> DeclReport {
    let start = Instant::now();
    let result = check_decl(d);
    if let Ok(c) = &result {
        define_global(&d.name, c.ty.clone(), c.value.clone());
    }
    DeclReport { name: d.name.clone(), line: d.line, col: d.col, result, elapsed: start.elapsed() }
}

/// Parse and check a source text against the definitions already in scope.
pub fn check_source(src: &str) -> Result<Vec<DeclReport>, crate::syntax::ParseError> {
    let globals: HashSet<String> = global_names().into_iter().collect();
    let decls = parse_file(src, &globals)?;
    Ok(check_declarations(&decls))
}

/// Read back the value of a checked global and check the normal form against
/// its type again. `None` if no such global exists.
pub fn recheck_normal_form(name: &str) -> Option<TcResult<Term>> {
    let (ty, v) = crate::semantics::eval::global(name)?;
    let nf = crate::semantics::quote::quote(0, &v);
    Some(check(&Ctx::new(), &nf, &ty).map(|_| nf))
}
