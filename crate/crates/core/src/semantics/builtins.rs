//! Definitions the kernel itself relies on: equivalences for Glue formation
//! and the equivalence induced by a path of types, used by comp in U.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

use crate::semantics::eval::eval;
use crate::semantics::value::{Env, Value};
use crate::syntax::parser::parse_term_in;
use crate::syntax::term::Term;

const DEFS: &[(&str, &str)] = &[
    ("isContr", r"\(A : U) -> (c : A) * ((z : A) -> Path A c z)"),
    ("fiber", r"\(A B : U) (f : (_ : A) -> B) (y : B) -> (x : A) * Path B y (f x)"),
    ("isEquiv", r"\(A B : U) (f : (_ : A) -> B) -> (y : B) -> isContr (fiber A B f y)"),
    ("Equiv", r"\(A B : U) -> (f : (_ : A) -> B) * isEquiv A B f"),
    (
        "idIsEquiv",
        r"\(A : U) (y : A) -> ((y, <i> y), \(z : fiber A A (\(x : A) -> x) y) -> <i> (z.2 @ i, <j> z.2 @ (i /\ j)))",
    ),
    (
        "transEquiv",
        r"\(A B : U) (L : Path U A B) -> (\(x : A) -> fill 0 (<i> L @ i) [] x @ 1, comp (<i> isEquiv A (L @ i) (\(x : A) -> fill 0 (<j> L @ j) [] x @ i)) [] (idIsEquiv A))",
    ),
];

struct Table {
    terms: Vec<(&'static str, Term)>,
    vals: HashMap<&'static str, Value>,
}

thread_local! {
    static TABLE: RefCell<Option<Table>> = const { RefCell::new(None) };
}

fn build() -> Table {
    let mut names: Vec<String> = Vec::new();
    let mut vals: Vec<Value> = Vec::new();
    let mut terms = Vec::new();
    let mut map = HashMap::new();
    for (name, src) in DEFS {
        let t = parse_term_in(src, &names, &HashSet::new())
            .unwrap_or_else(|e| panic!("internal: builtin `{name}` does not parse: {e}"));
        let v = eval(&Env::from_vals(vals.clone()), &t);
        map.insert(*name, v.clone());
        names.push(name.to_string());
        vals.push(v);
        terms.push((*name, t));
    }
    Table { terms, vals: map }
}

/// The value of a builtin definition.
pub fn builtin(name: &str) -> Value {
    TABLE.with(|t| {
        let mut t = t.borrow_mut();
        let table = t.get_or_insert_with(build);
        table.vals.get(name).cloned().unwrap_or_else(|| panic!("internal: no builtin `{name}`"))
    })
}

/// Builtin names in definition order with their source text.
pub fn builtin_sources() -> &'static [(&'static str, &'static str)] {
    DEFS
}

/// The parsed builtins, each closed over the earlier ones as variables.
pub fn builtin_terms() -> Vec<(&'static str, Term)> {
    TABLE.with(|t| {
        let mut t = t.borrow_mut();
        t.get_or_insert_with(build).terms.clone()
    })
}
