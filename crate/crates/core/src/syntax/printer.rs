//! Pretty-printer producing text the parser reads back.
//!
//! Bound term variables get their hint when that is unambiguous and a
//! numbered variant otherwise; bound dimensions are renamed `i, j, k, l, m`,
//! then `i1, j1, ...`, in binding order, so output is deterministic.

use std::collections::{HashMap, HashSet};

use crate::cofib::Cofib;
use crate::interval::{DimExpr, Name};
use crate::syntax::parser::is_keyword;
use crate::syntax::term::{resolve, uses_var, Side, Term};

const EXPR: u8 = 0;
const SIGMA: u8 = 1;
const PATH: u8 = 2;
const APP: u8 = 3;
const ATOM: u8 = 4;

pub struct Printer {
    vars: Vec<String>,
    dims: HashMap<Name, String>,
    dim_depth: usize,
    avoid: HashSet<String>,
}

fn dim_name(k: usize) -> String {
    const BASE: [&str; 5] = ["i", "j", "k", "l", "m"];
    let stem = BASE[k % BASE.len()];
    let round = k / BASE.len();
    if round == 0 {
        stem.to_string()
    } else {
        format!("{stem}{round}")
    }
}

fn valid_ident(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'') && s != "_" && !is_keyword(s) && s != "def"
}

fn globals_of(t: &Term, out: &mut HashSet<String>) {
    t.walk(&mut |s| {
        if let Term::Global(g) = s {
            out.insert(g.to_string());
        }
    });
}

impl Printer {
    /// A printer for terms whose free variables are `vars` (outermost first).
    pub fn new(vars: &[String]) -> Printer {
        Printer { vars: vars.to_vec(), dims: HashMap::new(), dim_depth: 0, avoid: HashSet::new() }
    }

    /// Give free dimension names fixed spellings.
    pub fn with_dims(mut self, dims: &[(Name, String)]) -> Printer {
        for (n, s) in dims {
            self.dims.insert(*n, s.clone());
        }
        self.dim_depth = dims.len();
        self
    }

    pub fn print(&mut self, t: &Term) -> String {
        let t = resolve(t);
        let mut avoid = HashSet::new();
        globals_of(&t, &mut avoid);
        self.avoid = avoid;
        self.term(&t, EXPR)
    }

    fn dim_str(&self, n: Name) -> String {
        self.dims.get(&n).cloned().unwrap_or_else(|| format!("?{}", n.0))
    }

    pub fn dim(&self, r: &DimExpr) -> String {
        r.render(&|n| self.dim_str(n))
    }

    fn dim_atom(&self, r: &DimExpr) -> String {
        if r.is_atomic() {
            self.dim(r)
        } else {
            format!("({})", self.dim(r))
        }
    }

    pub fn cof(&self, c: &Cofib) -> String {
        c.render(&|n| self.dim_str(n))
    }

    fn cof_atom(&self, c: &Cofib) -> String {
        let s = self.cof(c);
        if c.is_top() || c.is_bot() || (c.faces().len() == 1 && c.faces()[0].len() == 1) {
            s
        } else {
            format!("({s})")
        }
    }

    fn bind_var<R>(&mut self, hint: &str, used: bool, f: impl FnOnce(&mut Self, &str) -> R) -> R {
        let name = if !used {
            "_".to_string()
        } else {
            let stem = if valid_ident(hint) { hint.to_string() } else { "x".to_string() };
            let taken = |s: &str| self.vars.iter().any(|v| v == s) || self.avoid.contains(s);
            if !taken(&stem) {
                stem
            } else {
                let mut k = 1;
                loop {
                    let cand = format!("{stem}{k}");
                    if !taken(&cand) && !is_keyword(&cand) {
                        break cand;
                    }
                    k += 1;
                }
            }
        };
        self.vars.push(name.clone());
        let r = f(self, &name);
        self.vars.pop();
        r
    }

    fn bind_dim<R>(&mut self, n: Name, f: impl FnOnce(&mut Self, &str) -> R) -> R {
        let taken: HashSet<String> = self.dims.values().cloned().collect();
        let mut k = self.dim_depth;
        let mut s = dim_name(k);
        while taken.contains(&s) {
            k += 1;
            s = dim_name(k);
        }
        let old = self.dims.insert(n, s.clone());
        let depth = self.dim_depth;
        self.dim_depth = k + 1;
        let r = f(self, &s);
        self.dim_depth = depth;
        match old {
            Some(o) => self.dims.insert(n, o),
            None => self.dims.remove(&n),
        };
        r
    }

    fn var(&self, idx: usize) -> String {
        if idx < self.vars.len() {
            self.vars[self.vars.len() - 1 - idx].clone()
        } else {
            format!("#{idx}")
        }
    }

    fn paren(s: String, level: u8, min: u8) -> String {
        if level < min {
            format!("({s})")
        } else {
            s
        }
    }

    fn line(&mut self, i: Name, body: &Term) -> String {
        self.bind_dim(i, |p, s| format!("(<{s}> {})", p.term(body, EXPR)))
    }

    fn sides(&mut self, sides: &[Side]) -> String {
        let parts: Vec<String> = sides
            .iter()
            .map(|sd| {
                let c = self.cof(&sd.cof);
                let b = self.bind_dim(sd.dim, |p, s| format!("<{s}> {}", p.term(&sd.body, EXPR)));
                format!("{c} -> {b}")
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }

    fn binder_type(&mut self, sigma: bool, x: &str, a: &Term, b: &Term) -> String {
        let used = uses_var(b, 0);
        if !used {
            let dom = self.term(a, if sigma { PATH } else { SIGMA });
            return self.bind_var(x, false, |p, _| {
                if sigma {
                    format!("{dom} * {}", p.term(b, SIGMA))
                } else {
                    format!("{dom} -> {}", p.term(b, EXPR))
                }
            });
        }
        let dom = self.term(a, EXPR);
        self.bind_var(x, used, |p, name| {
            let body = p.term(b, if sigma { SIGMA } else { EXPR });
            let op = if sigma { "*" } else { "->" };
            format!("({name} : {dom}) {op} {body}")
        })
    }

    fn term(&mut self, t: &Term, min: u8) -> String {
        use Term::*;
        match t {
            Var(i) => self.var(*i),
            Global(g) => g.to_string(),
            Sub(..) => {
                let r = resolve(t);
                self.term(&r, min)
            }
            U(0) => "U".to_string(),
            U(n) => format!("U{n}"),
            Nat => "Nat".into(),
            Zero => "zero".into(),
            North => "north".into(),
            South => "south".into(),
            Pi(x, a, b) => {
                let s = self.binder_type(false, x, a, b);
                Self::paren(s, EXPR, min)
            }
            Sigma(x, a, b) => {
                let s = self.binder_type(true, x, a, b);
                Self::paren(s, SIGMA, min)
            }
            Lam(x, a, b) => {
                let used = uses_var(b, 0);
                let dom = a.as_ref().map(|a| self.term(a, EXPR));
                let s = self.bind_var(x, used, |p, name| {
                    let body = p.term(b, EXPR);
                    match &dom {
                        Some(d) => format!("\\({name} : {d}) -> {body}"),
                        None => format!("\\{name} -> {body}"),
                    }
                });
                Self::paren(s, EXPR, min)
            }
            PLam(i, b) => {
                let s = self.bind_dim(*i, |p, s| format!("<{s}> {}", p.term(b, EXPR)));
                Self::paren(s, EXPR, min)
            }
            App(f, a) => {
                let s = format!("{} {}", self.term(f, APP), self.term(a, ATOM));
                Self::paren(s, APP, min)
            }
            Pair(a, b) => format!("({}, {})", self.term(a, EXPR), self.term(b, EXPR)),
            Ann(a, b) => {
                let mut inner = self.term(a, EXPR);
                // `(x y : A)` would read as a telescope
                if inner.split(' ').all(|w| {
                    w.starts_with(|c: char| c.is_alphabetic() || c == '_')
                        && w.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
                        && !is_keyword(w)
                }) {
                    inner = format!("({inner})");
                }
                format!("({inner} : {})", self.term(b, EXPR))
            }
            Fst(a) => format!("{}.1", self.term(a, ATOM)),
            Snd(a) => format!("{}.2", self.term(a, ATOM)),
            Succ(a) => Self::paren(format!("succ {}", self.term(a, ATOM)), APP, min),
            Refl(a) => Self::paren(format!("refl {}", self.term(a, ATOM)), APP, min),
            Susp(a) => Self::paren(format!("Susp {}", self.term(a, ATOM)), APP, min),
            Unglue(a, _) => Self::paren(format!("unglue {}", self.term(a, ATOM)), APP, min),
            NatRec(p, z, s, n) => {
                let s = format!(
                    "natrec {} {} {} {}",
                    self.term(p, ATOM),
                    self.term(z, ATOM),
                    self.term(s, ATOM),
                    self.term(n, ATOM)
                );
                Self::paren(s, APP, min)
            }
            Id(a, x, y) | J(a, x, y) => {
                let kw = if matches!(t, Id(..)) { "Id" } else { "J" };
                let s = format!(
                    "{kw} {} {} {}",
                    self.term(a, ATOM),
                    self.term(x, ATOM),
                    self.term(y, ATOM)
                );
                Self::paren(s, APP, min)
            }
            SuspRec(p, n, s, m, u) => {
                let s = format!(
                    "susprec {} {} {} {} {}",
                    self.term(p, ATOM),
                    self.term(n, ATOM),
                    self.term(s, ATOM),
                    self.term(m, ATOM),
                    self.term(u, ATOM)
                );
                Self::paren(s, APP, min)
            }
            Merid(a, r) => {
                let s = format!("merid {} {}", self.term(a, ATOM), self.dim_atom(r));
                Self::paren(s, APP, min)
            }
            IdPair(p, c) => {
                let s = format!("idpair {} {}", self.term(p, ATOM), self.cof_atom(c));
                Self::paren(s, APP, min)
            }
            Path(i, a, x, y) => {
                // a path abstraction in the type position would be read as the binder
                let line = if a_mentions(a, *i) || matches!(resolve(a), PLam(..)) {
                    self.line(*i, a)
                } else {
                    self.term(a, ATOM)
                };
                let s = format!("Path {line} {} {}", self.term(x, ATOM), self.term(y, ATOM));
                Self::paren(s, APP, min)
            }
            PApp(p, r) => {
                let s = format!("{} @ {}", self.term(p, PATH), self.dim(r));
                Self::paren(s, PATH, min)
            }
            Glue(a, sys) => {
                let base = self.term(a, ATOM);
                let parts: Vec<String> = sys
                    .iter()
                    .map(|(c, (ty, e))| {
                        format!("{} -> ({}, {})", self.cof(c), self.term(ty, EXPR), self.term(e, EXPR))
                    })
                    .collect();
                Self::paren(format!("Glue {base} [{}]", parts.join(", ")), APP, min)
            }
            GlueElem(a, sys) => {
                let base = self.term(a, ATOM);
                let parts: Vec<String> = sys
                    .iter()
                    .map(|(c, u)| format!("{} -> {}", self.cof(c), self.term(u, EXPR)))
                    .collect();
                Self::paren(format!("glue {base} [{}]", parts.join(", ")), APP, min)
            }
            Comp { line, sides, base } => {
                let l = self.line(line.0, &line.1);
                let s = self.sides(sides);
                let b = self.term(base, ATOM);
                Self::paren(format!("comp {l} {s} {b}"), APP, min)
            }
            Fill { dir, line, sides, base, at } => {
                let l = self.line(line.0, &line.1);
                let s = self.sides(sides);
                let b = self.term(base, ATOM);
                let d = if *dir { 1 } else { 0 };
                Self::paren(format!("fill {d} {l} {s} {b} @ {}", self.dim(at)), PATH, min)
            }
        }
    }
}

fn a_mentions(t: &Term, i: Name) -> bool {
    let mut hit = false;
    t.walk(&mut |s| match s {
        Term::PApp(_, r) | Term::Merid(_, r) => hit |= r.mentions(i),
        Term::Fill { sides, at, .. } => {
            hit |= at.mentions(i) || sides.iter().any(|sd| sd.cof.mentions(i))
        }
        Term::Comp { sides, .. } => hit |= sides.iter().any(|sd| sd.cof.mentions(i)),
        Term::Glue(_, sys) => hit |= sys.iter().any(|(c, _)| c.mentions(i)),
        Term::GlueElem(_, sys) => hit |= sys.iter().any(|(c, _)| c.mentions(i)),
        Term::IdPair(_, c) => hit |= c.mentions(i),
        _ => {}
    });
    hit
}

/// Print a closed term.
pub fn print(t: &Term) -> String {
    Printer::new(&[]).print(t)
}
