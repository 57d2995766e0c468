//! Readback of values into normal-form terms.

use crate::interval::{DimExpr, Name};
use crate::semantics::eval::{app, papp};
use crate::semantics::value::{Elim, Head, Neutral, VSys, Val, Value};
use crate::syntax::term::{rc, Rt, Side, Term};

/// Read back `v`, which lives under `depth` term variables.
pub fn quote(depth: usize, v: &Value) -> Term {
    let q = |v: &Value| rc(quote(depth, v));
    match v.get() {
        Val::U(n) => Term::U(*n),
        Val::Pi(x, a, c) => {
            let b = c.inst(&Value::var(depth, a.clone()));
            Term::Pi(x.clone(), q(a), rc(quote(depth + 1, &b)))
        }
        Val::Sigma(x, a, c) => {
            let b = c.inst(&Value::var(depth, a.clone()));
            Term::Sigma(x.clone(), q(a), rc(quote(depth + 1, &b)))
        }
        Val::Lam(x, a, _) => {
            let b = app(v, &Value::var(depth, a.clone()));
            Term::Lam(x.clone(), Some(q(a)), rc(quote(depth + 1, &b)))
        }
        Val::Pair(a, b) => Term::Pair(q(a), q(b)),
        Val::Nat => Term::Nat,
        Val::Zero => Term::Zero,
        Val::Succ(a) => Term::Succ(q(a)),
        Val::Path(j, a, x, y) => Term::Path(*j, q(a), q(x), q(y)),
        Val::PLam(j, a) => Term::PLam(*j, q(a)),
        Val::Glue(b, sys) => Term::Glue(
            q(b),
            sys.iter().map(|(c, (t, e))| (c.clone(), (q(t), q(e)))).collect(),
        ),
        Val::GlueElem(a, sys) => {
            Term::GlueElem(q(a), sys.iter().map(|(c, t)| (c.clone(), q(t))).collect())
        }
        Val::Id(a, x, y) => Term::Id(q(a), q(x), q(y)),
        Val::IdPair(w, c) => {
            if c.is_top() {
                Term::Refl(q(&papp(w, &DimExpr::zero())))
            } else {
                Term::IdPair(q(w), c.clone())
            }
        }
        Val::Susp(a) => Term::Susp(q(a)),
        Val::North => Term::North,
        Val::South => Term::South,
        Val::Merid(a, r) => Term::Merid(q(a), r.clone()),
        Val::HComp(ty, i, sides, base) => Term::Comp {
            line: (Name::fresh(), q(ty)),
            sides: quote_sides(depth, *i, sides),
            base: q(base),
        },
        Val::Neutral(ne) => quote_neutral(depth, ne),
    }
}

fn quote_sides(depth: usize, i: Name, sides: &VSys<Value>) -> Vec<Side> {
    sides
        .iter()
        .map(|(c, v)| Side { cof: c.clone(), dim: i, body: rc(quote(depth, v)) })
        .collect()
}

fn quote_neutral(depth: usize, ne: &Neutral) -> Term {
    let q = |v: &Value| -> Rt { rc(quote(depth, v)) };
    let mut t = match &*ne.head {
        Head::Var(l, _) => Term::Var(depth - 1 - l),
        Head::Comp { dim, line, sides, base } => Term::Comp {
            line: (*dim, q(line)),
            sides: quote_sides(depth, *dim, sides),
            base: q(base),
        },
        Head::Fill { dir, dim, line, sides, base, at } => Term::Fill {
            dir: *dir,
            line: (*dim, q(line)),
            sides: quote_sides(depth, *dim, sides),
            base: q(base),
            at: at.clone(),
        },
    };
    for e in ne.spine.iter() {
        let head = rc(t);
        t = match e {
            Elim::App(a) => Term::App(head, q(a)),
            Elim::Fst => Term::Fst(head),
            Elim::Snd => Term::Snd(head),
            Elim::PApp(r) => Term::PApp(head, r.clone()),
            Elim::NatRec(p, z, s) => Term::NatRec(q(p), q(z), q(s), head),
            Elim::J(p, d) => Term::J(q(p), q(d), head),
            Elim::SuspRec(p, n, s, m) => Term::SuspRec(q(p), q(n), q(s), q(m), head),
            Elim::Unglue(g) => Term::Unglue(head, Some(q(g))),
        };
    }
    t
}
