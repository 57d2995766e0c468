//! Conversion checking on values, with eta for functions, pairs, paths and
//! Glue elements, and cumulative subtyping of universes.

use crate::cofib::{Cofib, Face};
use crate::interval::{dim_equal, Name};
use crate::semantics::eval::{app, fst, papp, snd, unglue};
use crate::semantics::value::{unfold, Elim, Head, Neutral, VSys, Val, Value};
use crate::interval::DimExpr;

/// The union of two faces, if they are consistent.
pub fn face_meet(a: &Face, b: &Face) -> Option<Face> {
    let mut out = a.clone();
    for (n, v) in b {
        match out.get(n) {
            Some(w) if w != v => return None,
            _ => {
                out.insert(*n, *v);
            }
        }
    }
    Some(out)
}

pub fn cof_equal(a: &Cofib, b: &Cofib) -> bool {
    a.entails(b) && b.entails(a)
}

fn is_fun(v: &Value) -> bool {
    matches!(v.get(), Val::Lam(..) | Val::Neutral(_))
}

fn is_path(v: &Value) -> bool {
    matches!(v.get(), Val::PLam(..) | Val::Neutral(_))
}

fn is_pair(v: &Value) -> bool {
    matches!(v.get(), Val::Pair(..) | Val::Neutral(_))
}

/// The base component of an element of a Glue type.
fn unglue_any(v: &Value) -> Option<Value> {
    match v.get() {
        Val::GlueElem(a, _) => Some(a.clone()),
        Val::Neutral(ne) if matches!(ne.ty.get(), Val::Glue(..)) => Some(unglue(v, &ne.ty)),
        _ => None,
    }
}

fn conv_glue_elem(d: usize, a: &Value, sys: &VSys<Value>, other: &Value) -> bool {
    let Some(b) = unglue_any(other) else { return false };
    if !conv(d, a, &b) {
        return false;
    }
    sys.iter().all(|(c, t)| c.faces().iter().all(|f| conv(d, &t.face(f), &other.face(f))))
}

/// Judgmental equality of two values under `d` term variables.
pub fn conv(d: usize, a: &Value, b: &Value) -> bool {
    if a.ptr_eq(b) {
        return true;
    }
    let a = unfold(a);
    let b = unfold(b);
    match (a.get(), b.get()) {
        (Val::Lam(_, dom, _), _) if is_fun(&b) => {
            let x = Value::var(d, dom.clone());
            conv(d + 1, &app(&a, &x), &app(&b, &x))
        }
        (_, Val::Lam(_, dom, _)) if is_fun(&a) => {
            let x = Value::var(d, dom.clone());
            conv(d + 1, &app(&a, &x), &app(&b, &x))
        }
        (Val::PLam(..), _) | (_, Val::PLam(..)) if is_path(&a) && is_path(&b) => {
            let k = DimExpr::var(Name::fresh());
            conv(d, &papp(&a, &k), &papp(&b, &k))
        }
        (Val::Pair(..), _) | (_, Val::Pair(..)) if is_pair(&a) && is_pair(&b) => {
            conv(d, &fst(&a), &fst(&b)) && conv(d, &snd(&a), &snd(&b))
        }
        (Val::GlueElem(x, s), _) => conv_glue_elem(d, x, s, &b),
        (_, Val::GlueElem(x, s)) => conv_glue_elem(d, x, s, &a),
        (Val::U(m), Val::U(n)) => m == n,
        (Val::Pi(_, a1, c1), Val::Pi(_, a2, c2)) | (Val::Sigma(_, a1, c1), Val::Sigma(_, a2, c2)) => {
            if std::mem::discriminant(a.get()) != std::mem::discriminant(b.get()) {
                return false;
            }
            if !conv(d, a1, a2) {
                return false;
            }
            let x = Value::var(d, a1.clone());
            conv(d + 1, &c1.inst(&x), &c2.inst(&x))
        }
        (Val::Nat, Val::Nat) | (Val::Zero, Val::Zero) => true,
        (Val::North, Val::North) | (Val::South, Val::South) => true,
        (Val::Succ(x), Val::Succ(y)) => conv(d, x, y),
        (Val::Path(i, a1, x1, y1), Val::Path(j, a2, x2, y2)) => {
            let k = Name::fresh();
            conv(d, &a1.rename(*i, k), &a2.rename(*j, k)) && conv(d, x1, x2) && conv(d, y1, y2)
        }
        (Val::Glue(b1, s1), Val::Glue(b2, s2)) => conv_glue_type(d, &a, b1, s1, &b, b2, s2),
        (Val::Id(a1, x1, y1), Val::Id(a2, x2, y2)) => {
            conv(d, a1, a2) && conv(d, x1, x2) && conv(d, y1, y2)
        }
        (Val::IdPair(w1, c1), Val::IdPair(w2, c2)) => cof_equal(c1, c2) && conv(d, w1, w2),
        (Val::Susp(x), Val::Susp(y)) => conv(d, x, y),
        (Val::Merid(x, r), Val::Merid(y, s)) => dim_equal(r, s) && conv(d, x, y),
        (Val::HComp(t1, i, s1, b1), Val::HComp(t2, j, s2, b2)) => {
            conv(d, t1, t2) && conv(d, b1, b2) && conv_sides(d, *i, s1, *j, s2)
        }
        (Val::Neutral(n1), Val::Neutral(n2)) => conv_neutral(d, n1, n2),
        _ => false,
    }
}

fn conv_glue_type(
    d: usize,
    a: &Value,
    b1: &Value,
    s1: &VSys<(Value, Value)>,
    b: &Value,
    b2: &Value,
    s2: &VSys<(Value, Value)>,
) -> bool {
    if !conv(d, b1, b2) {
        return false;
    }
    let union = |s: &VSys<(Value, Value)>| s.iter().fold(Cofib::bot(), |acc, (c, _)| acc.or(c));
    if !cof_equal(&union(s1), &union(s2)) {
        return false;
    }
    let branch = |v: &Value| match v.get() {
        Val::Glue(_, s) => s.iter().find(|(c, _)| c.is_top()).map(|(_, te)| te.clone()),
        _ => None,
    };
    for (c, _) in s1.iter().chain(s2.iter()) {
        for f in c.faces() {
            match (branch(&a.face(f)), branch(&b.face(f))) {
                (Some((t1, e1)), Some((t2, e2))) => {
                    if !conv(d, &t1, &t2) || !conv(d, &e1, &e2) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    true
}

/// Compare two partial elements whose payloads are lines bound by `i` and `j`.
pub fn conv_sides(d: usize, i: Name, s1: &VSys<Value>, j: Name, s2: &VSys<Value>) -> bool {
    let union = |s: &VSys<Value>| s.iter().fold(Cofib::bot(), |acc, (c, _)| acc.or(c));
    if !cof_equal(&union(s1), &union(s2)) {
        return false;
    }
    let k = Name::fresh();
    let r1: Vec<(Cofib, Value)> = s1.iter().map(|(c, v)| (c.clone(), v.rename(i, k))).collect();
    let r2: Vec<(Cofib, Value)> = s2.iter().map(|(c, v)| (c.clone(), v.rename(j, k))).collect();
    for (c1, v1) in &r1 {
        for (c2, v2) in &r2 {
            for f1 in c1.faces() {
                for f2 in c2.faces() {
                    if let Some(g) = face_meet(f1, f2) {
                        if !conv(d, &v1.face(&g), &v2.face(&g)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

fn conv_head(d: usize, h1: &Head, h2: &Head) -> bool {
    match (h1, h2) {
        (Head::Var(l1, _), Head::Var(l2, _)) => l1 == l2,
        (
            Head::Comp { dim: i, line: l1, sides: s1, base: b1 },
            Head::Comp { dim: j, line: l2, sides: s2, base: b2 },
        ) => {
            let k = Name::fresh();
            conv(d, &l1.rename(*i, k), &l2.rename(*j, k))
                && conv(d, b1, b2)
                && conv_sides(d, *i, s1, *j, s2)
        }
        (
            Head::Fill { dir: d1, dim: i, line: l1, sides: s1, base: b1, at: r1 },
            Head::Fill { dir: d2, dim: j, line: l2, sides: s2, base: b2, at: r2 },
        ) => {
            let k = Name::fresh();
            d1 == d2
                && dim_equal(r1, r2)
                && conv(d, &l1.rename(*i, k), &l2.rename(*j, k))
                && conv(d, b1, b2)
                && conv_sides(d, *i, s1, *j, s2)
        }
        _ => false,
    }
}

fn conv_elim(d: usize, e1: &Elim, e2: &Elim) -> bool {
    match (e1, e2) {
        (Elim::App(a), Elim::App(b)) => conv(d, a, b),
        (Elim::Fst, Elim::Fst) | (Elim::Snd, Elim::Snd) => true,
        (Elim::PApp(r), Elim::PApp(s)) => dim_equal(r, s),
        (Elim::NatRec(p1, z1, s1), Elim::NatRec(p2, z2, s2)) => {
            conv(d, p1, p2) && conv(d, z1, z2) && conv(d, s1, s2)
        }
        (Elim::J(p1, d1), Elim::J(p2, d2)) => conv(d, p1, p2) && conv(d, d1, d2),
        (Elim::SuspRec(p1, n1, s1, m1), Elim::SuspRec(p2, n2, s2, m2)) => {
            conv(d, p1, p2) && conv(d, n1, n2) && conv(d, s1, s2) && conv(d, m1, m2)
        }
        (Elim::Unglue(_), Elim::Unglue(_)) => true,
        _ => false,
    }
}

fn conv_neutral(d: usize, n1: &Neutral, n2: &Neutral) -> bool {
    n1.spine.len() == n2.spine.len()
        && conv_head(d, &n1.head, &n2.head)
        && n1.spine.iter().zip(n2.spine.iter()).all(|(a, b)| conv_elim(d, a, b))
}

/// `a` is a subtype of `b`: equal up to raising universe levels in
/// covariant positions.
pub fn sub_type(d: usize, a: &Value, b: &Value) -> bool {
    let a = unfold(a);
    let b = unfold(b);
    match (a.get(), b.get()) {
        (Val::U(m), Val::U(n)) => m <= n,
        (Val::Pi(_, a1, c1), Val::Pi(_, a2, c2)) => {
            if !conv(d, a1, a2) {
                return false;
            }
            let x = Value::var(d, a1.clone());
            sub_type(d + 1, &c1.inst(&x), &c2.inst(&x))
        }
        (Val::Sigma(_, a1, c1), Val::Sigma(_, a2, c2)) => {
            if !sub_type(d, a1, a2) {
                return false;
            }
            let x = Value::var(d, a1.clone());
            sub_type(d + 1, &c1.inst(&x), &c2.inst(&x))
        }
        _ => conv(d, &a, &b),
    }
}
