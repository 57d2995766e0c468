//! Kan composition by cases on the type line, and filling.

use std::rc::Rc;

use crate::cofib::Cofib;
use crate::interval::{DimExpr, Name};
use crate::semantics::builtins::builtin;
use crate::semantics::eval::{app, fst, glue_elem, merid, mode, papp, snd, unglue, Mode};
use crate::semantics::value::{unfold, Closure, Env, Head, Neutral, VSys, Val, Value};
use crate::syntax::term::{rc, Rt, Side, Term};

/// Split every branch into its faces, restricting the payload to each.
pub fn split_faces(sides: &VSys<Value>) -> VSys<Value> {
    let mut out = Vec::with_capacity(sides.len());
    for (c, v) in sides {
        match c.faces() {
            [] => {}
            [_] => out.push((c.clone(), v.clone())),
            fs => {
                for f in fs {
                    out.push((Cofib::from_face(f.clone()), v.face(f)));
                }
            }
        }
    }
    out
}

fn face_of(c: &Cofib) -> &crate::cofib::Face {
    &c.faces()[0]
}

fn top_side(sides: &VSys<Value>) -> Option<&Value> {
    sides.iter().find(|(c, _)| c.is_top()).map(|(_, v)| v)
}

fn map_sides(sides: &VSys<Value>, f: impl Fn(&Value) -> Value) -> VSys<Value> {
    sides.iter().map(|(c, v)| (c.clone(), f(v))).collect()
}

fn stuck_comp(i: Name, line: &Value, sides: VSys<Value>, base: &Value) -> Value {
    let ty = line.at_const(i, true);
    Value::new(Val::Neutral(Neutral {
        head: Rc::new(Head::Comp { dim: i, line: line.clone(), sides, base: base.clone() }),
        spine: Rc::new(Vec::new()),
        ty,
    }))
}

/// `comp^i line [sides] base`, an element of `line` at 1.
pub fn comp(i: Name, line: &Value, sides: &VSys<Value>, base: &Value) -> Value {
    let sides = split_faces(sides);
    if let Some(v) = top_side(&sides) {
        return v.at_const(i, true);
    }
    let ty = unfold(line);
    match ty.get() {
        Val::Pi(x, a, b) => comp_pi(i, x, a, b, &sides, base),
        Val::Sigma(_, a, b) => {
            let k = Name::fresh();
            let a_k = a.rename(i, k);
            let fst_k = map_sides(&sides, |v| fst(v).rename(i, k));
            let b0 = fst(base);
            let first = fill(false, k, &a_k, &fst_k, &b0, &DimExpr::var(i));
            let line2 = b.inst(&first);
            let second = comp(i, &line2, &map_sides(&sides, snd), &snd(base));
            Value::new(Val::Pair(first.at_const(i, true), second))
        }
        Val::Nat => comp_nat(i, line, &sides, base),
        Val::Path(j, a, a0, a1) => {
            let j2 = Name::fresh();
            let jv = DimExpr::var(j2);
            let a2 = a.rename(*j, j2);
            let mut s2 = map_sides(&sides, |v| papp(v, &jv));
            s2.push((Cofib::atom(j2, false), a0.clone()));
            s2.push((Cofib::atom(j2, true), a1.clone()));
            Value::new(Val::PLam(j2, comp(i, &a2, &s2, &papp(base, &jv))))
        }
        Val::Id(a, a0, a1) => {
            let mut ws = Vec::new();
            let mut psi = Cofib::bot();
            for (c, v) in &sides {
                match v.get() {
                    Val::IdPair(w, q) => {
                        ws.push((c.clone(), w.clone()));
                        psi = psi.or(&c.and(&q.subst(i, &DimExpr::one())));
                    }
                    _ => return stuck_comp(i, line, sides, base),
                }
            }
            let w0 = match base.get() {
                Val::IdPair(w, _) => w.clone(),
                _ => return stuck_comp(i, line, sides, base),
            };
            let j = Name::fresh();
            let jv = DimExpr::var(j);
            let mut s2 = map_sides(&ws, |w| papp(w, &jv));
            s2.push((Cofib::atom(j, false), a0.clone()));
            s2.push((Cofib::atom(j, true), a1.clone()));
            let path = Value::new(Val::PLam(j, comp(i, a, &s2, &papp(&w0, &jv))));
            Value::new(Val::IdPair(path, psi))
        }
        Val::U(_) => comp_u(i, &sides, base),
        Val::Glue(b, sys) => comp_glue(i, line, b, sys, &sides, base),
        Val::Susp(a) => comp_susp(i, a, &sides, base),
        _ => stuck_comp(i, line, sides, base),
    }
}

fn var(k: usize) -> Rt {
    rc(Term::Var(k))
}

/// `comp^j D@(r \/ -j) [(r = 1) -> a] a`, moving `a : D@1` back to `D@r`.
fn back_term(d: usize, a: usize, r: &DimExpr) -> Term {
    let j = Name::fresh();
    let j2 = Name::fresh();
    Term::Comp {
        line: (j, rc(Term::PApp(var(d), r.join(&DimExpr::var(j).reverse())))),
        sides: vec![Side { cof: Cofib::eq(r, true), dim: j2, body: var(a) }],
        base: var(a),
    }
}

fn comp_pi(i: Name, x: &str, a: &Value, b: &Closure, sides: &VSys<Value>, base: &Value) -> Value {
    // The result is built as a term over an environment holding the line's
    // pieces as path abstractions, so that it can be acted on like any closure.
    let n = sides.len();
    let mut vals = Vec::with_capacity(n + 3);
    vals.push(Value::new(Val::PLam(i, a.clone())));
    vals.push(Value::new(Val::PLam(i, Value::new(Val::Lam(x.to_string(), a.clone(), b.clone())))));
    for (_, v) in sides {
        vals.push(Value::new(Val::PLam(i, v.clone())));
    }
    vals.push(base.clone());
    // indices under the binder for the argument
    let arg = 0;
    let u0 = 1;
    let side_ix = |k: usize| n + 1 - k;
    let f = n + 2;
    let d = n + 3;
    let k = Name::fresh();
    let kv = DimExpr::var(k);
    let mut tsides = Vec::with_capacity(n);
    for (idx, (c, _)) in sides.iter().enumerate() {
        let l = Name::fresh();
        let lv = DimExpr::var(l);
        tsides.push(Side {
            cof: c.clone(),
            dim: l,
            body: rc(Term::App(rc(Term::PApp(var(side_ix(idx)), lv.clone())), rc(back_term(d, arg, &lv)))),
        });
    }
    let body = Term::Comp {
        line: (k, rc(Term::App(rc(Term::PApp(var(f), kv.clone())), rc(back_term(d, arg, &kv))))),
        sides: tsides,
        base: rc(Term::App(var(u0), rc(back_term(d, arg, &DimExpr::zero())))),
    };
    let env = Env::from_vals(vals);
    let dom1 = a.at_const(i, true);
    Value::new(Val::Lam(x.to_string(), dom1, Closure::new(env, rc(body))))
}

fn comp_nat(i: Name, line: &Value, sides: &VSys<Value>, base: &Value) -> Value {
    let all = |p: fn(&Val) -> bool| sides.iter().all(|(_, v)| p(v.get())) && p(base.get());
    if all(|v| matches!(v, Val::Zero)) {
        return Value::new(Val::Zero);
    }
    if all(|v| matches!(v, Val::Succ(_))) {
        let pred = |v: &Value| match v.get() {
            Val::Succ(m) => m.clone(),
            _ => unreachable!(),
        };
        return Value::new(Val::Succ(comp(i, line, &map_sides(sides, pred), &pred(base))));
    }
    stuck_comp(i, line, sides.clone(), base)
}

fn comp_u(i: Name, sides: &VSys<Value>, base: &Value) -> Value {
    if sides.is_empty() {
        return base.clone();
    }
    let trans = builtin("transEquiv");
    let mut sys = Vec::with_capacity(sides.len());
    for (c, e) in sides {
        let e1 = e.at_const(i, true);
        let j = Name::fresh();
        let rev = Value::new(Val::PLam(j, e.at(i, &DimExpr::var(j).reverse())));
        let b = base.face(face_of(c));
        let equiv = app(&app(&app(&trans, &e1), &b), &rev);
        sys.push((c.clone(), (e1, equiv)));
    }
    Value::new(Val::Glue(base.clone(), sys))
}

/// The first branch of a Glue type that holds, after restriction.
fn glue_branch(ty: &Value) -> Option<(Value, Value)> {
    match ty.get() {
        Val::Glue(_, sys) => sys.iter().find(|(c, _)| c.is_top()).map(|(_, te)| te.clone()),
        _ => None,
    }
}

fn comp_glue(
    i: Name,
    line: &Value,
    b: &Value,
    sys: &VSys<(Value, Value)>,
    sides: &VSys<Value>,
    base: &Value,
) -> Value {
    let line0 = line.at_const(i, false);
    let unglued: VSys<Value> =
        sides.iter().map(|(c, u)| (c.clone(), unglue(u, &line.face(face_of(c))))).collect();
    let b0 = unglue(base, &line0);
    let a1p = comp(i, b, &unglued, &b0);
    let b1 = b.at_const(i, true);

    let mut psi = Cofib::bot();
    for (c, _) in sys {
        psi = psi.or(c);
    }
    let delta = psi.forall(i);
    let psi1 = psi.subst(i, &DimExpr::one());
    let fiber = builtin("fiber");

    let mut glued = Vec::new();
    let mut fix_sides: VSys<Value> =
        unglued.iter().map(|(c, v)| (c.clone(), v.at_const(i, true))).collect();
    let j = Name::fresh();
    let jv = DimExpr::var(j);
    for g in psi1.faces() {
        let line_g = line.face(g);
        let line1_g = line_g.at_const(i, true);
        let (t1, e1) = match glue_branch(&line1_g) {
            Some(te) => te,
            None => continue,
        };
        let a1p_g = a1p.face(g);
        let b1_g = b1.face(g);
        let f1 = fst(&e1);
        let contr = app(&snd(&e1), &a1p_g);
        let center = fst(&contr);
        let contraction = snd(&contr);
        let fib = app(&app(&app(&app(&fiber, &t1), &b1_g), &f1), &a1p_g);

        let sides_g = restrict_sides(sides, g);
        let unglued_g = restrict_sides(&unglued, g);
        let base_g = base.face(g);
        let b0_g = b0.face(g);
        let b_g = b.face(g);

        let mut fsides: VSys<Value> = Vec::new();
        for d in delta.restrict(g).faces() {
            let line_d = line_g.face(d);
            let (tl, el) = match glue_branch(&line_d) {
                Some(te) => te,
                None => continue,
            };
            let sides_d = restrict_sides(&sides_g, d);
            let base_d = base_g.face(d);
            let t1p = comp(i, &tl, &sides_d, &base_d);
            // the path from the base composition to the image of t1p
            let k = Name::fresh();
            let tl_k = tl.rename(i, k);
            let sides_dk = map_sides(&sides_d, |v| v.rename(i, k));
            let filled = fill(false, k, &tl_k, &sides_dk, &base_d, &DimExpr::var(i));
            let l = Name::fresh();
            let mut wsides = restrict_sides(&unglued_g, d);
            wsides.push((Cofib::atom(l, true), app(&fst(&el), &filled)));
            let omega =
                Value::new(Val::PLam(l, comp(i, &b_g.face(d), &wsides, &b0_g.face(d))));
            let p = app(&contraction.face(d), &Value::new(Val::Pair(t1p, omega)));
            fsides.push((Cofib::from_face(d.clone()), papp(&p, &jv)));
        }
        for (c, u) in &sides_g {
            let f = face_of(c);
            let u1 = u.at_const(i, true);
            let a1f = a1p_g.face(f);
            let const_path = Value::new(Val::PLam(Name::fresh(), a1f));
            let p = app(&contraction.face(f), &Value::new(Val::Pair(u1, const_path)));
            fsides.push((c.clone(), papp(&p, &jv)));
        }
        let v = comp(j, &fib, &fsides, &center);
        let alpha = snd(&v);
        fix_sides.push((Cofib::from_face(g.clone()), papp(&alpha, &jv)));
        glued.push((Cofib::from_face(g.clone()), fst(&v)));
    }
    let a1 = comp(j, &b1, &fix_sides, &a1p);
    glue_elem(a1, glued)
}

fn restrict_sides(sides: &VSys<Value>, g: &crate::cofib::Face) -> VSys<Value> {
    if g.is_empty() {
        return sides.clone();
    }
    let mut out = Vec::new();
    for (c, v) in sides {
        let c2 = c.restrict(g);
        if c2.is_bot() {
            continue;
        }
        let v2 = v.face(g);
        for f in c2.faces() {
            out.push((Cofib::from_face(f.clone()), v2.face(f)));
        }
    }
    out
}

fn comp_susp(i: Name, a: &Value, sides: &VSys<Value>, base: &Value) -> Value {
    let a1 = a.at_const(i, true);
    let ty1 = Value::new(Val::Susp(a1));
    let iv = DimExpr::var(i);
    let moved = map_sides(sides, |u| transport_susp(i, a, &iv, u));
    let base1 = transport_susp(i, a, &DimExpr::zero(), base);
    hcomp_susp(ty1, i, moved, base1)
}

/// Move `v : Susp (a@r)` to `Susp (a@1)` along `a@(r \/ j)`.
fn transport_susp(i: Name, a: &Value, r: &DimExpr, v: &Value) -> Value {
    if r.is_one() {
        return v.clone();
    }
    match v.get() {
        Val::North | Val::South => v.clone(),
        Val::Merid(x, s) => {
            let j = Name::fresh();
            let line = a.at(i, &r.join(&DimExpr::var(j)));
            let moved = comp(j, &line, &vec![(Cofib::eq(r, true), x.clone())], x);
            merid(moved, s.clone())
        }
        Val::HComp(_, k, sides, base) => {
            let ty1 = Value::new(Val::Susp(a.at_const(i, true)));
            let moved = map_sides(sides, |u| transport_susp(i, a, r, u));
            hcomp_susp(ty1, *k, moved, transport_susp(i, a, r, base))
        }
        _ => {
            let j = Name::fresh();
            let line = Value::new(Val::Susp(a.at(i, &r.join(&DimExpr::var(j)))));
            let sides = vec![(Cofib::eq(r, true), v.clone())];
            let sides = split_faces(&sides);
            if let Some(s) = top_side(&sides) {
                return s.clone();
            }
            stuck_comp(j, &line, sides, v)
        }
    }
}

/// Homogeneous composition in `ty`, a suspension.
pub fn hcomp_susp(ty: Value, i: Name, sides: VSys<Value>, base: Value) -> Value {
    let sides = split_faces(&sides);
    if let Some(v) = top_side(&sides) {
        return v.at_const(i, true);
    }
    if sides.is_empty() {
        return base;
    }
    Value::new(Val::HComp(ty, i, sides, base))
}

/// `fill dir line sides base @ at`: the filler from the `dir` end to `at`.
pub fn fill(dir: bool, i: Name, line: &Value, sides: &VSys<Value>, base: &Value, at: &DimExpr) -> Value {
    let sides = split_faces(sides);
    if let Some(v) = top_side(&sides) {
        return v.at(i, at);
    }
    if at.as_const() == Some(dir) {
        return base.clone();
    }
    if mode() == Mode::PrimitiveFill {
        let ty = line.at(i, at);
        return Value::new(Val::Neutral(Neutral {
            head: Rc::new(Head::Fill {
                dir,
                dim: i,
                line: line.clone(),
                sides,
                base: base.clone(),
                at: at.clone(),
            }),
            spine: Rc::new(Vec::new()),
            ty,
        }));
    }
    let k = Name::fresh();
    let kv = DimExpr::var(k);
    let squash = if dir { kv.reverse().join(at) } else { kv.meet(at) };
    let line2 = line.at(i, &squash);
    let mut s2 = map_sides(&sides, |v| v.at(i, &squash));
    s2.push((Cofib::eq(at, dir), base.clone()));
    comp(k, &line2, &s2, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval::{with_mode, Mode};
    use crate::semantics::quote::quote;
    use crate::semantics::value::Val;

    fn num(n: u64) -> Value {
        crate::semantics::eval::eval_closed(&Term::numeral(n))
    }

    fn nat_line() -> (Name, Value) {
        (Name::fresh(), Value::new(Val::Nat))
    }

    #[test]
    fn comp_without_sides_in_nat_is_the_base() {
        let (i, a) = nat_line();
        assert_eq!(quote(0, &comp(i, &a, &Vec::new(), &num(3))).as_numeral(), Some(3));
    }

    #[test]
    fn total_side_wins() {
        let (i, a) = nat_line();
        let sides = vec![(Cofib::top(), num(2))];
        assert_eq!(quote(0, &comp(i, &a, &sides, &num(2))).as_numeral(), Some(2));
    }

    #[test]
    fn primitive_fill_is_stuck_off_its_boundary() {
        with_mode(Mode::PrimitiveFill, || {
            let (i, a) = nat_line();
            let r = DimExpr::var(Name::fresh());
            let v = fill(false, i, &a, &Vec::new(), &num(1), &r);
            assert!(matches!(v.get(), Val::Neutral(..)));
            // at the starting endpoint the fill is its base
            let v0 = fill(false, i, &a, &Vec::new(), &num(1), &DimExpr::zero());
            assert_eq!(quote(0, &v0).as_numeral(), Some(1));
        });
    }

    #[test]
    fn strict_fill_computes() {
        let (i, a) = nat_line();
        let v = fill(true, i, &a, &Vec::new(), &num(4), &DimExpr::zero());
        assert_eq!(quote(0, &v).as_numeral(), Some(4));
    }
}
