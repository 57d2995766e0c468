//! Evaluation of terms into values, and the eliminators acting on values.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use crate::cofib::{Cofib, System};
use crate::interval::{DimExpr, Name};
use crate::semantics::kan;
use crate::semantics::value::{unfold, Closure, Elim, Env, Head, Neutral, VSys, Val, Value};
use crate::syntax::term::{Rt, Side, Subst, Term};

/// Which Kan regime evaluation follows.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// `comp` computes by cases on the type and `fill` is derived from it.
    Strict,
    /// `fill` is a constant that only reduces on its degenerate boundary.
    PrimitiveFill,
}

thread_local! {
    static MODE: Cell<Mode> = const { Cell::new(Mode::Strict) };
    static GLOBALS: RefCell<HashMap<Rc<str>, (Value, Value)>> = RefCell::new(HashMap::new());
}

pub fn mode() -> Mode {
    MODE.with(|m| m.get())
}

/// Run `f` with the given mode in force on this thread.
pub fn with_mode<R>(m: Mode, f: impl FnOnce() -> R) -> R {
    let old = MODE.with(|c| c.replace(m));
    let r = f();
    MODE.with(|c| c.set(old));
    r
}

/// Register a checked top-level definition with its type and value.
pub fn define_global(name: &str, ty: Value, val: Value) {
    GLOBALS.with(|g| g.borrow_mut().insert(Rc::from(name), (ty, val)));
}

pub fn global(name: &str) -> Option<(Value, Value)> {
    GLOBALS.with(|g| g.borrow().get(name).cloned())
}

pub fn global_names() -> Vec<String> {
    GLOBALS.with(|g| g.borrow().keys().map(|k| k.to_string()).collect())
}

/// Forget every definition.
pub fn clear_globals() {
    GLOBALS.with(|g| g.borrow_mut().clear());
}

pub fn snapshot_globals() -> HashMap<Rc<str>, (Value, Value)> {
    GLOBALS.with(|g| g.borrow().clone())
}

pub fn restore_globals(snap: HashMap<Rc<str>, (Value, Value)>) {
    GLOBALS.with(|g| *g.borrow_mut() = snap);
}

fn neutral(ne: &Neutral, e: Elim, ty: Value) -> Value {
    let mut spine = (*ne.spine).clone();
    spine.push(e);
    Value::new(Val::Neutral(Neutral { head: ne.head.clone(), spine: Rc::new(spine), ty }))
}

pub fn app(f: &Value, a: &Value) -> Value {
    match f.get() {
        Val::Lam(_, _, c) => c.inst(a),
        Val::Neutral(ne) => match unfold(&ne.ty).get() {
            Val::Pi(_, _, b) => neutral(ne, Elim::App(a.clone()), b.inst(a)),
            other => panic!("internal: neutral application at type {other:?}"),
        },
        other => panic!("internal: application of a non-function {other:?}"),
    }
}

pub fn fst(v: &Value) -> Value {
    match v.get() {
        Val::Pair(a, _) => a.clone(),
        Val::Neutral(ne) => match unfold(&ne.ty).get() {
            Val::Sigma(_, a, _) => neutral(ne, Elim::Fst, a.clone()),
            other => panic!("internal: first projection at type {other:?}"),
        },
        other => panic!("internal: first projection of {other:?}"),
    }
}

pub fn snd(v: &Value) -> Value {
    match v.get() {
        Val::Pair(_, b) => b.clone(),
        Val::Neutral(ne) => match unfold(&ne.ty).get() {
            Val::Sigma(_, _, b) => {
                let ty = b.inst(&fst(v));
                neutral(ne, Elim::Snd, ty)
            }
            other => panic!("internal: second projection at type {other:?}"),
        },
        other => panic!("internal: second projection of {other:?}"),
    }
}

pub fn papp(p: &Value, r: &DimExpr) -> Value {
    match p.get() {
        Val::PLam(i, body) => body.at(*i, r),
        Val::Neutral(ne) => match unfold(&ne.ty).get() {
            Val::Path(j, a, x, y) => match r.as_const() {
                Some(false) => x.clone(),
                Some(true) => y.clone(),
                None => neutral(ne, Elim::PApp(r.clone()), a.at(*j, r)),
            },
            other => panic!("internal: path application at type {other:?}"),
        },
        other => panic!("internal: path application of {other:?}"),
    }
}

pub fn natrec(p: &Value, z: &Value, s: &Value, n: &Value) -> Value {
    match n.get() {
        Val::Zero => z.clone(),
        Val::Succ(m) => {
            let rec = natrec(p, z, s, m);
            app(&app(s, m), &rec)
        }
        Val::Neutral(ne) => neutral(ne, Elim::NatRec(p.clone(), z.clone(), s.clone()), app(p, n)),
        other => panic!("internal: natrec on {other:?}"),
    }
}

pub fn j_elim(p: &Value, d: &Value, q: &Value) -> Value {
    match q.get() {
        Val::IdPair(w, psi) => {
            if psi.is_top() {
                return d.clone();
            }
            // transport d along the square contracting the path onto its start
            let i = Name::fresh();
            let k = Name::fresh();
            let wi = papp(w, &DimExpr::var(i));
            let contracted = Value::new(Val::PLam(
                k,
                papp(w, &DimExpr::var(i).meet(&DimExpr::var(k))),
            ));
            let cof = psi.or(&Cofib::atom(i, false));
            let line = app(&app(p, &wi), &Value::new(Val::IdPair(contracted, cof)));
            kan::fill(false, i, &line, &vec![(psi.clone(), d.clone())], d, &DimExpr::one())
        }
        Val::Neutral(ne) => match unfold(&ne.ty).get() {
            Val::Id(_, _, y) => {
                let ty = app(&app(p, y), q);
                neutral(ne, Elim::J(p.clone(), d.clone()), ty)
            }
            other => panic!("internal: J at type {other:?}"),
        },
        other => panic!("internal: J on {other:?}"),
    }
}

pub fn merid(a: Value, r: DimExpr) -> Value {
    match r.as_const() {
        Some(false) => Value::new(Val::North),
        Some(true) => Value::new(Val::South),
        None => Value::new(Val::Merid(a, r)),
    }
}

pub fn susprec(p: &Value, n: &Value, s: &Value, m: &Value, u: &Value) -> Value {
    match u.get() {
        Val::North => n.clone(),
        Val::South => s.clone(),
        Val::Merid(a, r) => papp(&app(m, a), r),
        Val::HComp(ty, i, sides, base) => {
            let j = Name::fresh();
            let iv = DimExpr::var(*i);
            let mut fill_sides: VSys<Value> = sides
                .iter()
                .map(|(c, v)| (c.clone(), v.at(*i, &iv.meet(&DimExpr::var(j)))))
                .collect();
            fill_sides.push((Cofib::atom(*i, false), base.clone()));
            let filler = kan::hcomp_susp(ty.clone(), j, fill_sides, base.clone());
            let line = app(p, &filler);
            let rec_sides: VSys<Value> = sides
                .iter()
                .map(|(c, v)| (c.clone(), susprec(p, n, s, m, v)))
                .collect();
            kan::comp(*i, &line, &rec_sides, &susprec(p, n, s, m, base))
        }
        Val::Neutral(ne) => neutral(
            ne,
            Elim::SuspRec(p.clone(), n.clone(), s.clone(), m.clone()),
            app(p, u),
        ),
        other => panic!("internal: susprec on {other:?}"),
    }
}

pub fn glue_elem(a: Value, sys: VSys<Value>) -> Value {
    if sys.is_empty() {
        return a;
    }
    for (c, t) in &sys {
        if c.is_top() {
            return t.clone();
        }
    }
    Value::new(Val::GlueElem(a, sys))
}

/// Project out of a Glue type, given that type.
pub fn unglue(v: &Value, gty: &Value) -> Value {
    match gty.get() {
        Val::Glue(b, sys) => {
            if sys.is_empty() {
                return v.clone();
            }
            for (c, (_, e)) in sys {
                if c.is_top() {
                    return app(&fst(e), v);
                }
            }
            match v.get() {
                Val::GlueElem(a, _) => a.clone(),
                Val::Neutral(ne) => neutral(ne, Elim::Unglue(gty.clone()), b.clone()),
                other => panic!("internal: unglue of {other:?}"),
            }
        }
        _ => match v.get() {
            Val::GlueElem(a, _) => a.clone(),
            Val::Neutral(ne) if matches!(ne.ty.get(), Val::Glue(..)) => unglue(v, &ne.ty.clone()),
            other => panic!("internal: unglue of {other:?} without a Glue type"),
        },
    }
}

fn eval_subst(env: &Env, s: &Subst) -> Env {
    match s {
        Subst::Id => env.clone(),
        Subst::Shift => env.drop_last(),
        Subst::Comp(s, r) => eval_subst(&eval_subst(env, r), s),
        Subst::Ext(s, u) => eval_subst(env, s).push(eval(env, u)),
        Subst::Empty => env.with_vals(Vec::new()),
    }
}

/// Evaluate each branch in the environment restricted to each of its faces.
pub fn eval_sys<T, U>(env: &Env, sys: &System<T>, mut f: impl FnMut(&Env, &T) -> U) -> VSys<U> {
    let mut out = Vec::new();
    for (c, x) in sys {
        let c = env.cof(c);
        for face in c.faces() {
            let fenv = env.face(face);
            out.push((Cofib::from_face(face.clone()), f(&fenv, x)));
        }
    }
    out
}

fn eval_sides(env: &Env, k: Name, sides: &[Side]) -> VSys<Value> {
    let mut out = Vec::new();
    for sd in sides {
        let c = env.cof(&sd.cof);
        for face in c.faces() {
            let fenv = env.face(face).bind_dim(sd.dim, DimExpr::var(k));
            out.push((Cofib::from_face(face.clone()), eval(&fenv, &sd.body)));
        }
    }
    out
}

pub fn eval(env: &Env, t: &Term) -> Value {
    use Term::*;
    let ev = |t: &Rt| eval(env, t);
    match t {
        Var(i) => env.lookup(*i),
        Global(g) => match global(g) {
            Some((_, v)) => v,
            None => panic!("internal: unknown global `{g}`"),
        },
        Sub(u, s) => eval(&eval_subst(env, s), u),
        U(n) => Value::new(Val::U(*n)),
        Pi(x, a, b) => Value::new(Val::Pi(x.clone(), ev(a), Closure::new(env.clone(), b.clone()))),
        Sigma(x, a, b) => {
            Value::new(Val::Sigma(x.clone(), ev(a), Closure::new(env.clone(), b.clone())))
        }
        Lam(x, a, b) => {
            let dom = match a {
                Some(a) => ev(a),
                None => Value::new(Val::U(0)),
            };
            Value::new(Val::Lam(x.clone(), dom, Closure::new(env.clone(), b.clone())))
        }
        App(f, a) => app(&ev(f), &ev(a)),
        Pair(a, b) => Value::new(Val::Pair(ev(a), ev(b))),
        Fst(a) => fst(&ev(a)),
        Snd(a) => snd(&ev(a)),
        Nat => Value::new(Val::Nat),
        Zero => Value::new(Val::Zero),
        Succ(a) => Value::new(Val::Succ(ev(a))),
        NatRec(p, z, s, n) => natrec(&ev(p), &ev(z), &ev(s), &ev(n)),
        Path(i, a, x, y) => {
            let j = Name::fresh();
            let line = eval(&env.bind_dim(*i, DimExpr::var(j)), a);
            Value::new(Val::Path(j, line, ev(x), ev(y)))
        }
        PLam(i, b) => {
            let j = Name::fresh();
            Value::new(Val::PLam(j, eval(&env.bind_dim(*i, DimExpr::var(j)), b)))
        }
        PApp(p, r) => papp(&ev(p), &env.dim(r)),
        Glue(a, sys) => {
            let sys = eval_sys(env, sys, |e, (t, q)| (eval(e, t), eval(e, q)));
            Value::new(Val::Glue(ev(a), sys))
        }
        GlueElem(a, sys) => glue_elem(ev(a), eval_sys(env, sys, |e, t| eval(e, t))),
        Unglue(a, ann) => {
            let v = ev(a);
            match ann {
                Some(g) => unglue(&v, &ev(g)),
                None => unglue(&v, &Value::new(Val::U(0))),
            }
        }
        Fill { dir, line, sides, base, at } => {
            let k = Name::fresh();
            let l = eval(&env.bind_dim(line.0, DimExpr::var(k)), &line.1);
            let s = eval_sides(env, k, sides);
            kan::fill(*dir, k, &l, &s, &ev(base), &env.dim(at))
        }
        Comp { line, sides, base } => {
            let k = Name::fresh();
            let l = eval(&env.bind_dim(line.0, DimExpr::var(k)), &line.1);
            let s = eval_sides(env, k, sides);
            kan::comp(k, &l, &s, &ev(base))
        }
        Id(a, x, y) => Value::new(Val::Id(ev(a), ev(x), ev(y))),
        Refl(a) => {
            let k = Name::fresh();
            Value::new(Val::IdPair(Value::new(Val::PLam(k, ev(a))), Cofib::top()))
        }
        IdPair(p, c) => Value::new(Val::IdPair(ev(p), env.cof(c))),
        J(p, d, q) => j_elim(&ev(p), &ev(d), &ev(q)),
        Susp(a) => Value::new(Val::Susp(ev(a))),
        North => Value::new(Val::North),
        South => Value::new(Val::South),
        Merid(a, r) => merid(ev(a), env.dim(r)),
        SuspRec(p, n, s, m, u) => susprec(&ev(p), &ev(n), &ev(s), &ev(m), &ev(u)),
        Ann(a, _) => ev(a),
    }
}

/// Evaluate a closed term.
pub fn eval_closed(t: &Term) -> Value {
    eval(&Env::empty(), t)
}

/// The neutral's recorded head, for callers that inspect stuck terms.
pub fn head_of(v: &Value) -> Option<&Head> {
    match v.get() {
        Val::Neutral(ne) => Some(&ne.head),
        _ => None,
    }
}
