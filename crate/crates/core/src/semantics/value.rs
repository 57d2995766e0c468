//! The semantic domain: weak-head values, closures, neutrals, and the action
//! of dimension substitutions on all of them.

use std::rc::Rc;

use crate::cofib::{Cofib, Face};
use crate::interval::{DimExpr, Name};
use crate::syntax::term::Rt;

#[derive(Clone, Debug)]
pub struct Value(pub Rc<Val>);

/// Partial elements of values. Branch payloads that come from evaluation are
/// computed in the environment restricted to the branch, so they are only
/// meaningful where their cofibration holds.
pub type VSys<T> = Vec<(Cofib, T)>;

#[derive(Clone, Debug)]
pub enum Val {
    U(u32),
    Pi(String, Value, Closure),
    Sigma(String, Value, Closure),
    Lam(String, Value, Closure),
    Pair(Value, Value),
    Nat,
    Zero,
    Succ(Value),
    Path(Name, Value, Value, Value),
    PLam(Name, Value),
    /// Glue types are never reduced eagerly; see [`unfold`].
    Glue(Value, VSys<(Value, Value)>),
    GlueElem(Value, VSys<Value>),
    Id(Value, Value, Value),
    IdPair(Value, Cofib),
    Susp(Value),
    North,
    South,
    Merid(Value, DimExpr),
    /// Homogeneous composition in a suspension, a canonical form.
    HComp(Value, Name, VSys<Value>, Value),
    Neutral(Neutral),
}

#[derive(Clone, Debug)]
pub struct Neutral {
    pub head: Rc<Head>,
    pub spine: Rc<Vec<Elim>>,
    pub ty: Value,
}

#[derive(Clone, Debug)]
pub enum Head {
    /// A variable by de Bruijn level, with its type.
    Var(usize, Value),
    Comp { dim: Name, line: Value, sides: VSys<Value>, base: Value },
    Fill { dir: bool, dim: Name, line: Value, sides: VSys<Value>, base: Value, at: DimExpr },
}

#[derive(Clone, Debug)]
pub enum Elim {
    App(Value),
    Fst,
    Snd,
    PApp(DimExpr),
    NatRec(Value, Value, Value),
    J(Value, Value),
    SuspRec(Value, Value, Value, Value),
    /// Carries the Glue type of the argument.
    Unglue(Value),
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub env: Env,
    pub body: Rt,
}

#[derive(Clone, Debug, Default)]
pub struct Env {
    pub vals: Rc<Vec<Value>>,
    pub dims: Rc<Vec<(Name, DimExpr)>>,
}

/// A simultaneous substitution of dimension expressions for names.
#[derive(Clone, Debug, Default)]
pub struct DSub {
    pairs: Vec<(Name, DimExpr)>,
}

impl DSub {
    pub fn single(n: Name, r: DimExpr) -> DSub {
        DSub { pairs: vec![(n, r)] }
    }

    pub fn from_face(face: &Face) -> DSub {
        DSub { pairs: face.iter().map(|(n, b)| (*n, DimExpr::constant(*b))).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, n: Name) -> Option<&DimExpr> {
        self.pairs.iter().find(|(m, _)| *m == n).map(|(_, r)| r)
    }

    pub fn pairs(&self) -> &[(Name, DimExpr)] {
        &self.pairs
    }

    fn without(&self, n: Name) -> DSub {
        DSub { pairs: self.pairs.iter().filter(|(m, _)| *m != n).cloned().collect() }
    }

    fn range_mentions(&self, n: Name) -> bool {
        self.pairs.iter().any(|(_, r)| r.mentions(n))
    }

    pub fn dim(&self, r: &DimExpr) -> DimExpr {
        if self.pairs.is_empty() {
            return r.clone();
        }
        r.subst_with(&|n| self.get(n).cloned())
    }

    pub fn cof(&self, c: &Cofib) -> Cofib {
        if self.pairs.is_empty() {
            return c.clone();
        }
        c.subst_with(&|n| self.get(n).cloned())
    }
}

impl Value {
    pub fn new(v: Val) -> Value {
        Value(Rc::new(v))
    }

    pub fn var(level: usize, ty: Value) -> Value {
        Value::new(Val::Neutral(Neutral {
            head: Rc::new(Head::Var(level, ty.clone())),
            spine: Rc::new(Vec::new()),
            ty,
        }))
    }

    pub fn get(&self) -> &Val {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Value) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    pub fn rename(&self, from: Name, to: Name) -> Value {
        self.act(&DSub::single(from, DimExpr::var(to)))
    }

    pub fn at(&self, i: Name, r: &DimExpr) -> Value {
        self.act(&DSub::single(i, r.clone()))
    }

    pub fn at_const(&self, i: Name, b: bool) -> Value {
        self.at(i, &DimExpr::constant(b))
    }

    pub fn face(&self, f: &Face) -> Value {
        if f.is_empty() {
            return self.clone();
        }
        self.act(&DSub::from_face(f))
    }

    /// Apply a dimension substitution, re-running any computation that the
    /// substitution may unblock.
    pub fn act(&self, s: &DSub) -> Value {
        if s.is_empty() {
            return self.clone();
        }
        use crate::semantics::eval as ev;
        use crate::semantics::kan;
        match self.get() {
            Val::U(_) | Val::Nat | Val::Zero | Val::North | Val::South => self.clone(),
            Val::Pi(x, a, c) => Value::new(Val::Pi(x.clone(), a.act(s), c.act(s))),
            Val::Sigma(x, a, c) => Value::new(Val::Sigma(x.clone(), a.act(s), c.act(s))),
            Val::Lam(x, a, c) => Value::new(Val::Lam(x.clone(), a.act(s), c.act(s))),
            Val::Pair(a, b) => Value::new(Val::Pair(a.act(s), b.act(s))),
            Val::Succ(a) => Value::new(Val::Succ(a.act(s))),
            Val::Path(j, a, x, y) => {
                let (j2, a2) = act_binder(*j, a, s);
                Value::new(Val::Path(j2, a2, x.act(s), y.act(s)))
            }
            Val::PLam(j, a) => {
                let (j2, a2) = act_binder(*j, a, s);
                Value::new(Val::PLam(j2, a2))
            }
            Val::Glue(b, sys) => Value::new(Val::Glue(
                b.act(s),
                act_sys(sys, s, |(t, e)| (t.act(s), e.act(s))),
            )),
            Val::GlueElem(a, sys) => ev::glue_elem(a.act(s), act_sys(sys, s, |t| t.act(s))),
            Val::Id(a, x, y) => Value::new(Val::Id(a.act(s), x.act(s), y.act(s))),
            Val::IdPair(w, c) => Value::new(Val::IdPair(w.act(s), s.cof(c))),
            Val::Susp(a) => Value::new(Val::Susp(a.act(s))),
            Val::Merid(a, r) => ev::merid(a.act(s), s.dim(r)),
            Val::HComp(ty, i, sides, base) => {
                let (i2, sides2) = act_binder_sys(*i, sides, s);
                kan::hcomp_susp(ty.act(s), i2, sides2, base.act(s))
            }
            Val::Neutral(ne) => {
                let mut v = match &*ne.head {
                    Head::Var(l, ty) => Value::var(*l, ty.act(s)),
                    Head::Comp { dim, line, sides, base } => {
                        let (i2, line2) = act_binder(*dim, line, s);
                        let sides2 = act_sides_under(*dim, i2, sides, s);
                        kan::comp(i2, &line2, &sides2, &base.act(s))
                    }
                    Head::Fill { dir, dim, line, sides, base, at } => {
                        let (i2, line2) = act_binder(*dim, line, s);
                        let sides2 = act_sides_under(*dim, i2, sides, s);
                        kan::fill(*dir, i2, &line2, &sides2, &base.act(s), &s.dim(at))
                    }
                };
                for e in ne.spine.iter() {
                    v = match e {
                        Elim::App(a) => ev::app(&v, &a.act(s)),
                        Elim::Fst => ev::fst(&v),
                        Elim::Snd => ev::snd(&v),
                        Elim::PApp(r) => ev::papp(&v, &s.dim(r)),
                        Elim::NatRec(p, z, f) => ev::natrec(&p.act(s), &z.act(s), &f.act(s), &v),
                        Elim::J(p, d) => ev::j_elim(&p.act(s), &d.act(s), &v),
                        Elim::SuspRec(p, n, so, m) => {
                            ev::susprec(&p.act(s), &n.act(s), &so.act(s), &m.act(s), &v)
                        }
                        Elim::Unglue(g) => ev::unglue(&v, &g.act(s)),
                    };
                }
                v
            }
        }
    }
}

/// Act under a dimension binder, renaming it when the substitution would
/// capture it.
pub fn act_binder(j: Name, body: &Value, s: &DSub) -> (Name, Value) {
    let inner = s.without(j);
    if inner.is_empty() {
        return (j, body.clone());
    }
    if inner.range_mentions(j) {
        let j2 = Name::fresh();
        let renamed = body.rename(j, j2);
        (j2, renamed.act(&inner))
    } else {
        (j, body.act(&inner))
    }
}

/// Act on the sides of a composition whose bound name is `old`, producing
/// sides bound by `new` (as chosen by [`act_binder`] on the line).
pub fn act_sides_under(old: Name, new: Name, sides: &VSys<Value>, s: &DSub) -> VSys<Value> {
    let inner = s.without(old);
    let mut out = Vec::with_capacity(sides.len());
    for (c, v) in sides {
        let c2 = inner.cof(c);
        if c2.is_bot() {
            continue;
        }
        let v = if old != new { v.rename(old, new) } else { v.clone() };
        out.push((c2, v.act(&inner)));
    }
    out
}

fn act_binder_sys(i: Name, sides: &VSys<Value>, s: &DSub) -> (Name, VSys<Value>) {
    let inner = s.without(i);
    let i2 = if inner.range_mentions(i) { Name::fresh() } else { i };
    (i2, act_sides_under(i, i2, sides, s))
}

pub fn act_sys<T>(sys: &VSys<T>, s: &DSub, f: impl Fn(&T) -> T) -> VSys<T> {
    let mut out = Vec::with_capacity(sys.len());
    for (c, x) in sys {
        let c2 = s.cof(c);
        if c2.is_bot() {
            continue;
        }
        out.push((c2, f(x)));
    }
    out
}

impl Closure {
    pub fn new(env: Env, body: Rt) -> Closure {
        Closure { env, body }
    }

    pub fn act(&self, s: &DSub) -> Closure {
        Closure { env: self.env.act_closure(s), body: self.body.clone() }
    }

    pub fn inst(&self, v: &Value) -> Value {
        crate::semantics::eval::eval(&self.env.push(v.clone()), &self.body)
    }
}

impl Env {
    pub fn empty() -> Env {
        Env::default()
    }

    pub fn from_vals(vals: Vec<Value>) -> Env {
        Env { vals: Rc::new(vals), dims: Rc::new(Vec::new()) }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn lookup(&self, idx: usize) -> Value {
        let n = self.vals.len();
        assert!(idx < n, "internal: variable {idx} out of scope");
        self.vals[n - 1 - idx].clone()
    }

    pub fn push(&self, v: Value) -> Env {
        let mut vals = (*self.vals).clone();
        vals.push(v);
        Env { vals: Rc::new(vals), dims: self.dims.clone() }
    }

    pub fn drop_last(&self) -> Env {
        let mut vals = (*self.vals).clone();
        vals.pop();
        Env { vals: Rc::new(vals), dims: self.dims.clone() }
    }

    pub fn with_vals(&self, vals: Vec<Value>) -> Env {
        Env { vals: Rc::new(vals), dims: self.dims.clone() }
    }

    pub fn bind_dim(&self, n: Name, r: DimExpr) -> Env {
        let mut dims = (*self.dims).clone();
        dims.push((n, r));
        Env { vals: self.vals.clone(), dims: Rc::new(dims) }
    }

    fn dim_lookup(&self, n: Name) -> Option<DimExpr> {
        self.dims.iter().rev().find(|(m, _)| *m == n).map(|(_, r)| r.clone())
    }

    /// Interpret a dimension expression written in the scope of this
    /// environment.
    pub fn dim(&self, r: &DimExpr) -> DimExpr {
        if self.dims.is_empty() {
            return r.clone();
        }
        r.subst_with(&|n| self.dim_lookup(n))
    }

    pub fn cof(&self, c: &Cofib) -> Cofib {
        if self.dims.is_empty() {
            return c.clone();
        }
        c.subst_with(&|n| self.dim_lookup(n))
    }

    /// Act on every value and dimension held by the environment.
    pub fn act(&self, s: &DSub) -> Env {
        if s.is_empty() {
            return self.clone();
        }
        Env {
            vals: Rc::new(self.vals.iter().map(|v| v.act(s)).collect()),
            dims: Rc::new(self.dims.iter().map(|(n, r)| (*n, s.dim(r))).collect()),
        }
    }

    /// Like [`Env::act`], and additionally makes the substitution apply to
    /// names the body mentions without binding them.
    fn act_closure(&self, s: &DSub) -> Env {
        let mut env = self.act(s);
        let mut dims = (*env.dims).clone();
        for (n, r) in s.pairs() {
            if !self.dims.iter().any(|(m, _)| m == n) {
                dims.push((*n, r.clone()));
            }
        }
        env.dims = Rc::new(dims);
        env
    }

    pub fn face(&self, f: &Face) -> Env {
        if f.is_empty() {
            return self.clone();
        }
        self.act(&DSub::from_face(f))
    }
}

/// Reduce a Glue type whose system is empty or has a true branch.
pub fn unfold(ty: &Value) -> Value {
    match ty.get() {
        Val::Glue(b, sys) => {
            if sys.is_empty() {
                return unfold(b);
            }
            for (c, (t, _)) in sys {
                if c.is_top() {
                    return unfold(t);
                }
            }
            ty.clone()
        }
        _ => ty.clone(),
    }
}
