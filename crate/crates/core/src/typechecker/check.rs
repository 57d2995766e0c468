//! Bidirectional checking with elaboration: checked terms come back with
//! lambda domains filled in, unglue annotated with its Glue type, and every
//! system split into one branch per face.

use std::collections::HashSet;

use crate::cofib::{Cofib, Face};
use crate::interval::{DimExpr, Name};
use crate::semantics::builtins::builtin;
use crate::semantics::eval::{app, eval, fst, global, mode, Mode};
use crate::semantics::quote::quote;
use crate::semantics::value::{unfold, Closure, Env, Val, Value};
use crate::syntax::parser::parse_term_in;
use crate::syntax::printer::Printer;
use crate::syntax::term::{rc, resolve, Rt, Side, Term};
use crate::typechecker::conv::{cof_equal, conv, face_meet, sub_type};
use crate::typechecker::error::{CheckError, ErrorKind, TcResult};

/// A universe large enough to bound every motive.
const TOP_LEVEL: u32 = 1 << 20;

#[derive(Clone, Default)]
pub struct Ctx {
    pub env: Env,
    pub types: Vec<Value>,
    pub names: Vec<String>,
    pub dims: Vec<(Name, String)>,
}

fn dim_spelling(k: usize) -> String {
    const BASE: [&str; 5] = ["i", "j", "k", "l", "m"];
    let round = k / BASE.len();
    if round == 0 {
        BASE[k % BASE.len()].to_string()
    } else {
        format!("{}{round}", BASE[k % BASE.len()])
    }
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn depth(&self) -> usize {
        self.types.len()
    }

    pub fn bind(&self, name: &str, ty: Value) -> (Ctx, Value) {
        let v = Value::var(self.depth(), ty.clone());
        let mut c = self.clone();
        c.env = c.env.push(v.clone());
        c.types.push(ty);
        c.names.push(name.to_string());
        (c, v)
    }

    /// Bind a dimension name to itself.
    pub fn bind_dim(&self, i: Name) -> Ctx {
        let mut c = self.clone();
        c.env = c.env.bind_dim(i, DimExpr::var(i));
        let s = dim_spelling(c.dims.len());
        c.dims.push((i, s));
        c
    }

    /// The context restricted to a face.
    pub fn restrict(&self, f: &Face) -> Ctx {
        if f.is_empty() {
            return self.clone();
        }
        let mut c = self.clone();
        c.env = self.env.face(f);
        c.types = self.types.iter().map(|t| t.face(f)).collect();
        c
    }

    pub fn eval(&self, t: &Term) -> Value {
        eval(&self.env, t)
    }

    pub fn quote(&self, v: &Value) -> Term {
        quote(self.depth(), v)
    }

    pub fn show_term(&self, t: &Term) -> String {
        Printer::new(&self.names).with_dims(&self.dims).print(t)
    }

    pub fn show(&self, v: &Value) -> String {
        self.show_term(&self.quote(v))
    }
}

fn err(kind: ErrorKind, msg: impl Into<String>) -> CheckError {
    CheckError::new(kind, msg)
}

/// Build a type from source text over the given values.
fn kernel_type(src: &str, names: &[&str], vals: Vec<Value>) -> Value {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let t = parse_term_in(src, &names, &HashSet::new())
        .unwrap_or_else(|e| panic!("internal: kernel type `{src}`: {e}"));
    eval(&Env::from_vals(vals), &t)
}

fn expect_sub(ctx: &Ctx, actual: &Value, expected: &Value, what: &str) -> TcResult<()> {
    if sub_type(ctx.depth(), actual, expected) {
        Ok(())
    } else {
        Err(err(ErrorKind::Mismatch, format!("type mismatch in {what}"))
            .with_forms(ctx.show(expected), ctx.show(actual)))
    }
}

fn expect_conv(ctx: &Ctx, kind: ErrorKind, a: &Value, b: &Value, what: &str) -> TcResult<()> {
    if conv(ctx.depth(), a, b) {
        Ok(())
    } else {
        Err(err(kind, what.to_string()).with_forms(ctx.show(b), ctx.show(a)))
    }
}

fn level_of(ctx: &Ctx, ty: &Value, what: &str) -> TcResult<u32> {
    match unfold(ty).get() {
        Val::U(n) => Ok(*n),
        _ => Err(err(ErrorKind::Universe, format!("{what} is not a type")).with_forms("U".into(), ctx.show(ty))),
    }
}

/// Check that `t` is a type; returns the elaborated term and its level.
pub fn check_type(ctx: &Ctx, t: &Term) -> TcResult<(Term, u32)> {
    let (t2, ty) = infer(ctx, t)?;
    let n = level_of(ctx, &ty, &format!("`{}`", ctx.show_term(&t2)))?;
    Ok((t2, n))
}

struct Branch<T> {
    face: Face,
    dim: Option<Name>,
    val: T,
}

fn check_compatible(ctx: &Ctx, branches: &[Branch<Value>], what: &str) -> TcResult<()> {
    for (x, a) in branches.iter().enumerate() {
        for b in &branches[x + 1..] {
            let Some(g) = face_meet(&a.face, &b.face) else { continue };
            let (va, vb, cg) = match (a.dim, b.dim) {
                (Some(i), Some(j)) => {
                    let k = Name::fresh();
                    (a.val.rename(i, k), b.val.rename(j, k), ctx.restrict(&g).bind_dim(k))
                }
                _ => (a.val.clone(), b.val.clone(), ctx.restrict(&g)),
            };
            let (va, vb) = (va.face(&g), vb.face(&g));
            if !conv(cg.depth(), &va, &vb) {
                let show_face = Printer::new(&ctx.names).with_dims(&ctx.dims).cof(&Cofib::from_face(g.clone()));
                return Err(err(
                    ErrorKind::IncompatibleSystem,
                    format!("{what} disagree on {show_face}"),
                )
                .with_forms(cg.show(&va), cg.show(&vb)));
            }
        }
    }
    Ok(())
}

pub fn check(ctx: &Ctx, t: &Term, ty: &Value) -> TcResult<Term> {
    if let Term::GlueElem(a, sys) = t {
        if let Val::Glue(..) = ty.get() {
            return check_glue_elem(ctx, a, sys, ty);
        }
        if sys.is_empty() {
            return check(ctx, a, ty);
        }
    }
    let uty = unfold(ty);
    match (t, uty.get()) {
        (Term::Sub(..), _) => check(ctx, &resolve(t), ty),
        (Term::Lam(x, dom, body), Val::Pi(_, a, b)) => {
            let dom_el = match dom {
                Some(d) => {
                    let (d_el, _) = check_type(ctx, d)?;
                    let dv = ctx.eval(&d_el);
                    expect_conv(ctx, ErrorKind::Mismatch, &dv, a, "the domain annotation does not match")?;
                    d_el
                }
                None => ctx.quote(a),
            };
            let (c2, v) = ctx.bind(x, a.clone());
            let body_el = check(&c2, body, &b.inst(&v))?;
            Ok(Term::Lam(x.clone(), Some(rc(dom_el)), rc(body_el)))
        }
        (Term::Lam(..), _) => Err(err(ErrorKind::Mismatch, "a function was given where the type is not a function type")
            .with_forms(ctx.show(ty), "(_ : _) -> _".into())),
        (Term::PLam(i, body), Val::Path(j, a, x, y)) => {
            let ci = ctx.bind_dim(*i);
            let ai = a.rename(*j, *i);
            let body_el = check(&ci, body, &ai)?;
            let v = ci.eval(&body_el);
            expect_conv(ctx, ErrorKind::Boundary, &v.at_const(*i, false), x, "the path does not start at the stated endpoint")?;
            expect_conv(ctx, ErrorKind::Boundary, &v.at_const(*i, true), y, "the path does not end at the stated endpoint")?;
            Ok(Term::PLam(*i, rc(body_el)))
        }
        (Term::PLam(..), _) => Err(err(ErrorKind::Mismatch, "a path abstraction was given where the type is not a path type")
            .with_forms(ctx.show(ty), "Path _ _ _".into())),
        (Term::Pair(a, b), Val::Sigma(_, av, bc)) => {
            let a_el = check(ctx, a, av)?;
            let b_el = check(ctx, b, &bc.inst(&ctx.eval(&a_el)))?;
            Ok(Term::Pair(rc(a_el), rc(b_el)))
        }
        (Term::Pair(..), _) => Err(err(ErrorKind::Mismatch, "a pair was given where the type is not a sigma type")
            .with_forms(ctx.show(ty), "(_ : _) * _".into())),
        (Term::IdPair(p, c), Val::Id(a, x, y)) => {
            let path_ty = Value::new(Val::Path(Name::fresh(), a.clone(), x.clone(), y.clone()));
            let p_el = check(ctx, p, &path_ty)?;
            let pv = ctx.eval(&p_el);
            let cv = ctx.env.cof(c);
            for f in cv.faces() {
                let cf = ctx.restrict(f);
                let k = DimExpr::var(Name::fresh());
                let at = crate::semantics::eval::papp(&pv.face(f), &k);
                expect_conv(&cf, ErrorKind::Boundary, &at, &x.face(f), "the path is not constant where the cofibration holds")?;
            }
            Ok(Term::IdPair(rc(p_el), cv))
        }
        (Term::Refl(a), Val::Id(at, x, y)) => {
            let a_el = check(ctx, a, at)?;
            let av = ctx.eval(&a_el);
            expect_conv(ctx, ErrorKind::Mismatch, &av, x, "refl does not match the left endpoint")?;
            expect_conv(ctx, ErrorKind::Mismatch, &av, y, "refl does not match the right endpoint")?;
            Ok(Term::Refl(rc(a_el)))
        }
        (Term::North, Val::Susp(_)) => Ok(Term::North),
        (Term::South, Val::Susp(_)) => Ok(Term::South),
        (Term::Merid(a, r), Val::Susp(at)) => {
            let a_el = check(ctx, a, at)?;
            Ok(Term::Merid(rc(a_el), r.clone()))
        }
        _ => {
            let (t_el, actual) = infer(ctx, t)?;
            expect_sub(ctx, &actual, ty, &format!("`{}`", ctx.show_term(&t_el)))?;
            Ok(t_el)
        }
    }
}

fn check_glue_elem(ctx: &Ctx, a: &Rt, sys: &[(Cofib, Rt)], ty: &Value) -> TcResult<Term> {
    let Val::Glue(b, gsys) = ty.get() else { unreachable!() };
    let psi = gsys.iter().fold(Cofib::bot(), |acc, (c, _)| acc.or(c));
    let mut phi = Cofib::bot();
    for (c, _) in sys {
        phi = phi.or(&ctx.env.cof(c));
    }
    if !cof_equal(&phi, &psi) {
        let pr = Printer::new(&ctx.names).with_dims(&ctx.dims);
        return Err(err(ErrorKind::Boundary, "the glue system does not cover the faces of the Glue type")
            .with_forms(pr.cof(&psi), pr.cof(&phi)));
    }
    let a_el = check(ctx, a, b)?;
    let av = ctx.eval(&a_el);
    let mut out = Vec::new();
    let mut branches = Vec::new();
    for (c, t) in sys {
        for f in ctx.env.cof(c).faces() {
            let cf = ctx.restrict(f);
            let tyf = ty.face(f);
            let t_el = check(&cf, t, &unfold(&tyf))?;
            let tv = cf.eval(&t_el);
            let e = match tyf.get() {
                Val::Glue(_, s) => s.iter().find(|(c, _)| c.is_top()).map(|(_, (_, e))| e.clone()),
                _ => None,
            };
            if let Some(e) = e {
                expect_conv(&cf, ErrorKind::Boundary, &av.face(f), &app(&fst(&e), &tv), "the base of a glue element does not match its image")?;
            }
            branches.push(Branch { face: f.clone(), dim: None, val: tv });
            out.push((Cofib::from_face(f.clone()), rc(t_el)));
        }
    }
    check_compatible(ctx, &branches, "the branches of the glue element")?;
    Ok(Term::GlueElem(rc(a_el), out))
}

/// Elaborated line, sides and base of a Kan problem, with the result type.
type KanParts = ((Name, Rt), Vec<Side>, Rt, Term);

fn infer_kan(
    ctx: &Ctx,
    dir: bool,
    line: &(Name, Rt),
    sides: &[Side],
    base: &Rt,
) -> TcResult<KanParts> {
    let i = line.0;
    let (line_el, _) = check_type(&ctx.bind_dim(i), &line.1)?;
    let line_at = |c: &Ctx, r: DimExpr| eval(&c.env.bind_dim(i, r), &line_el);
    let base_el = check(ctx, base, &line_at(ctx, DimExpr::constant(dir)))?;
    let basev = ctx.eval(&base_el);
    let mut out = Vec::new();
    let mut branches = Vec::new();
    for sd in sides {
        for f in ctx.env.cof(&sd.cof).faces() {
            let cf = ctx.restrict(f).bind_dim(sd.dim);
            let ty_k = line_at(&cf, DimExpr::var(sd.dim));
            let b_el = check(&cf, &sd.body, &ty_k)?;
            let v = cf.eval(&b_el);
            let cr = ctx.restrict(f);
            expect_conv(&cr, ErrorKind::Boundary, &v.at_const(sd.dim, dir), &basev.face(f), "a side does not agree with the base")?;
            branches.push(Branch { face: f.clone(), dim: Some(sd.dim), val: v });
            out.push(Side { cof: Cofib::from_face(f.clone()), dim: sd.dim, body: rc(b_el) });
        }
    }
    check_compatible(ctx, &branches, "the sides")?;
    Ok(((i, rc(line_el)), out, rc(base_el), Term::U(0)))
}

fn line_value(ctx: &Ctx, line: &(Name, Rt), r: &DimExpr) -> Value {
    eval(&ctx.env.bind_dim(line.0, r.clone()), &line.1)
}

pub fn infer(ctx: &Ctx, t: &Term) -> TcResult<(Term, Value)> {
    match t {
        Term::Sub(..) => infer(ctx, &resolve(t)),
        Term::Var(ix) => {
            let d = ctx.depth();
            if *ix >= d {
                return Err(err(ErrorKind::Unbound, format!("variable index {ix} out of scope")));
            }
            Ok((t.clone(), ctx.types[d - 1 - ix].clone()))
        }
        Term::Global(g) => match global(g) {
            Some((ty, _)) => Ok((t.clone(), ty)),
            None => Err(err(ErrorKind::Unbound, format!("unknown definition `{g}`"))),
        },
        Term::U(n) => Ok((t.clone(), Value::new(Val::U(n + 1)))),
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
            let (a_el, la) = check_type(ctx, a)?;
            let (c2, _) = ctx.bind(x, ctx.eval(&a_el));
            let (b_el, lb) = check_type(&c2, b)?;
            let t2 = if matches!(t, Term::Pi(..)) {
                Term::Pi(x.clone(), rc(a_el), rc(b_el))
            } else {
                Term::Sigma(x.clone(), rc(a_el), rc(b_el))
            };
            Ok((t2, Value::new(Val::U(la.max(lb)))))
        }
        Term::Lam(x, Some(a), body) => {
            let (a_el, _) = check_type(ctx, a)?;
            let av = ctx.eval(&a_el);
            let (c2, _) = ctx.bind(x, av.clone());
            let (b_el, bty) = infer(&c2, body)?;
            let cod = rc(c2.quote(&bty));
            let ty = Value::new(Val::Pi(x.clone(), av, Closure::new(ctx.env.clone(), cod)));
            Ok((Term::Lam(x.clone(), Some(rc(a_el)), rc(b_el)), ty))
        }
        Term::Lam(..) => Err(err(ErrorKind::Mismatch, "cannot infer the type of an unannotated function")),
        Term::App(f, a) => {
            let (f_el, fty) = infer(ctx, f)?;
            match unfold(&fty).get() {
                Val::Pi(_, dom, cod) => {
                    let a_el = check(ctx, a, dom)?;
                    let av = ctx.eval(&a_el);
                    Ok((Term::App(rc(f_el), rc(a_el)), cod.inst(&av)))
                }
                _ => Err(err(ErrorKind::Mismatch, format!("`{}` is applied but is not a function", ctx.show_term(&f_el)))
                    .with_forms("(_ : _) -> _".into(), ctx.show(&fty))),
            }
        }
        Term::Fst(p) | Term::Snd(p) => {
            let (p_el, pty) = infer(ctx, p)?;
            match unfold(&pty).get() {
                Val::Sigma(_, a, b) => {
                    if matches!(t, Term::Fst(_)) {
                        Ok((Term::Fst(rc(p_el)), a.clone()))
                    } else {
                        let first = fst(&ctx.eval(&p_el));
                        Ok((Term::Snd(rc(p_el)), b.inst(&first)))
                    }
                }
                _ => Err(err(ErrorKind::Mismatch, format!("`{}` is projected but is not a pair", ctx.show_term(&p_el)))
                    .with_forms("(_ : _) * _".into(), ctx.show(&pty))),
            }
        }
        Term::Nat => Ok((Term::Nat, Value::new(Val::U(0)))),
        Term::Zero => Ok((Term::Zero, Value::new(Val::Nat))),
        Term::Succ(n) => {
            let n_el = check(ctx, n, &Value::new(Val::Nat))?;
            Ok((Term::Succ(rc(n_el)), Value::new(Val::Nat)))
        }
        Term::NatRec(p, z, s, n) => {
            let motive = kernel_type(&format!("(_ : Nat) -> U{TOP_LEVEL}"), &[], vec![]);
            let p_el = check(ctx, p, &motive)?;
            let pv = ctx.eval(&p_el);
            let z_el = check(ctx, z, &app(&pv, &Value::new(Val::Zero)))?;
            let sty = kernel_type("(n : Nat) -> (_ : P n) -> P (succ n)", &["P"], vec![pv.clone()]);
            let s_el = check(ctx, s, &sty)?;
            let n_el = check(ctx, n, &Value::new(Val::Nat))?;
            let nv = ctx.eval(&n_el);
            Ok((Term::NatRec(rc(p_el), rc(z_el), rc(s_el), rc(n_el)), app(&pv, &nv)))
        }
        Term::Path(i, a, x, y) => {
            let ci = ctx.bind_dim(*i);
            let (a_el, la) = check_type(&ci, a)?;
            let line = (*i, rc(a_el.clone()));
            let x_el = check(ctx, x, &line_value(ctx, &line, &DimExpr::zero()))?;
            let y_el = check(ctx, y, &line_value(ctx, &line, &DimExpr::one()))?;
            Ok((Term::Path(*i, rc(a_el), rc(x_el), rc(y_el)), Value::new(Val::U(la))))
        }
        Term::PLam(i, body) => {
            let ci = ctx.bind_dim(*i);
            let (b_el, bty) = infer(&ci, body)?;
            let v = ci.eval(&b_el);
            let ty = Value::new(Val::Path(*i, bty, v.at_const(*i, false), v.at_const(*i, true)));
            Ok((Term::PLam(*i, rc(b_el)), ty))
        }
        Term::PApp(p, r) => {
            let (p_el, pty) = infer(ctx, p)?;
            match unfold(&pty).get() {
                Val::Path(j, a, _, _) => {
                    let rv = ctx.env.dim(r);
                    Ok((Term::PApp(rc(p_el), r.clone()), a.at(*j, &rv)))
                }
                _ => Err(err(ErrorKind::Mismatch, format!("`{}` is applied to a dimension but is not a path", ctx.show_term(&p_el)))
                    .with_forms("Path _ _ _".into(), ctx.show(&pty))),
            }
        }
        Term::Glue(a, sys) => {
            let (a_el, mut level) = check_type(ctx, a)?;
            let av = ctx.eval(&a_el);
            let equiv = builtin("Equiv");
            let mut out = Vec::new();
            let mut tys = Vec::new();
            let mut eqs = Vec::new();
            for (c, (ty, e)) in sys {
                for f in ctx.env.cof(c).faces() {
                    let cf = ctx.restrict(f);
                    let (ty_el, lt) = check_type(&cf, ty)?;
                    level = level.max(lt);
                    let tv = cf.eval(&ty_el);
                    let want = app(&app(&equiv, &tv), &av.face(f));
                    let e_el = check(&cf, e, &want).map_err(|mut er| {
                        if er.kind == ErrorKind::Mismatch {
                            er.kind = ErrorKind::NotAnEquivalence;
                        }
                        er
                    })?;
                    let ev = cf.eval(&e_el);
                    tys.push(Branch { face: f.clone(), dim: None, val: tv });
                    eqs.push(Branch { face: f.clone(), dim: None, val: ev });
                    out.push((Cofib::from_face(f.clone()), (rc(ty_el), rc(e_el))));
                }
            }
            check_compatible(ctx, &tys, "the glued types")?;
            check_compatible(ctx, &eqs, "the equivalences")?;
            Ok((Term::Glue(rc(a_el), out), Value::new(Val::U(level))))
        }
        Term::GlueElem(..) => Err(err(ErrorKind::Mismatch, "cannot infer the type of a glue element; annotate it")),
        Term::Unglue(u, _) => {
            let (u_el, uty) = infer(ctx, u)?;
            match uty.get() {
                Val::Glue(b, _) => {
                    let ann = ctx.quote(&uty);
                    Ok((Term::Unglue(rc(u_el), Some(rc(ann))), b.clone()))
                }
                _ => Err(err(ErrorKind::Mismatch, format!("`{}` is unglued but its type is not a Glue type", ctx.show_term(&u_el)))
                    .with_forms("Glue _ [...]".into(), ctx.show(&uty))),
            }
        }
        Term::Fill { dir, line, sides, base, at } => {
            let (line_el, sides_el, base_el, _) = infer_kan(ctx, *dir, line, sides, base)?;
            let ty = line_value(ctx, &line_el, &ctx.env.dim(at));
            Ok((Term::Fill { dir: *dir, line: line_el, sides: sides_el, base: base_el, at: at.clone() }, ty))
        }
        Term::Comp { line, sides, base } => {
            if mode() == Mode::PrimitiveFill {
                return Err(err(ErrorKind::ModeViolation, "comp is not available in primitive-fill mode; use fill"));
            }
            let (line_el, sides_el, base_el, _) = infer_kan(ctx, false, line, sides, base)?;
            let ty = line_value(ctx, &line_el, &DimExpr::one());
            Ok((Term::Comp { line: line_el, sides: sides_el, base: base_el }, ty))
        }
        Term::Id(a, x, y) => {
            let (a_el, la) = check_type(ctx, a)?;
            let av = ctx.eval(&a_el);
            let x_el = check(ctx, x, &av)?;
            let y_el = check(ctx, y, &av)?;
            Ok((Term::Id(rc(a_el), rc(x_el), rc(y_el)), Value::new(Val::U(la))))
        }
        Term::Refl(a) => {
            let (a_el, aty) = infer(ctx, a)?;
            let av = ctx.eval(&a_el);
            Ok((Term::Refl(rc(a_el)), Value::new(Val::Id(aty, av.clone(), av))))
        }
        Term::IdPair(..) => Err(err(ErrorKind::Mismatch, "cannot infer the type of idpair; annotate it")),
        Term::J(p, d, q) => {
            let (q_el, qty) = infer(ctx, q)?;
            let (a, x, y) = match unfold(&qty).get() {
                Val::Id(a, x, y) => (a.clone(), x.clone(), y.clone()),
                _ => {
                    return Err(err(ErrorKind::Mismatch, format!("`{}` is eliminated with J but is not an identification", ctx.show_term(&q_el)))
                        .with_forms("Id _ _ _".into(), ctx.show(&qty)))
                }
            };
            let motive = kernel_type(
                &format!("(y : A) -> (_ : Id A x y) -> U{TOP_LEVEL}"),
                &["A", "x"],
                vec![a, x.clone()],
            );
            let p_el = check(ctx, p, &motive)?;
            let pv = ctx.eval(&p_el);
            let refl_x = Value::new(Val::IdPair(Value::new(Val::PLam(Name::fresh(), x.clone())), Cofib::top()));
            let d_el = check(ctx, d, &app(&app(&pv, &x), &refl_x))?;
            let qv = ctx.eval(&q_el);
            Ok((Term::J(rc(p_el), rc(d_el), rc(q_el)), app(&app(&pv, &y), &qv)))
        }
        Term::Susp(a) => {
            let (a_el, la) = check_type(ctx, a)?;
            Ok((Term::Susp(rc(a_el)), Value::new(Val::U(la))))
        }
        Term::North | Term::South => Err(err(ErrorKind::Mismatch, "cannot infer which suspension a pole belongs to; annotate it")),
        Term::Merid(a, r) => {
            let (a_el, aty) = infer(ctx, a)?;
            Ok((Term::Merid(rc(a_el), r.clone()), Value::new(Val::Susp(aty))))
        }
        Term::SuspRec(p, n, s, m, u) => {
            let (u_el, a) = match infer(ctx, u) {
                Ok((u_el, uty)) => match unfold(&uty).get() {
                    Val::Susp(a) => (Some(u_el), a.clone()),
                    _ => {
                        return Err(err(ErrorKind::Mismatch, "susprec is applied to something that is not in a suspension")
                            .with_forms("Susp _".into(), ctx.show(&uty)))
                    }
                },
                Err(e) => {
                    let (_, pty) = infer(ctx, p).map_err(|_| e.clone())?;
                    match unfold(&pty).get() {
                        Val::Pi(_, dom, _) => match unfold(dom).get() {
                            Val::Susp(a) => (None, a.clone()),
                            _ => return Err(e),
                        },
                        _ => return Err(e),
                    }
                }
            };
            let motive = kernel_type(&format!("(_ : Susp A) -> U{TOP_LEVEL}"), &["A"], vec![a.clone()]);
            let p_el = check(ctx, p, &motive)?;
            let pv = ctx.eval(&p_el);
            let n_el = check(ctx, n, &app(&pv, &Value::new(Val::North)))?;
            let s_el = check(ctx, s, &app(&pv, &Value::new(Val::South)))?;
            let nv = ctx.eval(&n_el);
            let sv = ctx.eval(&s_el);
            let mty = kernel_type(
                "(a : A) -> Path (<i> P (merid a i)) n s",
                &["A", "P", "n", "s"],
                vec![a.clone(), pv.clone(), nv, sv],
            );
            let m_el = check(ctx, m, &mty)?;
            let u_el = match u_el {
                Some(u) => u,
                None => check(ctx, u, &Value::new(Val::Susp(a)))?,
            };
            let uv = ctx.eval(&u_el);
            Ok((Term::SuspRec(rc(p_el), rc(n_el), rc(s_el), rc(m_el), rc(u_el)), app(&pv, &uv)))
        }
        Term::Ann(a, ty) => {
            let (ty_el, _) = check_type(ctx, ty)?;
            let tyv = ctx.eval(&ty_el);
            let a_el = check(ctx, a, &tyv)?;
            Ok((Term::Ann(rc(a_el), rc(ty_el)), tyv))
        }
        Term::Pair(..) => Err(err(ErrorKind::Mismatch, "cannot infer the type of a pair; annotate it")),
    }
}
