//! Raw terms and explicit substitutions.
//!
//! Term variables are de Bruijn indices. Dimension variables are [`Name`]s;
//! every dimension binder introduces a name that is unique in the program,
//! so a line `<i> A` is represented by the pair of its bound name and body.

use std::rc::Rc;

use crate::cofib::{Cofib, System};
use crate::interval::{DimExpr, Name};

pub type Rt = Rc<Term>;

/// One branch of the partial element given to `comp` or `fill`: under `cof`,
/// the line `<dim> body`.
#[derive(Clone, Debug)]
pub struct Side {
    pub cof: Cofib,
    pub dim: Name,
    pub body: Rt,
}

#[derive(Clone, Debug)]
pub enum Term {
    Var(usize),
    Global(Rc<str>),
    Sub(Rt, Rc<Subst>),
    U(u32),
    Pi(String, Rt, Rt),
    Lam(String, Option<Rt>, Rt),
    App(Rt, Rt),
    Sigma(String, Rt, Rt),
    Pair(Rt, Rt),
    Fst(Rt),
    Snd(Rt),
    Nat,
    Zero,
    Succ(Rt),
    NatRec(Rt, Rt, Rt, Rt),
    Path(Name, Rt, Rt, Rt),
    PLam(Name, Rt),
    PApp(Rt, DimExpr),
    Glue(Rt, System<(Rt, Rt)>),
    GlueElem(Rt, System<Rt>),
    /// The optional payload is the Glue type of the argument, filled in by
    /// the checker so evaluation can apply the equivalence on its faces.
    Unglue(Rt, Option<Rt>),
    Fill {
        dir: bool,
        line: (Name, Rt),
        sides: Vec<Side>,
        base: Rt,
        at: DimExpr,
    },
    Comp {
        line: (Name, Rt),
        sides: Vec<Side>,
        base: Rt,
    },
    Id(Rt, Rt, Rt),
    Refl(Rt),
    IdPair(Rt, Cofib),
    J(Rt, Rt, Rt),
    Susp(Rt),
    North,
    South,
    Merid(Rt, DimExpr),
    SuspRec(Rt, Rt, Rt, Rt, Rt),
    Ann(Rt, Rt),
}

/// Explicit substitutions. `t (Comp(s, r))` means `(t s) r`.
#[derive(Clone, Debug)]
pub enum Subst {
    Id,
    /// Weakening: variable `n` becomes `n + 1`.
    Shift,
    Comp(Rc<Subst>, Rc<Subst>),
    Ext(Rc<Subst>, Rt),
    Empty,
}

pub fn rc(t: Term) -> Rt {
    Rc::new(t)
}

impl Term {
    pub fn numeral(n: u64) -> Term {
        let mut t = Term::Zero;
        for _ in 0..n {
            t = Term::Succ(rc(t));
        }
        t
    }

    /// `Some(k)` when this term is literally `succ^k zero`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut k = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(k),
                Term::Succ(n) => {
                    k += 1;
                    t = n;
                }
                _ => return None,
            }
        }
    }

    /// Whether any Kan operation occurs syntactically.
    pub fn uses_kan(&self) -> (bool, bool) {
        let mut fill = false;
        let mut comp = false;
        self.walk(&mut |t| match t {
            Term::Fill { .. } => fill = true,
            Term::Comp { .. } => comp = true,
            _ => {}
        });
        (fill, comp)
    }

    /// Pre-order traversal over every subterm.
    pub fn walk(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn children(&self) -> Vec<&Rt> {
        use Term::*;
        match self {
            Var(_) | Global(_) | U(_) | Nat | Zero | North | South => vec![],
            Sub(t, _) => vec![t],
            Pi(_, a, b) | Sigma(_, a, b) => vec![a, b],
            Lam(_, a, b) => {
                let mut v: Vec<&Rt> = a.iter().collect();
                v.push(b);
                v
            }
            App(a, b) | Pair(a, b) | Ann(a, b) => vec![a, b],
            Fst(a) | Snd(a) | Succ(a) | PLam(_, a) | PApp(a, _) | Refl(a) | IdPair(a, _)
            | Susp(a) | Merid(a, _) => vec![a],
            NatRec(a, b, c, d) => vec![a, b, c, d],
            Path(_, a, b, c) | Id(a, b, c) | J(a, b, c) => vec![a, b, c],
            Glue(a, sys) => {
                let mut v = vec![a];
                for (_, (t, e)) in sys {
                    v.push(t);
                    v.push(e);
                }
                v
            }
            GlueElem(a, sys) => {
                let mut v = vec![a];
                v.extend(sys.iter().map(|(_, t)| t));
                v
            }
            Unglue(a, ann) => {
                let mut v = vec![a];
                v.extend(ann.iter());
                v
            }
            Fill { line, sides, base, .. } | Comp { line, sides, base } => {
                let mut v = vec![&line.1];
                v.extend(sides.iter().map(|s| &s.body));
                v.push(base);
                v
            }
            SuspRec(a, b, c, d, e) => vec![a, b, c, d, e],
        }
    }
}

fn lookup(s: &Subst, n: usize) -> Term {
    match s {
        Subst::Id => Term::Var(n),
        Subst::Shift => Term::Var(n + 1),
        Subst::Ext(s, u) => {
            if n == 0 {
                (**u).clone()
            } else {
                lookup(s, n - 1)
            }
        }
        Subst::Comp(s, r) => Term::Sub(rc(lookup(s, n)), r.clone()),
        Subst::Empty => Term::Var(n),
    }
}

/// The substitution used under a term binder.
pub fn lift(s: &Rc<Subst>) -> Rc<Subst> {
    Rc::new(Subst::Ext(
        Rc::new(Subst::Comp(s.clone(), Rc::new(Subst::Shift))),
        rc(Term::Var(0)),
    ))
}

fn sub(t: &Rt, s: &Rc<Subst>) -> Rt {
    rc(Term::Sub(t.clone(), s.clone()))
}

fn sub_sides(sides: &[Side], s: &Rc<Subst>) -> Vec<Side> {
    sides
        .iter()
        .map(|sd| Side { cof: sd.cof.clone(), dim: sd.dim, body: sub(&sd.body, s) })
        .collect()
}

/// Push an explicit substitution through the outermost constructor.
pub fn apply_subst(t: &Term, s: &Rc<Subst>) -> Term {
    use Term::*;
    match t {
        Var(n) => lookup(s, *n),
        Sub(u, r) => Sub(u.clone(), Rc::new(Subst::Comp(r.clone(), s.clone()))),
        Global(_) | U(_) | Nat | Zero | North | South => t.clone(),
        Pi(x, a, b) => Pi(x.clone(), sub(a, s), sub(b, &lift(s))),
        Sigma(x, a, b) => Sigma(x.clone(), sub(a, s), sub(b, &lift(s))),
        Lam(x, a, b) => Lam(x.clone(), a.as_ref().map(|a| sub(a, s)), sub(b, &lift(s))),
        App(a, b) => App(sub(a, s), sub(b, s)),
        Pair(a, b) => Pair(sub(a, s), sub(b, s)),
        Ann(a, b) => Ann(sub(a, s), sub(b, s)),
        Fst(a) => Fst(sub(a, s)),
        Snd(a) => Snd(sub(a, s)),
        Succ(a) => Succ(sub(a, s)),
        NatRec(p, z, f, n) => NatRec(sub(p, s), sub(z, s), sub(f, s), sub(n, s)),
        Path(i, a, x, y) => Path(*i, sub(a, s), sub(x, s), sub(y, s)),
        PLam(i, a) => PLam(*i, sub(a, s)),
        PApp(a, r) => PApp(sub(a, s), r.clone()),
        Glue(a, sys) => Glue(
            sub(a, s),
            sys.iter()
                .map(|(c, (t, e))| (c.clone(), (sub(t, s), sub(e, s))))
                .collect(),
        ),
        GlueElem(a, sys) => GlueElem(
            sub(a, s),
            sys.iter().map(|(c, t)| (c.clone(), sub(t, s))).collect(),
        ),
        Unglue(a, ann) => Unglue(sub(a, s), ann.as_ref().map(|g| sub(g, s))),
        Fill { dir, line, sides, base, at } => Fill {
            dir: *dir,
            line: (line.0, sub(&line.1, s)),
            sides: sub_sides(sides, s),
            base: sub(base, s),
            at: at.clone(),
        },
        Comp { line, sides, base } => Comp {
            line: (line.0, sub(&line.1, s)),
            sides: sub_sides(sides, s),
            base: sub(base, s),
        },
        Id(a, x, y) => Id(sub(a, s), sub(x, s), sub(y, s)),
        Refl(a) => Refl(sub(a, s)),
        IdPair(a, c) => IdPair(sub(a, s), c.clone()),
        J(p, d, q) => J(sub(p, s), sub(d, s), sub(q, s)),
        Susp(a) => Susp(sub(a, s)),
        Merid(a, r) => Merid(sub(a, s), r.clone()),
        SuspRec(p, n, so, m, u) => {
            SuspRec(sub(p, s), sub(n, s), sub(so, s), sub(m, s), sub(u, s))
        }
    }
}

/// Eliminate every explicit substitution.
pub fn resolve(t: &Term) -> Term {
    use Term::*;
    let r = |a: &Rt| rc(resolve(a));
    match t {
        Sub(u, s) => resolve(&apply_subst(u, s)),
        Var(_) | Global(_) | U(_) | Nat | Zero | North | South => t.clone(),
        Pi(x, a, b) => Pi(x.clone(), r(a), r(b)),
        Sigma(x, a, b) => Sigma(x.clone(), r(a), r(b)),
        Lam(x, a, b) => Lam(x.clone(), a.as_ref().map(r), r(b)),
        App(a, b) => App(r(a), r(b)),
        Pair(a, b) => Pair(r(a), r(b)),
        Ann(a, b) => Ann(r(a), r(b)),
        Fst(a) => Fst(r(a)),
        Snd(a) => Snd(r(a)),
        Succ(a) => Succ(r(a)),
        NatRec(p, z, f, n) => NatRec(r(p), r(z), r(f), r(n)),
        Path(i, a, x, y) => Path(*i, r(a), r(x), r(y)),
        PLam(i, a) => PLam(*i, r(a)),
        PApp(a, d) => PApp(r(a), d.clone()),
        Glue(a, sys) => Glue(
            r(a),
            sys.iter().map(|(c, (t, e))| (c.clone(), (r(t), r(e)))).collect(),
        ),
        GlueElem(a, sys) => GlueElem(r(a), sys.iter().map(|(c, t)| (c.clone(), r(t))).collect()),
        Unglue(a, ann) => Unglue(r(a), ann.as_ref().map(r)),
        Fill { dir, line, sides, base, at } => Fill {
            dir: *dir,
            line: (line.0, r(&line.1)),
            sides: sides
                .iter()
                .map(|s| Side { cof: s.cof.clone(), dim: s.dim, body: r(&s.body) })
                .collect(),
            base: r(base),
            at: at.clone(),
        },
        Comp { line, sides, base } => Comp {
            line: (line.0, r(&line.1)),
            sides: sides
                .iter()
                .map(|s| Side { cof: s.cof.clone(), dim: s.dim, body: r(&s.body) })
                .collect(),
            base: r(base),
        },
        Id(a, x, y) => Id(r(a), r(x), r(y)),
        Refl(a) => Refl(r(a)),
        IdPair(a, c) => IdPair(r(a), c.clone()),
        J(p, d, q) => J(r(p), r(d), r(q)),
        Susp(a) => Susp(r(a)),
        Merid(a, d) => Merid(r(a), d.clone()),
        SuspRec(p, n, s, m, u) => SuspRec(r(p), r(n), r(s), r(m), r(u)),
    }
}

/// Whether de Bruijn index `idx` occurs free.
pub fn uses_var(t: &Term, idx: usize) -> bool {
    use Term::*;
    match t {
        Var(n) => *n == idx,
        Sub(..) => uses_var(&resolve(t), idx),
        Pi(_, a, b) | Sigma(_, a, b) => uses_var(a, idx) || uses_var(b, idx + 1),
        Lam(_, a, b) => a.as_ref().is_some_and(|a| uses_var(a, idx)) || uses_var(b, idx + 1),
        _ => t.children().iter().any(|c| uses_var(c, idx)),
    }
}

struct Alpha {
    pairs: Vec<(Name, Name)>,
}

impl Alpha {
    fn map(&self, n: Name) -> Option<Name> {
        self.pairs.iter().rev().find(|(a, _)| *a == n).map(|(_, b)| *b)
    }

    fn dim(&self, a: &DimExpr, b: &DimExpr) -> bool {
        a.subst_with(&|n| self.map(n).map(DimExpr::var)) == *b
    }

    fn cof(&self, a: &Cofib, b: &Cofib) -> bool {
        a.subst_with(&|n| self.map(n).map(DimExpr::var)) == *b
    }

    fn bind<R>(&mut self, a: Name, b: Name, f: impl FnOnce(&mut Self) -> R) -> R {
        self.pairs.push((a, b));
        let r = f(self);
        self.pairs.pop();
        r
    }

    fn sides(&mut self, a: &[Side], b: &[Side]) -> bool {
        a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| {
                self.cof(&x.cof, &y.cof)
                    && self.bind(x.dim, y.dim, |s| s.term(&x.body, &y.body))
            })
    }

    fn term(&mut self, a: &Term, b: &Term) -> bool {
        use Term::*;
        match (a, b) {
            (Sub(..), _) | (_, Sub(..)) => self.term(&resolve(a), &resolve(b)),
            (Var(x), Var(y)) => x == y,
            (Global(x), Global(y)) => x == y,
            (U(m), U(n)) => m == n,
            (Nat, Nat) | (Zero, Zero) | (North, North) | (South, South) => true,
            (Pi(_, a1, b1), Pi(_, a2, b2)) | (Sigma(_, a1, b1), Sigma(_, a2, b2)) => {
                self.term(a1, a2) && self.term(b1, b2)
            }
            (Lam(_, a1, b1), Lam(_, a2, b2)) => {
                let doms = match (a1, a2) {
                    (Some(x), Some(y)) => self.term(x, y),
                    (None, None) => true,
                    _ => false,
                };
                doms && self.term(b1, b2)
            }
            (App(a1, b1), App(a2, b2))
            | (Pair(a1, b1), Pair(a2, b2))
            | (Ann(a1, b1), Ann(a2, b2)) => self.term(a1, a2) && self.term(b1, b2),
            (Fst(x), Fst(y)) | (Snd(x), Snd(y)) | (Succ(x), Succ(y)) => self.term(x, y),
            (Refl(x), Refl(y)) | (Susp(x), Susp(y)) => self.term(x, y),
            (NatRec(a1, b1, c1, d1), NatRec(a2, b2, c2, d2)) => {
                self.term(a1, a2) && self.term(b1, b2) && self.term(c1, c2) && self.term(d1, d2)
            }
            (Path(i, a1, x1, y1), Path(j, a2, x2, y2)) => {
                self.bind(*i, *j, |s| s.term(a1, a2)) && self.term(x1, x2) && self.term(y1, y2)
            }
            (PLam(i, x), PLam(j, y)) => self.bind(*i, *j, |s| s.term(x, y)),
            (PApp(x, r), PApp(y, s)) => self.term(x, y) && self.dim(r, s),
            (Glue(a1, s1), Glue(a2, s2)) => {
                self.term(a1, a2)
                    && s1.len() == s2.len()
                    && s1.iter().zip(s2).all(|((c1, (t1, e1)), (c2, (t2, e2)))| {
                        self.cof(c1, c2) && self.term(t1, t2) && self.term(e1, e2)
                    })
            }
            (GlueElem(a1, s1), GlueElem(a2, s2)) => {
                self.term(a1, a2)
                    && s1.len() == s2.len()
                    && s1
                        .iter()
                        .zip(s2)
                        .all(|((c1, t1), (c2, t2))| self.cof(c1, c2) && self.term(t1, t2))
            }
            (Unglue(x, _), Unglue(y, _)) => self.term(x, y),
            (
                Fill { dir: d1, line: l1, sides: s1, base: b1, at: r1 },
                Fill { dir: d2, line: l2, sides: s2, base: b2, at: r2 },
            ) => {
                d1 == d2
                    && self.bind(l1.0, l2.0, |s| s.term(&l1.1, &l2.1))
                    && self.sides(s1, s2)
                    && self.term(b1, b2)
                    && self.dim(r1, r2)
            }
            (
                Comp { line: l1, sides: s1, base: b1 },
                Comp { line: l2, sides: s2, base: b2 },
            ) => {
                self.bind(l1.0, l2.0, |s| s.term(&l1.1, &l2.1))
                    && self.sides(s1, s2)
                    && self.term(b1, b2)
            }
            (Id(a1, x1, y1), Id(a2, x2, y2)) | (J(a1, x1, y1), J(a2, x2, y2)) => {
                self.term(a1, a2) && self.term(x1, x2) && self.term(y1, y2)
            }
            (IdPair(x, c), IdPair(y, d)) => self.term(x, y) && self.cof(c, d),
            (Merid(x, r), Merid(y, s)) => self.term(x, y) && self.dim(r, s),
            (SuspRec(a1, b1, c1, d1, e1), SuspRec(a2, b2, c2, d2, e2)) => {
                self.term(a1, a2)
                    && self.term(b1, b2)
                    && self.term(c1, c2)
                    && self.term(d1, d2)
                    && self.term(e1, e2)
            }
            _ => false,
        }
    }
}

/// Equality up to renaming of bound dimension names and binder hints.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    Alpha { pairs: Vec::new() }.term(a, b)
}
