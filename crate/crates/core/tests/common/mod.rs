//! Generators and brute-force oracles shared by the property tests and the
//! acceptance target.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use cctt::cofib::{Cofib, Face};
use cctt::interval::{DimExpr, Name};
use cctt::semantics::eval::{clear_globals, global_names, mode, Mode};
use cctt::semantics::value::Value;
use cctt::syntax::parser::parse_term_open;
use cctt::syntax::term::{rc, Side, Term};
use cctt::typechecker::{check_source, check_type, conv, infer, Ctx};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

pub fn read_corpus(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Reset the global scope and load the prelude. Panics if it does not check.
pub fn load_prelude() {
    clear_globals();
    let reports = check_source(&read_corpus("prelude.cctt")).expect("prelude parses");
    for r in reports {
        if let Err(e) = r.result {
            panic!("prelude `{}` failed in {:?}: {}", r.name, mode(), e);
        }
    }
}

// ---------------------------------------------------------------------------
// Interval expressions and the four-element De Morgan algebra.

#[derive(Clone, Debug)]
pub enum D {
    Zero,
    One,
    Var(usize),
    Neg(Box<D>),
    Meet(Box<D>, Box<D>),
    Join(Box<D>, Box<D>),
}

pub fn dim_ast(names: usize, depth: u32) -> impl Strategy<Value = D> {
    let leaf = prop_oneof![
        1 => Just(D::Zero),
        1 => Just(D::One),
        6 => (0..names).prop_map(D::Var),
    ];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|d| D::Neg(Box::new(d))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| D::Meet(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| D::Join(Box::new(a), Box::new(b))),
        ]
    })
}

impl D {
    pub fn build(&self, names: &[Name]) -> DimExpr {
        match self {
            D::Zero => DimExpr::zero(),
            D::One => DimExpr::one(),
            D::Var(k) => DimExpr::var(names[*k]),
            D::Neg(a) => a.build(names).reverse(),
            D::Meet(a, b) => a.build(names).meet(&b.build(names)),
            D::Join(a, b) => a.build(names).join(&b.build(names)),
        }
    }

    /// Value in DM4. An element is two bits `(x, y)` with componentwise
    /// lattice operations and reversal `(x, y) -> (!y, !x)`; 0 is `00`, 1 is
    /// `11`, and `01`, `10` are the two fixed points of reversal.
    pub fn dm4(&self, val: &[u8]) -> u8 {
        match self {
            D::Zero => 0,
            D::One => 3,
            D::Var(k) => val[*k],
            D::Neg(a) => dm4_neg(a.dm4(val)),
            D::Meet(a, b) => a.dm4(val) & b.dm4(val),
            D::Join(a, b) => a.dm4(val) | b.dm4(val),
        }
    }

    /// An equal expression, reached by random applications of the algebra
    /// laws.
    pub fn rewrite(&self, rng: &mut StdRng, names: usize) -> D {
        let b = |d: D| Box::new(d);
        let d = match self {
            D::Neg(a) => match &**a {
                D::Meet(x, y) if rng.gen_bool(0.5) => D::Join(b(D::Neg(x.clone())), b(D::Neg(y.clone()))),
                D::Join(x, y) if rng.gen_bool(0.5) => D::Meet(b(D::Neg(x.clone())), b(D::Neg(y.clone()))),
                D::Neg(x) if rng.gen_bool(0.5) => (**x).clone(),
                _ => D::Neg(b(a.rewrite(rng, names))),
            },
            D::Meet(x, y) => match (&**x, &**y) {
                (_, D::Join(p, q)) if rng.gen_bool(0.4) => D::Join(
                    b(D::Meet(x.clone(), p.clone())),
                    b(D::Meet(x.clone(), q.clone())),
                ),
                _ if rng.gen_bool(0.3) => D::Meet(b(y.rewrite(rng, names)), b(x.rewrite(rng, names))),
                _ => D::Meet(b(x.rewrite(rng, names)), b(y.rewrite(rng, names))),
            },
            D::Join(x, y) => match (&**x, &**y) {
                (_, D::Meet(p, q)) if rng.gen_bool(0.4) => D::Meet(
                    b(D::Join(x.clone(), p.clone())),
                    b(D::Join(x.clone(), q.clone())),
                ),
                _ if rng.gen_bool(0.3) => D::Join(b(y.rewrite(rng, names)), b(x.rewrite(rng, names))),
                _ => D::Join(b(x.rewrite(rng, names)), b(y.rewrite(rng, names))),
            },
            other => other.clone(),
        };
        match rng.gen_range(0..8) {
            0 => D::Neg(b(D::Neg(b(d)))),
            1 => D::Join(b(d.clone()), b(D::Meet(b(d), b(D::Var(rng.gen_range(0..names)))))),
            2 => D::Meet(b(d), b(D::One)),
            3 => D::Join(b(d), b(D::Zero)),
            _ => d,
        }
    }

    /// Replace one leaf by a random one, usually changing the meaning.
    pub fn perturb(&self, rng: &mut StdRng, names: usize) -> D {
        let b = |d: D| Box::new(d);
        match self {
            D::Zero | D::One | D::Var(_) => match rng.gen_range(0..3) {
                0 => D::Var(rng.gen_range(0..names)),
                1 => D::Neg(b(self.clone())),
                _ => D::Meet(b(self.clone()), b(D::Var(rng.gen_range(0..names)))),
            },
            D::Neg(a) => D::Neg(b(a.perturb(rng, names))),
            D::Meet(x, y) if rng.gen_bool(0.5) => D::Meet(b(x.perturb(rng, names)), y.clone()),
            D::Meet(x, y) => D::Meet(x.clone(), b(y.perturb(rng, names))),
            D::Join(x, y) if rng.gen_bool(0.5) => D::Join(b(x.perturb(rng, names)), y.clone()),
            D::Join(x, y) => D::Join(x.clone(), b(y.perturb(rng, names))),
        }
    }
}

pub fn dm4_neg(v: u8) -> u8 {
    let x = v & 1;
    let y = (v >> 1) & 1;
    ((1 - y) & 1) | (((1 - x) & 1) << 1)
}

/// Every valuation of `n` names in DM4.
pub fn dm4_valuations(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..4u8).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Brute-force equality in the free De Morgan algebra.
pub fn dm4_equal(a: &D, b: &D, n: usize) -> bool {
    dm4_valuations(n).iter().all(|v| a.dm4(v) == b.dm4(v))
}

/// A pair of interval expressions: unrelated, equal by construction, or a
/// perturbation of an equal pair.
pub fn dim_pair(names: usize) -> impl Strategy<Value = (D, D)> {
    (dim_ast(names, 4), dim_ast(names, 4), any::<u64>(), 0..3u8).prop_map(move |(a, b, seed, kind)| {
        let mut rng = StdRng::seed_from_u64(seed);
        match kind {
            0 => (a, b),
            1 => {
                let r = a.rewrite(&mut rng, names).rewrite(&mut rng, names);
                (a, r)
            }
            _ => {
                let r = a.rewrite(&mut rng, names).perturb(&mut rng, names);
                (a, r)
            }
        }
    })
}

// ---------------------------------------------------------------------------
// Cofibrations and the {0, 1, unset} oracle.

#[derive(Clone, Debug)]
pub enum C {
    Top,
    Bot,
    Eq(D, bool),
    And(Box<C>, Box<C>),
    Or(Box<C>, Box<C>),
}

pub fn cof_ast(names: usize) -> impl Strategy<Value = C> {
    let leaf = prop_oneof![
        1 => Just(C::Top),
        1 => Just(C::Bot),
        4 => ((0..names).prop_map(D::Var), any::<bool>()).prop_map(|(d, b)| C::Eq(d, b)),
        2 => (dim_ast(names, 2), any::<bool>()).prop_map(|(d, b)| C::Eq(d, b)),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| C::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| C::Or(Box::new(a), Box::new(b))),
        ]
    })
}

/// A partial assignment of names to endpoints.
pub type Assign = Vec<Option<bool>>;

pub fn assignments(n: usize) -> Vec<Assign> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|a: Assign| {
                [None, Some(false), Some(true)].into_iter().map(move |x| {
                    let mut b = a.clone();
                    b.push(x);
                    b
                })
            })
            .collect();
    }
    out
}

impl C {
    pub fn build(&self, names: &[Name]) -> Cofib {
        match self {
            C::Top => Cofib::top(),
            C::Bot => Cofib::bot(),
            C::Eq(d, b) => Cofib::eq(&d.build(names), *b),
            C::And(a, b) => a.build(names).and(&b.build(names)),
            C::Or(a, b) => a.build(names).or(&b.build(names)),
        }
    }

    /// Truth under a partial assignment. An atom `(r = b)` holds when `r`,
    /// with the assigned names replaced, is forced to `b` whatever DM4 values
    /// the unset names take; atoms on unset names are therefore false.
    pub fn holds(&self, a: &Assign) -> bool {
        match self {
            C::Top => true,
            C::Bot => false,
            C::Eq(d, b) => {
                let target = if *b { 3 } else { 0 };
                let unset: Vec<usize> = (0..a.len()).filter(|k| a[*k].is_none()).collect();
                dm4_valuations(unset.len()).iter().all(|free| {
                    let mut val = vec![0u8; a.len()];
                    for (k, x) in a.iter().enumerate() {
                        if let Some(x) = x {
                            val[k] = if *x { 3 } else { 0 };
                        }
                    }
                    for (slot, k) in unset.iter().enumerate() {
                        val[*k] = free[slot];
                    }
                    d.dm4(&val) == target
                })
            }
            C::And(x, y) => x.holds(a) && y.holds(a),
            C::Or(x, y) => x.holds(a) || y.holds(a),
        }
    }
}

/// Truth of a canonical cofibration under a partial assignment: some face is
/// contained in it.
pub fn cofib_holds(c: &Cofib, names: &[Name], a: &Assign) -> bool {
    c.faces().iter().any(|f| {
        f.iter().all(|(n, b)| {
            let k = names.iter().position(|m| m == n).expect("face over known names");
            a[k] == Some(*b)
        })
    })
}

/// `p` entails `q` by enumeration of all partial assignments.
pub fn oracle_entails(p: &C, q: &C, n: usize) -> bool {
    assignments(n).iter().all(|a| !p.holds(a) || q.holds(a))
}

/// The face given by a partial assignment.
pub fn assign_face(a: &Assign, names: &[Name]) -> Face {
    let mut f = Face::new();
    for (k, x) in a.iter().enumerate() {
        if let Some(b) = x {
            f.insert(names[k], *b);
        }
    }
    f
}

/// Check both sides of the characterization of `forall(x, p)`: it implies
/// `p` at both endpoints of `x` without mentioning `x`, and every face not
/// mentioning `x` that implies `p` implies it. Returns a description of the
/// first violation.
pub fn forall_violation(p: &C, x: usize, names: &[Name]) -> Option<String> {
    let pc = p.build(names);
    let q = pc.forall(names[x]);
    if q.mentions(names[x]) {
        return Some(format!("forall mentions the bound name: {q:?}"));
    }
    for end in [false, true] {
        let p_end = pc.subst(names[x], &DimExpr::constant(end));
        if !q.entails(&p_end) {
            return Some(format!("forall does not entail p at {end}"));
        }
    }
    for a in assignments(names.len()) {
        if a[x].is_some() {
            continue;
        }
        let face = Cofib::from_face(assign_face(&a, names));
        let implies_p = [Some(false), Some(true), None].iter().all(|v| {
            let mut b = a.clone();
            b[x] = *v;
            p.holds(&b)
        });
        if implies_p && !cofib_holds(&q, names, &a) {
            return Some(format!("face {face:?} forces p but not forall"));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Well-scoped random terms.

pub struct TermGen {
    rng: StdRng,
    pub globals: Vec<String>,
}

impl TermGen {
    pub fn new(seed: u64) -> TermGen {
        TermGen { rng: StdRng::seed_from_u64(seed), globals: vec!["g".into(), "h".into()] }
    }

    pub fn global_set(&self) -> HashSet<String> {
        self.globals.iter().cloned().collect()
    }

    fn hint(&mut self) -> String {
        ["x", "y", "z", "f", "a", "_"][self.rng.gen_range(0..6)].to_string()
    }

    fn dim(&mut self, dims: &[Name]) -> DimExpr {
        if dims.is_empty() || self.rng.gen_bool(0.15) {
            return DimExpr::constant(self.rng.gen_bool(0.5));
        }
        let pick = |g: &mut Self| {
            let d = DimExpr::var(dims[g.rng.gen_range(0..dims.len())]);
            if g.rng.gen_bool(0.3) {
                d.reverse()
            } else {
                d
            }
        };
        let a = pick(self);
        match self.rng.gen_range(0..4) {
            0 => a.meet(&pick(self)),
            1 => a.join(&pick(self)),
            _ => a,
        }
    }

    fn cof(&mut self, dims: &[Name]) -> Cofib {
        if dims.is_empty() {
            return if self.rng.gen_bool(0.5) { Cofib::top() } else { Cofib::bot() };
        }
        let mut c = Cofib::atom(dims[self.rng.gen_range(0..dims.len())], self.rng.gen_bool(0.5));
        if self.rng.gen_bool(0.4) {
            let d = Cofib::atom(dims[self.rng.gen_range(0..dims.len())], self.rng.gen_bool(0.5));
            c = if self.rng.gen_bool(0.5) { c.and(&d) } else { c.or(&d) };
        }
        if c.is_bot() && self.rng.gen_bool(0.5) {
            Cofib::top()
        } else {
            c
        }
    }

    fn side(&mut self, size: u32, vars: usize, dims: &mut Vec<Name>) -> Side {
        let cof = self.cof(dims);
        let dim = Name::fresh();
        dims.push(dim);
        let body = rc(self.term(size, vars, dims));
        dims.pop();
        Side { cof, dim, body }
    }

    fn line(&mut self, size: u32, vars: usize, dims: &mut Vec<Name>) -> (Name, Rc) {
        let i = Name::fresh();
        dims.push(i);
        let body = rc(self.term(size, vars, dims));
        dims.pop();
        (i, body)
    }

    /// A term whose free variables are below `vars` and whose free dimension
    /// names are among `dims`.
    pub fn term(&mut self, size: u32, vars: usize, dims: &mut Vec<Name>) -> Term {
        if size == 0 || self.rng.gen_bool(0.12) {
            return match self.rng.gen_range(0..8) {
                0 | 1 if vars > 0 => Term::Var(self.rng.gen_range(0..vars)),
                2 => Term::Global(self.globals[self.rng.gen_range(0..self.globals.len())].as_str().into()),
                3 => Term::U(self.rng.gen_range(0..3)),
                4 => Term::Nat,
                5 => Term::Zero,
                6 => Term::North,
                7 => Term::South,
                _ => Term::numeral(self.rng.gen_range(0..4)),
            };
        }
        let s = size - 1;
        let half = size / 2;
        match self.rng.gen_range(0..30) {
            0 => {
                let x = self.hint();
                Term::Pi(x, rc(self.term(half, vars, dims)), rc(self.term(half, vars + 1, dims)))
            }
            1 => {
                let x = self.hint();
                Term::Sigma(x, rc(self.term(half, vars, dims)), rc(self.term(half, vars + 1, dims)))
            }
            2 | 3 => {
                let x = self.hint();
                let dom = if self.rng.gen_bool(0.7) { Some(rc(self.term(half, vars, dims))) } else { None };
                Term::Lam(x, dom, rc(self.term(half, vars + 1, dims)))
            }
            4 | 5 => Term::App(rc(self.term(half, vars, dims)), rc(self.term(half, vars, dims))),
            6 => Term::Pair(rc(self.term(half, vars, dims)), rc(self.term(half, vars, dims))),
            7 => Term::Fst(rc(self.term(s, vars, dims))),
            8 => Term::Snd(rc(self.term(s, vars, dims))),
            9 => Term::Succ(rc(self.term(s, vars, dims))),
            10 => {
                let q = size / 4;
                Term::NatRec(
                    rc(self.term(q, vars, dims)),
                    rc(self.term(q, vars, dims)),
                    rc(self.term(q, vars, dims)),
                    rc(self.term(q, vars, dims)),
                )
            }
            11 => {
                let (i, a) = self.line(size / 3, vars, dims);
                Term::Path(i, a, rc(self.term(size / 3, vars, dims)), rc(self.term(size / 3, vars, dims)))
            }
            12 | 13 => {
                let (i, a) = self.line(s, vars, dims);
                Term::PLam(i, a)
            }
            14 | 15 => {
                let r = self.dim(dims);
                Term::PApp(rc(self.term(s, vars, dims)), r)
            }
            16 => {
                let n = self.rng.gen_range(0..3);
                let sys = (0..n)
                    .map(|_| {
                        let c = self.cof(dims);
                        (c, (rc(self.term(size / 4, vars, dims)), rc(self.term(size / 4, vars, dims))))
                    })
                    .collect();
                Term::Glue(rc(self.term(size / 3, vars, dims)), sys)
            }
            17 => {
                let n = self.rng.gen_range(0..3);
                let sys = (0..n).map(|_| (self.cof(dims), rc(self.term(size / 3, vars, dims)))).collect();
                Term::GlueElem(rc(self.term(size / 3, vars, dims)), sys)
            }
            18 => Term::Unglue(rc(self.term(s, vars, dims)), None),
            19 | 20 => {
                let n = self.rng.gen_range(0..3);
                let line = self.line(size / 3, vars, dims);
                let sides = (0..n).map(|_| self.side(size / 4, vars, dims)).collect();
                let base = rc(self.term(size / 3, vars, dims));
                if self.rng.gen_bool(0.5) {
                    Term::Comp { line, sides, base }
                } else {
                    let at = self.dim(dims);
                    Term::Fill { dir: self.rng.gen_bool(0.5), line, sides, base, at }
                }
            }
            21 => Term::Id(
                rc(self.term(size / 3, vars, dims)),
                rc(self.term(size / 3, vars, dims)),
                rc(self.term(size / 3, vars, dims)),
            ),
            22 => Term::Refl(rc(self.term(s, vars, dims))),
            23 => {
                let c = self.cof(dims);
                Term::IdPair(rc(self.term(s, vars, dims)), c)
            }
            24 => Term::J(
                rc(self.term(size / 3, vars, dims)),
                rc(self.term(size / 3, vars, dims)),
                rc(self.term(size / 3, vars, dims)),
            ),
            25 => Term::Susp(rc(self.term(s, vars, dims))),
            26 => {
                let r = self.dim(dims);
                Term::Merid(rc(self.term(s, vars, dims)), r)
            }
            27 => {
                let q = size / 5;
                Term::SuspRec(
                    rc(self.term(q, vars, dims)),
                    rc(self.term(q, vars, dims)),
                    rc(self.term(q, vars, dims)),
                    rc(self.term(q, vars, dims)),
                    rc(self.term(q, vars, dims)),
                )
            }
            _ => Term::Ann(rc(self.term(half, vars, dims)), rc(self.term(half, vars, dims))),
        }
    }
}

type Rc = cctt::syntax::term::Rt;

// ---------------------------------------------------------------------------
// Random well-typed composition and filling problems.

/// The context every instance lives in. Each entry is a variable and the
/// source of its type.
pub const KAN_CONTEXT: &[(&str, &str)] = &[
    ("A", "U"),
    ("B", "U"),
    ("e", "Equiv A B"),
    ("L", "Path U A B"),
    ("a", "A"),
    ("b", "B"),
    ("lp", "Path (<i> L @ i) a b"),
    ("ep", "Path B (e.1 a) b"),
    ("n", "Nat"),
    ("f", "Nat -> Nat"),
    ("q", "Path Nat n (f n)"),
];

/// A line of types with an element over every point of the line, both as
/// source text in which `@I` stands for the line's dimension.
#[derive(Clone, Debug)]
pub struct Family {
    pub ty: String,
    pub elem: String,
}

impl Family {
    fn new(ty: impl Into<String>, elem: impl Into<String>) -> Family {
        Family { ty: ty.into(), elem: elem.into() }
    }
}

pub fn at(src: &str, r: &str) -> String {
    src.replace("@I", &format!("({r})"))
}

pub struct KanGen {
    rng: StdRng,
    fresh: usize,
}

impl KanGen {
    pub fn new(seed: u64) -> KanGen {
        KanGen { rng: StdRng::seed_from_u64(seed), fresh: 0 }
    }

    fn fresh(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("{base}{}", self.fresh)
    }

    fn nat_elem(&mut self, nats: &[String]) -> String {
        let v = if !nats.is_empty() && self.rng.gen_bool(0.4) {
            nats[self.rng.gen_range(0..nats.len())].clone()
        } else {
            match self.rng.gen_range(0..5) {
                0 => "n".to_string(),
                1 => "q @ @I".to_string(),
                2 => "q @ (@I /\\ j)".to_string(),
                3 => "f (q @ (@I \\/ k))".to_string(),
                _ => format!("{}", self.rng.gen_range(0..3)),
            }
        };
        match self.rng.gen_range(0..4) {
            0 => format!("succ ({v})"),
            1 => format!("add ({v}) 1"),
            _ => v,
        }
    }

    fn cof(&mut self) -> String {
        let atom = |g: &mut Self| {
            let d = ["j", "k", "-j"][g.rng.gen_range(0..3)];
            format!("({d} = {})", g.rng.gen_range(0..2))
        };
        match self.rng.gen_range(0..6) {
            0 => format!("{} /\\ {}", atom(self), atom(self)),
            1 => format!("{} \\/ {}", atom(self), atom(self)),
            2 if self.rng.gen_bool(0.3) => "1F".to_string(),
            _ => atom(self),
        }
    }

    /// A random family of types over the line together with an element.
    pub fn family(&mut self, size: u32, nats: &[String]) -> Family {
        let pick = if size == 0 { self.rng.gen_range(0..4) } else { self.rng.gen_range(0..13) };
        match pick {
            0 | 1 => Family::new("Nat", self.nat_elem(nats)),
            2 => Family::new("L @ @I", "lp @ @I"),
            3 => Family::new("Susp Nat", format!("merid ({}) @I", self.nat_elem(nats))),
            4 => Family::new(
                "Glue B [(@I = 0) -> (A, e), (@I = 1) -> (B, idEquiv B)]",
                "(glue (ep @ @I) [(@I = 0) -> a, (@I = 1) -> b] : Glue B [(@I = 0) -> (A, e), (@I = 1) -> (B, idEquiv B)])",
            ),
            5 => Family::new(
                "Glue B [(j = 1) -> (A, e)]",
                "(glue (e.1 a) [(j = 1) -> a] : Glue B [(j = 1) -> (A, e)])",
            ),
            6 => {
                let x = self.fresh("x");
                let mut inner_nats = nats.to_vec();
                inner_nats.push(x.clone());
                let cod = self.family(size - 1, &inner_nats);
                Family::new(format!("(Nat -> {})", cod.ty), format!("(\\({x} : Nat) -> {})", cod.elem))
            }
            7 => {
                let y = self.fresh("y");
                let cod = self.family(size - 1, nats);
                Family::new(format!("(L @ @I -> {})", cod.ty), format!("(\\({y} : L @ @I) -> {})", cod.elem))
            }
            8 => {
                let l = self.family(size / 2, nats);
                let r = self.family(size / 2, nats);
                Family::new(format!("((_ : {}) * {})", l.ty, r.ty), format!("({}, {})", l.elem, r.elem))
            }
            9 => {
                let x = self.fresh("x");
                let v = self.nat_elem(nats);
                Family::new("((x : Nat) * Path Nat x x)", format!("(({v}), <{x}> {v})"))
            }
            10 => {
                let inner = self.family(size - 1, nats);
                let l = self.fresh("l");
                Family::new(
                    format!("Path ({}) ({}) ({})", inner.ty, inner.elem, inner.elem),
                    format!("(<{l}> {})", inner.elem),
                )
            }
            11 => {
                let v = self.nat_elem(nats);
                Family::new(format!("Id Nat ({v}) ({v})"), format!("refl ({v})"))
            }
            _ => {
                let t = ["Nat", "A", "L @ @I", "(Nat -> B)"][self.rng.gen_range(0..4)];
                Family::new("U", t)
            }
        }
    }

    pub fn instance(&mut self) -> KanInstance {
        let fam = self.family(3, &[]);
        let n_sides = self.rng.gen_range(0..4);
        let cofs: Vec<String> = (0..n_sides).map(|_| self.cof()).collect();
        let kind = match self.rng.gen_range(0..3) {
            0 => KanKind::Comp,
            1 => KanKind::Fill(false),
            _ => KanKind::Fill(true),
        };
        let at = ["0", "1", "j", "k", "-j", "j /\\ k", "j \\/ -k"][self.rng.gen_range(0..7)].to_string();
        KanInstance { fam, cofs, kind, at }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KanKind {
    Comp,
    Fill(bool),
}

/// A composition or filling problem whose sides all come from one total
/// family, so the problem is well typed by construction.
#[derive(Clone, Debug)]
pub struct KanInstance {
    pub fam: Family,
    pub cofs: Vec<String>,
    pub kind: KanKind,
    pub at: String,
}

impl KanInstance {
    fn sides(&self) -> String {
        self.sides_along("i")
    }

    /// The sides with the line dimension replaced by `r`, bound as `i`.
    fn sides_along(&self, r: &str) -> String {
        let parts: Vec<String> =
            self.cofs.iter().map(|c| format!("{c} -> <i> {}", at(&self.fam.elem, r))).collect();
        format!("[{}]", parts.join(", "))
    }

    fn line(&self) -> String {
        format!("(<i> {})", at(&self.fam.ty, "i"))
    }

    fn start(&self) -> &str {
        match self.kind {
            KanKind::Comp | KanKind::Fill(false) => "0",
            KanKind::Fill(true) => "1",
        }
    }

    /// The source of the problem.
    pub fn source(&self) -> String {
        let base = format!("({})", at(&self.fam.elem, self.start()));
        match self.kind {
            KanKind::Comp => format!("comp {} {} {}", self.line(), self.sides(), base),
            KanKind::Fill(d) => format!(
                "fill {} {} {} {} @ {}",
                if d { 1 } else { 0 },
                self.line(),
                self.sides(),
                base,
                self.at
            ),
        }
    }

    /// Where the result lives on the line.
    fn target(&self) -> String {
        match self.kind {
            KanKind::Comp => "1".to_string(),
            KanKind::Fill(_) => self.at.clone(),
        }
    }

    /// Typecheck the problem in the current mode and check the boundary
    /// laws: the result has the type of the line at its target, agrees with
    /// the sides wherever a side cofibration holds, agrees with the base
    /// where a fill is taken at its starting point, and, in strict mode,
    /// equals the composition where a fill is taken at the far end.
    pub fn verify(&self) -> Result<usize, String> {
        let (ctx, dims) = kan_context();
        let globals: HashSet<String> = global_names().into_iter().collect();
        let parse = |src: &str| {
            parse_term_open(src, &ctx.names, &dims, &globals).map_err(|e| format!("parse `{src}`: {e:?}"))
        };
        let src = self.source();
        let term = parse(&src)?;
        let (elab, ty) = infer(&ctx, &term).map_err(|e| format!("`{src}` rejected: [{}] {}", e.kind, e.message))?;
        let want_ty = ctx.eval(&parse(&at(&self.fam.ty, &self.target()))?);
        let d = ctx.depth();
        if !conv(d, &ty, &want_ty) {
            return Err(format!("`{src}` has type {} not {}", ctx.show(&ty), ctx.show(&want_ty)));
        }
        let v = ctx.eval(&elab);
        let side_at_target = ctx.eval(&parse(&at(&self.fam.elem, &self.target()))?);
        let base = ctx.eval(&parse(&at(&self.fam.elem, self.start()))?);
        let comp_v = match (self.kind, mode()) {
            (KanKind::Fill(dir), Mode::Strict) => {
                let comp_src = if dir {
                    // the reversed line composed from 1 down to 0
                    format!(
                        "comp (<i> {}) {} ({})",
                        at(&self.fam.ty, "-i"),
                        self.sides_along("-i"),
                        at(&self.fam.elem, "1")
                    )
                } else {
                    format!("comp {} {} ({})", self.line(), self.sides(), at(&self.fam.elem, "0"))
                };
                let t = parse(&comp_src)?;
                let (t, _) = infer(&ctx, &t).map_err(|e| format!("`{comp_src}` rejected: {}", e.message))?;
                Some(ctx.eval(&t))
            }
            _ => None,
        };
        let phi = self
            .cofs
            .iter()
            .map(|c| parse_cof(c, &dims))
            .fold(Cofib::bot(), |acc, c| acc.or(&c));
        let target = parse_dim(&self.target(), &dims);
        let names: Vec<Name> = dims.iter().map(|(_, n)| *n).collect();
        let mut checked = 0;
        for a in assignments(names.len()) {
            let face = assign_face(&a, &names);
            let cf = ctx.restrict(&face);
            let vf = v.face(&face);
            if cofib_holds(&phi, &names, &a) {
                checked += 1;
                if !conv(d, &vf, &side_at_target.face(&face)) {
                    return Err(format!("`{src}` disagrees with its sides on {face:?}: {}", cf.show(&vf)));
                }
            }
            let r = target.subst_with(&|n| face.get(&n).map(|b| DimExpr::constant(*b)));
            if let KanKind::Fill(dir) = self.kind {
                if r.as_const() == Some(dir) {
                    checked += 1;
                    if !conv(d, &vf, &base.face(&face)) {
                        return Err(format!("`{src}` is not the base on {face:?}: {}", cf.show(&vf)));
                    }
                }
                if let (Some(b), Some(c)) = (r.as_const(), &comp_v) {
                    if b != dir {
                        checked += 1;
                        if !conv(d, &vf, &c.face(&face)) {
                            return Err(format!(
                                "`{src}` at its far end is {} but the composition is {}",
                                cf.show(&vf),
                                cf.show(&c.face(&face))
                            ));
                        }
                    }
                }
            }
        }
        Ok(checked)
    }
}

fn parse_cof(src: &str, dims: &[(String, Name)]) -> Cofib {
    // A cofibration is parsed as the cofibration of a one-branch Glue.
    let t = parse_term_open(&format!("Glue Nat [{src} -> (Nat, Nat)]"), &[], dims, &HashSet::new())
        .expect("cofibration parses");
    match t {
        Term::Glue(_, sys) => sys.into_iter().map(|(c, _)| c).fold(Cofib::bot(), |a, c| a.or(&c)),
        _ => unreachable!(),
    }
}

fn parse_dim(src: &str, dims: &[(String, Name)]) -> DimExpr {
    match parse_term_open(&format!("zero @ ({src})"), &[], dims, &HashSet::new()).expect("dimension parses") {
        Term::PApp(_, r) => r,
        _ => unreachable!(),
    }
}

/// The context of [`KAN_CONTEXT`] with two free dimensions `j` and `k`.
pub fn kan_context() -> (Ctx, Vec<(String, Name)>) {
    let globals: HashSet<String> = global_names().into_iter().collect();
    let mut ctx = Ctx::new();
    let (j, k) = (Name::fresh(), Name::fresh());
    ctx = ctx.bind_dim(j).bind_dim(k);
    let dims = vec![("j".to_string(), j), ("k".to_string(), k)];
    for (x, ty_src) in KAN_CONTEXT {
        let t = parse_term_open(ty_src, &ctx.names, &dims, &globals).expect("context type parses");
        let (t, _) = check_type(&ctx, &t).unwrap_or_else(|e| panic!("context type `{ty_src}`: {}", e.message));
        let v: Value = ctx.eval(&t);
        ctx = ctx.bind(x, v).0;
    }
    (ctx, dims)
}

// ---------------------------------------------------------------------------
// Random explicit substitutions.

use cctt::syntax::term::Subst;

impl TermGen {
    /// A substitution taking terms over `target` variables to terms over
    /// `source` variables.
    pub fn subst(&mut self, target: usize, source: usize, depth: u32) -> std::rc::Rc<Subst> {
        use std::rc::Rc as R;
        if target == 0 && (depth == 0 || self.rng.gen_bool(0.5)) {
            return R::new(Subst::Empty);
        }
        if target == source && self.rng.gen_bool(0.2) {
            return R::new(Subst::Id);
        }
        if source == target + 1 && self.rng.gen_bool(0.3) {
            return R::new(Subst::Shift);
        }
        if depth > 0 && self.rng.gen_bool(0.3) {
            let mid = self.rng.gen_range(0..4);
            let s = self.subst(target, mid, depth - 1);
            let r = self.subst(mid, source, depth - 1);
            return R::new(Subst::Comp(s, r));
        }
        if target == 0 {
            return R::new(Subst::Empty);
        }
        let rest = self.subst(target - 1, source, depth.saturating_sub(1));
        let u = self.term(4, source, &mut Vec::new());
        R::new(Subst::Ext(rest, rc(u)))
    }
}

// ---------------------------------------------------------------------------
// Corpus annotations.

/// Pairs of a `-- #<tag> value` comment and the name of the definition that
/// follows it.
pub fn tagged(src: &str, tag: &str) -> Vec<(String, String)> {
    let marker = format!("-- #{tag}");
    let mut out = Vec::new();
    let mut pending: Option<String> = None;
    for line in src.lines() {
        if let Some(rest) = line.trim_start().strip_prefix(&marker) {
            pending = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("def ") {
            let name = rest.split(|c: char| c.is_whitespace() || c == ':').next().unwrap_or("").to_string();
            if let Some(v) = pending.take() {
                out.push((v, name));
            }
        }
    }
    out
}

/// Names of all definitions in a source, in order.
pub fn def_names(src: &str) -> Vec<String> {
    src.lines()
        .filter_map(|l| l.strip_prefix("def "))
        .map(|r| r.split(|c: char| c.is_whitespace() || c == ':').next().unwrap_or("").to_string())
        .collect()
}

/// Check a corpus file on top of the prelude in the current mode; returns
/// each definition with its error kind, or `None` when it checked.
pub fn check_file(name: &str) -> Vec<(String, Option<String>)> {
    use cctt::syntax::parser::parse_file_recovering;
    use cctt::typechecker::check_and_define;
    let src = read_corpus(name);
    let globals: HashSet<String> = global_names().into_iter().collect();
    let mut out = Vec::new();
    let starts: Vec<(usize, String)> = src
        .lines()
        .enumerate()
        .filter_map(|(k, l)| l.strip_prefix("def ").map(|r| (k + 1, r)))
        .map(|(k, r)| (k, r.split(|c: char| c.is_whitespace() || c == ':').next().unwrap_or("").to_string()))
        .collect();
    let parsed = parse_file_recovering(&src, &globals).expect("file lexes");
    for d in parsed {
        match d {
            Ok(d) => {
                let r = check_and_define(&d);
                out.push((d.name.clone(), r.result.err().map(|e| e.kind.as_str().to_string())));
            }
            Err(e) => {
                let kind = if e.unbound { "unbound" } else { "syntax" };
                let owner = starts.iter().rev().find(|(l, _)| *l <= e.line).map(|(_, n)| n.clone());
                out.push((owner.unwrap_or_default(), Some(kind.to_string())));
            }
        }
    }
    out
}

/// Normal forms of every definition of a file, printed.
pub fn normal_forms(names: &[String]) -> Vec<(String, String)> {
    use cctt::semantics::eval::global;
    use cctt::semantics::quote::quote;
    use cctt::syntax::printer::print;
    names
        .iter()
        .filter_map(|n| global(n).map(|(_, v)| (n.clone(), print(&quote(0, &v)))))
        .collect()
}
