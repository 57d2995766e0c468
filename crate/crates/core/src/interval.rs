//! Interval expressions: the free De Morgan algebra over dimension names.
//!
//! Every [`DimExpr`] is kept in normal form, a join of meets of literals.
//! Literals inside a meet are sorted and deduplicated, meets are sorted and
//! no meet contains another. The free De Morgan algebra on a set of names is
//! the free distributive lattice on the names and their reversals, so this
//! antichain representation is canonical and equality is structural.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

/// A dimension name. Names are globally unique; fresh ones come from a
/// process-wide counter so binders never collide by accident.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Name(pub u32);

static NEXT_NAME: AtomicU32 = AtomicU32::new(1);

impl Name {
    pub fn fresh() -> Name {
        Name(NEXT_NAME.fetch_add(1, Ordering::Relaxed))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i{}", self.0)
    }
}

/// A name or a reversed name.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Lit {
    pub name: Name,
    pub neg: bool,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DimExpr {
    meets: Vec<Vec<Lit>>,
}

fn is_subset(small: &[Lit], big: &[Lit]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

fn merge(a: &[Lit], b: &[Lit]) -> Vec<Lit> {
    let mut out: Vec<Lit> = a.iter().chain(b.iter()).copied().collect();
    out.sort();
    out.dedup();
    out
}

impl DimExpr {
    fn from_meets(mut meets: Vec<Vec<Lit>>) -> DimExpr {
        for m in meets.iter_mut() {
            m.sort();
            m.dedup();
        }
        meets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        meets.dedup();
        let mut kept: Vec<Vec<Lit>> = Vec::with_capacity(meets.len());
        for m in meets {
            if !kept.iter().any(|k| is_subset(k, &m)) {
                kept.push(m);
            }
        }
        kept.sort();
        DimExpr { meets: kept }
    }

    pub fn zero() -> DimExpr {
        DimExpr { meets: Vec::new() }
    }

    pub fn one() -> DimExpr {
        DimExpr { meets: vec![Vec::new()] }
    }

    pub fn constant(b: bool) -> DimExpr {
        if b {
            DimExpr::one()
        } else {
            DimExpr::zero()
        }
    }

    pub fn var(name: Name) -> DimExpr {
        DimExpr { meets: vec![vec![Lit { name, neg: false }]] }
    }

    pub fn lit(l: Lit) -> DimExpr {
        DimExpr { meets: vec![vec![l]] }
    }

    /// The meets of the normal form.
    pub fn meets(&self) -> &[Vec<Lit>] {
        &self.meets
    }

    pub fn is_zero(&self) -> bool {
        self.meets.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.meets.len() == 1 && self.meets[0].is_empty()
    }

    pub fn as_const(&self) -> Option<bool> {
        if self.is_zero() {
            Some(false)
        } else if self.is_one() {
            Some(true)
        } else {
            None
        }
    }

    /// The single positive name this expression consists of, if any.
    pub fn as_name(&self) -> Option<Name> {
        match self.meets.as_slice() {
            [m] if m.len() == 1 && !m[0].neg => Some(m[0].name),
            _ => None,
        }
    }

    pub fn meet(&self, other: &DimExpr) -> DimExpr {
        if self.is_one() || other.is_zero() {
            return other.clone();
        }
        if other.is_one() || self.is_zero() {
            return self.clone();
        }
        let mut meets = Vec::with_capacity(self.meets.len() * other.meets.len());
        for a in &self.meets {
            for b in &other.meets {
                meets.push(merge(a, b));
            }
        }
        DimExpr::from_meets(meets)
    }

    pub fn join(&self, other: &DimExpr) -> DimExpr {
        if self.is_zero() || other.is_one() {
            return other.clone();
        }
        if other.is_zero() || self.is_one() {
            return self.clone();
        }
        let mut meets = self.meets.clone();
        meets.extend(other.meets.iter().cloned());
        DimExpr::from_meets(meets)
    }

    pub fn reverse(&self) -> DimExpr {
        let mut acc = DimExpr::one();
        for m in &self.meets {
            let clause = DimExpr::from_meets(
                m.iter()
                    .map(|l| vec![Lit { name: l.name, neg: !l.neg }])
                    .collect(),
            );
            acc = acc.meet(&clause);
        }
        acc
    }

    pub fn mentions(&self, x: Name) -> bool {
        self.meets.iter().any(|m| m.iter().any(|l| l.name == x))
    }

    pub fn names(&self) -> Vec<Name> {
        let mut out: Vec<Name> = self
            .meets
            .iter()
            .flat_map(|m| m.iter().map(|l| l.name))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Simultaneous substitution of names; `f` returns `None` for names it
    /// leaves alone.
    pub fn subst_with(&self, f: &dyn Fn(Name) -> Option<DimExpr>) -> DimExpr {
        let mut touched = false;
        for m in &self.meets {
            for l in m {
                if f(l.name).is_some() {
                    touched = true;
                }
            }
        }
        if !touched {
            return self.clone();
        }
        let mut acc = DimExpr::zero();
        for m in &self.meets {
            let mut term = DimExpr::one();
            for l in m {
                let base = f(l.name).unwrap_or_else(|| DimExpr::var(l.name));
                let v = if l.neg { base.reverse() } else { base };
                term = term.meet(&v);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.join(&term);
            if acc.is_one() {
                break;
            }
        }
        acc
    }

    pub fn subst(&self, x: Name, r: &DimExpr) -> DimExpr {
        self.subst_with(&|n| if n == x { Some(r.clone()) } else { None })
    }

    /// Render with a caller-chosen spelling for names.
    pub fn render(&self, name: &dyn Fn(Name) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.is_one() {
            return "1".to_string();
        }
        let lit = |l: &Lit| {
            if l.neg {
                format!("-{}", name(l.name))
            } else {
                name(l.name)
            }
        };
        self.meets
            .iter()
            .map(|m| m.iter().map(lit).collect::<Vec<_>>().join(" /\\ "))
            .collect::<Vec<_>>()
            .join(" \\/ ")
    }

    /// True when the rendering is a single token.
    pub fn is_atomic(&self) -> bool {
        self.as_const().is_some() || (self.meets.len() == 1 && self.meets[0].len() == 1)
    }
}

impl fmt::Display for DimExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|n| n.to_string()))
    }
}

pub fn dim_meet(a: &DimExpr, b: &DimExpr) -> DimExpr {
    a.meet(b)
}

pub fn dim_join(a: &DimExpr, b: &DimExpr) -> DimExpr {
    a.join(b)
}

pub fn dim_reverse(a: &DimExpr) -> DimExpr {
    a.reverse()
}

pub fn dim_subst(e: &DimExpr, x: Name, r: &DimExpr) -> DimExpr {
    e.subst(x, r)
}

pub fn dim_equal(a: &DimExpr, b: &DimExpr) -> bool {
    a == b
}
