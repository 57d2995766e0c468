//! Cofibrations: the face lattice generated by endpoint atoms `(i = 0)` and
//! `(i = 1)`, kept in a canonical disjunctive normal form.

use std::collections::BTreeMap;
use std::fmt;

use crate::interval::{DimExpr, Name};

/// A conjunction of endpoint constraints, seen as a partial assignment.
pub type Face = BTreeMap<Name, bool>;

/// A disjunction of faces. The empty disjunction is false; the disjunction
/// holding the empty face is true.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cofib {
    faces: Vec<Face>,
}

/// A partial element: branches guarded by cofibrations.
pub type System<T> = Vec<(Cofib, T)>;

fn face_subset(small: &Face, big: &Face) -> bool {
    small.len() <= big.len() && small.iter().all(|(k, b)| big.get(k) == Some(b))
}

fn face_union(a: &Face, b: &Face) -> Option<Face> {
    let mut out = a.clone();
    for (k, v) in b {
        match out.get(k) {
            Some(w) if w != v => return None,
            _ => {
                out.insert(*k, *v);
            }
        }
    }
    Some(out)
}

impl Cofib {
    fn from_faces(mut faces: Vec<Face>) -> Cofib {
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        faces.dedup();
        let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
        for f in faces {
            if !kept.iter().any(|k| face_subset(k, &f)) {
                kept.push(f);
            }
        }
        kept.sort();
        Cofib { faces: kept }
    }

    pub fn top() -> Cofib {
        Cofib { faces: vec![Face::new()] }
    }

    pub fn bot() -> Cofib {
        Cofib { faces: Vec::new() }
    }

    pub fn atom(name: Name, value: bool) -> Cofib {
        let mut f = Face::new();
        f.insert(name, value);
        Cofib { faces: vec![f] }
    }

    pub fn from_face(face: Face) -> Cofib {
        Cofib { faces: vec![face] }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn is_top(&self) -> bool {
        self.faces.len() == 1 && self.faces[0].is_empty()
    }

    pub fn is_bot(&self) -> bool {
        self.faces.is_empty()
    }

    /// The cofibration `[r = b]`.
    pub fn eq(r: &DimExpr, b: bool) -> Cofib {
        let lit_atom = |name: Name, neg: bool, target: bool| Cofib::atom(name, target != neg);
        if b {
            let mut acc = Cofib::bot();
            for m in r.meets() {
                let mut conj = Cofib::top();
                for l in m {
                    conj = conj.and(&lit_atom(l.name, l.neg, true));
                }
                acc = acc.or(&conj);
            }
            acc
        } else {
            let mut acc = Cofib::top();
            for m in r.meets() {
                let mut disj = Cofib::bot();
                for l in m {
                    disj = disj.or(&lit_atom(l.name, l.neg, false));
                }
                acc = acc.and(&disj);
            }
            acc
        }
    }

    pub fn and(&self, other: &Cofib) -> Cofib {
        if self.is_top() {
            return other.clone();
        }
        if other.is_top() {
            return self.clone();
        }
        let mut faces = Vec::new();
        for a in &self.faces {
            for b in &other.faces {
                if let Some(u) = face_union(a, b) {
                    faces.push(u);
                }
            }
        }
        Cofib::from_faces(faces)
    }

    pub fn or(&self, other: &Cofib) -> Cofib {
        if self.is_bot() {
            return other.clone();
        }
        if other.is_bot() {
            return self.clone();
        }
        let mut faces = self.faces.clone();
        faces.extend(other.faces.iter().cloned());
        Cofib::from_faces(faces)
    }

    /// Every face of `self` forces `other`.
    pub fn entails(&self, other: &Cofib) -> bool {
        self.faces
            .iter()
            .all(|f| other.faces.iter().any(|g| face_subset(g, f)))
    }

    /// Whether this cofibration holds once the partial assignment `face` is
    /// in force.
    pub fn holds_under(&self, face: &Face) -> bool {
        self.faces.iter().any(|g| face_subset(g, face))
    }

    pub fn subst_with(&self, f: &dyn Fn(Name) -> Option<DimExpr>) -> Cofib {
        if !self.faces.iter().any(|fc| fc.keys().any(|n| f(*n).is_some())) {
            return self.clone();
        }
        let mut acc = Cofib::bot();
        for fc in &self.faces {
            let mut conj = Cofib::top();
            for (n, b) in fc {
                let atom = match f(*n) {
                    Some(r) => Cofib::eq(&r, *b),
                    None => Cofib::atom(*n, *b),
                };
                conj = conj.and(&atom);
                if conj.is_bot() {
                    break;
                }
            }
            acc = acc.or(&conj);
        }
        acc
    }

    pub fn subst(&self, x: Name, r: &DimExpr) -> Cofib {
        self.subst_with(&|n| if n == x { Some(r.clone()) } else { None })
    }

    /// Restrict by a partial assignment.
    pub fn restrict(&self, face: &Face) -> Cofib {
        self.subst_with(&|n| face.get(&n).map(|b| DimExpr::constant(*b)))
    }

    /// The strongest cofibration not mentioning `x` that entails `self`.
    pub fn forall(&self, x: Name) -> Cofib {
        Cofib::from_faces(
            self.faces
                .iter()
                .filter(|f| !f.contains_key(&x))
                .cloned()
                .collect(),
        )
    }

    pub fn mentions(&self, x: Name) -> bool {
        self.faces.iter().any(|f| f.contains_key(&x))
    }

    pub fn names(&self) -> Vec<Name> {
        let mut out: Vec<Name> = self.faces.iter().flat_map(|f| f.keys().copied()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn render(&self, name: &dyn Fn(Name) -> String) -> String {
        if self.is_bot() {
            return "0F".to_string();
        }
        if self.is_top() {
            return "1F".to_string();
        }
        self.faces
            .iter()
            .map(|f| {
                f.iter()
                    .map(|(n, b)| format!("({} = {})", name(*n), if *b { 1 } else { 0 }))
                    .collect::<Vec<_>>()
                    .join(" /\\ ")
            })
            .collect::<Vec<_>>()
            .join(" \\/ ")
    }
}

impl fmt::Display for Cofib {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|n| n.to_string()))
    }
}

/// Turn a face into a dimension substitution.
pub fn face_subst(face: &Face) -> impl Fn(Name) -> Option<DimExpr> + '_ {
    move |n| face.get(&n).map(|b| DimExpr::constant(*b))
}

pub fn cof_eq(r: &DimExpr, b: bool) -> Cofib {
    Cofib::eq(r, b)
}

pub fn cof_and(p: &Cofib, q: &Cofib) -> Cofib {
    p.and(q)
}

pub fn cof_or(p: &Cofib, q: &Cofib) -> Cofib {
    p.or(q)
}

pub fn cof_entails(p: &Cofib, q: &Cofib) -> bool {
    p.entails(q)
}

pub fn cof_subst(p: &Cofib, x: Name, r: &DimExpr) -> Cofib {
    p.subst(x, r)
}

pub fn cof_forall(x: Name, p: &Cofib) -> Cofib {
    p.forall(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq_translates_normal_forms() {
        let (i, j) = (Name::fresh(), Name::fresh());
        let m = DimExpr::var(i).meet(&DimExpr::var(j));
        assert_eq!(Cofib::eq(&m, true), Cofib::atom(i, true).and(&Cofib::atom(j, true)));
        assert_eq!(Cofib::eq(&DimExpr::var(i).reverse(), false), Cofib::atom(i, true));
        assert_eq!(Cofib::eq(&DimExpr::zero(), true), Cofib::bot());
        assert_eq!(Cofib::eq(&DimExpr::zero(), false), Cofib::top());
    }

    #[test]
    fn lattice_examples() {
        let (i, j) = (Name::fresh(), Name::fresh());
        assert!(Cofib::atom(i, false).and(&Cofib::atom(i, true)).is_bot());
        let p = Cofib::atom(i, false).or(&Cofib::atom(j, true));
        assert_eq!(p.or(&Cofib::bot()), p);
        assert_eq!(p.and(&Cofib::atom(i, false)), Cofib::atom(i, false));
    }

    #[test]
    fn entailment_examples() {
        let (i, j) = (Name::fresh(), Name::fresh());
        let p = Cofib::atom(i, false).or(&Cofib::atom(j, true));
        assert!(Cofib::atom(i, false).entails(&p));
        let q = Cofib::atom(i, false).or(&Cofib::atom(j, false));
        assert!(!q.entails(&Cofib::atom(i, false)));
        assert!(Cofib::bot().entails(&Cofib::atom(j, true)));
    }

    #[test]
    fn subst_examples() {
        let (i, j, k) = (Name::fresh(), Name::fresh(), Name::fresh());
        let jk = DimExpr::var(j).meet(&DimExpr::var(k));
        assert_eq!(
            Cofib::atom(i, true).subst(i, &jk),
            Cofib::atom(j, true).and(&Cofib::atom(k, true))
        );
        assert_eq!(
            Cofib::atom(i, false).subst(i, &DimExpr::var(j).reverse()),
            Cofib::atom(j, true)
        );
        assert_eq!(Cofib::atom(j, false).subst(i, &jk), Cofib::atom(j, false));
    }

    #[test]
    fn forall_examples() {
        let (i, j, k) = (Name::fresh(), Name::fresh(), Name::fresh());
        let p = Cofib::atom(j, false).or(&Cofib::atom(i, false).and(&Cofib::atom(k, true)));
        assert_eq!(p.forall(i), Cofib::atom(j, false));
        assert!(Cofib::atom(i, false).forall(i).is_bot());
        assert_eq!(Cofib::atom(j, true).forall(i), Cofib::atom(j, true));
    }
}
