//! Lexer and recursive-descent parser for `.cctt` files.

use std::collections::HashSet;
use std::rc::Rc;

use thiserror::Error;

use crate::cofib::Cofib;
use crate::interval::{DimExpr, Name};
use crate::syntax::term::{rc, resolve, Rt, Side, Subst, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub unbound: bool,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    CofTop,
    CofBot,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Lt,
    Gt,
    Comma,
    Colon,
    Eq,
    Arrow,
    Star,
    At,
    Lambda,
    Meet,
    Join,
    Minus,
    Proj(u8),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, m: String| ParseError { line, col, message: m, unbound: false };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        let simple = match c {
            '(' => Some((Tok::LParen, 1)),
            ')' => Some((Tok::RParen, 1)),
            '[' => Some((Tok::LBrack, 1)),
            ']' => Some((Tok::RBrack, 1)),
            '<' => Some((Tok::Lt, 1)),
            '>' => Some((Tok::Gt, 1)),
            ',' => Some((Tok::Comma, 1)),
            ':' => Some((Tok::Colon, 1)),
            '=' => Some((Tok::Eq, 1)),
            '*' => Some((Tok::Star, 1)),
            '@' => Some((Tok::At, 1)),
            '-' if next == Some('>') => Some((Tok::Arrow, 2)),
            '-' => Some((Tok::Minus, 1)),
            '\\' if next == Some('/') => Some((Tok::Join, 2)),
            '\\' => Some((Tok::Lambda, 1)),
            '/' if next == Some('\\') => Some((Tok::Meet, 2)),
            '.' if next == Some('1') => Some((Tok::Proj(1), 2)),
            '.' if next == Some('2') => Some((Tok::Proj(2), 2)),
            '→' => Some((Tok::Arrow, 1)),
            'λ' => Some((Tok::Lambda, 1)),
            _ => None,
        };
        if let Some((tok, n)) = simple {
            out.push(Token { tok, line: tl, col: tc });
            adv(n, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            if i < chars.len() && chars[i] == 'F' && (text == "0" || text == "1") {
                i += 1;
                col += 1;
                let tok = if text == "1" { Tok::CofTop } else { Tok::CofBot };
                out.push(Token { tok, line: tl, col: tc });
                continue;
            }
            let n = text
                .parse::<u64>()
                .map_err(|_| err(tl, tc, format!("numeral `{text}` is too large")))?;
            out.push(Token { tok: Tok::Num(n), line: tl, col: tc });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: tl, col: tc });
            continue;
        }
        return Err(err(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

pub const KEYWORDS: &[&str] = &[
    "def", "Nat", "zero", "succ", "natrec", "Path", "Glue", "glue", "unglue", "fill", "comp",
    "Id", "refl", "idpair", "J", "Susp", "north", "south", "merid", "susprec", "fst", "snd", "U",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s) || universe_level(s).is_some()
}

fn universe_level(s: &str) -> Option<u32> {
    let rest = s.strip_prefix('U')?;
    if rest.is_empty() {
        return Some(0);
    }
    if rest.chars().all(|c| c.is_ascii_digit()) && !rest.starts_with('0') {
        return rest.parse().ok();
    }
    None
}

/// A top-level declaration.
#[derive(Debug, Clone)]
pub struct Decl {
    pub name: String,
    pub ty: Option<Term>,
    pub body: Term,
    pub line: usize,
    pub col: usize,
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    vars: Vec<String>,
    dims: Vec<(String, Name)>,
    globals: HashSet<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str, globals: HashSet<String>) -> PResult<Parser> {
        Ok(Parser { toks: lex(src)?, pos: 0, vars: Vec::new(), dims: Vec::new(), globals })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, col: t.col, message: message.into(), unbound: false })
    }

    fn unbound<T>(&self, message: String) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, col: t.col, message, unbound: true })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if s != "def" => {
                self.bump();
                Ok(s)
            }
            _ => self.error("expected an identifier"),
        }
    }

    fn binder_name(&mut self) -> PResult<String> {
        let s = self.ident()?;
        if is_keyword(&s) {
            return self.error(format!("`{s}` is a keyword"));
        }
        Ok(s)
    }

    fn with_var<T>(&mut self, name: String, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.vars.push(name);
        let r = f(self);
        self.vars.pop();
        r
    }

    fn with_vars<T>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let n = self.vars.len();
        self.vars.extend(names.iter().cloned());
        let r = f(self);
        self.vars.truncate(n);
        r
    }

    fn with_dims<T>(&mut self, names: &[(String, Name)], f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let n = self.dims.len();
        self.dims.extend(names.iter().cloned());
        let r = f(self);
        self.dims.truncate(n);
        r
    }

    // ---------------------------------------------------------------- files

    fn decls(&mut self) -> PResult<Vec<Decl>> {
        self.decls_recovering().into_iter().collect()
    }

    /// Parse declarations, resuming at the next `def` in column 1 after an
    /// error.
    fn decls_recovering(&mut self) -> Vec<PResult<Decl>> {
        let mut out: Vec<PResult<Decl>> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        while *self.peek() != Tok::Eof {
            let r = self.decl(&names);
            match &r {
                Ok(d) => {
                    names.push(d.name.clone());
                    self.globals.insert(d.name.clone());
                }
                Err(_) => {
                    self.bump();
                    while *self.peek() != Tok::Eof
                        && !(matches!(self.peek(), Tok::Ident(s) if s == "def") && self.toks[self.pos].col == 1)
                    {
                        self.bump();
                    }
                }
            }
            out.push(r);
        }
        out
    }

    fn decl(&mut self, earlier: &[String]) -> PResult<Decl> {
        let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
        match self.peek() {
            Tok::Ident(s) if s == "def" => {
                self.bump();
            }
            _ => return self.error("expected `def`"),
        }
        let name = self.binder_name()?;
        if earlier.contains(&name) {
            return self.error(format!("`{name}` is already defined in this file"));
        }
        let ty = if *self.peek() == Tok::Colon {
            self.bump();
            Some(self.expr()?)
        } else {
            None
        };
        self.expect(Tok::Eq, "`=`")?;
        let body = self.expr()?;
        Ok(Decl { name, ty, body, line, col })
    }

    // ----------------------------------------------------------- dimensions

    fn dim(&mut self) -> PResult<DimExpr> {
        let mut d = self.dim_meet()?;
        while *self.peek() == Tok::Join {
            self.bump();
            d = d.join(&self.dim_meet()?);
        }
        Ok(d)
    }

    fn dim_meet(&mut self) -> PResult<DimExpr> {
        let mut d = self.dim_atom()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            d = d.meet(&self.dim_atom()?);
        }
        Ok(d)
    }

    fn dim_atom(&mut self) -> PResult<DimExpr> {
        match self.peek().clone() {
            Tok::Num(0) => {
                self.bump();
                Ok(DimExpr::zero())
            }
            Tok::Num(1) => {
                self.bump();
                Ok(DimExpr::one())
            }
            Tok::Minus => {
                self.bump();
                Ok(self.dim_atom()?.reverse())
            }
            Tok::LParen => {
                self.bump();
                let d = self.dim()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(d)
            }
            Tok::Ident(s) => {
                match self.dims.iter().rev().find(|(n, _)| *n == s) {
                    Some((_, name)) => {
                        let name = *name;
                        self.bump();
                        Ok(DimExpr::var(name))
                    }
                    None => {
                        self.unbound(format!("unbound dimension `{s}`"))
                    }
                }
            }
            _ => self.error("expected a dimension"),
        }
    }

    // --------------------------------------------------------- cofibrations

    fn cof(&mut self) -> PResult<Cofib> {
        let mut c = self.cof_and()?;
        while *self.peek() == Tok::Join {
            self.bump();
            c = c.or(&self.cof_and()?);
        }
        Ok(c)
    }

    fn cof_and(&mut self) -> PResult<Cofib> {
        let mut c = self.cof_atom()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            c = c.and(&self.cof_atom()?);
        }
        Ok(c)
    }

    fn cof_atom(&mut self) -> PResult<Cofib> {
        match self.peek() {
            Tok::CofTop => {
                self.bump();
                Ok(Cofib::top())
            }
            Tok::CofBot => {
                self.bump();
                Ok(Cofib::bot())
            }
            Tok::LParen => {
                let save = self.pos;
                self.bump();
                let attempt = (|| -> PResult<Cofib> {
                    let d = self.dim()?;
                    self.expect(Tok::Eq, "`=`")?;
                    let b = match self.bump() {
                        Tok::Num(0) => false,
                        Tok::Num(1) => true,
                        _ => return self.error("expected 0 or 1"),
                    };
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Cofib::eq(&d, b))
                })();
                match attempt {
                    Ok(c) => Ok(c),
                    Err(e) if e.unbound => Err(e),
                    Err(_) => {
                        self.pos = save + 1;
                        let c = self.cof()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(c)
                    }
                }
            }
            _ => self.error("expected a cofibration"),
        }
    }

    fn system<T>(&mut self, mut branch: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<(Cofib, T)>> {
        self.expect(Tok::LBrack, "`[`")?;
        let mut out = Vec::new();
        if *self.peek() == Tok::RBrack {
            self.bump();
            return Ok(out);
        }
        loop {
            let c = self.cof()?;
            self.expect(Tok::Arrow, "`->`")?;
            out.push((c, branch(self)?));
            match self.bump() {
                Tok::Comma => continue,
                Tok::RBrack => break,
                _ => {
                    self.pos -= 1;
                    return self.error("expected `,` or `]`");
                }
            }
        }
        Ok(out)
    }

    fn sides(&mut self) -> PResult<Vec<Side>> {
        let sys = self.system(|p| p.expr())?;
        Ok(sys.into_iter().map(|(cof, t)| to_side(cof, t)).collect())
    }

    // ---------------------------------------------------------------- terms

    pub fn expr(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Lambda => self.lambda(),
            Tok::Lt => self.plam(),
            _ => self.arrow(),
        }
    }

    fn lambda(&mut self) -> PResult<Term> {
        self.bump();
        let mut groups: Vec<(Vec<String>, Option<Term>)> = Vec::new();
        let mut bound: Vec<String> = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(_) => {
                    let x = self.binder_name()?;
                    bound.push(x.clone());
                    groups.push((vec![x], None));
                }
                Tok::LParen => {
                    self.bump();
                    let mut names = vec![self.binder_name()?];
                    while let Tok::Ident(_) = self.peek() {
                        names.push(self.binder_name()?);
                    }
                    self.expect(Tok::Colon, "`:`")?;
                    let snapshot = bound.clone();
                    let ty = self.with_vars(&snapshot, |p| p.expr())?;
                    self.expect(Tok::RParen, "`)`")?;
                    bound.extend(names.iter().cloned());
                    groups.push((names, Some(ty)));
                }
                Tok::Arrow => break,
                _ => return self.error("expected a binder or `->`"),
            }
        }
        if bound.is_empty() {
            return self.error("lambda needs at least one binder");
        }
        self.bump();
        let body = self.with_vars(&bound, |p| p.expr())?;
        let mut out = body;
        for (names, ty) in groups.into_iter().rev() {
            for (k, x) in names.into_iter().enumerate().rev() {
                let dom = ty.as_ref().map(|t| rc(shift(t, k)));
                out = Term::Lam(x, dom, rc(out));
            }
        }
        Ok(out)
    }

    fn plam(&mut self) -> PResult<Term> {
        self.bump();
        let mut names = Vec::new();
        while *self.peek() != Tok::Gt {
            let s = self.ident()?;
            names.push((s, Name::fresh()));
        }
        if names.is_empty() {
            return self.error("expected a dimension name");
        }
        self.bump();
        let body = self.with_dims(&names, |p| p.expr())?;
        Ok(names.iter().rev().fold(body, |acc, (_, n)| Term::PLam(*n, rc(acc))))
    }

    /// Try to read `(x y : A) (z : B) ...`; returns the groups on success.
    fn telescope(&mut self) -> Option<Vec<(Vec<String>, Term)>> {
        let save = self.pos;
        let mut groups = Vec::new();
        let mut bound: Vec<String> = Vec::new();
        while *self.peek() == Tok::LParen {
            let start = self.pos;
            self.bump();
            let mut names = Vec::new();
            while let Tok::Ident(s) = self.peek().clone() {
                if is_keyword(&s) {
                    break;
                }
                self.bump();
                names.push(s);
            }
            if names.is_empty() || *self.peek() != Tok::Colon {
                self.pos = start;
                break;
            }
            self.bump();
            let snapshot = bound.clone();
            let ty = match self.with_vars(&snapshot, |p| p.expr()) {
                Ok(t) => t,
                Err(_) => {
                    self.pos = save;
                    return None;
                }
            };
            if *self.peek() != Tok::RParen {
                self.pos = save;
                return None;
            }
            self.bump();
            bound.extend(names.iter().cloned());
            groups.push((names, ty));
        }
        if groups.is_empty() || !matches!(self.peek(), Tok::Arrow | Tok::Star) {
            self.pos = save;
            return None;
        }
        Some(groups)
    }

    fn build_binders(
        &mut self,
        groups: Vec<(Vec<String>, Term)>,
        sigma: bool,
        body: impl FnOnce(&mut Self) -> PResult<Term>,
    ) -> PResult<Term> {
        let bound: Vec<String> = groups.iter().flat_map(|(n, _)| n.iter().cloned()).collect();
        let body = self.with_vars(&bound, body)?;
        let mut out = body;
        for (names, ty) in groups.into_iter().rev() {
            for (k, x) in names.into_iter().enumerate().rev() {
                let dom = rc(shift(&ty, k));
                out = if sigma { Term::Sigma(x, dom, rc(out)) } else { Term::Pi(x, dom, rc(out)) };
            }
        }
        Ok(out)
    }

    fn arrow(&mut self) -> PResult<Term> {
        let lhs = if let Some(groups) = self.telescope() {
            if *self.peek() == Tok::Arrow {
                self.bump();
                return self.build_binders(groups, false, |p| p.expr());
            }
            self.bump();
            self.build_binders(groups, true, |p| p.sigma())?
        } else {
            self.sigma()?
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.with_var(String::new(), |p| p.expr())?;
            return Ok(Term::Pi("_".into(), rc(lhs), rc(rhs)));
        }
        Ok(lhs)
    }

    fn sigma(&mut self) -> PResult<Term> {
        if let Some(groups) = self.telescope() {
            if *self.peek() == Tok::Star {
                self.bump();
                return self.build_binders(groups, true, |p| p.sigma());
            }
            return self.error("expected `*`");
        }
        let lhs = self.path()?;
        if *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.with_var(String::new(), |p| p.sigma())?;
            return Ok(Term::Sigma("_".into(), rc(lhs), rc(rhs)));
        }
        Ok(lhs)
    }

    fn path(&mut self) -> PResult<Term> {
        let mut t = self.app()?;
        while *self.peek() == Tok::At {
            self.bump();
            let r = self.dim()?;
            t = Term::PApp(rc(t), r);
        }
        Ok(t)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::Num(_) => true,
            Tok::Ident(s) => {
                s != "def"
                    && (!is_keyword(s)
                        || matches!(s.as_str(), "zero" | "Nat" | "north" | "south")
                        || universe_level(s).is_some())
            }
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut head = self.head()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            head = Term::App(rc(head), rc(arg));
        }
        Ok(head)
    }

    fn line(&mut self) -> PResult<(Name, Rt)> {
        let t = self.atom()?;
        Ok(match t {
            Term::PLam(i, body) => (i, body),
            other => {
                let i = Name::fresh();
                (i, rc(Term::PApp(rc(other), DimExpr::var(i))))
            }
        })
    }

    fn head(&mut self) -> PResult<Term> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.atom(),
        };
        let one = |p: &mut Self, f: fn(Rt) -> Term| -> PResult<Term> {
            p.bump();
            Ok(f(rc(p.atom()?)))
        };
        match kw.as_str() {
            "succ" => one(self, Term::Succ),
            "fst" => one(self, Term::Fst),
            "snd" => one(self, Term::Snd),
            "refl" => one(self, Term::Refl),
            "Susp" => one(self, Term::Susp),
            "unglue" => {
                self.bump();
                Ok(Term::Unglue(rc(self.atom()?), None))
            }
            "natrec" => {
                self.bump();
                let (p, z, s, n) = (self.atom()?, self.atom()?, self.atom()?, self.atom()?);
                Ok(Term::NatRec(rc(p), rc(z), rc(s), rc(n)))
            }
            "Id" | "J" => {
                self.bump();
                let (a, b, c) = (self.atom()?, self.atom()?, self.atom()?);
                Ok(if kw == "Id" {
                    Term::Id(rc(a), rc(b), rc(c))
                } else {
                    Term::J(rc(a), rc(b), rc(c))
                })
            }
            "susprec" => {
                self.bump();
                let args = (self.atom()?, self.atom()?, self.atom()?, self.atom()?, self.atom()?);
                Ok(Term::SuspRec(rc(args.0), rc(args.1), rc(args.2), rc(args.3), rc(args.4)))
            }
            "merid" => {
                self.bump();
                let a = self.atom()?;
                let r = self.dim_atom()?;
                Ok(Term::Merid(rc(a), r))
            }
            "idpair" => {
                self.bump();
                let p = self.atom()?;
                let c = self.cof_atom()?;
                Ok(Term::IdPair(rc(p), c))
            }
            "Path" => {
                self.bump();
                let (i, a) = match self.atom()? {
                    Term::PLam(i, body) => (i, body),
                    other => (Name::fresh(), rc(other)),
                };
                let (x, y) = (self.atom()?, self.atom()?);
                Ok(Term::Path(i, a, rc(x), rc(y)))
            }
            "Glue" => {
                self.bump();
                let a = self.atom()?;
                let sys = self.system(|p| match p.expr()? {
                    Term::Pair(t, e) => Ok((t, e)),
                    _ => p.error("a Glue branch is a pair `(T, e)`"),
                })?;
                Ok(Term::Glue(rc(a), sys))
            }
            "glue" => {
                self.bump();
                let a = self.atom()?;
                let sys = self.system(|p| p.expr().map(rc))?;
                Ok(Term::GlueElem(rc(a), sys))
            }
            "comp" => {
                self.bump();
                let line = self.line()?;
                let sides = self.sides()?;
                let base = self.atom()?;
                Ok(Term::Comp { line, sides, base: rc(base) })
            }
            "fill" => {
                self.bump();
                let dir = match self.bump() {
                    Tok::Num(0) => false,
                    Tok::Num(1) => true,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected the fill direction 0 or 1");
                    }
                };
                let line = self.line()?;
                let sides = self.sides()?;
                let base = self.atom()?;
                self.expect(Tok::At, "`@` after the fill base")?;
                let at = self.dim()?;
                Ok(Term::Fill { dir, line, sides, base: rc(base), at })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Term> {
        let mut t = self.atom_core()?;
        while let Tok::Proj(k) = self.peek().clone() {
            self.bump();
            t = if k == 1 { Term::Fst(rc(t)) } else { Term::Snd(rc(t)) };
        }
        Ok(t)
    }

    fn atom_core(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Term::numeral(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.expr()?;
                match self.bump() {
                    Tok::RParen => Ok(t),
                    Tok::Colon => {
                        let ty = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Term::Ann(rc(t), rc(ty)))
                    }
                    Tok::Comma => {
                        let mut items = vec![t, self.expr()?];
                        while *self.peek() == Tok::Comma {
                            self.bump();
                            items.push(self.expr()?);
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        let last = items.pop().unwrap();
                        Ok(items.into_iter().rev().fold(last, |acc, x| Term::Pair(rc(x), rc(acc))))
                    }
                    _ => {
                        self.pos -= 1;
                        self.error("expected `)`")
                    }
                }
            }
            Tok::Ident(s) => {
                if let Some(idx) = self.vars.iter().rev().position(|v| *v == s) {
                    self.bump();
                    return Ok(Term::Var(idx));
                }
                if let Some(n) = universe_level(&s) {
                    self.bump();
                    return Ok(Term::U(n));
                }
                let t = match s.as_str() {
                    "Nat" => Some(Term::Nat),
                    "zero" => Some(Term::Zero),
                    "north" => Some(Term::North),
                    "south" => Some(Term::South),
                    _ => None,
                };
                if let Some(t) = t {
                    self.bump();
                    return Ok(t);
                }
                if is_keyword(&s) {
                    // a keyword form in argument position must be parenthesised
                    return self.error(format!("`{s}` needs parentheses here"));
                }
                if self.globals.contains(&s) {
                    self.bump();
                    return Ok(Term::Global(Rc::from(s.as_str())));
                }
                self.unbound(format!("unbound identifier `{s}`"))
            }
            Tok::Lt | Tok::Lambda => self.expr(),
            _ => self.error("expected a term"),
        }
    }
}

fn to_side(cof: Cofib, t: Term) -> Side {
    match t {
        Term::PLam(i, body) => Side { cof, dim: i, body },
        other => {
            let i = Name::fresh();
            Side { cof, dim: i, body: rc(Term::PApp(rc(other), DimExpr::var(i))) }
        }
    }
}

fn shift(t: &Term, k: usize) -> Term {
    if k == 0 {
        return t.clone();
    }
    let mut s = Rc::new(Subst::Shift);
    for _ in 1..k {
        s = Rc::new(Subst::Comp(s, Rc::new(Subst::Shift)));
    }
    resolve(&Term::Sub(rc(t.clone()), s))
}

/// Parse a whole file. `globals` are the names already in scope.
pub fn parse_file(src: &str, globals: &HashSet<String>) -> Result<Vec<Decl>, ParseError> {
    Parser::new(src, globals.clone())?.decls()
}

/// Parse a whole file, keeping going after a bad declaration.
pub fn parse_file_recovering(src: &str, globals: &HashSet<String>) -> Result<Vec<Result<Decl, ParseError>>, ParseError> {
    Ok(Parser::new(src, globals.clone())?.decls_recovering())
}

/// Parse a single closed term.
pub fn parse_term(src: &str, globals: &HashSet<String>) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, globals.clone())?;
    let t = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.error("unexpected input after the term");
    }
    Ok(t)
}

/// Parse a term with the given term variables in scope (innermost last).
pub fn parse_term_in(src: &str, vars: &[String], globals: &HashSet<String>) -> Result<Term, ParseError> {
    parse_term_open(src, vars, &[], globals)
}

/// Parse a term with free term variables and free dimension names in scope.
pub fn parse_term_open(
    src: &str,
    vars: &[String],
    dims: &[(String, Name)],
    globals: &HashSet<String>,
) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, globals.clone())?;
    p.vars = vars.to_vec();
    p.dims = dims.to_vec();
    let t = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.error("unexpected input after the term");
    }
    Ok(t)
}
