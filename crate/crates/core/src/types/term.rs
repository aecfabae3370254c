//! Hash-consed closed types.
//!
//! Unfolding nested recursion copies whole binders into their bodies, and
//! the copies nest; as trees the reachable states of a type can be
//! exponentially large. Interned terms share every repeated subterm, so a
//! state is a pointer and structural equality is pointer equality (within
//! one [`Interner`]).

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{ChoiceKind, Label, Name, SessionType};

/// A handle to an interned type.
#[derive(Clone)]
pub struct Term(Arc<Node>);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    End,
    Var(Name),
    Rec(Name, Term),
    Choice(ChoiceKind, Vec<(Label, Term)>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, h: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(h)
    }
}

impl Term {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn is_end(&self) -> bool {
        matches!(*self.0, Node::End)
    }

    /// The term as a tree. Its size can be exponential in the size of the
    /// source type.
    pub fn to_type(&self) -> SessionType {
        match &*self.0 {
            Node::End => SessionType::End,
            Node::Var(x) => SessionType::Var(x.clone()),
            Node::Rec(x, b) => SessionType::Rec(x.clone(), Box::new(b.to_type())),
            Node::Choice(k, bs) => {
                SessionType::Choice(*k, bs.iter().map(|(l, b)| (l.clone(), b.to_type())).collect())
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_type(), f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_type(), f)
    }
}

#[derive(Default)]
pub struct Interner {
    nodes: HashMap<Node, Term>,
    subst: HashMap<(Term, Name, Term), Term>,
}

impl Interner {
    fn mk(&mut self, n: Node) -> Term {
        if let Some(t) = self.nodes.get(&n) {
            return t.clone();
        }
        let t = Term(Arc::new(n.clone()));
        self.nodes.insert(n, t.clone());
        t
    }

    pub fn intern(&mut self, t: &SessionType) -> Term {
        let n = match t {
            SessionType::End => Node::End,
            SessionType::Var(x) => Node::Var(x.clone()),
            SessionType::Rec(x, b) => Node::Rec(x.clone(), self.intern(b)),
            SessionType::Choice(k, bs) => {
                Node::Choice(*k, bs.iter().map(|(l, b)| (l.clone(), self.intern(b))).collect())
            }
        };
        self.mk(n)
    }

    /// `t[r/x]` for closed `r`.
    fn substitute(&mut self, t: &Term, x: &Name, r: &Term) -> Term {
        let key = (t.clone(), x.clone(), r.clone());
        if let Some(done) = self.subst.get(&key) {
            return done.clone();
        }
        let out = match t.node() {
            Node::End => t.clone(),
            Node::Var(y) if y == x => r.clone(),
            Node::Var(_) => t.clone(),
            Node::Rec(y, _) if y == x => t.clone(),
            Node::Rec(y, b) => {
                let b = self.substitute(b, x, r);
                self.mk(Node::Rec(y.clone(), b))
            }
            Node::Choice(k, bs) => {
                let bs = bs
                    .iter()
                    .map(|(l, b)| (l.clone(), self.substitute(b, x, r)))
                    .collect();
                self.mk(Node::Choice(*k, bs))
            }
        };
        self.subst.insert(key, out.clone());
        out
    }

    /// `rec x . b` to `b[rec x . b/x]`; other terms are returned as is.
    pub fn unfold_once(&mut self, t: &Term) -> Term {
        match t.node() {
            Node::Rec(x, b) => {
                let (x, b) = (x.clone(), b.clone());
                self.substitute(&b, &x, t)
            }
            _ => t.clone(),
        }
    }

    /// Unfolds leading `rec`s, as [`unfold_top`](super::unfold_top).
    pub fn unfold_top(&mut self, t: &Term) -> Term {
        let mut fuel = 1;
        let mut head = t;
        while let Node::Rec(_, b) = head.node() {
            fuel += 1;
            head = b;
        }
        let mut cur = t.clone();
        while let Node::Rec(x, b) = cur.node() {
            if fuel == 0 {
                break;
            }
            fuel -= 1;
            let (x, b) = (x.clone(), b.clone());
            cur = self.substitute(&b, &x, &cur);
        }
        cur
    }
}
