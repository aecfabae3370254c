//! Session types: syntax, concrete grammar, well-formedness, unfolding,
//! transition systems, duality and size metrics.
//!
//! ```text
//! T ::= end | x | rec x . T | +{ !a . T, ... } | &{ ?a . T, ... }
//! ```
//!
//! A choice node stores only its [`ChoiceKind`]; the direction of each branch
//! action is derived from it (`+` sends, `&` receives).

mod alphabet;
mod lts;
mod metrics;
pub(crate) mod parse;
mod print;
pub(crate) mod subst;
mod term;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use alphabet::Alphabet;
pub use lts::{build_lts, Lts, SessionLts};
pub use metrics::{nummsg, unfold_measure, varocc, SizeMetrics};
pub use parse::{parse_open_type, parse_type, ParseError};
pub use print::print_type;
pub use subst::{substitute, unfold_top};
pub use term::{Interner, Node, Term};
pub use validate::{validate_type, Violation};

/// Name of a recursion variable.
pub type Name = Arc<str>;

/// A message label, `[A-Za-z_][A-Za-z0-9_]*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Option<Label> {
        is_ident(name).then(|| Label(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Direction of a single action: `!` or `?`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Send,
    Recv,
}

impl Direction {
    pub fn dual(self) -> Direction {
        match self {
            Direction::Send => Direction::Recv,
            Direction::Recv => Direction::Send,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Direction::Send => '!',
            Direction::Recv => '?',
        }
    }
}

/// Kind of a choice node: internal (`+`, selection) or external (`&`, branching).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChoiceKind {
    Internal,
    External,
}

impl ChoiceKind {
    pub fn dual(self) -> ChoiceKind {
        match self {
            ChoiceKind::Internal => ChoiceKind::External,
            ChoiceKind::External => ChoiceKind::Internal,
        }
    }

    /// Direction of the actions prefixing the branches of this kind of choice.
    pub fn direction(self) -> Direction {
        match self {
            ChoiceKind::Internal => Direction::Send,
            ChoiceKind::External => Direction::Recv,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ChoiceKind::Internal => '+',
            ChoiceKind::External => '&',
        }
    }
}

/// A directed action `!a` or `?a`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub direction: Direction,
    pub label: Label,
}

impl Action {
    pub fn new(direction: Direction, label: Label) -> Action {
        Action { direction, label }
    }

    pub fn send(label: &str) -> Action {
        Action::new(Direction::Send, Label::new(label).expect("invalid label"))
    }

    pub fn recv(label: &str) -> Action {
        Action::new(Direction::Recv, Label::new(label).expect("invalid label"))
    }

    pub fn dual(&self) -> Action {
        Action::new(self.direction.dual(), self.label.clone())
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.direction.symbol(), self.label)
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One branch of a choice.
pub type Branch = (Label, SessionType);

/// Session type syntax tree.
///
/// The derived `Eq`/`Hash` are exact (bound names and branch order matter);
/// [`SessionType::equiv`] compares modulo both.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SessionType {
    End,
    Var(Name),
    Rec(Name, Box<SessionType>),
    Choice(ChoiceKind, Vec<Branch>),
}

impl SessionType {
    pub fn var(name: &str) -> SessionType {
        SessionType::Var(Arc::from(name))
    }

    pub fn rec(name: &str, body: SessionType) -> SessionType {
        SessionType::Rec(Arc::from(name), Box::new(body))
    }

    pub fn choice<I, S>(kind: ChoiceKind, branches: I) -> SessionType
    where
        I: IntoIterator<Item = (S, SessionType)>,
        S: AsRef<str>,
    {
        SessionType::Choice(
            kind,
            branches
                .into_iter()
                .map(|(l, t)| (Label::new(l.as_ref()).expect("invalid label"), t))
                .collect(),
        )
    }

    /// `!a . cont`
    pub fn send(label: &str, cont: SessionType) -> SessionType {
        SessionType::choice(ChoiceKind::Internal, [(label, cont)])
    }

    /// `?a . cont`
    pub fn recv(label: &str, cont: SessionType) -> SessionType {
        SessionType::choice(ChoiceKind::External, [(label, cont)])
    }

    pub fn is_end(&self) -> bool {
        matches!(self, SessionType::End)
    }

    /// Actions labelling the branches of a choice head, in branch order.
    pub fn head_actions(&self) -> Vec<Action> {
        match self {
            SessionType::Choice(kind, branches) => branches
                .iter()
                .map(|(l, _)| Action::new(kind.direction(), l.clone()))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn node_count(&self) -> usize {
        match self {
            SessionType::End | SessionType::Var(_) => 1,
            SessionType::Rec(_, body) => 1 + body.node_count(),
            SessionType::Choice(_, branches) => {
                1 + branches.iter().map(|(_, t)| t.node_count()).sum::<usize>()
            }
        }
    }

    pub fn rec_count(&self) -> usize {
        match self {
            SessionType::End | SessionType::Var(_) => 0,
            SessionType::Rec(_, body) => 1 + body.rec_count(),
            SessionType::Choice(_, branches) => branches.iter().map(|(_, t)| t.rec_count()).sum(),
        }
    }

    /// Free variables, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Name> {
        fn go(t: &SessionType, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
            match t {
                SessionType::End => {}
                SessionType::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                SessionType::Rec(x, body) => {
                    bound.push(x.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                SessionType::Choice(_, branches) => {
                    for (_, b) in branches {
                        go(b, bound, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every name occurring in the type, bound or free.
    pub fn names(&self) -> Vec<Name> {
        fn go(t: &SessionType, out: &mut Vec<Name>) {
            match t {
                SessionType::End => {}
                SessionType::Var(x) => {
                    if !out.contains(x) {
                        out.push(x.clone())
                    }
                }
                SessionType::Rec(x, body) => {
                    if !out.contains(x) {
                        out.push(x.clone())
                    }
                    go(body, out);
                }
                SessionType::Choice(_, branches) => branches.iter().for_each(|(_, b)| go(b, out)),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Structural equality modulo the choice of bound names and branch order.
    pub fn equiv(&self, other: &SessionType) -> bool {
        fn go<'a>(
            a: &'a SessionType,
            b: &'a SessionType,
            env: &mut Vec<(&'a Name, &'a Name)>,
        ) -> bool {
            match (a, b) {
                (SessionType::End, SessionType::End) => true,
                (SessionType::Var(x), SessionType::Var(y)) => {
                    // innermost binding wins
                    match env.iter().rev().find(|(l, r)| *l == x || *r == y) {
                        Some((l, r)) => *l == x && *r == y,
                        None => x == y,
                    }
                }
                (SessionType::Rec(x, bx), SessionType::Rec(y, by)) => {
                    env.push((x, y));
                    let ok = go(bx, by, env);
                    env.pop();
                    ok
                }
                (SessionType::Choice(ka, ba), SessionType::Choice(kb, bb)) => {
                    ka == kb
                        && ba.len() == bb.len()
                        && ba.iter().all(|(l, ta)| {
                            bb.iter()
                                .find(|(m, _)| m == l)
                                .is_some_and(|(_, tb)| go(ta, tb, env))
                        })
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

impl fmt::Display for SessionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_type(self))
    }
}

impl fmt::Debug for SessionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_type(self))
    }
}

/// Flips every choice kind (and so every action direction).
pub fn dual_type(t: &SessionType) -> SessionType {
    match t {
        SessionType::End => SessionType::End,
        SessionType::Var(x) => SessionType::Var(x.clone()),
        SessionType::Rec(x, body) => SessionType::Rec(x.clone(), Box::new(dual_type(body))),
        SessionType::Choice(kind, branches) => SessionType::Choice(
            kind.dual(),
            branches.iter().map(|(l, b)| (l.clone(), dual_type(b))).collect(),
        ),
    }
}

/// Maps a branch list to a label-keyed lookup.
pub(crate) fn branch_map(branches: &[Branch]) -> HashMap<&Label, &SessionType> {
    branches.iter().map(|(l, t)| (l, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn u1() -> SessionType {
        parse_type("rec x . ?request . +{ !ok . end , !ko . x }").unwrap()
    }

    #[test]
    fn dual_of_u1_is_u2() {
        let u2 = parse_type("rec x . !request . &{ ?ok . end , ?ko . x }").unwrap();
        assert_eq!(dual_type(&u1()), u2);
        assert_eq!(dual_type(&SessionType::End), SessionType::End);
        assert_eq!(dual_type(&dual_type(&u1())), u1());
    }

    #[test]
    fn equiv_ignores_bound_names_and_branch_order() {
        let a = parse_type("rec x . +{ !a . x, !b . end }").unwrap();
        let b = parse_type("rec y . +{ !b . end, !a . y }").unwrap();
        let c = parse_type("rec y . +{ !b . end, !a . end }").unwrap();
        assert!(a.equiv(&b));
        assert!(!a.equiv(&c));
        assert_ne!(a, b);
    }

    #[test]
    fn equiv_respects_shadowing() {
        let a = SessionType::rec("x", SessionType::rec("y", SessionType::send("a", SessionType::var("x"))));
        let b = SessionType::rec("y", SessionType::rec("y", SessionType::send("a", SessionType::var("y"))));
        assert!(!a.equiv(&b));
    }

    #[test]
    fn labels_must_be_identifiers() {
        assert!(Label::new("ok").is_some());
        assert!(Label::new("_a9").is_some());
        assert!(Label::new("9a").is_none());
        assert!(Label::new("").is_none());
        assert!(Label::new("a-b").is_none());
    }
}
