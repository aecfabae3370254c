//! The greatest-fixpoint fragment of the modal mu-calculus:
//!
//! ```text
//! phi ::= tt | ff | phi && phi | phi || phi | [a]phi | <a>phi | nu x . phi | x
//! ```
//!
//! Formulae are generic over the action label so that the same evaluator
//! serves session-type and lambda-type transition systems.

mod eval;
mod parse;
mod print;

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

pub use eval::{eval_states, models, models_within, nu_iterates, Env, StateSet};
pub use parse::{parse_formula, FormulaParseError};
pub use print::{print_formula, Style};

use crate::types::{Action, Direction, Label, Name};

/// Labels usable in modalities.
pub trait ActionLabel: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync {
    /// Spelling in mCRL2 action syntax.
    fn mcrl2_name(&self) -> String;
    /// Inverse of `Display`.
    fn parse_label(text: &str) -> Option<Self>;
}

impl ActionLabel for Action {
    fn mcrl2_name(&self) -> String {
        match self.direction {
            Direction::Send => format!("snd_{}", self.label),
            Direction::Recv => format!("rcv_{}", self.label),
        }
    }

    fn parse_label(text: &str) -> Option<Action> {
        let dir = match text.chars().next()? {
            '!' => Direction::Send,
            '?' => Direction::Recv,
            _ => return None,
        };
        Label::new(&text[1..]).map(|l| Action::new(dir, l))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula<L> {
    True,
    False,
    And(Box<Formula<L>>, Box<Formula<L>>),
    Or(Box<Formula<L>>, Box<Formula<L>>),
    /// `[a]phi`
    Box(L, Box<Formula<L>>),
    /// `<a>phi`
    Diamond(L, Box<Formula<L>>),
    Nu(Name, Box<Formula<L>>),
    Var(Name),
}

impl<L: ActionLabel> Formula<L> {
    pub fn and(a: Formula<L>, b: Formula<L>) -> Formula<L> {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula<L>, b: Formula<L>) -> Formula<L> {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: L, phi: Formula<L>) -> Formula<L> {
        Formula::Box(a, Box::new(phi))
    }

    pub fn diamond(a: L, phi: Formula<L>) -> Formula<L> {
        Formula::Diamond(a, Box::new(phi))
    }

    pub fn nu(x: &str, body: Formula<L>) -> Formula<L> {
        Formula::Nu(Arc::from(x), Box::new(body))
    }

    pub fn var(x: &str) -> Formula<L> {
        Formula::Var(Arc::from(x))
    }

    /// Right-nested conjunction in list order; `tt` when empty.
    pub fn and_all<I: IntoIterator<Item = Formula<L>>>(parts: I) -> Formula<L> {
        let mut parts: Vec<_> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Formula::True;
        };
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        acc
    }

    /// Right-nested disjunction in list order; `ff` when empty.
    pub fn or_all<I: IntoIterator<Item = Formula<L>>>(parts: I) -> Formula<L> {
        let mut parts: Vec<_> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Formula::False;
        };
        while let Some(p) = parts.pop() {
            acc = Formula::or(p, acc);
        }
        acc
    }

    /// `[A]phi`, i.e. the conjunction of `[a]phi` over `a` in `actions`.
    pub fn box_all<'a, I>(actions: I, phi: &Formula<L>) -> Formula<L>
    where
        I: IntoIterator<Item = &'a L>,
        L: 'a,
    {
        Formula::and_all(actions.into_iter().map(|a| Formula::boxed(a.clone(), phi.clone())))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Var(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Box(_, p) | Formula::Diamond(_, p) | Formula::Nu(_, p) => 1 + p.size(),
        }
    }

    pub fn free_vars(&self) -> Vec<Name> {
        fn go<L>(f: &Formula<L>, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Box(_, p) | Formula::Diamond(_, p) => go(p, bound, out),
                Formula::Nu(x, p) => {
                    bound.push(x.clone());
                    go(p, bound, out);
                    bound.pop();
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

    /// Replaces free occurrences of `x` by `repl` (no renaming; `repl`'s
    /// free variables must not be bound inside `self`).
    pub fn substitute(&self, x: &str, repl: &Formula<L>) -> Formula<L> {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Var(y) if &**y == x => repl.clone(),
            Formula::Var(y) => Formula::Var(y.clone()),
            Formula::And(a, b) => Formula::and(a.substitute(x, repl), b.substitute(x, repl)),
            Formula::Or(a, b) => Formula::or(a.substitute(x, repl), b.substitute(x, repl)),
            Formula::Box(l, p) => Formula::boxed(l.clone(), p.substitute(x, repl)),
            Formula::Diamond(l, p) => Formula::diamond(l.clone(), p.substitute(x, repl)),
            Formula::Nu(y, _) if &**y == x => self.clone(),
            Formula::Nu(y, p) => Formula::Nu(y.clone(), Box::new(p.substitute(x, repl))),
        }
    }

    /// Nesting depth of `Nu` binders.
    pub fn nu_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Var(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => a.nu_depth().max(b.nu_depth()),
            Formula::Box(_, p) | Formula::Diamond(_, p) => p.nu_depth(),
            Formula::Nu(_, p) => 1 + p.nu_depth(),
        }
    }
}

impl Formula<Action> {
    /// Flips the direction of every modality's action.
    pub fn dual(&self) -> Formula<Action> {
        dual_formula(self)
    }
}

/// Flips the direction of every modality's action; connectives, fixpoints
/// and variables are kept.
pub fn dual_formula(phi: &Formula<Action>) -> Formula<Action> {
    match phi {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Var(x) => Formula::Var(x.clone()),
        Formula::And(a, b) => Formula::and(dual_formula(a), dual_formula(b)),
        Formula::Or(a, b) => Formula::or(dual_formula(a), dual_formula(b)),
        Formula::Box(l, p) => Formula::boxed(l.dual(), dual_formula(p)),
        Formula::Diamond(l, p) => Formula::diamond(l.dual(), dual_formula(p)),
        Formula::Nu(x, p) => Formula::Nu(x.clone(), Box::new(dual_formula(p))),
    }
}

/// The `n`-th approximant of `nu x . body`: `tt` for `n = 0`, otherwise
/// `body[approximate(phi, n - 1) / x]`. Returns `None` when `phi` is not a
/// fixpoint.
pub fn approximate<L: ActionLabel>(phi: &Formula<L>, n: usize) -> Option<Formula<L>> {
    let Formula::Nu(x, body) = phi else {
        return None;
    };
    let mut acc = Formula::True;
    for _ in 0..n {
        acc = body.substitute(x, &acc);
    }
    Some(acc)
}

impl<L: ActionLabel> fmt::Display for Formula<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self, Style::Native))
    }
}

impl<L: ActionLabel> fmt::Debug for Formula<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self, Style::Native))
    }
}
