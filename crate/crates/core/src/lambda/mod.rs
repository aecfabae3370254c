//! Recursive types of the simply-typed lambda calculus with `top` and `bot`,
//! decided directly and through characteristic formulae.
//!
//! ```text
//! t ::= top | bot | t -> t | rec v . t | v
//! ```
//!
//! Transitions: `top --top--> top`, `bot --bot--> top`, `t0 -> t1 --i--> ti`.

mod parse;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::budget::{Budget, BudgetExceeded};
use crate::mu::{models_within, ActionLabel, Formula};
use crate::types::{Lts, Name};

pub use parse::{parse_ltype, LParseError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum LType {
    Top,
    Bot,
    Arrow(Box<LType>, Box<LType>),
    Rec(Name, Box<LType>),
    Var(Name),
}

impl LType {
    pub fn arrow(a: LType, b: LType) -> LType {
        LType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn rec(v: &str, body: LType) -> LType {
        LType::Rec(Arc::from(v), Box::new(body))
    }

    pub fn var(v: &str) -> LType {
        LType::Var(Arc::from(v))
    }

    pub fn free_vars(&self) -> Vec<Name> {
        fn go(t: &LType, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
            match t {
                LType::Top | LType::Bot => {}
                LType::Var(v) => {
                    if !bound.contains(v) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                LType::Rec(v, b) => {
                    bound.push(v.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                LType::Arrow(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Whether every bound variable sits under an arrow within its binder.
    pub fn is_contractive(&self) -> bool {
        fn unguarded(t: &LType, out: &mut Vec<Name>) {
            match t {
                LType::Var(v) => out.push(v.clone()),
                LType::Rec(v, b) => {
                    let mut inner = Vec::new();
                    unguarded(b, &mut inner);
                    out.extend(inner.into_iter().filter(|x| x != v));
                }
                _ => {}
            }
        }
        match self {
            LType::Top | LType::Bot | LType::Var(_) => true,
            LType::Arrow(a, b) => a.is_contractive() && b.is_contractive(),
            LType::Rec(v, b) => {
                let mut u = Vec::new();
                unguarded(b, &mut u);
                !u.contains(v) && b.is_contractive()
            }
        }
    }

    pub fn substitute(&self, v: &str, repl: &LType) -> LType {
        match self {
            LType::Top | LType::Bot => self.clone(),
            LType::Var(x) if &**x == v => repl.clone(),
            LType::Var(_) => self.clone(),
            LType::Rec(x, _) if &**x == v => self.clone(),
            LType::Rec(x, b) => LType::Rec(x.clone(), Box::new(b.substitute(v, repl))),
            LType::Arrow(a, b) => LType::arrow(a.substitute(v, repl), b.substitute(v, repl)),
        }
    }

    /// Unfolds leading `rec`s of a contractive type.
    pub fn unfold_top(&self) -> LType {
        let mut cur = self.clone();
        while let LType::Rec(v, b) = &cur {
            cur = b.substitute(v, &cur);
        }
        cur
    }
}

impl fmt::Display for LType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LType::Top => f.write_str("top"),
            LType::Bot => f.write_str("bot"),
            LType::Var(v) => f.write_str(v),
            LType::Rec(v, b) => write!(f, "rec {v} . {b}"),
            LType::Arrow(a, b) => match **a {
                LType::Arrow(..) | LType::Rec(..) => write!(f, "({a}) -> {b}"),
                _ => write!(f, "{a} -> {b}"),
            },
        }
    }
}

impl fmt::Debug for LType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LAction {
    Zero,
    One,
    Top,
    Bot,
}

impl fmt::Display for LAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LAction::Zero => "0",
            LAction::One => "1",
            LAction::Top => "top",
            LAction::Bot => "bot",
        })
    }
}

impl ActionLabel for LAction {
    fn mcrl2_name(&self) -> String {
        format!("l{self}")
    }

    fn parse_label(text: &str) -> Option<LAction> {
        Some(match text {
            "0" => LAction::Zero,
            "1" => LAction::One,
            "top" => LAction::Top,
            "bot" => LAction::Bot,
            _ => return None,
        })
    }
}

/// Which extreme a formula is anchored at: `Top` characterises supertypes,
/// `Bot` subtypes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Delta {
    Top,
    Bot,
}

impl Delta {
    pub fn dual(self) -> Delta {
        match self {
            Delta::Top => Delta::Bot,
            Delta::Bot => Delta::Top,
        }
    }

    fn action(self) -> LAction {
        match self {
            Delta::Top => LAction::Top,
            Delta::Bot => LAction::Bot,
        }
    }
}

pub type LLts = Lts<LType, LAction>;

pub fn build_llts(t: &LType) -> LLts {
    Lts::explore(t.clone(), LType::unfold_top, |s| match s {
        LType::Top => vec![(LAction::Top, LType::Top)],
        LType::Bot => vec![(LAction::Bot, LType::Top)],
        LType::Arrow(a, b) => vec![(LAction::Zero, (**a).clone()), (LAction::One, (**b).clone())],
        _ => Vec::new(),
    })
}

/// The largest relation with `bot <= t`, `t <= top` and arrows contravariant
/// on the left, covariant on the right.
pub fn lsubtype_direct(t: &LType, u: &LType) -> bool {
    let start = (t.unfold_top(), u.unfold_top());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((a, b)) = queue.pop_front() {
        match (&a, &b) {
            (LType::Bot, _) | (_, LType::Top) => {}
            (LType::Arrow(a0, a1), LType::Arrow(b0, b1)) => {
                for pair in [(b0.unfold_top(), a0.unfold_top()), (a1.unfold_top(), b1.unfold_top())] {
                    if seen.insert(pair.clone()) {
                        queue.push_back(pair);
                    }
                }
            }
            _ => return false,
        }
    }
    true
}

/// The characteristic formula of `t` anchored at `delta`.
///
/// * `t = delta`: `<delta>tt`; `t` the other extreme: `tt`;
/// * `t0 -> t1`: `(<0>F(t0, dual delta) && <1>F(t1, delta)) || <delta>tt`;
/// * `rec v . t`: a fixpoint over a variable for `v` at this `delta`.
///
/// A variable reached at the opposite anchor from its binder reopens the
/// binder's body under a new fixpoint for that anchor.
///
/// # Panics
/// If `t` has a free variable.
pub fn lchar_formula(t: &LType, delta: Delta) -> Formula<LAction> {
    Lambda::default().formula(t, delta)
}

#[derive(Default)]
struct Lambda {
    // (variable, anchor, formula variable)
    bound: Vec<(Name, Delta, Name)>,
    bodies: Vec<(Name, LType)>,
    next: usize,
}

impl Lambda {
    fn fresh(&mut self, v: &str, d: Delta) -> Name {
        self.next += 1;
        let tag = if d == Delta::Top { "t" } else { "b" };
        Arc::from(format!("{v}_{tag}{}", self.next).as_str())
    }

    fn fixpoint(&mut self, v: &Name, body: &LType, d: Delta) -> Formula<LAction> {
        let n = self.fresh(v, d);
        self.bound.push((v.clone(), d, n.clone()));
        let f = self.formula(body, d);
        self.bound.pop();
        Formula::Nu(n, Box::new(f))
    }

    fn formula(&mut self, t: &LType, d: Delta) -> Formula<LAction> {
        match t {
            LType::Top | LType::Bot => {
                let here = if *t == LType::Top { Delta::Top } else { Delta::Bot };
                if here == d {
                    Formula::diamond(d.action(), Formula::True)
                } else {
                    Formula::True
                }
            }
            LType::Arrow(a, b) => {
                let fa = self.formula(a, d.dual());
                let fb = self.formula(b, d);
                Formula::or(
                    Formula::and(
                        Formula::diamond(LAction::Zero, fa),
                        Formula::diamond(LAction::One, fb),
                    ),
                    Formula::diamond(d.action(), Formula::True),
                )
            }
            LType::Rec(v, body) => {
                self.bodies.push((v.clone(), (**body).clone()));
                let f = self.fixpoint(v, body, d);
                self.bodies.pop();
                f
            }
            LType::Var(v) => {
                // innermost binder of `v`, then its variable at this anchor
                let depth = self
                    .bodies
                    .iter()
                    .rposition(|(x, _)| x == v)
                    .unwrap_or_else(|| panic!("free variable `{v}`"));
                if let Some((_, _, n)) = self.bound.iter().rev().find(|(x, e, _)| x == v && *e == d) {
                    return Formula::Var(n.clone());
                }
                let body = self.bodies[depth].1.clone();
                // the reopened body sees only the binders enclosing `v`'s own
                let saved = self.bodies.split_off(depth + 1);
                let f = self.fixpoint(v, &body, d);
                self.bodies.extend(saved);
                f
            }
        }
    }
}

/// How [`lsubtype`] decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LMode {
    Direct,
    /// `llts(u) |= F(t, top)`.
    ViaTop,
    /// `llts(t) |= F(u, bot)`.
    ViaBot,
}

pub fn lsubtype_cf(t: &LType, u: &LType, delta: Delta) -> bool {
    lsubtype_cf_within(t, u, delta, &mut Budget::unlimited()).expect("unlimited budget")
}

pub fn lsubtype_cf_within(
    t: &LType,
    u: &LType,
    delta: Delta,
    budget: &mut Budget,
) -> Result<bool, BudgetExceeded> {
    match delta {
        Delta::Top => models_within(&build_llts(u), &lchar_formula(t, Delta::Top), budget),
        Delta::Bot => models_within(&build_llts(t), &lchar_formula(u, Delta::Bot), budget),
    }
}

pub fn lsubtype(t: &LType, u: &LType, mode: LMode) -> bool {
    match mode {
        LMode::Direct => lsubtype_direct(t, u),
        LMode::ViaTop => lsubtype_cf(t, u, Delta::Top),
        LMode::ViaBot => lsubtype_cf(t, u, Delta::Bot),
    }
}

/// A random closed contractive type with `target_size` arrows.
pub fn gen_ltype(target_size: usize, rec_probability: f64, seed: u64) -> LType {
    struct G {
        rng: ChaCha8Rng,
        rec_p: f64,
        next: usize,
    }
    impl G {
        // `guarded` holds the variables usable at this point
        fn node(&mut self, budget: usize, scope: &mut Vec<Name>, guarded: usize) -> LType {
            if budget == 0 {
                let usable = &scope[..guarded];
                return match self.rng.gen_range(0..3) {
                    0 if !usable.is_empty() => {
                        LType::Var(usable[self.rng.gen_range(0..usable.len())].clone())
                    }
                    0 | 1 => LType::Top,
                    _ => LType::Bot,
                };
            }
            if self.rng.gen_bool(self.rec_p) {
                self.next += 1;
                let v: Name = Arc::from(format!("v{}", self.next).as_str());
                scope.push(v.clone());
                let body = self.arrow(budget, scope);
                scope.pop();
                return LType::Rec(v, Box::new(body));
            }
            self.arrow(budget, scope)
        }

        fn arrow(&mut self, budget: usize, scope: &mut Vec<Name>) -> LType {
            let left = self.rng.gen_range(0..budget);
            let all = scope.len();
            let a = self.node(left, scope, all);
            let b = self.node(budget - 1 - left, scope, all);
            LType::arrow(a, b)
        }
    }
    let mut g = G {
        rng: ChaCha8Rng::seed_from_u64(seed),
        rec_p: rec_probability,
        next: 0,
    };
    g.node(target_size, &mut Vec::new(), 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Formula<LAction>;

    fn p(s: &str) -> LType {
        parse_ltype(s).unwrap()
    }

    #[test]
    fn llts_rules() {
        let top = build_llts(&LType::Top);
        assert_eq!(top.state_count(), 1);
        assert_eq!(top.successors(0), &[(LAction::Top, 0)]);
        let bot = build_llts(&LType::Bot);
        assert_eq!(bot.state_count(), 2);
        assert_eq!(bot.successor(0, &LAction::Bot).map(|i| bot.state(i).clone()), Some(LType::Top));
        let arr = build_llts(&p("top -> bot"));
        let labels: Vec<_> = arr.successors(0).iter().map(|(l, _)| *l).collect();
        assert_eq!(labels, [LAction::Zero, LAction::One]);
    }

    #[test]
    fn direct_examples() {
        assert!(lsubtype_direct(&p("top -> bot"), &p("bot -> top")));
        assert!(!lsubtype_direct(&p("bot -> top"), &p("top -> bot")));
        assert!(lsubtype_direct(&LType::Bot, &LType::Top));
        assert!(!lsubtype_direct(&LType::Top, &LType::Bot));
        assert!(lsubtype_direct(&p("top -> bot"), &LType::Top));
    }

    #[test]
    fn formula_cases() {
        assert_eq!(lchar_formula(&LType::Top, Delta::Top), F::diamond(LAction::Top, F::True));
        assert_eq!(lchar_formula(&LType::Bot, Delta::Top), F::True);
        assert_eq!(lchar_formula(&LType::Top, Delta::Bot), F::True);
        assert_eq!(lchar_formula(&LType::Bot, Delta::Bot), F::diamond(LAction::Bot, F::True));
        let f = lchar_formula(&p("bot -> top"), Delta::Top);
        let expected = F::or(
            F::and(
                F::diamond(LAction::Zero, F::diamond(LAction::Bot, F::True)),
                F::diamond(LAction::One, F::diamond(LAction::Top, F::True)),
            ),
            F::diamond(LAction::Top, F::True),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn arrows_are_below_top_under_formulae() {
        let t = p("top -> bot");
        for m in [LMode::Direct, LMode::ViaTop, LMode::ViaBot] {
            assert!(lsubtype(&t, &LType::Top, m));
            assert!(lsubtype(&LType::Bot, &t, m));
            assert!(lsubtype(&LType::Bot, &LType::Top, m));
            assert!(!lsubtype(&LType::Top, &LType::Bot, m));
            assert!(lsubtype(&t, &p("bot -> top"), m));
            assert!(!lsubtype(&p("bot -> top"), &t, m));
        }
    }

    #[test]
    fn recursion_in_contravariant_position() {
        // r = r -> bot; s = s -> top. r <= s needs s <= r on the left.
        let r = p("rec x . x -> bot");
        let s = p("rec y . y -> top");
        let q = p("rec z . (z -> top) -> bot");
        for (a, b) in [(&r, &s), (&s, &r), (&r, &q), (&q, &r), (&s, &q), (&r, &r)] {
            let d = lsubtype_direct(a, b);
            assert_eq!(lsubtype(a, b, LMode::ViaTop), d, "{a} <= {b}");
            assert_eq!(lsubtype(a, b, LMode::ViaBot), d, "{a} <= {b}");
        }
    }

    #[test]
    fn generated_types_are_closed_and_contractive() {
        for seed in 0..200 {
            let t = gen_ltype(6, 0.3, seed);
            assert!(t.free_vars().is_empty(), "{t}");
            assert!(t.is_contractive(), "{t}");
        }
    }
}
