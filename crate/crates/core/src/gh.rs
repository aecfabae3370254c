//! Algorithmic subtyping by inference rules over explicit unfoldings.
//!
//! Judgements are `G |- T <= U` with `G` the pairs assumed so far on the
//! current branch of the derivation. Rules, in priority order:
//!
//! * Assump: `(T, U)` is in `G`;
//! * RL: `T = rec x . T'`: add `(T, U)`, continue with `T'[T/x] <= U`;
//! * RR: `U = rec x . U'`: add `(T, U)`, continue with `T <= U'[U/x]`;
//! * End, Sel (`+`, `I` within `J`) and Bra (`&`, `J` within `I`).
//!
//! Sibling premises see the same context, so the derivation can revisit a
//! pair on many branches; this is the source of the exponential worst case.

use std::collections::HashMap;

use crate::budget::{Budget, BudgetExceeded};
use crate::types::{ChoiceKind, Interner, Node, SessionType, Term};

/// Assumed pairs on the current derivation branch, with multiplicity.
#[derive(Default)]
struct Context {
    pairs: HashMap<(Term, Term), usize>,
    len: usize,
}

impl Context {
    fn contains(&self, pair: &(Term, Term)) -> bool {
        self.pairs.contains_key(pair)
    }

    fn push(&mut self, pair: (Term, Term)) {
        *self.pairs.entry(pair).or_default() += 1;
        self.len += 1;
    }

    fn pop(&mut self, pair: &(Term, Term)) {
        if let Some(n) = self.pairs.get_mut(pair) {
            *n -= 1;
            if *n == 0 {
                self.pairs.remove(pair);
            }
        }
        self.len -= 1;
    }
}

struct Deriver<'b> {
    ctx: Context,
    terms: Interner,
    budget: &'b mut Budget,
    max_depth: usize,
}

impl Deriver<'_> {
    fn derive(&mut self, t: &Term, u: &Term) -> Result<bool, BudgetExceeded> {
        self.budget.tick()?;
        self.max_depth = self.max_depth.max(self.ctx.len);
        let recursive = matches!(t.node(), Node::Rec(..)) || matches!(u.node(), Node::Rec(..));
        if recursive {
            // only pairs with a recursive side are ever assumed
            let pair = (t.clone(), u.clone());
            if self.ctx.contains(&pair) {
                return Ok(true);
            }
            self.ctx.push(pair.clone());
            let res = match t.node() {
                Node::Rec(..) => {
                    let t2 = self.terms.unfold_once(t);
                    self.derive(&t2, u)
                }
                _ => {
                    let u2 = self.terms.unfold_once(u);
                    self.derive(t, &u2)
                }
            };
            self.ctx.pop(&pair);
            return res;
        }
        match (t.node(), u.node()) {
            (Node::End, Node::End) => Ok(true),
            (Node::Choice(kt, bt), Node::Choice(ku, bu)) if kt == ku => {
                // Sel: the left's branches are among the right's.
                // Bra: the right's branches are among the left's.
                let small = match kt {
                    ChoiceKind::Internal => bt,
                    ChoiceKind::External => bu,
                };
                let find = |bs: &[(_, Term)], l| bs.iter().find(|(m, _)| m == l).map(|(_, b)| b.clone());
                let mut premises = Vec::with_capacity(small.len());
                for (l, _) in small {
                    match (find(bt, l), find(bu, l)) {
                        (Some(a), Some(b)) => premises.push((a, b)),
                        _ => return Ok(false),
                    }
                }
                for (a, b) in premises {
                    if !self.derive(&a, &b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    }
}

/// Outcome of a derivation attempt with statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhStats {
    pub verdict: bool,
    /// Rule applications.
    pub steps: u64,
    /// Largest context size along any branch.
    pub max_context: usize,
}

/// Whether `|- t <= u` is derivable. `t` and `u` must be closed and valid.
pub fn subtype_gh(t: &SessionType, u: &SessionType) -> bool {
    subtype_gh_within(t, u, &mut Budget::unlimited()).expect("unlimited budget")
}

/// [`subtype_gh`] under a step/time budget.
pub fn subtype_gh_within(
    t: &SessionType,
    u: &SessionType,
    budget: &mut Budget,
) -> Result<bool, BudgetExceeded> {
    gh_stats(t, u, budget).map(|s| s.verdict)
}

pub fn gh_stats(
    t: &SessionType,
    u: &SessionType,
    budget: &mut Budget,
) -> Result<GhStats, BudgetExceeded> {
    let start = budget.used();
    let mut terms = Interner::default();
    let (t, u) = (terms.intern(t), terms.intern(u));
    let mut d = Deriver {
        ctx: Context::default(),
        terms,
        budget,
        max_depth: 0,
    };
    let verdict = d.derive(&t, &u)?;
    Ok(GhStats {
        verdict,
        steps: d.budget.used() - start,
        max_context: d.max_depth,
    })
}
