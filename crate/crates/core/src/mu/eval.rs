use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{ActionLabel, Formula};
use crate::budget::{Budget, BudgetExceeded};
use crate::types::{Lts, Name};

/// A set of LTS state ids.
pub type StateSet = FixedBitSet;

/// Valuation of free fixpoint variables.
pub type Env = HashMap<Name, StateSet>;

/// Denotational evaluator.
///
/// `nu` nodes are solved by downward Knaster-Tarski iteration. Within one
/// evaluation every fixpoint is re-entered only under smaller valuations of
/// its enclosing variables, so the iteration for a `nu` node restarts from
/// its previous solution instead of the full state set; the result is the
/// same greatest fixpoint, but nested fixpoints no longer cost a product of
/// iteration counts.
struct Evaluator<'a, S, L> {
    lts: &'a Lts<S, L>,
    scope: Vec<(Name, StateSet)>,
    warm: HashMap<*const Formula<L>, StateSet>,
    budget: &'a mut Budget,
}

impl<'a, S, L: ActionLabel> Evaluator<'a, S, L> {
    fn full(&self) -> StateSet {
        let mut s = FixedBitSet::with_capacity(self.lts.state_count());
        s.insert_range(..);
        s
    }

    fn empty(&self) -> StateSet {
        FixedBitSet::with_capacity(self.lts.state_count())
    }

    fn lookup(&self, x: &Name) -> Option<&StateSet> {
        self.scope.iter().rev().find(|(y, _)| y == x).map(|(_, s)| s)
    }

    fn eval(&mut self, phi: &Formula<L>) -> Result<StateSet, BudgetExceeded> {
        self.budget.tick()?;
        Ok(match phi {
            Formula::True => self.full(),
            Formula::False => self.empty(),
            Formula::Var(x) => self
                .lookup(x)
                .cloned()
                .unwrap_or_else(|| panic!("unbound fixpoint variable `{x}`")),
            Formula::And(a, b) => {
                let mut s = self.eval(a)?;
                if !s.is_clear() {
                    s.intersect_with(&self.eval(b)?);
                }
                s
            }
            Formula::Or(a, b) => {
                let mut s = self.eval(a)?;
                s.union_with(&self.eval(b)?);
                s
            }
            Formula::Box(a, p) => {
                let inner = self.eval(p)?;
                let mut s = self.empty();
                for i in 0..self.lts.state_count() {
                    match self.lts.successor(i, a) {
                        Some(j) if !inner.contains(j) => {}
                        _ => s.insert(i),
                    }
                }
                s
            }
            Formula::Diamond(a, p) => {
                let inner = self.eval(p)?;
                let mut s = self.empty();
                for i in 0..self.lts.state_count() {
                    if let Some(j) = self.lts.successor(i, a) {
                        if inner.contains(j) {
                            s.insert(i);
                        }
                    }
                }
                s
            }
            Formula::Nu(x, body) => {
                let key = phi as *const Formula<L>;
                let mut cur = match self.warm.get(&key) {
                    Some(prev) => prev.clone(),
                    None => self.full(),
                };
                loop {
                    self.scope.push((x.clone(), cur));
                    let next = self.eval(body);
                    let (_, prev) = self.scope.pop().expect("scope underflow");
                    let next = next?;
                    if next == prev {
                        cur = next;
                        break;
                    }
                    cur = next;
                }
                self.warm.insert(key, cur.clone());
                cur
            }
        })
    }
}

/// States of `lts` satisfying `phi` under `env`.
///
/// # Panics
/// If `phi` has a free variable not bound by `env`.
pub fn eval_states<S, L: ActionLabel>(lts: &Lts<S, L>, phi: &Formula<L>, env: &Env) -> StateSet {
    let mut budget = Budget::unlimited();
    eval_with(lts, phi, env, &mut budget).expect("unlimited budget")
}

fn eval_with<S, L: ActionLabel>(
    lts: &Lts<S, L>,
    phi: &Formula<L>,
    env: &Env,
    budget: &mut Budget,
) -> Result<StateSet, BudgetExceeded> {
    let mut ev = Evaluator {
        lts,
        scope: env.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        warm: HashMap::new(),
        budget,
    };
    ev.eval(phi)
}

/// Whether the initial state of `lts` satisfies the closed formula `phi`.
pub fn models<S, L: ActionLabel>(lts: &Lts<S, L>, phi: &Formula<L>) -> bool {
    eval_states(lts, phi, &Env::new()).contains(lts.initial())
}

/// [`models`] under a cooperative budget (one step per formula node visit).
pub fn models_within<S, L: ActionLabel>(
    lts: &Lts<S, L>,
    phi: &Formula<L>,
    budget: &mut Budget,
) -> Result<bool, BudgetExceeded> {
    Ok(eval_with(lts, phi, &Env::new(), budget)?.contains(lts.initial()))
}

/// The successive iterates `S0 = all states, S(k+1) = body(Sk)` of a
/// top-level `nu x . body`, ending with the first repeated value. The body
/// is evaluated from scratch at every step. Returns `None` if `phi` is not a
/// fixpoint.
pub fn nu_iterates<S, L: ActionLabel>(
    lts: &Lts<S, L>,
    phi: &Formula<L>,
    env: &Env,
) -> Option<Vec<StateSet>> {
    let Formula::Nu(x, body) = phi else {
        return None;
    };
    let mut full = FixedBitSet::with_capacity(lts.state_count());
    full.insert_range(..);
    let mut out = vec![full];
    loop {
        let mut env = env.clone();
        env.insert(x.clone(), out.last().expect("nonempty").clone());
        let next = eval_states(lts, body, &env);
        let done = Some(&next) == out.last();
        out.push(next);
        if done {
            return Some(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{build_lts, parse_type, Action};

    type F = Formula<Action>;

    fn set(n: usize, ids: &[usize]) -> StateSet {
        let mut s = FixedBitSet::with_capacity(n);
        for &i in ids {
            s.insert(i);
        }
        s
    }

    #[test]
    fn constants() {
        let lts = build_lts(&parse_type("?request . !ok . end").unwrap());
        assert_eq!(eval_states(&lts, &F::False, &Env::new()), set(3, &[]));
        assert!(models(&lts, &F::True));
    }

    #[test]
    fn end_satisfies_box_false() {
        let lts = build_lts(&parse_type("end").unwrap());
        let phi = F::box_all(&[Action::send("a"), Action::recv("b")], &F::False);
        assert!(models(&lts, &phi));
    }

    #[test]
    fn safety_formula_without_obligation_holds_everywhere() {
        // two-state loop: rec x . !a . !b . x
        let lts = build_lts(&parse_type("rec x . !a . !b . x").unwrap());
        assert_eq!(lts.state_count(), 2);
        let phi = F::nu("x", F::boxed(Action::send("a"), F::var("x")));
        assert_eq!(eval_states(&lts, &phi, &Env::new()), set(2, &[0, 1]));
    }

    #[test]
    fn diamond_picks_initial() {
        let lts = build_lts(&parse_type("?request . !ok . end").unwrap());
        let phi = F::diamond(Action::recv("request"), F::True);
        assert_eq!(eval_states(&lts, &phi, &Env::new()), set(3, &[0]));
    }

    #[test]
    fn liveness_like_formula_fails_on_finite_path() {
        // nu x . <!a> x  requires an infinite !a-path
        let phi = F::nu("x", F::diamond(Action::send("a"), F::var("x")));
        assert!(models(&build_lts(&parse_type("rec x . !a . x").unwrap()), &phi));
        assert!(!models(&build_lts(&parse_type("!a . !a . end").unwrap()), &phi));
    }

    #[test]
    fn nested_fixpoints() {
        // nu x . <!a> nu y . (<!b> y || <!a> x)
        let a = Action::send("a");
        let b = Action::send("b");
        let phi = F::nu(
            "x",
            F::diamond(
                a.clone(),
                F::nu(
                    "y",
                    F::or(F::diamond(b.clone(), F::var("y")), F::diamond(a.clone(), F::var("x"))),
                ),
            ),
        );
        let yes = build_lts(&parse_type("rec x . !a . rec y . +{ !b . y, !a . x }").unwrap());
        assert!(models(&yes, &phi));
        let no = build_lts(&parse_type("!a . +{ !b . end, !a . end }").unwrap());
        assert!(!models(&no, &phi));
    }

    #[test]
    fn iterates_decrease() {
        let lts = build_lts(&parse_type("!a . !a . end").unwrap());
        let phi = F::nu("x", F::diamond(Action::send("a"), F::var("x")));
        let its = nu_iterates(&lts, &phi, &Env::new()).unwrap();
        for w in its.windows(2) {
            assert!(w[1].is_subset(&w[0]));
        }
        assert!(its.len() <= lts.state_count() + 2);
        assert!(its.last().unwrap().is_clear());
    }

    #[test]
    fn budget_stops_evaluation() {
        let lts = build_lts(&parse_type("rec x . !a . x").unwrap());
        let phi = F::nu("x", F::diamond(Action::send("a"), F::var("x")));
        assert!(models_within(&lts, &phi, &mut Budget::steps(2)).is_err());
        assert_eq!(models_within(&lts, &phi, &mut Budget::unlimited()), Ok(true));
    }
}
