//! Subtyping as emptiness of a product of term automata.
//!
//! A type is read as a deterministic automaton over its actions whose states
//! carry a constructor. The product of the automata of `t` and `u` runs both
//! along common actions; a product state accepts when its constructors are
//! unrelated. `t <= u` iff no accepting state is reachable.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::budget::{Budget, BudgetExceeded};
use crate::types::{build_lts, Action, ChoiceKind, Node, SessionLts, SessionType, Term};

/// The constructor at a state, with its outgoing actions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constructor {
    End,
    Choice(ChoiceKind, BTreeSet<Action>),
}

impl Constructor {
    fn of(t: &Term) -> Constructor {
        match t.node() {
            Node::Choice(kind, branches) => Constructor::Choice(
                *kind,
                branches
                    .iter()
                    .map(|(l, _)| Action::new(kind.direction(), l.clone()))
                    .collect(),
            ),
            _ => Constructor::End,
        }
    }
}

/// `end <= end`, `+A <= +B` iff `A` within `B`, `&A <= &B` iff `B` within `A`.
pub fn constructor_leq(a: &Constructor, b: &Constructor) -> bool {
    match (a, b) {
        (Constructor::End, Constructor::End) => true,
        (Constructor::Choice(ka, xs), Constructor::Choice(kb, ys)) if ka == kb => match ka {
            ChoiceKind::Internal => xs.is_subset(ys),
            ChoiceKind::External => ys.is_subset(xs),
        },
        _ => false,
    }
}

/// The term automaton of a closed type.
#[derive(Debug, Clone)]
pub struct TermAutomaton {
    lts: SessionLts,
    labels: Vec<Constructor>,
}

impl TermAutomaton {
    pub fn new(t: &SessionType) -> TermAutomaton {
        let lts = build_lts(t);
        let labels = lts.states().iter().map(Constructor::of).collect();
        TermAutomaton { lts, labels }
    }

    pub fn state_count(&self) -> usize {
        self.lts.state_count()
    }

    pub fn constructor(&self, state: usize) -> &Constructor {
        &self.labels[state]
    }

    pub fn lts(&self) -> &SessionLts {
        &self.lts
    }
}

/// The reachable part of a product automaton.
#[derive(Debug, Clone)]
pub struct Product {
    pairs: Vec<(usize, usize)>,
    parent: Vec<Option<(usize, Action)>>,
    accepting: Vec<usize>,
}

impl Product {
    /// Explores the product of `a` and `b`. Stops at the first accepting
    /// state when `stop_early`.
    pub fn build(
        a: &TermAutomaton,
        b: &TermAutomaton,
        stop_early: bool,
        budget: &mut Budget,
    ) -> Result<Product, BudgetExceeded> {
        let mut index = HashMap::new();
        let mut prod = Product {
            pairs: Vec::new(),
            parent: Vec::new(),
            accepting: Vec::new(),
        };
        let root = (a.lts.initial(), b.lts.initial());
        index.insert(root, 0);
        prod.pairs.push(root);
        prod.parent.push(None);
        let mut queue = VecDeque::from([0]);
        while let Some(k) = queue.pop_front() {
            budget.tick()?;
            let (p, q) = prod.pairs[k];
            if !constructor_leq(&a.labels[p], &b.labels[q]) {
                prod.accepting.push(k);
                if stop_early {
                    break;
                }
                continue;
            }
            for (act, p2) in a.lts.successors(p) {
                let Some(q2) = b.lts.successor(q, act) else {
                    continue;
                };
                let next = (*p2, q2);
                if index.contains_key(&next) {
                    continue;
                }
                let id = prod.pairs.len();
                index.insert(next, id);
                prod.pairs.push(next);
                prod.parent.push(Some((k, act.clone())));
                queue.push_back(id);
            }
        }
        Ok(prod)
    }

    pub fn state_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, k: usize) -> (usize, usize) {
        self.pairs[k]
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn language_empty(&self) -> bool {
        self.accepting.is_empty()
    }

    /// Actions from the root to product state `k`.
    pub fn trace(&self, mut k: usize) -> Vec<Action> {
        let mut out = Vec::new();
        while let Some((from, act)) = &self.parent[k] {
            out.push(act.clone());
            k = *from;
        }
        out.reverse();
        out
    }
}

pub fn subtype_kps(t: &SessionType, u: &SessionType) -> bool {
    subtype_kps_within(t, u, &mut Budget::unlimited()).expect("unlimited budget")
}

pub fn subtype_kps_within(
    t: &SessionType,
    u: &SessionType,
    budget: &mut Budget,
) -> Result<bool, BudgetExceeded> {
    let (a, b) = (TermAutomaton::new(t), TermAutomaton::new(u));
    Ok(Product::build(&a, &b, true, budget)?.language_empty())
}

/// A shortest common path to a pair of unrelated constructors, if any.
pub fn kps_counterexample(t: &SessionType, u: &SessionType) -> Option<Vec<Action>> {
    let (a, b) = (TermAutomaton::new(t), TermAutomaton::new(u));
    let prod = Product::build(&a, &b, true, &mut Budget::unlimited()).expect("unlimited budget");
    prod.accepting().first().map(|&k| prod.trace(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    fn p(s: &str) -> SessionType {
        parse_type(s).unwrap()
    }

    #[test]
    fn constructor_order() {
        fn c(kind: ChoiceKind, xs: &[Action]) -> Constructor {
            Constructor::Choice(kind, xs.iter().cloned().collect())
        }
        let (a, b) = (Action::send("a"), Action::send("b"));
        let int = ChoiceKind::Internal;
        assert!(constructor_leq(&c(int, &[a.clone()]), &c(int, &[a.clone(), b.clone()])));
        assert!(!constructor_leq(&c(int, &[a.clone(), b]), &c(int, &[a])));
        let (ra, rb) = (Action::recv("a"), Action::recv("b"));
        let ext = ChoiceKind::External;
        assert!(constructor_leq(&c(ext, &[ra.clone(), rb]), &c(ext, &[ra.clone()])));
        assert!(!constructor_leq(&Constructor::End, &c(ext, &[ra])));
        assert!(constructor_leq(&Constructor::End, &Constructor::End));
    }

    #[test]
    fn request_reply_pairs() {
        let t1 = p("?request . !ok . end");
        let u1 = p("rec x . ?request . +{ !ok . end , !ko . x }");
        assert!(subtype_kps(&t1, &u1));
        assert!(!subtype_kps(&u1, &t1));
        assert_eq!(
            kps_counterexample(&u1, &t1),
            Some(vec![Action::recv("request")])
        );
        let t2 = p("rec x . !request . &{ ?ok . end , ?ko . x , ?error . end }");
        let u2 = p("rec x . !request . &{ ?ok . end , ?ko . x }");
        assert!(subtype_kps(&t2, &u2));
        assert!(!subtype_kps(&u2, &t2));
    }

    #[test]
    fn full_product_is_reachable_only() {
        let t = p("rec x . ?a . x");
        let u = p("?a . rec y . ?a . y");
        let prod = Product::build(
            &TermAutomaton::new(&t),
            &TermAutomaton::new(&u),
            false,
            &mut Budget::unlimited(),
        )
        .unwrap();
        assert!(prod.language_empty());
        assert_eq!(prod.state_count(), 1);
    }
}
