use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use std::cell::RefCell;

use super::term::{Interner, Node, Term};
use super::{Action, SessionType};

/// A finite, deterministic labelled transition system.
///
/// States carry the term they stand for; state `i` is `states()[i]`.
#[derive(Debug, Clone)]
pub struct Lts<S, L> {
    states: Vec<S>,
    initial: usize,
    succ: Vec<Vec<(L, usize)>>,
}

/// States are interned closed terms.
pub type SessionLts = Lts<Term, Action>;

impl<S, L: Clone + PartialEq> Lts<S, L> {
    /// Explores every state reachable from `initial`. `canon` maps a term to
    /// its state representative and `step` lists its transitions; state
    /// identity is equality of representatives.
    pub fn explore<C, F>(initial: S, mut canon: C, mut step: F) -> Lts<S, L>
    where
        S: Clone + Eq + Hash,
        C: FnMut(&S) -> S,
        F: FnMut(&S) -> Vec<(L, S)>,
    {
        let mut index: HashMap<S, usize> = HashMap::new();
        let mut states = Vec::new();
        let mut succ = Vec::new();
        let mut queue = VecDeque::new();

        let init = canon(&initial);
        index.insert(init.clone(), 0);
        states.push(init);
        succ.push(Vec::new());
        queue.push_back(0);

        while let Some(i) = queue.pop_front() {
            let edges = step(&states[i]);
            let mut out = Vec::with_capacity(edges.len());
            for (label, target) in edges {
                let target = canon(&target);
                let j = match index.get(&target) {
                    Some(&j) => j,
                    None => {
                        let j = states.len();
                        index.insert(target.clone(), j);
                        states.push(target);
                        succ.push(Vec::new());
                        queue.push_back(j);
                        j
                    }
                };
                out.push((label, j));
            }
            succ[i] = out;
        }
        Lts { states, initial: 0, succ }
    }

    pub fn from_parts(states: Vec<S>, initial: usize, succ: Vec<Vec<(L, usize)>>) -> Lts<S, L> {
        assert_eq!(states.len(), succ.len());
        assert!(initial < states.len());
        Lts { states, initial, succ }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &S {
        &self.states[i]
    }

    pub fn successors(&self, i: usize) -> &[(L, usize)] {
        &self.succ[i]
    }

    pub fn successor(&self, i: usize, label: &L) -> Option<usize> {
        self.succ[i].iter().find(|(l, _)| l == label).map(|&(_, j)| j)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, &L, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(i, out)| out.iter().map(move |(l, j)| (i, l, *j)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}

/// The transition system of a closed, contractive type. States are the
/// top-unfolded forms reachable from `t`, identified structurally.
pub fn build_lts(t: &SessionType) -> SessionLts {
    let arena = RefCell::new(Interner::default());
    let root = arena.borrow_mut().intern(t);
    Lts::explore(
        root,
        |s| arena.borrow_mut().unfold_top(s),
        |s| match s.node() {
            Node::Choice(kind, branches) => branches
                .iter()
                .map(|(l, cont)| (Action::new(kind.direction(), l.clone()), cont.clone()))
                .collect(),
            _ => Vec::new(),
        },
    )
}
