//! Seeded generators for closed, contractive session types and for the
//! benchmark families.
//!
//! Random types are built top-down against an exact message budget, so the
//! number of messages of the result equals `target_size`. A `rec` is always
//! followed directly by a choice and variables only appear as branch
//! continuations, which makes every output contractive by construction.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::types::{ChoiceKind, Label, Name, SessionType};

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    /// Number of messages in the generated type.
    pub target_size: usize,
    /// At least 1.
    pub max_branching: usize,
    /// Chance of opening a `rec` before a choice.
    pub rec_probability: f64,
    /// Labels are drawn from `a0 .. a{label_pool - 1}`; at least `max_branching`.
    pub label_pool: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            target_size: 10,
            max_branching: 4,
            rec_probability: 0.25,
            label_pool: 8,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn sized(target_size: usize, seed: u64) -> GenParams {
        GenParams {
            target_size,
            seed,
            ..GenParams::default()
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn check(&self) {
        assert!(self.max_branching >= 1, "max_branching must be at least 1");
        assert!(
            self.label_pool >= self.max_branching,
            "label_pool must be at least max_branching"
        );
        assert!((0.0..=1.0).contains(&self.rec_probability));
    }
}

pub(crate) fn label(i: usize) -> Label {
    Label::new(&format!("a{i}")).expect("valid label")
}

struct Gen<'p> {
    p: &'p GenParams,
    rng: ChaCha8Rng,
    recursion: bool,
    next_var: usize,
}

impl Gen<'_> {
    fn fresh(&mut self) -> Name {
        self.next_var += 1;
        Arc::from(format!("x{}", self.next_var).as_str())
    }

    fn leaf(&mut self, scope: &[Name]) -> SessionType {
        if !scope.is_empty() && self.rng.gen_bool(0.5) {
            let i = self.rng.gen_range(0..scope.len());
            SessionType::Var(scope[i].clone())
        } else {
            SessionType::End
        }
    }

    fn node(&mut self, budget: usize, scope: &mut Vec<Name>) -> SessionType {
        if budget == 0 {
            return self.leaf(scope);
        }
        if self.recursion && self.rng.gen_bool(self.p.rec_probability) {
            let x = self.fresh();
            scope.push(x.clone());
            let body = self.choice(budget, scope);
            scope.pop();
            return SessionType::Rec(x, Box::new(body));
        }
        self.choice(budget, scope)
    }

    fn choice(&mut self, budget: usize, scope: &mut Vec<Name>) -> SessionType {
        let width = self.rng.gen_range(1..=self.p.max_branching.min(budget));
        let kind = if self.rng.gen_bool(0.5) {
            ChoiceKind::Internal
        } else {
            ChoiceKind::External
        };
        let mut shares = vec![0usize; width];
        for _ in 0..budget - width {
            shares[self.rng.gen_range(0..width)] += 1;
        }
        let labels = sample(&mut self.rng, self.p.label_pool, width);
        let branches = labels
            .iter()
            .zip(shares)
            .map(|(l, share)| (label(l), self.node(share, scope)))
            .collect();
        SessionType::Choice(kind, branches)
    }
}

fn generate(p: &GenParams, recursion: bool) -> SessionType {
    p.check();
    let mut g = Gen {
        p,
        rng: p.rng(),
        recursion,
        next_var: 0,
    };
    g.node(p.target_size, &mut Vec::new())
}

/// A random closed type with exactly `target_size` messages.
pub fn gen_random(p: &GenParams) -> SessionType {
    generate(p, true)
}

/// As [`gen_random`], without recursion.
pub fn gen_norec(p: &GenParams) -> SessionType {
    generate(p, false)
}

/// `rec x1 . *a1 ... rec xk . *ak . *{ ai . *{ aj . xj } }` with `*` the
/// choice `kind`; it has `k(k+2)` messages.
pub fn gen_super(k: usize, kind: ChoiceKind) -> SessionType {
    assert!(k >= 1, "k must be at least 1");
    let var = |j: usize| -> Name { Arc::from(format!("x{j}").as_str()) };
    let lab = |j: usize| Label::new(&format!("a{j}")).expect("valid label");
    let inner = || {
        SessionType::Choice(
            kind,
            (1..=k).map(|j| (lab(j), SessionType::Var(var(j)))).collect(),
        )
    };
    let mut t = SessionType::Choice(kind, (1..=k).map(|i| (lab(i), inner())).collect());
    for i in (1..=k).rev() {
        t = SessionType::Rec(var(i), Box::new(SessionType::Choice(kind, vec![(lab(i), t)])));
    }
    t
}

/// `(rec x . V, rec x . V[V/x])` for a random body `V` made of choices and
/// the single variable `x`, with a choice at its head.
pub fn gen_unfolded_pair(p: &GenParams) -> (SessionType, SessionType) {
    p.check();
    let mut g = Gen {
        p,
        rng: p.rng(),
        recursion: false,
        next_var: 0,
    };
    let x: Name = Arc::from("x");
    let body = g.choice(p.target_size.max(1), &mut vec![x.clone()]);
    let unfolded = crate::types::substitute(&body, &x, &body);
    (
        SessionType::Rec(x.clone(), Box::new(body)),
        SessionType::Rec(x, Box::new(unfolded)),
    )
}

/// A random type whose only free variable is `free`, with a choice at its
/// head so that the variable is guarded.
pub fn gen_open(p: &GenParams, free: &str) -> SessionType {
    p.check();
    let mut g = Gen {
        p,
        rng: p.rng(),
        recursion: true,
        next_var: 0,
    };
    g.choice(p.target_size.max(1), &mut vec![Arc::from(free)])
}

/// A random type `t` and a variant of it. Each choice of the variant may
/// gain an output branch or lose an input branch, which keeps it a
/// supertype; with probability `break_probability` per choice the opposite
/// change is made instead, which usually breaks the relation.
pub fn gen_related_pair(p: &GenParams, break_probability: f64) -> (SessionType, SessionType) {
    let t = gen_random(p);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed ^ 0x9e37_79b9_7f4a_7c15);
    let u = mutate(&t, p.label_pool, break_probability, &mut rng);
    (t, u)
}

fn mutate(t: &SessionType, pool: usize, brk: f64, rng: &mut ChaCha8Rng) -> SessionType {
    match t {
        SessionType::End | SessionType::Var(_) => t.clone(),
        SessionType::Rec(x, body) => SessionType::Rec(x.clone(), Box::new(mutate(body, pool, brk, rng))),
        SessionType::Choice(kind, branches) => {
            let mut out: Vec<_> = branches
                .iter()
                .map(|(l, b)| (l.clone(), mutate(b, pool, brk, rng)))
                .collect();
            let widen = match rng.gen_range(0..10) {
                0..=2 => Some(true),
                _ if rng.gen_bool(brk) => Some(false),
                _ => None,
            };
            // widening: add an output or drop an input; narrowing: the reverse
            let add = match (widen, kind) {
                (None, _) => return SessionType::Choice(*kind, out),
                (Some(w), ChoiceKind::Internal) => w,
                (Some(w), ChoiceKind::External) => !w,
            };
            if add {
                let free: Vec<_> = (0..pool)
                    .map(label)
                    .filter(|l| out.iter().all(|(m, _)| m != l))
                    .collect();
                if !free.is_empty() {
                    let l = free[rng.gen_range(0..free.len())].clone();
                    out.push((l, SessionType::End));
                }
            } else if out.len() > 1 {
                out.remove(rng.gen_range(0..out.len()));
            }
            SessionType::Choice(*kind, out)
        }
    }
}
