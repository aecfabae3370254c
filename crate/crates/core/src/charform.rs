//! Characteristic formulae of session types, and subtyping by model checking.
//!
//! `char_formula(t, Mode::SubOf, ..)` holds exactly on the supertypes of `t`;
//! `char_formula(t, Mode::SupOf, ..)` holds exactly on its subtypes.

use std::collections::HashSet;
use std::sync::Arc;

use crate::budget::{Budget, BudgetExceeded};
use crate::mu::{models_within, Formula};
use crate::types::{build_lts, Action, Alphabet, ChoiceKind, Name, SessionType};

/// Which side of the subtyping relation a formula characterises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Parameterised by internal choice: the formula of `t` accepts the
    /// supertypes of `t` (check `u |= F(t)`).
    SubOf,
    /// Parameterised by external choice: the formula of `u` accepts the
    /// subtypes of `u` (check `t |= F(u)`).
    SupOf,
}

impl Mode {
    /// The choice kind whose branches become mandatory diamonds.
    pub fn kind(self) -> ChoiceKind {
        match self {
            Mode::SubOf => ChoiceKind::Internal,
            Mode::SupOf => ChoiceKind::External,
        }
    }

    pub fn dual(self) -> Mode {
        match self {
            Mode::SubOf => Mode::SupOf,
            Mode::SupOf => Mode::SubOf,
        }
    }
}

/// The characteristic formula of `t`.
///
/// * a choice of the mode's kind: `<a_i>F(T_i)` for every branch;
/// * a choice of the other kind: `[a_i]F(T_i)` for every branch, at least one
///   `<a_i>tt`, and `ff` under every alphabet action outside the branches;
/// * `end`: `ff` under every alphabet action;
/// * `rec x . T`: `nu x . F(T)`; `x`: `x`.
///
/// Conjunctions are right-nested in branch order. With `dummy_fixpoints`,
/// the body of every modality is wrapped in a fixpoint whose variable does
/// not occur, which leaves the semantics unchanged.
pub fn char_formula(
    t: &SessionType,
    mode: Mode,
    alphabet: &Alphabet,
    dummy_fixpoints: bool,
) -> Formula<Action> {
    let mut gen = Gen {
        mode,
        alphabet,
        dummy: dummy_fixpoints.then(|| Dummies::new(t)),
    };
    gen.formula(t)
}

struct Dummies {
    taken: HashSet<Name>,
    next: usize,
}

impl Dummies {
    fn new(t: &SessionType) -> Dummies {
        Dummies {
            taken: t.names().into_iter().collect(),
            next: 0,
        }
    }

    fn fresh(&mut self) -> Name {
        loop {
            let n: Name = Arc::from(format!("t{}", self.next).as_str());
            self.next += 1;
            if !self.taken.contains(&n) {
                return n;
            }
        }
    }
}

struct Gen<'a> {
    mode: Mode,
    alphabet: &'a Alphabet,
    dummy: Option<Dummies>,
}

impl Gen<'_> {
    fn wrap(&mut self, body: Formula<Action>) -> Formula<Action> {
        match &mut self.dummy {
            Some(d) => Formula::Nu(d.fresh(), Box::new(body)),
            None => body,
        }
    }

    fn boxed(&mut self, a: Action, body: Formula<Action>) -> Formula<Action> {
        let body = self.wrap(body);
        Formula::boxed(a, body)
    }

    fn diamond(&mut self, a: Action, body: Formula<Action>) -> Formula<Action> {
        let body = self.wrap(body);
        Formula::diamond(a, body)
    }

    fn forbid(&mut self, actions: &[Action]) -> Vec<Formula<Action>> {
        actions
            .iter()
            .map(|a| self.boxed(a.clone(), Formula::False))
            .collect()
    }

    fn formula(&mut self, t: &SessionType) -> Formula<Action> {
        match t {
            SessionType::End => {
                let all = self.alphabet.actions().to_vec();
                Formula::and_all(self.forbid(&all))
            }
            SessionType::Var(x) => Formula::Var(x.clone()),
            SessionType::Rec(x, body) => Formula::Nu(x.clone(), Box::new(self.formula(body))),
            SessionType::Choice(kind, branches) => {
                let dir = kind.direction();
                let act = |l: &crate::types::Label| Action::new(dir, l.clone());
                if *kind == self.mode.kind() {
                    let parts: Vec<_> = branches
                        .iter()
                        .map(|(l, cont)| {
                            let f = self.formula(cont);
                            self.diamond(act(l), f)
                        })
                        .collect();
                    Formula::and_all(parts)
                } else {
                    let mut parts: Vec<_> = branches
                        .iter()
                        .map(|(l, cont)| {
                            let f = self.formula(cont);
                            self.boxed(act(l), f)
                        })
                        .collect();
                    let some: Vec<_> = branches
                        .iter()
                        .map(|(l, _)| self.diamond(act(l), Formula::True))
                        .collect();
                    parts.push(Formula::or_all(some));
                    let own: Vec<Action> = branches.iter().map(|(l, _)| act(l)).collect();
                    let others = self.alphabet.complement(&own);
                    parts.extend(self.forbid(&others));
                    Formula::and_all(parts)
                }
            }
        }
    }
}

/// `t <= u` decided as `lts(u) |= F(t, SubOf)`.
pub fn subtype_cf_sub(t: &SessionType, u: &SessionType) -> bool {
    subtype_cf_sub_within(t, u, false, &mut Budget::unlimited()).expect("unlimited budget")
}

/// `t <= u` decided as `lts(t) |= F(u, SupOf)`.
pub fn subtype_cf_sup(t: &SessionType, u: &SessionType) -> bool {
    subtype_cf_sup_within(t, u, false, &mut Budget::unlimited()).expect("unlimited budget")
}

pub fn subtype_cf_sub_within(
    t: &SessionType,
    u: &SessionType,
    dummy_fixpoints: bool,
    budget: &mut Budget,
) -> Result<bool, BudgetExceeded> {
    let alphabet = Alphabet::of_types([t, u]);
    let phi = char_formula(t, Mode::SubOf, &alphabet, dummy_fixpoints);
    models_within(&build_lts(u), &phi, budget)
}

pub fn subtype_cf_sup_within(
    t: &SessionType,
    u: &SessionType,
    dummy_fixpoints: bool,
    budget: &mut Budget,
) -> Result<bool, BudgetExceeded> {
    let alphabet = Alphabet::of_types([t, u]);
    let phi = char_formula(u, Mode::SupOf, &alphabet, dummy_fixpoints);
    models_within(&build_lts(t), &phi, budget)
}

/// `model |= F(source, mode)` with the alphabet of both types.
pub fn satisfies_char_formula(model: &SessionType, source: &SessionType, mode: Mode) -> bool {
    let alphabet = Alphabet::of_types([source, model]);
    let phi = char_formula(source, mode, &alphabet, false);
    models_within(&build_lts(model), &phi, &mut Budget::unlimited()).expect("unlimited budget")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mu::{models, print_formula, Style};
    use crate::types::parse_type;

    type F = Formula<Action>;

    fn t1() -> SessionType {
        parse_type("?request . !ok . end").unwrap()
    }

    fn u1() -> SessionType {
        parse_type("rec x . ?request . +{ !ok . end , !ko . x }").unwrap()
    }

    fn example_alphabet() -> Alphabet {
        Alphabet::new([Action::recv("request"), Action::send("ok"), Action::send("ko")])
    }

    #[test]
    fn t1_sub_formula_matches_worked_example() {
        let a = example_alphabet();
        let all_false = F::box_all(a.actions(), &F::False);
        let req = Action::recv("request");
        let expected = F::and_all([
            F::boxed(req.clone(), F::diamond(Action::send("ok"), all_false)),
            F::diamond(req.clone(), F::True),
            F::boxed(Action::send("ok"), F::False),
            F::boxed(Action::send("ko"), F::False),
        ]);
        let got = char_formula(&t1(), Mode::SubOf, &a, false);
        assert_eq!(got, expected);
        assert_eq!(
            print_formula(&got, Style::Native),
            "[?request]<!ok>([?request]ff && [!ok]ff && [!ko]ff) && <?request>tt && [!ok]ff && [!ko]ff"
        );
        assert!(models(&build_lts(&u1()), &got));
    }

    #[test]
    fn u1_sup_formula_matches_worked_example() {
        let a = example_alphabet();
        let all_false = F::box_all(a.actions(), &F::False);
        let (ok, ko) = (Action::send("ok"), Action::send("ko"));
        let expected = F::nu(
            "x",
            F::diamond(
                Action::recv("request"),
                F::and_all([
                    F::boxed(ok.clone(), all_false),
                    F::boxed(ko.clone(), F::var("x")),
                    F::or(F::diamond(ok.clone(), F::True), F::diamond(ko.clone(), F::True)),
                    F::boxed(Action::recv("request"), F::False),
                ]),
            ),
        );
        let got = char_formula(&u1(), Mode::SupOf, &a, false);
        assert_eq!(got, expected);
        assert!(models(&build_lts(&t1()), &got));
    }

    #[test]
    fn end_formula() {
        let a = example_alphabet();
        assert_eq!(
            char_formula(&SessionType::End, Mode::SubOf, &a, false),
            F::box_all(a.actions(), &F::False)
        );
        assert_eq!(
            char_formula(&SessionType::End, Mode::SubOf, &Alphabet::default(), false),
            F::True
        );
    }

    #[test]
    fn singleton_disjunction_has_no_or_node() {
        let t = parse_type("?a . end").unwrap();
        let a = Alphabet::of_types([&t]);
        let f = char_formula(&t, Mode::SubOf, &a, false);
        assert_eq!(
            f,
            F::and(
                F::boxed(Action::recv("a"), F::boxed(Action::recv("a"), F::False)),
                F::diamond(Action::recv("a"), F::True)
            )
        );
    }

    #[test]
    fn request_reply_pairs() {
        let t2 = parse_type("rec x . !request . &{ ?ok . end , ?ko . x , ?error . end }").unwrap();
        let u2 = parse_type("rec x . !request . &{ ?ok . end , ?ko . x }").unwrap();
        assert!(subtype_cf_sub(&t1(), &u1()));
        assert!(subtype_cf_sup(&t1(), &u1()));
        assert!(!subtype_cf_sub(&u1(), &t1()));
        assert!(!subtype_cf_sup(&u1(), &t1()));
        assert!(subtype_cf_sub(&t2, &u2));
        assert!(subtype_cf_sup(&t2, &u2));
        assert!(subtype_cf_sub(&SessionType::End, &SessionType::End));
        assert!(subtype_cf_sup(&SessionType::End, &SessionType::End));
    }

    #[test]
    fn dummy_fixpoints_wrap_every_modality() {
        let a = example_alphabet();
        let plain = char_formula(&u1(), Mode::SubOf, &a, false);
        let dummy = char_formula(&u1(), Mode::SubOf, &a, true);
        fn modalities(f: &F) -> usize {
            match f {
                F::True | F::False | F::Var(_) => 0,
                F::And(a, b) | F::Or(a, b) => modalities(a) + modalities(b),
                F::Box(_, p) | F::Diamond(_, p) => 1 + modalities(p),
                F::Nu(_, p) => modalities(p),
            }
        }
        assert_eq!(dummy.size(), plain.size() + modalities(&plain));
        assert_eq!(
            models(&build_lts(&u1()), &plain),
            models(&build_lts(&u1()), &dummy)
        );
    }
}
