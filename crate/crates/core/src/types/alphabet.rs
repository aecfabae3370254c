use super::{Action, SessionType};

/// An ordered, duplicate-free set of actions.
///
/// Order is first occurrence, so the dual of an alphabet lists the dual
/// actions in the same positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet(Vec<Action>);

impl Alphabet {
    pub fn new<I: IntoIterator<Item = Action>>(actions: I) -> Alphabet {
        let mut a = Alphabet::default();
        for act in actions {
            a.insert(act);
        }
        a
    }

    /// Union of the actions occurring in the given types, in pre-order.
    pub fn of_types<'a, I: IntoIterator<Item = &'a SessionType>>(types: I) -> Alphabet {
        let mut a = Alphabet::default();
        for t in types {
            a.collect(t);
        }
        a
    }

    fn collect(&mut self, t: &SessionType) {
        match t {
            SessionType::End | SessionType::Var(_) => {}
            SessionType::Rec(_, body) => self.collect(body),
            SessionType::Choice(..) => {
                for act in t.head_actions() {
                    self.insert(act);
                }
                if let SessionType::Choice(_, branches) = t {
                    for (_, b) in branches {
                        self.collect(b);
                    }
                }
            }
        }
    }

    pub fn insert(&mut self, act: Action) {
        if !self.0.contains(&act) {
            self.0.push(act);
        }
    }

    pub fn contains(&self, act: &Action) -> bool {
        self.0.contains(act)
    }

    pub fn actions(&self) -> &[Action] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Actions of the alphabet not in `excluded`, in alphabet order.
    pub fn complement(&self, excluded: &[Action]) -> Vec<Action> {
        self.0.iter().filter(|a| !excluded.contains(a)).cloned().collect()
    }

    pub fn dual(&self) -> Alphabet {
        Alphabet(self.0.iter().map(Action::dual).collect())
    }
}
