use std::collections::HashSet;
use std::fmt;

use super::{Label, Name, SessionType};

/// A well-formedness violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    FreeVariable(Name),
    DuplicateLabel(Label),
    /// The named recursion variable occurs without an intervening choice.
    NonContractive(Name),
    EmptyChoice,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FreeVariable(x) => write!(f, "free variable `{x}`"),
            Violation::DuplicateLabel(l) => write!(f, "duplicate label `{l}` in a choice"),
            Violation::NonContractive(x) => write!(f, "non-contractive recursion on `{x}`"),
            Violation::EmptyChoice => f.write_str("choice with no branches"),
        }
    }
}

/// Checks contractivity, label distinctness and non-empty choices, plus
/// closedness when `require_closed`. Returns every violation found.
pub fn validate_type(t: &SessionType, require_closed: bool) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if require_closed {
        out.extend(t.free_vars().into_iter().map(Violation::FreeVariable));
    }
    structure(t, &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn structure(t: &SessionType, out: &mut Vec<Violation>) {
    match t {
        SessionType::End | SessionType::Var(_) => {}
        SessionType::Rec(x, body) => {
            if unguarded(body).contains(x) {
                out.push(Violation::NonContractive(x.clone()));
            }
            structure(body, out);
        }
        SessionType::Choice(_, branches) => {
            if branches.is_empty() {
                out.push(Violation::EmptyChoice);
            }
            let mut seen = HashSet::new();
            for (l, b) in branches {
                if !seen.insert(l) {
                    out.push(Violation::DuplicateLabel(l.clone()));
                }
                structure(b, out);
            }
        }
    }
}

/// Free variables reachable from the root without crossing a choice.
fn unguarded(t: &SessionType) -> Vec<Name> {
    match t {
        SessionType::Var(x) => vec![x.clone()],
        SessionType::Rec(x, body) => unguarded(body).into_iter().filter(|y| y != x).collect(),
        SessionType::End | SessionType::Choice(..) => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ChoiceKind;

    #[test]
    fn u1_is_valid() {
        let u1 = SessionType::rec(
            "x",
            SessionType::recv(
                "request",
                SessionType::choice(
                    ChoiceKind::Internal,
                    [("ok", SessionType::End), ("ko", SessionType::var("x"))],
                ),
            ),
        );
        assert_eq!(validate_type(&u1, true), Ok(()));
    }

    #[test]
    fn duplicate_label() {
        let t = SessionType::choice(ChoiceKind::Internal, [("a", SessionType::End), ("a", SessionType::End)]);
        assert_eq!(
            validate_type(&t, true),
            Err(vec![Violation::DuplicateLabel(Label::new("a").unwrap())])
        );
    }

    #[test]
    fn nested_rec_without_guard() {
        let t = SessionType::rec("x", SessionType::rec("y", SessionType::var("x")));
        assert_eq!(
            validate_type(&t, true),
            Err(vec![Violation::NonContractive("x".into())])
        );
        let t = SessionType::rec("x", SessionType::rec("y", SessionType::var("y")));
        assert_eq!(
            validate_type(&t, true),
            Err(vec![Violation::NonContractive("y".into())])
        );
    }

    #[test]
    fn guarded_and_unused_binders_are_fine() {
        let t = SessionType::rec("x", SessionType::rec("y", SessionType::send("a", SessionType::var("x"))));
        assert_eq!(validate_type(&t, true), Ok(()));
        assert_eq!(validate_type(&SessionType::rec("x", SessionType::End), true), Ok(()));
    }

    #[test]
    fn empty_choice_and_free_var() {
        let t = SessionType::Choice(ChoiceKind::External, vec![]);
        assert_eq!(validate_type(&t, true), Err(vec![Violation::EmptyChoice]));
        let t = SessionType::send("a", SessionType::var("z"));
        assert_eq!(
            validate_type(&t, true),
            Err(vec![Violation::FreeVariable("z".into())])
        );
        assert_eq!(validate_type(&t, false), Ok(()));
    }
}
