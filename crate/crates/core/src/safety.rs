//! Binary systems `T || U` under synchronous semantics.
//!
//! A system steps when one side selects `!a` and the other offers `?a`. It is
//! an error when both sides choose in the same direction, when a selected
//! label is not offered, or when exactly one side has ended. A system is safe
//! when no reachable configuration, the initial one included, is an error.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::charform::{satisfies_char_formula, Mode};
use crate::harness::Algorithm;
use crate::types::{branch_map, dual_type, unfold_top, ChoiceKind, Label, SessionType};

/// A pair of closed types with their heads unfolded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct System {
    pub left: SessionType,
    pub right: SessionType,
}

impl System {
    pub fn new(left: &SessionType, right: &SessionType) -> System {
        System {
            left: unfold_top(left),
            right: unfold_top(right),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} || {}", self.left, self.right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    SameDirection,
    MissingLabel,
    EndMismatch,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::SameDirection => "SameDirection",
            ErrorKind::MissingLabel => "MissingLabel",
            ErrorKind::EndMismatch => "EndMismatch",
        })
    }
}

/// Successors of `s` with the synchronised label.
pub fn sync_transitions(s: &System) -> Vec<(Label, System)> {
    let (SessionType::Choice(kl, bl), SessionType::Choice(kr, br)) = (&s.left, &s.right) else {
        return Vec::new();
    };
    if kl == kr {
        return Vec::new();
    }
    let right = branch_map(br);
    bl.iter()
        .filter_map(|(l, tl)| right.get(l).map(|tr| (l.clone(), System::new(tl, tr))))
        .collect()
}

pub fn sync_step(s: &System) -> Vec<System> {
    sync_transitions(s).into_iter().map(|(_, s)| s).collect()
}

pub fn is_error(s: &System) -> Option<ErrorKind> {
    match (&s.left, &s.right) {
        (SessionType::Choice(kl, _), SessionType::Choice(kr, _)) if kl == kr => {
            Some(ErrorKind::SameDirection)
        }
        (SessionType::Choice(kl, bl), SessionType::Choice(_, br)) => {
            let (sel, off) = match kl {
                ChoiceKind::Internal => (bl, br),
                ChoiceKind::External => (br, bl),
            };
            let offered = branch_map(off);
            sel.iter()
                .any(|(l, _)| !offered.contains_key(l))
                .then_some(ErrorKind::MissingLabel)
        }
        (SessionType::End, SessionType::Choice(..)) | (SessionType::Choice(..), SessionType::End) => {
            Some(ErrorKind::EndMismatch)
        }
        _ => None,
    }
}

/// The path to the first error found by [`safe_explore`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub trace: Vec<Label>,
    pub error: ErrorKind,
    pub state: System,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.trace {
            writeln!(f, "<{l}>")?;
        }
        write!(f, "{}", self.error)
    }
}

/// Breadth-first search of the reachable systems. `Err` carries a shortest
/// trace to an error.
pub fn safe_explore(t: &SessionType, u: &SessionType) -> Result<(), Witness> {
    let init = System::new(t, u);
    let mut seen = HashSet::from([init.clone()]);
    let mut queue = VecDeque::from([(init, Vec::new())]);
    while let Some((s, trace)) = queue.pop_front() {
        if let Some(error) = is_error(&s) {
            return Err(Witness { trace, error, state: s });
        }
        for (l, next) in sync_transitions(&s) {
            if seen.insert(next.clone()) {
                let mut tr = trace.clone();
                tr.push(l);
                queue.push_back((next, tr));
            }
        }
    }
    Ok(())
}

pub fn is_safe(t: &SessionType, u: &SessionType) -> bool {
    safe_explore(t, u).is_ok()
}

/// `t <= dual(u)` or `u <= dual(t)`, decided by `algo`.
pub fn safe_by_subtyping(t: &SessionType, u: &SessionType, algo: Algorithm) -> bool {
    algo.decide(t, &dual_type(u)) || algo.decide(u, &dual_type(t))
}

/// Safety phrased as satisfaction of a characteristic formula, in four
/// equivalent ways. Each names whose formula is built and in which mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharCondition {
    /// `dual U |= F(T, sub)` or `dual T |= F(U, sub)`.
    LeftSubOf,
    /// `T |= F(dual U, sup)` or `U |= F(dual T, sup)`.
    RightSupOf,
    /// `U |= F(dual T, sup)` or `T |= F(dual U, sup)`.
    LeftSupOf,
    /// `dual T |= F(U, sub)` or `dual U |= F(T, sub)`.
    RightSubOf,
}

impl CharCondition {
    pub const ALL: [CharCondition; 4] = [
        CharCondition::LeftSubOf,
        CharCondition::RightSupOf,
        CharCondition::LeftSupOf,
        CharCondition::RightSubOf,
    ];
}

pub fn safe_by_formula(t: &SessionType, u: &SessionType, cond: CharCondition) -> bool {
    let (dt, du) = (dual_type(t), dual_type(u));
    let sat = satisfies_char_formula;
    match cond {
        CharCondition::LeftSubOf => sat(&du, t, Mode::SubOf) || sat(&dt, u, Mode::SubOf),
        CharCondition::RightSupOf => sat(t, &du, Mode::SupOf) || sat(u, &dt, Mode::SupOf),
        CharCondition::LeftSupOf => sat(u, &dt, Mode::SupOf) || sat(t, &du, Mode::SupOf),
        CharCondition::RightSubOf => sat(&dt, u, Mode::SubOf) || sat(&du, t, Mode::SubOf),
    }
}

/// A deterministic run of `t || u` that always takes the first enabled
/// transition, stopping when none is enabled.
pub fn execution(t: &SessionType, u: &SessionType) -> Vec<(Label, System)> {
    let mut cur = System::new(t, u);
    let mut seen = HashSet::from([cur.clone()]);
    let mut out = Vec::new();
    while let Some((l, next)) = sync_transitions(&cur).into_iter().next() {
        out.push((l, next.clone()));
        if !seen.insert(next.clone()) {
            break;
        }
        cur = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    fn p(s: &str) -> SessionType {
        parse_type(s).unwrap()
    }

    fn t1() -> SessionType {
        p("?request . !ok . end")
    }

    fn u2() -> SessionType {
        p("rec x . !request . &{ ?ok . end , ?ko . x }")
    }

    #[test]
    fn sync_step_examples() {
        let succ = sync_step(&System::new(&t1(), &u2()));
        assert_eq!(succ, vec![System::new(&p("!ok . end"), &p("&{ ?ok . end, ?ko . rec x . !request . &{ ?ok . end , ?ko . x } }"))]);
        assert!(sync_step(&System::new(&SessionType::End, &SessionType::End)).is_empty());
        let a = p("!a . end");
        assert!(sync_step(&System::new(&a, &a)).is_empty());
    }

    #[test]
    fn error_kinds() {
        let a = p("!a . end");
        assert_eq!(is_error(&System::new(&a, &a)), Some(ErrorKind::SameDirection));
        assert_eq!(
            is_error(&System::new(&p("+{ !a . end, !b . end }"), &p("?a . end"))),
            Some(ErrorKind::MissingLabel)
        );
        assert_eq!(
            is_error(&System::new(&p("?a . end"), &p("+{ !a . end, !b . end }"))),
            Some(ErrorKind::MissingLabel)
        );
        assert_eq!(
            is_error(&System::new(&p("&{ ?a . end, ?b . end }"), &a)),
            None
        );
        assert_eq!(is_error(&System::new(&SessionType::End, &a)), Some(ErrorKind::EndMismatch));
        assert_eq!(is_error(&System::new(&SessionType::End, &SessionType::End)), None);
    }

    #[test]
    fn exploration() {
        assert!(is_safe(&t1(), &u2()));
        assert!(is_safe(&SessionType::End, &SessionType::End));
        let w = safe_explore(&p("!a . end"), &p("?b . end")).unwrap_err();
        assert!(w.trace.is_empty());
        assert_eq!(w.error, ErrorKind::MissingLabel);
        assert_eq!(w.to_string(), "MissingLabel");
        let w = safe_explore(&p("!a . !b . end"), &p("?a . ?c . end")).unwrap_err();
        assert_eq!(w.to_string(), "<a>\nMissingLabel");
    }

    #[test]
    fn run_of_the_worked_system() {
        let run = execution(&t1(), &u2());
        let labels: Vec<_> = run.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["request", "ok"]);
        assert_eq!(run[1].1, System::new(&SessionType::End, &SessionType::End));
    }

    #[test]
    fn subtyping_and_formula_forms_agree_on_the_worked_system() {
        for algo in Algorithm::ALL {
            assert!(safe_by_subtyping(&t1(), &u2(), algo));
        }
        for c in CharCondition::ALL {
            assert!(safe_by_formula(&t1(), &u2(), c));
        }
        let bad = p("!a . end");
        assert!(!safe_by_subtyping(&bad, &bad, Algorithm::Kps));
        assert!(!safe_by_formula(&bad, &bad, CharCondition::LeftSubOf));
    }
}
