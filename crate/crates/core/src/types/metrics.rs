use serde::Serialize;

use super::SessionType;

/// Number of messages: one per branch, summed over the syntax tree.
pub fn nummsg(t: &SessionType) -> u64 {
    match t {
        SessionType::End | SessionType::Var(_) => 0,
        SessionType::Rec(_, body) => nummsg(body),
        SessionType::Choice(_, branches) => {
            branches.len() as u64 + branches.iter().map(|(_, b)| nummsg(b)).sum::<u64>()
        }
    }
}

/// Number of messages in the unfolding of `t`, where each recursion body is
/// counted once more per free occurrence of its variable. Saturates at
/// `u128::MAX`.
pub fn unfold_measure(t: &SessionType) -> u128 {
    match t {
        SessionType::End | SessionType::Var(_) => 0,
        SessionType::Rec(x, body) => {
            (1 + varocc(body, x) as u128).saturating_mul(unfold_measure(body))
        }
        SessionType::Choice(_, branches) => branches
            .iter()
            .fold(branches.len() as u128, |acc, (_, b)| acc.saturating_add(unfold_measure(b))),
    }
}

/// Number of free occurrences of `x` in `t`.
pub fn varocc(t: &SessionType, x: &str) -> u64 {
    match t {
        SessionType::End => 0,
        SessionType::Var(y) => u64::from(&**y == x),
        SessionType::Rec(y, _) if &**y == x => 0,
        SessionType::Rec(_, body) => varocc(body, x),
        SessionType::Choice(_, branches) => branches.iter().map(|(_, b)| varocc(b, x)).sum(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeMetrics {
    pub nummsg: u64,
    pub unfold: u128,
}

impl SizeMetrics {
    pub fn of(t: &SessionType) -> SizeMetrics {
        SizeMetrics {
            nummsg: nummsg(t),
            unfold: unfold_measure(t),
        }
    }
}
