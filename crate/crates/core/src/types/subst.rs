use super::SessionType;

/// Replaces every free occurrence of `x` in `t` by `u`.
///
/// No renaming is performed: binders in `t` must not capture free variables
/// of `u`. Closed `u` (the only case arising from unfolding) is always safe.
pub fn substitute(t: &SessionType, x: &str, u: &SessionType) -> SessionType {
    match t {
        SessionType::End => SessionType::End,
        SessionType::Var(y) if &**y == x => u.clone(),
        SessionType::Var(y) => SessionType::Var(y.clone()),
        SessionType::Rec(y, _) if &**y == x => t.clone(),
        SessionType::Rec(y, body) => SessionType::Rec(y.clone(), Box::new(substitute(body, x, u))),
        SessionType::Choice(kind, branches) => SessionType::Choice(
            *kind,
            branches
                .iter()
                .map(|(l, b)| (l.clone(), substitute(b, x, u)))
                .collect(),
        ),
    }
}

/// One-step unfolding `rec x . T  ->  T[rec x . T / x]`; other types unchanged.
pub(crate) fn unfold_once(t: &SessionType) -> SessionType {
    match t {
        SessionType::Rec(x, body) => substitute(body, x, t),
        _ => t.clone(),
    }
}

/// Unfolds top-level recursion until the head is `end` or a choice.
///
/// Terminates on contractive input. For non-contractive input the loop is cut
/// after as many steps as there are binders, and the last term is returned.
pub fn unfold_top(t: &SessionType) -> SessionType {
    let mut cur = t.clone();
    let mut fuel = t.rec_count() + 1;
    while let SessionType::Rec(..) = cur {
        if fuel == 0 {
            break;
        }
        fuel -= 1;
        cur = unfold_once(&cur);
    }
    cur
}
