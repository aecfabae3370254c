use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use super::LType;
use crate::types::parse::{lex, Cursor, ParseError, Tok};
use crate::types::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LParseError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("free variable `{0}`")]
    FreeVariable(Name),
    #[error("non-contractive recursion")]
    NonContractive,
}

/// Parses a closed, contractive type. `->` associates to the right and
/// `rec` extends as far right as possible. Binders are renamed apart.
pub fn parse_ltype(text: &str) -> Result<LType, LParseError> {
    let mut c = Cursor::new(lex(text)?);
    let t = ty(&mut c)?;
    c.finish()?;
    if let Some(v) = t.free_vars().into_iter().next() {
        return Err(LParseError::FreeVariable(v));
    }
    if !t.is_contractive() {
        return Err(LParseError::NonContractive);
    }
    Ok(rename_apart(&t, &mut HashSet::new(), &mut Vec::new()))
}

fn ty(c: &mut Cursor) -> Result<LType, ParseError> {
    if *c.peek() == Tok::Rec {
        c.next();
        let v = c.ident()?;
        c.expect(Tok::Dot)?;
        let body = ty(c)?;
        return Ok(LType::Rec(Arc::from(v.as_str()), Box::new(body)));
    }
    let lhs = atom(c)?;
    if *c.peek() == Tok::Arrow {
        c.next();
        return Ok(LType::arrow(lhs, ty(c)?));
    }
    Ok(lhs)
}

fn atom(c: &mut Cursor) -> Result<LType, ParseError> {
    match c.peek().clone() {
        Tok::Ident(s) => {
            c.next();
            Ok(match s.as_str() {
                "top" => LType::Top,
                "bot" => LType::Bot,
                _ => LType::Var(Arc::from(s.as_str())),
            })
        }
        Tok::LParen => {
            c.next();
            let t = ty(c)?;
            c.expect(Tok::RParen)?;
            Ok(t)
        }
        other => Err(c.error(format!("expected a lambda type, found {other}"))),
    }
}

fn rename_apart(t: &LType, taken: &mut HashSet<Name>, env: &mut Vec<(Name, Name)>) -> LType {
    match t {
        LType::Top | LType::Bot => t.clone(),
        LType::Var(v) => match env.iter().rev().find(|(from, _)| from == v) {
            Some((_, to)) => LType::Var(to.clone()),
            None => t.clone(),
        },
        LType::Rec(v, b) => {
            let fresh: Name = if taken.contains(v) {
                (1..)
                    .map(|i| Arc::from(format!("{v}_{i}").as_str()))
                    .find(|n: &Name| !taken.contains(n))
                    .expect("unbounded name supply")
            } else {
                v.clone()
            };
            taken.insert(fresh.clone());
            env.push((v.clone(), fresh.clone()));
            let body = rename_apart(b, taken, env);
            env.pop();
            LType::Rec(fresh, Box::new(body))
        }
        LType::Arrow(a, b) => {
            let a = rename_apart(a, taken, env);
            LType::arrow(a, rename_apart(b, taken, env))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(
            parse_ltype("top -> bot -> top").unwrap(),
            LType::arrow(LType::Top, LType::arrow(LType::Bot, LType::Top))
        );
        assert_eq!(
            parse_ltype("(top -> bot) -> top").unwrap(),
            LType::arrow(LType::arrow(LType::Top, LType::Bot), LType::Top)
        );
        assert_eq!(
            parse_ltype("rec x . x -> top").unwrap(),
            LType::rec("x", LType::arrow(LType::var("x"), LType::Top))
        );
        let t = parse_ltype("(rec x . x -> top) -> rec x . bot -> x").unwrap();
        assert_eq!(t.to_string(), "(rec x . x -> top) -> rec x_1 . bot -> x_1");
        assert_eq!(parse_ltype(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn rejections() {
        assert_eq!(parse_ltype("x"), Err(LParseError::FreeVariable(Arc::from("x"))));
        assert_eq!(parse_ltype("rec x . x"), Err(LParseError::NonContractive));
        assert!(matches!(parse_ltype("top ->"), Err(LParseError::Syntax(_))));
    }
}
