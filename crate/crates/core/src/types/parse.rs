use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{validate_type, ChoiceKind, Label, Name, SessionType, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("invalid session type: {}", join(.0))]
    Invalid(Vec<Violation>),
}

fn join(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    End,
    Rec,
    Dot,
    Comma,
    Plus,
    Amp,
    LBrace,
    RBrace,
    Bang,
    Query,
    LParen,
    RParen,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::End => f.write_str("`end`"),
            Tok::Rec => f.write_str("`rec`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Query => f.write_str("`?`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Tokeniser shared with the lambda-type grammar. `#` starts a line comment.
pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let simple = |tok| Spanned { tok, line: l, col: k };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let tok = match s.as_str() {
                    "end" => Tok::End,
                    "rec" => Tok::Rec,
                    _ => Tok::Ident(s),
                };
                out.push(simple(tok));
                continue;
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push(simple(Tok::Arrow));
                    continue;
                }
                return Err(ParseError::Syntax {
                    line: l,
                    col: k,
                    message: "expected `->`".into(),
                });
            }
            _ => {}
        }
        let tok = match c {
            '.' => Tok::Dot,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '&' => Tok::Amp,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '!' => Tok::Bang,
            '?' => Tok::Query,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        chars.next();
        col += 1;
        out.push(simple(tok));
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub(crate) fn new(toks: Vec<Spanned>) -> Cursor {
        Cursor { toks, pos: 0 }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError::Syntax {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => Err(self.error(format!("expected identifier, found {other}"))),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => Err(self.error(format!("unexpected {other} after type"))),
        }
    }
}

fn parse_ty(c: &mut Cursor) -> Result<SessionType, ParseError> {
    match c.peek().clone() {
        Tok::End => {
            c.next();
            Ok(SessionType::End)
        }
        Tok::Ident(x) => {
            c.next();
            Ok(SessionType::Var(Arc::from(x.as_str())))
        }
        Tok::Rec => {
            c.next();
            let x = c.ident()?;
            c.expect(Tok::Dot)?;
            let body = parse_ty(c)?;
            Ok(SessionType::Rec(Arc::from(x.as_str()), Box::new(body)))
        }
        Tok::Plus | Tok::Amp => {
            let kind = if c.next() == Tok::Plus {
                ChoiceKind::Internal
            } else {
                ChoiceKind::External
            };
            c.expect(Tok::LBrace)?;
            let mut branches = vec![parse_branch(c, kind)?];
            while *c.peek() == Tok::Comma {
                c.next();
                branches.push(parse_branch(c, kind)?);
            }
            c.expect(Tok::RBrace)?;
            Ok(SessionType::Choice(kind, branches))
        }
        Tok::Bang => Ok(SessionType::Choice(
            ChoiceKind::Internal,
            vec![parse_branch(c, ChoiceKind::Internal)?],
        )),
        Tok::Query => Ok(SessionType::Choice(
            ChoiceKind::External,
            vec![parse_branch(c, ChoiceKind::External)?],
        )),
        other => Err(c.error(format!("expected a session type, found {other}"))),
    }
}

fn parse_branch(c: &mut Cursor, kind: ChoiceKind) -> Result<(Label, SessionType), ParseError> {
    let prefix = match kind {
        ChoiceKind::Internal => Tok::Bang,
        ChoiceKind::External => Tok::Query,
    };
    if *c.peek() != prefix {
        return Err(c.error(format!(
            "expected {prefix} in {} choice, found {}",
            if kind == ChoiceKind::Internal { "an internal" } else { "an external" },
            c.peek()
        )));
    }
    c.next();
    let label = c.ident()?;
    c.expect(Tok::Dot)?;
    let cont = parse_ty(c)?;
    // the lexer only produces identifiers, so this cannot fail
    Ok((Label::new(&label).expect("lexer yields identifiers"), cont))
}

/// Renames binders apart: every `rec` binds a name distinct from all other
/// binders and from every free variable.
pub(crate) fn rename_apart(t: &SessionType) -> SessionType {
    let mut taken: HashSet<Name> = t.free_vars().into_iter().collect();
    let all: HashSet<Name> = t.names().into_iter().collect();
    go(t, &mut taken, &all, &mut Vec::new())
}

fn go(
    t: &SessionType,
    taken: &mut HashSet<Name>,
    all: &HashSet<Name>,
    env: &mut Vec<(Name, Name)>,
) -> SessionType {
    match t {
        SessionType::End => SessionType::End,
        SessionType::Var(x) => match env.iter().rev().find(|(from, _)| from == x) {
            Some((_, to)) => SessionType::Var(to.clone()),
            None => SessionType::Var(x.clone()),
        },
        SessionType::Rec(x, body) => {
            let fresh: Name = if taken.contains(x) {
                (1..)
                    .map(|i| format!("{x}_{i}"))
                    .find(|n| {
                        let n: &str = n;
                        !taken.iter().any(|t| &**t == n) && !all.iter().any(|t| &**t == n)
                    })
                    .map(|n| Arc::from(n.as_str()))
                    .expect("unbounded name supply")
            } else {
                x.clone()
            };
            taken.insert(fresh.clone());
            env.push((x.clone(), fresh.clone()));
            let body = go(body, taken, all, env);
            env.pop();
            SessionType::Rec(fresh, Box::new(body))
        }
        SessionType::Choice(kind, branches) => SessionType::Choice(
            *kind,
            branches
                .iter()
                .map(|(l, b)| (l.clone(), go(b, taken, all, env)))
                .collect(),
        ),
    }
}

fn parse_raw(text: &str) -> Result<SessionType, ParseError> {
    let mut c = Cursor::new(lex(text)?);
    let t = parse_ty(&mut c)?;
    c.finish()?;
    Ok(rename_apart(&t))
}

/// Parses and validates a closed session type.
pub fn parse_type(text: &str) -> Result<SessionType, ParseError> {
    let t = parse_raw(text)?;
    validate_type(&t, true).map_err(ParseError::Invalid)?;
    Ok(t)
}

/// Like [`parse_type`] but free variables are allowed.
pub fn parse_open_type(text: &str) -> Result<SessionType, ParseError> {
    let t = parse_raw(text)?;
    validate_type(&t, false).map_err(ParseError::Invalid)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{print_type, ChoiceKind};

    #[test]
    fn parses_end() {
        assert_eq!(parse_type("end").unwrap(), SessionType::End);
        assert_eq!(parse_type("  end # trailing comment\n").unwrap(), SessionType::End);
    }

    #[test]
    fn parses_u1() {
        let t = parse_type("rec x . ?request . +{ !ok . end , !ko . x }").unwrap();
        let expected = SessionType::rec(
            "x",
            SessionType::recv(
                "request",
                SessionType::choice(
                    ChoiceKind::Internal,
                    [("ok", SessionType::End), ("ko", SessionType::var("x"))],
                ),
            ),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn rejects_non_contractive() {
        match parse_type("rec x . x") {
            Err(ParseError::Invalid(vs)) => {
                assert!(vs.iter().any(|v| matches!(v, Violation::NonContractive(_))))
            }
            other => panic!("expected non-contractive error, got {other:?}"),
        }
    }

    #[test]
    fn reports_positions() {
        match parse_type("rec x .\n  ?a . +{ ?b . end }") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 11)),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(parse_type("end end"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_type("+{}"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_type("!a end"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn free_variable_rejected_when_closed_required() {
        assert!(matches!(parse_type("!a . x"), Err(ParseError::Invalid(_))));
        assert!(parse_open_type("!a . x").is_ok());
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(matches!(parse_type("+{ !a . end, !a . end }"), Err(ParseError::Invalid(_))));
    }

    #[test]
    fn binders_are_renamed_apart() {
        let t = parse_type("+{ !a . rec x . !b . x, !c . rec x . ?d . x }").unwrap();
        let names = t.names();
        assert_eq!(names.len(), 2, "{}", print_type(&t));
        let open = parse_open_type("+{ !a . rec x . !b . x, !c . x }").unwrap();
        assert_eq!(open.free_vars(), vec![Arc::from("x")]);
        assert!(open.names().len() == 2);
    }
}
