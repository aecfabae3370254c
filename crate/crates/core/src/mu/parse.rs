use std::sync::Arc;

use thiserror::Error;

use super::{ActionLabel, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula syntax error at byte {offset}: {message}")]
pub struct FormulaParseError {
    pub offset: usize,
    pub message: String,
}

/// Parses the native formula syntax produced by
/// [`print_formula`](super::print_formula) with [`Style::Native`](super::Style).
/// `&&` binds tighter than `||`; both associate to the right; `nu` extends as
/// far right as possible.
pub fn parse_formula<L: ActionLabel>(text: &str) -> Result<Formula<L>, FormulaParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.nu()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> FormulaParseError {
        FormulaParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit()))
            .count();
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let save = self.pos;
        match self.ident() {
            Some(w) if w == kw => true,
            _ => {
                self.pos = save;
                false
            }
        }
    }

    fn nu<L: ActionLabel>(&mut self) -> Result<Formula<L>, FormulaParseError> {
        if self.keyword("nu") {
            let x = self.ident().ok_or_else(|| self.err("expected variable after `nu`"))?;
            if !self.eat(".") {
                return Err(self.err("expected `.`"));
            }
            let body = self.nu()?;
            return Ok(Formula::Nu(Arc::from(x), Box::new(body)));
        }
        self.or()
    }

    fn or<L: ActionLabel>(&mut self) -> Result<Formula<L>, FormulaParseError> {
        let lhs = self.and()?;
        if self.eat("||") {
            let rhs = self.or_or_nu()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or_or_nu<L: ActionLabel>(&mut self) -> Result<Formula<L>, FormulaParseError> {
        let save = self.pos;
        if self.keyword("nu") {
            self.pos = save;
            return self.nu();
        }
        self.or()
    }

    fn and<L: ActionLabel>(&mut self) -> Result<Formula<L>, FormulaParseError> {
        let lhs = self.unary()?;
        if self.eat("&&") {
            let save = self.pos;
            if self.keyword("nu") {
                self.pos = save;
                return Ok(Formula::and(lhs, self.nu()?));
            }
            let rhs = self.and()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn label<L: ActionLabel>(&mut self, close: char) -> Result<L, FormulaParseError> {
        let rest = self.rest();
        let end = rest.find(close).ok_or_else(|| self.err("unclosed modality"))?;
        let text = rest[..end].trim();
        let l = L::parse_label(text).ok_or_else(|| self.err(&format!("bad action `{text}`")))?;
        self.pos += end + close.len_utf8();
        Ok(l)
    }

    fn unary<L: ActionLabel>(&mut self) -> Result<Formula<L>, FormulaParseError> {
        if self.eat("[") {
            let l = self.label(']')?;
            return Ok(Formula::boxed(l, self.unary()?));
        }
        if self.eat("<") {
            let l = self.label('>')?;
            return Ok(Formula::diamond(l, self.unary()?));
        }
        if self.eat("(") {
            let f = self.nu()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(f);
        }
        match self.ident() {
            Some("tt") => Ok(Formula::True),
            Some("ff") => Ok(Formula::False),
            Some("nu") => Err(self.err("`nu` must be parenthesised here")),
            Some(x) => Ok(Formula::Var(Arc::from(x))),
            None => Err(self.err("expected a formula")),
        }
    }
}
