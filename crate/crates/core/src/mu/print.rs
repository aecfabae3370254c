use super::{ActionLabel, Formula};

/// Output syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// `tt`, `ff`, `&&`, `||`, `[!a]phi`, `<?a>phi`, `nu x . phi`; re-parsable.
    Native,
    /// mCRL2 modal formula syntax (output only).
    Mcrl2,
}

// binding strength, loosest first
const NU: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

fn prec<L>(phi: &Formula<L>) -> u8 {
    match phi {
        Formula::Nu(..) => NU,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

pub fn print_formula<L: ActionLabel>(phi: &Formula<L>, style: Style) -> String {
    let mut out = String::new();
    write(phi, style, NU, &mut out);
    out
}

fn write<L: ActionLabel>(phi: &Formula<L>, style: Style, min: u8, out: &mut String) {
    if prec(phi) < min {
        out.push('(');
        write(phi, style, NU, out);
        out.push(')');
        return;
    }
    match phi {
        Formula::True => out.push_str(if style == Style::Native { "tt" } else { "true" }),
        Formula::False => out.push_str(if style == Style::Native { "ff" } else { "false" }),
        Formula::Var(x) => var(x, style, out),
        Formula::And(a, b) => {
            write(a, style, AND + 1, out);
            out.push_str(" && ");
            write(b, style, AND, out);
        }
        Formula::Or(a, b) => {
            write(a, style, OR + 1, out);
            out.push_str(" || ");
            write(b, style, OR, out);
        }
        Formula::Box(l, p) => {
            out.push('[');
            label(l, style, out);
            out.push(']');
            write(p, style, UNARY, out);
        }
        Formula::Diamond(l, p) => {
            out.push('<');
            label(l, style, out);
            out.push('>');
            write(p, style, UNARY, out);
        }
        Formula::Nu(x, p) => {
            out.push_str("nu ");
            var(x, style, out);
            out.push_str(" . ");
            write(p, style, NU, out);
        }
    }
}

fn var(x: &str, style: Style, out: &mut String) {
    if style == Style::Mcrl2 {
        out.push_str("V_");
    }
    out.push_str(x);
}

fn label<L: ActionLabel>(l: &L, style: Style, out: &mut String) {
    match style {
        Style::Native => out.push_str(&l.to_string()),
        Style::Mcrl2 => out.push_str(&l.mcrl2_name()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Action;

    type F = Formula<Action>;

    #[test]
    fn atoms_and_modalities() {
        assert_eq!(print_formula(&F::True, Style::Native), "tt");
        assert_eq!(
            print_formula(&F::boxed(Action::send("a"), F::False), Style::Native),
            "[!a]ff"
        );
        assert_eq!(
            print_formula(&F::boxed(Action::send("a"), F::False), Style::Mcrl2),
            "[snd_a]false"
        );
    }

    #[test]
    fn parenthesises_by_precedence() {
        let phi = F::and(
            F::or(F::var("x"), F::True),
            F::diamond(Action::recv("a"), F::and(F::True, F::False)),
        );
        assert_eq!(print_formula(&phi, Style::Native), "(x || tt) && <?a>(tt && ff)");
        let nested = F::and(F::and(F::True, F::True), F::nu("y", F::var("y")));
        assert_eq!(print_formula(&nested, Style::Native), "(tt && tt) && (nu y . y)");
        assert_eq!(print_formula(&nested, Style::Mcrl2), "(true && true) && (nu V_y . V_y)");
    }
}
