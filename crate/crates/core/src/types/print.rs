use super::SessionType;

/// Canonical text in the concrete grammar. Singleton choices use the
/// `!a . T` / `?a . T` sugar.
pub fn print_type(t: &SessionType) -> String {
    let mut out = String::new();
    write(t, &mut out);
    out
}

fn write(t: &SessionType, out: &mut String) {
    match t {
        SessionType::End => out.push_str("end"),
        SessionType::Var(x) => out.push_str(x),
        SessionType::Rec(x, body) => {
            out.push_str("rec ");
            out.push_str(x);
            out.push_str(" . ");
            write(body, out);
        }
        SessionType::Choice(kind, branches) if branches.len() == 1 => {
            let (l, cont) = &branches[0];
            out.push(kind.direction().symbol());
            out.push_str(l.as_str());
            out.push_str(" . ");
            write(cont, out);
        }
        SessionType::Choice(kind, branches) => {
            out.push(kind.symbol());
            out.push_str("{ ");
            for (i, (l, cont)) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push(kind.direction().symbol());
                out.push_str(l.as_str());
                out.push_str(" . ");
                write(cont, out);
            }
            out.push_str(" }");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    #[test]
    fn prints_end_and_sugar() {
        assert_eq!(print_type(&SessionType::End), "end");
        assert_eq!(print_type(&SessionType::send("a", SessionType::End)), "!a . end");
    }

    #[test]
    fn u1_round_trips() {
        let src = "rec x . ?request . +{ !ok . end , !ko . x }";
        let u1 = parse_type(src).unwrap();
        let text = print_type(&u1);
        assert_eq!(text, "rec x . ?request . +{ !ok . end, !ko . x }");
        assert!(parse_type(&text).unwrap().equiv(&u1));
    }
}
