//! Recursive-descent parser for the text grammar.
//!
//! Precedence from loosest to tightest: `<->`, `->`, `|`, `&`, then the
//! prefix operators `~ [] Iw Iu Id G`. Binary connectives associate to the
//! left except `->`, which associates to the right.
//!
//! Schema patterns use the same grammar plus upper-case metavariables
//! (`PHI`) and `BAR(PHI)`.

use super::{BinOp, Formula, LanguageTag, Meta, Operator, Pattern, SyntaxError, UnOp};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Unary(UnOp),
    Binary(BinOp),
    Atom(String),
    Meta(String),
    Bar,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    patterns: bool,
}

impl<'a> Lexer<'a> {
    fn syntax(&self, position: usize, expected: &str) -> SyntaxError {
        SyntaxError::Syntax {
            position,
            expected: expected.to_string(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, SyntaxError> {
        let bytes = self.src.as_bytes();
        let mut out = Vec::new();
        while self.pos < bytes.len() {
            let start = self.pos;
            let c = bytes[start];
            if c.is_ascii_whitespace() {
                self.pos += 1;
                continue;
            }
            let rest = &self.src[start..];
            let (tok, len) = if rest.starts_with("<->") {
                (Tok::Binary(BinOp::Iff), 3)
            } else if rest.starts_with("->") {
                (Tok::Binary(BinOp::Imp), 2)
            } else if rest.starts_with("[]") {
                (Tok::Unary(UnOp::Box), 2)
            } else {
                match c {
                    b'(' => (Tok::LParen, 1),
                    b')' => (Tok::RParen, 1),
                    b'~' => (Tok::Unary(UnOp::Not), 1),
                    b'&' => (Tok::Binary(BinOp::And), 1),
                    b'|' => (Tok::Binary(BinOp::Or), 1),
                    c if c.is_ascii_alphabetic() => {
                        let len = rest
                            .bytes()
                            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                            .count();
                        (self.word(start, &rest[..len])?, len)
                    }
                    _ => return Err(self.syntax(start, "a formula token")),
                }
            };
            out.push((start, tok));
            self.pos = start + len;
        }
        Ok(out)
    }

    fn word(&self, start: usize, w: &str) -> Result<Tok, SyntaxError> {
        let tok = match w {
            "Iw" => Tok::Unary(UnOp::IgnW),
            "Iu" => Tok::Unary(UnOp::IgnU),
            "Id" => Tok::Unary(UnOp::IgnD),
            "G" => Tok::Unary(UnOp::Grasp),
            "BAR" if self.patterns => Tok::Bar,
            _ if is_atom_name(w) => Tok::Atom(w.to_string()),
            _ if self.patterns && is_meta_name(w) => Tok::Meta(w.to_string()),
            _ => return Err(self.syntax(start, "an atom name [a-z][a-z0-9_]*")),
        };
        Ok(tok)
    }
}

fn is_atom_name(w: &str) -> bool {
    let mut chars = w.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn is_meta_name(w: &str) -> bool {
    let mut chars = w.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    lang: Option<LanguageTag>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError::Syntax {
            position: self.position(),
            expected: expected.to_string(),
        }
    }

    fn eat_binary(&mut self, op: BinOp) -> bool {
        if self.peek() == Some(&Tok::Binary(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn iff(&mut self) -> Result<Pattern, SyntaxError> {
        let mut lhs = self.imp()?;
        while self.eat_binary(BinOp::Iff) {
            let rhs = self.imp()?;
            lhs = Pattern::binary(BinOp::Iff, lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Pattern, SyntaxError> {
        let lhs = self.or()?;
        if self.eat_binary(BinOp::Imp) {
            let rhs = self.imp()?;
            return Ok(Pattern::binary(BinOp::Imp, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Pattern, SyntaxError> {
        let mut lhs = self.and()?;
        while self.eat_binary(BinOp::Or) {
            let rhs = self.and()?;
            lhs = Pattern::binary(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Pattern, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat_binary(BinOp::And) {
            let rhs = self.unary()?;
            lhs = Pattern::binary(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Pattern, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Unary(op)) => {
                if let Some(lang) = self.lang {
                    if !lang.admits(Operator::Unary(op)) {
                        return Err(SyntaxError::Language {
                            operator: op.symbol().to_string(),
                            lang,
                        });
                    }
                }
                self.at += 1;
                Ok(Pattern::unary(op, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Pattern, SyntaxError> {
        let expected = "an atom, a prefix operator or `(`";
        let tok = self.peek().cloned().ok_or_else(|| self.error(expected))?;
        self.at += 1;
        match tok {
            Tok::Atom(p) => Ok(Pattern::Atom(p)),
            Tok::Meta(m) => Ok(Pattern::Meta(Meta(m))),
            Tok::Bar => {
                self.expect(Tok::LParen, "`(` after BAR")?;
                let m = match self.peek().cloned() {
                    Some(Tok::Meta(m)) => m,
                    _ => return Err(self.error("a metavariable inside BAR(..)")),
                };
                self.at += 1;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Pattern::Bar(Meta(m)))
            }
            Tok::LParen => {
                let inner = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => {
                self.at -= 1;
                Err(self.error(expected))
            }
        }
    }
}

fn run(text: &str, lang: Option<LanguageTag>, patterns: bool) -> Result<Pattern, SyntaxError> {
    let toks = Lexer {
        src: text,
        pos: 0,
        patterns,
    }
    .tokens()?;
    let mut parser = Parser {
        toks,
        at: 0,
        end: text.len(),
        lang,
    };
    let out = parser.iff()?;
    if parser.at != parser.toks.len() {
        return Err(parser.error("end of input or a binary connective"));
    }
    Ok(out)
}

/// Parses `text` as a formula of `lang`. Any prefix operator outside the
/// language is rejected.
pub fn parse(text: &str, lang: LanguageTag) -> Result<Formula, SyntaxError> {
    let pattern = run(text, Some(lang), false)?;
    Ok(pattern
        .to_formula()
        .expect("formula mode never produces metavariables"))
}

/// Parses a schema pattern. No language restriction is applied.
pub fn parse_pattern(text: &str) -> Result<Pattern, SyntaxError> {
    run(text, None, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(p: &str) -> Formula {
        Formula::atom(p)
    }

    #[test]
    fn parses_examples() {
        let f = parse("Iw (p & (q | ~q))", LanguageTag::LIw).unwrap();
        let expected = Formula::IgnW(Box::new(Formula::and(
            atom("p"),
            Formula::or(atom("q"), Formula::not(atom("q"))),
        )));
        assert_eq!(f, expected);

        let g = parse("G p -> Id p", LanguageTag::LIdG).unwrap();
        assert_eq!(
            g,
            Formula::imp(
                Formula::Grasp(Box::new(atom("p"))),
                Formula::IgnD(Box::new(atom("p")))
            )
        );
    }

    #[test]
    fn rejects_foreign_operator() {
        let err = parse("Iu p", LanguageTag::LIw).unwrap_err();
        assert_eq!(
            err,
            SyntaxError::Language {
                operator: "Iu".into(),
                lang: LanguageTag::LIw
            }
        );
        assert!(parse("[] p", LanguageTag::ClassicIw).is_err());
        assert!(parse("G p", LanguageTag::LIu).is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        let l = LanguageTag::LIw;
        assert_eq!(
            parse("p -> q -> r", l).unwrap(),
            parse("p -> (q -> r)", l).unwrap()
        );
        assert_eq!(
            parse("p & q & r", l).unwrap(),
            parse("(p & q) & r", l).unwrap()
        );
        assert_eq!(
            parse("p <-> q <-> r", l).unwrap(),
            parse("(p <-> q) <-> r", l).unwrap()
        );
        assert_eq!(
            parse("~p & q | r -> s <-> t", l).unwrap(),
            parse("((((~p) & q) | r) -> s) <-> t", l).unwrap()
        );
        assert_eq!(
            parse("Iw p & q", l).unwrap(),
            parse("(Iw p) & q", l).unwrap()
        );
        assert_eq!(
            parse("~[] p", l).unwrap(),
            Formula::not(Formula::Box(Box::new(atom("p"))))
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let l = LanguageTag::LIw;
        assert_eq!(
            parse("p &", l),
            Err(SyntaxError::Syntax {
                position: 3,
                expected: "an atom, a prefix operator or `(`".into()
            })
        );
        assert!(matches!(
            parse("(p", l),
            Err(SyntaxError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse("p q", l),
            Err(SyntaxError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse("P", l),
            Err(SyntaxError::Syntax { position: 0, .. })
        ));
        assert!(matches!(
            parse("p $ q", l),
            Err(SyntaxError::Syntax { position: 2, .. })
        ));
        assert!(parse("", l).is_err());
    }

    #[test]
    fn atom_names() {
        let l = LanguageTag::ClassicIw;
        assert_eq!(parse("p1_x", l).unwrap(), atom("p1_x"));
        assert!(parse("Iwp", l).is_err());
    }

    #[test]
    fn patterns_with_bar() {
        let pat = parse_pattern("Iw BAR(PHI) -> Iw PHI").unwrap();
        assert_eq!(pat.to_string(), "(Iw BAR(PHI) -> Iw PHI)");
        assert!(parse("Iw PHI", LanguageTag::LIw).is_err());
        assert!(parse_pattern("BAR(p)").is_err());
    }
}
