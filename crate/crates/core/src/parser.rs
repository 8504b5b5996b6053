//! Parser for the `.lp` rule syntax.
//!
//! ```text
//! program  := { rule } ;
//! rule     := [ head ] [ ":-" [ body ] ] "." ;
//! head     := hlit { ";" hlit } ;   hlit := [ "not" ] atom ;
//! body     := blit { "," blit } ;   blit := [ "not" ] atom ;
//! atom     := predname [ "(" term { "," term } ")" ] ;
//! term     := VARIABLE | funcname [ "(" term { "," term } ")" ] ;
//! ```
//!
//! `%` starts a comment running to the end of the line.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::program::{Atom, Program, Rule};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: expected {expected}, found {found}")]
    Unexpected {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{column}: rule has neither head nor body")]
    EmptyRule { line: usize, column: usize },
    #[error("{line}:{column}: `{name}` is reserved for internal symbols")]
    Reserved {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("{line}:{column}: predicate `{name}` used with arity {second}, previously with arity {first}")]
    ArityClash {
        line: usize,
        column: usize,
        name: String,
        first: usize,
        second: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    If,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::If => "`:-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '%' {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, line, column));
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '.' => Tok::Dot,
                ':' if self.chars.peek() == Some(&'-') => {
                    self.bump();
                    Tok::If
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut s = String::from(c);
                    while let Some(&d) = self.chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            s.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    if c.is_ascii_lowercase() {
                        Tok::Lower(s)
                    } else {
                        Tok::Upper(s)
                    }
                }
                other => {
                    return Err(ParseError::Unexpected {
                        line,
                        column,
                        expected: "a rule".into(),
                        found: format!("`{other}`"),
                    })
                }
            };
            out.push((tok, line, column));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    arities: BTreeMap<String, usize>,
    anonymous: usize,
}

/// Identifiers in the Skolem (`sk_…`) and primed (`…_pr`) namespaces are
/// produced internally and never accepted from program text.
pub fn is_reserved(name: &str) -> bool {
    name.starts_with("sk_") || name.ends_with("_pr")
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn loc(&self) -> (usize, usize) {
        let (_, l, c) = &self.toks[self.pos];
        (*l, *c)
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let (line, column) = self.loc();
        ParseError::Unexpected {
            line,
            column,
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut rules = Vec::new();
        while *self.peek() != Tok::Eof {
            rules.push(self.rule()?);
        }
        Ok(Program::new(rules))
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let (line, column) = self.loc();
        let mut rule = Rule::default();
        if matches!(self.peek(), Tok::Lower(_)) {
            loop {
                let (neg, atom) = self.literal()?;
                if neg {
                    rule.neg_head.push(atom);
                } else {
                    rule.pos_head.push(atom);
                }
                if *self.peek() == Tok::Semi {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        if *self.peek() == Tok::If {
            self.advance();
            // `:- .` is the empty rule, which no interpretation satisfies.
            while *self.peek() != Tok::Dot {
                let (neg, atom) = self.literal()?;
                if neg {
                    rule.neg_body.push(atom);
                } else {
                    rule.pos_body.push(atom);
                }
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        } else if !rule.has_head() {
            if *self.peek() == Tok::Dot {
                return Err(ParseError::EmptyRule { line, column });
            }
            return Err(self.unexpected("an atom, `not`, or `:-`"));
        }
        self.expect(Tok::Dot, "`.`")?;
        rule.normalize();
        Ok(rule)
    }

    fn literal(&mut self) -> Result<(bool, Atom), ParseError> {
        if let Tok::Lower(s) = self.peek() {
            if s == "not" && matches!(self.toks.get(self.pos + 1), Some((Tok::Lower(_), _, _))) {
                self.advance();
                return Ok((true, self.atom()?));
            }
        }
        Ok((false, self.atom()?))
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let (line, column) = self.loc();
        let name = match self.peek() {
            Tok::Lower(s) => s.clone(),
            _ => return Err(self.unexpected("a predicate name")),
        };
        if is_reserved(&name) {
            return Err(ParseError::Reserved { line, column, name });
        }
        self.advance();
        let args = self.args()?;
        match self.arities.get(&name) {
            Some(&first) if first != args.len() => {
                return Err(ParseError::ArityClash {
                    line,
                    column,
                    name,
                    first,
                    second: args.len(),
                })
            }
            _ => {
                self.arities.insert(name.clone(), args.len());
            }
        }
        Ok(Atom::new(name, args))
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.advance();
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Tok::Comma => {
                        self.advance();
                    }
                    Tok::RParen => {
                        self.advance();
                        break;
                    }
                    _ => return Err(self.unexpected("`,` or `)`")),
                }
            }
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (line, column) = self.loc();
        match self.peek().clone() {
            Tok::Upper(v) => {
                self.advance();
                if v == "_" {
                    self.anonymous += 1;
                    Ok(Term::Var(format!("_{}", self.anonymous)))
                } else {
                    Ok(Term::Var(v))
                }
            }
            Tok::Lower(f) => {
                if is_reserved(&f) {
                    return Err(ParseError::Reserved {
                        line,
                        column,
                        name: f,
                    });
                }
                self.advance();
                Ok(Term::App(f, self.args()?))
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

/// Parses program text into a [`Program`].
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    Parser {
        toks,
        pos: 0,
        arities: BTreeMap::new(),
        anonymous: 0,
    }
    .program()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::print_program;

    #[test]
    fn parses_rule_components() {
        let p = parse_program("r :- p, not q.").unwrap();
        assert_eq!(p.rules.len(), 1);
        let r = &p.rules[0];
        assert_eq!(r.pos_head, vec![Atom::prop("r")]);
        assert!(r.neg_head.is_empty());
        assert_eq!(r.pos_body, vec![Atom::prop("p")]);
        assert_eq!(r.neg_body, vec![Atom::prop("q")]);

        let p = parse_program("not s :- not t, not u.").unwrap();
        let r = &p.rules[0];
        assert!(r.pos_head.is_empty() && r.pos_body.is_empty());
        assert_eq!(r.neg_head, vec![Atom::prop("s")]);
        assert_eq!(r.neg_body, vec![Atom::prop("t"), Atom::prop("u")]);
    }

    #[test]
    fn empty_program() {
        assert!(parse_program("").unwrap().is_empty());
        assert!(parse_program("  % only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn rejects_empty_rule() {
        assert!(matches!(
            parse_program("."),
            Err(ParseError::EmptyRule { line: 1, column: 1 })
        ));
        assert_eq!(parse_program(":- .").unwrap().rules, vec![Rule::default()]);
    }

    #[test]
    fn rejects_arity_clash() {
        let err = parse_program("p(X) :- q(X).\nq :- r.").unwrap_err();
        assert!(
            matches!(err, ParseError::ArityClash { line: 2, ref name, first: 1, second: 0, .. } if name == "q")
        );
    }

    #[test]
    fn rejects_reserved_names() {
        assert!(matches!(
            parse_program("sk_1."),
            Err(ParseError::Reserved { .. })
        ));
        assert!(matches!(
            parse_program("p(a_pr)."),
            Err(ParseError::Reserved { .. })
        ));
    }

    #[test]
    fn syntax_error_has_location() {
        let err = parse_program("p :- q\nr.").unwrap_err();
        assert_eq!(
            err,
            ParseError::Unexpected {
                line: 2,
                column: 1,
                expected: "`.`".into(),
                found: "`r`".into()
            }
        );
    }

    #[test]
    fn not_as_predicate_name() {
        // `not` followed by something other than an atom is an ordinary atom.
        let p = parse_program("not :- q.").unwrap();
        assert_eq!(p.rules[0].pos_head, vec![Atom::prop("not")]);
    }

    #[test]
    fn round_trip_example_corpus() {
        let text = "c(X,Y,Z) :- r(X,Y), r(Y,Z).\n:- c(X,Y,Z), not r(X,Y).\nr(X,Y) ; not r(X,Y).\np ; q :- t.\nn(X) :- n(Y), s(Y,X).\n";
        let p = parse_program(text).unwrap();
        assert_eq!(print_program(&p), text);
        assert_eq!(parse_program(&print_program(&p)).unwrap(), p);
    }
}
