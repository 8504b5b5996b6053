//! TPTP `fof` serialization of superscripted formulas.
//!
//! A predicate `p⁰` is written `p__0`, `p¹` is `p__1`, and primed copies carry
//! a trailing `_pr` (`p__0_pr`). Only the connectives `~ & | => <=> <=` and the
//! quantifiers `!`/`?` are supported.

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, SuperPredicate, Superscript};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct TptpError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// One annotated formula, `fof(name, role, formula).`
#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub name: String,
    pub role: String,
    pub formula: Formula,
}

impl Statement {
    pub fn new(name: impl Into<String>, role: impl Into<String>, formula: Formula) -> Self {
        Statement {
            name: name.into(),
            role: role.into(),
            formula,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fof({}, {}, {}).", self.name, self.role, self.formula)
    }
}

fn is_compound(f: &Formula) -> bool {
    matches!(
        f,
        Formula::And(_) | Formula::Or(_) | Formula::Implies(..) | Formula::Iff(..)
    )
}

fn write_sub(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    if is_compound(g) {
        write!(f, "(")?;
        write_formula(f, g)?;
        write!(f, ")")
    } else {
        write_formula(f, g)
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, gs: &[Formula], op: &str) -> fmt::Result {
    for (i, g) in gs.iter().enumerate() {
        if i > 0 {
            write!(f, " {op} ")?;
        }
        write_sub(f, g)?;
    }
    Ok(())
}

pub(crate) fn write_formula(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    match g {
        Formula::True => write!(f, "$true"),
        Formula::False => write!(f, "$false"),
        Formula::Atom(a) => write!(f, "{a}"),
        Formula::Not(h) => {
            write!(f, "~ ")?;
            write_sub(f, h)
        }
        Formula::And(gs) => write_joined(f, gs, "&"),
        Formula::Or(gs) => write_joined(f, gs, "|"),
        Formula::Implies(a, b) => {
            write_sub(f, a)?;
            write!(f, " => ")?;
            write_sub(f, b)
        }
        Formula::Iff(a, b) => {
            write_sub(f, a)?;
            write!(f, " <=> ")?;
            write_sub(f, b)
        }
        Formula::Forall(vs, h) | Formula::Exists(vs, h) => {
            let q = if matches!(g, Formula::Forall(..)) {
                '!'
            } else {
                '?'
            };
            write!(f, "{q} [{}] : ", vs.join(","))?;
            write_sub(f, h)
        }
    }
}

/// Renders statements one per line.
pub fn to_tptp(statements: &[Statement]) -> String {
    statements.iter().map(|s| format!("{s}\n")).collect()
}

/// Splits a formula into top-level conjuncts and renders each as an axiom.
pub fn formula_to_tptp(prefix: &str, role: &str, f: &Formula) -> String {
    let parts: Vec<Formula> = match f {
        Formula::And(fs) => fs.clone(),
        Formula::True => vec![],
        other => vec![other.clone()],
    };
    let stmts: Vec<Statement> = parts
        .into_iter()
        .enumerate()
        .map(|(i, g)| Statement::new(format!("{prefix}_{}", i + 1), role, g))
        .collect();
    to_tptp(&stmts)
}

/// Decodes `p__0`, `p__1_pr` etc.
pub fn parse_predicate_name(name: &str, arity: usize) -> Option<SuperPredicate> {
    let (rest, primed) = match name.strip_suffix("_pr") {
        Some(r) => (r, true),
        None => (name, false),
    };
    let (base, sup) = if let Some(b) = rest.strip_suffix("__0") {
        (b, Superscript::Zero)
    } else {
        let b = rest.strip_suffix("__1")?;
        (b, Superscript::One)
    };
    if !base.starts_with(|c: char| c.is_ascii_lowercase()) {
        return None;
    }
    Some(SuperPredicate {
        name: base.to_string(),
        arity,
        sup,
        primed,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    Punct(&'static str),
    Eof,
}

const PUNCT: [&str; 14] = [
    "<=>", "=>", "<=", "(", ")", "[", "]", ",", ".", ":", "~", "&", "|", "!",
];

fn tokenize(text: &str) -> Result<Vec<(Tok, usize, usize)>, TptpError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (l, cl) = (line, col);
        if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = if c == '$' {
                Tok::Dollar(word)
            } else if c.is_ascii_lowercase() {
                Tok::Lower(word)
            } else {
                Tok::Upper(word)
            };
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n);
            out.push((tok, l, cl));
            continue;
        }
        if c == '?' {
            advance(&mut i, &mut line, &mut col, 1);
            out.push((Tok::Punct("?"), l, cl));
            continue;
        }
        let rest: String = chars[i..(i + 3).min(chars.len())].iter().collect();
        match PUNCT.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                advance(&mut i, &mut line, &mut col, p.len());
                out.push((Tok::Punct(p), l, cl));
            }
            None => {
                return Err(TptpError {
                    line: l,
                    column: cl,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn err(&self, message: impl Into<String>) -> TptpError {
        let (_, line, column) = &self.toks[self.pos];
        TptpError {
            line: *line,
            column: *column,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn expect(&mut self, p: &str) -> Result<(), TptpError> {
        if self.is_punct(p) {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!("expected `{p}`, found {:?}", self.peek())))
        }
    }

    fn word(&mut self) -> Result<String, TptpError> {
        match self.next() {
            Tok::Lower(w) | Tok::Upper(w) => Ok(w),
            t => Err(self.err(format!("expected a name, found {t:?}"))),
        }
    }

    fn statements(&mut self) -> Result<Vec<Statement>, TptpError> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            match self.next() {
                Tok::Lower(k) if k == "fof" => {}
                t => return Err(self.err(format!("expected `fof`, found {t:?}"))),
            }
            self.expect("(")?;
            let name = self.word()?;
            self.expect(",")?;
            let role = self.word()?;
            self.expect(",")?;
            let formula = self.formula()?;
            self.expect(")")?;
            self.expect(".")?;
            out.push(Statement {
                name,
                role,
                formula,
            });
        }
        Ok(out)
    }

    fn formula(&mut self) -> Result<Formula, TptpError> {
        let first = self.unit()?;
        if self.is_punct("<=>") || self.is_punct("=>") || self.is_punct("<=") {
            let Tok::Punct(op) = self.next() else {
                unreachable!()
            };
            let second = self.unit()?;
            return Ok(match op {
                "<=>" => Formula::iff(first, second),
                "=>" => Formula::implies(first, second),
                _ => Formula::implies(second, first),
            });
        }
        for (op, is_and) in [("&", true), ("|", false)] {
            if self.is_punct(op) {
                let mut items = vec![first];
                while self.is_punct(op) {
                    self.next();
                    items.push(self.unit()?);
                }
                return Ok(if is_and {
                    Formula::And(items)
                } else {
                    Formula::Or(items)
                });
            }
        }
        Ok(first)
    }

    fn unit(&mut self) -> Result<Formula, TptpError> {
        match self.peek().clone() {
            Tok::Punct("~") => {
                self.next();
                Ok(Formula::not(self.unit()?))
            }
            Tok::Punct(q @ ("!" | "?")) => {
                self.next();
                self.expect("[")?;
                let mut vars = Vec::new();
                loop {
                    match self.next() {
                        Tok::Upper(v) => vars.push(v),
                        t => return Err(self.err(format!("expected a variable, found {t:?}"))),
                    }
                    if self.is_punct(",") {
                        self.next();
                    } else {
                        break;
                    }
                }
                self.expect("]")?;
                self.expect(":")?;
                let body = self.unit()?;
                Ok(if q == "!" {
                    Formula::Forall(vars, Box::new(body))
                } else {
                    Formula::Exists(vars, Box::new(body))
                })
            }
            Tok::Punct("(") => {
                self.next();
                let f = self.formula()?;
                self.expect(")")?;
                Ok(f)
            }
            Tok::Dollar(w) if w == "$true" => {
                self.next();
                Ok(Formula::True)
            }
            Tok::Dollar(w) if w == "$false" => {
                self.next();
                Ok(Formula::False)
            }
            Tok::Lower(name) => {
                let here = self.err("");
                self.next();
                let args = self.args()?;
                match parse_predicate_name(&name, args.len()) {
                    Some(pred) => Ok(Formula::atom(pred, args)),
                    None => Err(TptpError {
                        message: format!("predicate `{name}` lacks a `__0`/`__1` superscript"),
                        ..here
                    }),
                }
            }
            t => Err(self.err(format!("expected a formula, found {t:?}"))),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, TptpError> {
        let mut args = Vec::new();
        if self.is_punct("(") {
            self.next();
            loop {
                args.push(self.term()?);
                if self.is_punct(",") {
                    self.next();
                } else {
                    break;
                }
            }
            self.expect(")")?;
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, TptpError> {
        match self.next() {
            Tok::Upper(v) => Ok(Term::Var(v)),
            Tok::Lower(f) => Ok(Term::App(f, self.args()?)),
            t => Err(self.err(format!("expected a term, found {t:?}"))),
        }
    }
}

pub fn parse_tptp(text: &str) -> Result<Vec<Statement>, TptpError> {
    Parser {
        toks: tokenize(text)?,
        pos: 0,
    }
    .statements()
}

/// Parses a file and conjoins all its statements.
pub fn parse_tptp_conjunction(text: &str) -> Result<Formula, TptpError> {
    Ok(Formula::conj(
        parse_tptp(text)?.into_iter().map(|s| s.formula),
    ))
}

/// Parses a single bare formula.
pub fn parse_formula(text: &str) -> Result<Formula, TptpError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let p = parse_predicate_name("q__1_pr", 2).unwrap();
        assert_eq!(p.name, "q");
        assert!(p.primed);
        assert_eq!(p.sup, Superscript::One);
        assert_eq!(p.to_string(), "q__1_pr");
        assert!(parse_predicate_name("q", 0).is_none());
        assert!(parse_predicate_name("__0", 0).is_none());
    }

    #[test]
    fn formula_round_trip() {
        let text = "! [X,Y] : ((p__0(X) & ~ q__1(f(X,a))) => (r__0(X) | s__1_pr(Y)))";
        let f = parse_formula(text).unwrap();
        assert_eq!(f.to_string(), text);
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn reverse_implication_and_constants() {
        let f = parse_formula("p__0 <= $true").unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::True,
                Formula::atom(SuperPredicate::new("p", 0, Superscript::Zero), vec![])
            )
        );
    }

    #[test]
    fn statements_conjoin() {
        let text =
            "% comment\nfof(c1, axiom, ~ p__0 | q__1 | r__0).\nfof(c2, axiom, ~ s__1 | t__1).\n";
        let stmts = parse_tptp(text).unwrap();
        assert_eq!(stmts.len(), 2);
        assert_eq!(
            to_tptp(&stmts),
            text.lines()
                .skip(1)
                .map(|l| format!("{l}\n"))
                .collect::<String>()
        );
        assert!(matches!(parse_tptp_conjunction(text).unwrap(), Formula::And(v) if v.len() == 2));
    }

    #[test]
    fn rejects_unsuperscripted_predicate() {
        let err = parse_formula("p(X)").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
    }
}
