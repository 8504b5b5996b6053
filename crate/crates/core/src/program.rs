//! Disjunctive logic programs with negation in the head.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::{write_args, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        Self::new(predicate, Vec::new())
    }

    pub fn signature(&self) -> Signature {
        (self.predicate.clone(), self.args.len())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        write_args(f, &self.args)
    }
}

/// `pos_head ; not neg_head :- pos_body, not neg_body.`
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub pos_head: Vec<Atom>,
    pub neg_head: Vec<Atom>,
    pub pos_body: Vec<Atom>,
    pub neg_body: Vec<Atom>,
}

impl Rule {
    pub fn new(
        pos_head: Vec<Atom>,
        neg_head: Vec<Atom>,
        pos_body: Vec<Atom>,
        neg_body: Vec<Atom>,
    ) -> Self {
        let mut rule = Rule {
            pos_head,
            neg_head,
            pos_body,
            neg_body,
        };
        rule.normalize();
        rule
    }

    /// Drops duplicate atoms within each component, keeping first occurrences.
    pub fn normalize(&mut self) {
        for list in [
            &mut self.pos_head,
            &mut self.neg_head,
            &mut self.pos_body,
            &mut self.neg_body,
        ] {
            let mut seen = BTreeSet::new();
            list.retain(|a| seen.insert(a.clone()));
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.pos_head
            .iter()
            .chain(&self.neg_head)
            .chain(&self.pos_body)
            .chain(&self.neg_body)
    }

    pub fn has_head(&self) -> bool {
        !self.pos_head.is_empty() || !self.neg_head.is_empty()
    }

    pub fn has_body(&self) -> bool {
        !self.pos_body.is_empty() || !self.neg_body.is_empty()
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in self.atoms() {
            for t in &a.args {
                t.collect_vars_ordered(&mut out);
            }
        }
        out
    }

    /// Rule with each component sorted, used for set comparison.
    fn canonical(&self) -> Rule {
        let mut r = self.clone();
        for list in [
            &mut r.pos_head,
            &mut r.neg_head,
            &mut r.pos_body,
            &mut r.neg_body,
        ] {
            list.sort();
        }
        r
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = self
            .pos_head
            .iter()
            .map(|a| a.to_string())
            .chain(self.neg_head.iter().map(|a| format!("not {a}")))
            .collect();
        let body: Vec<String> = self
            .pos_body
            .iter()
            .map(|a| a.to_string())
            .chain(self.neg_body.iter().map(|a| format!("not {a}")))
            .collect();
        write!(f, "{}", head.join(" ; "))?;
        if !body.is_empty() || head.is_empty() {
            if !head.is_empty() {
                write!(f, " ")?;
            }
            write!(f, ":-")?;
            if !body.is_empty() {
                write!(f, " {}", body.join(", "))?;
            }
        }
        write!(f, ".")
    }
}

/// A logic program. Equality is set equality over normalized rules.
#[derive(Debug, Clone, Default)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    /// Predicates (name/arity) occurring anywhere in the program.
    pub fn predicates(&self) -> BTreeSet<Signature> {
        self.rules
            .iter()
            .flat_map(|r| r.atoms().map(Atom::signature))
            .collect()
    }

    /// Function symbols, constants included, occurring in any term.
    pub fn functions(&self) -> BTreeSet<Signature> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            for a in r.atoms() {
                a.args.iter().for_each(|t| t.collect_functions(&mut out));
            }
        }
        out
    }

    /// Union of two programs, keeping the rules of `self` first.
    pub fn union(&self, other: &Program) -> Program {
        let mut rules = self.rules.clone();
        for r in &other.rules {
            if !rules.contains(r) {
                rules.push(r.clone());
            }
        }
        Program { rules }
    }

    fn rule_set(&self) -> BTreeSet<Rule> {
        self.rules.iter().map(Rule::canonical).collect()
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.rule_set() == other.rule_set()
    }
}

impl Eq for Program {}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Deterministic text form of a program, one rule per line.
pub fn print_program(p: &Program) -> String {
    p.to_string()
}

pub fn program_predicates(p: &Program) -> BTreeSet<Signature> {
    p.predicates()
}

pub fn program_functions(p: &Program) -> BTreeSet<Signature> {
    p.functions()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(p: &str, vars: &[&str]) -> Atom {
        Atom::new(p, vars.iter().map(|v| Term::var(*v)).collect())
    }

    #[test]
    fn prints_rule_shapes() {
        assert_eq!(print_program(&Program::default()), "");
        let r = Rule::new(
            vec![atom("p", &["X"])],
            vec![],
            vec![atom("q", &["X"])],
            vec![],
        );
        assert_eq!(r.to_string(), "p(X) :- q(X).");
        let c = Rule::new(
            vec![],
            vec![],
            vec![atom("p", &["X"]), atom("q", &["X"])],
            vec![],
        );
        assert_eq!(c.to_string(), ":- p(X), q(X).");
        let d = Rule::new(
            vec![atom("r", &["X", "Y"])],
            vec![atom("r", &["X", "Y"])],
            vec![],
            vec![],
        );
        assert_eq!(d.to_string(), "r(X,Y) ; not r(X,Y).");
    }

    #[test]
    fn duplicates_dropped_and_set_equality() {
        let r = Rule::new(
            vec![Atom::prop("p"), Atom::prop("p")],
            vec![],
            vec![Atom::prop("q"), Atom::prop("r")],
            vec![],
        );
        assert_eq!(r.pos_head.len(), 1);
        let r2 = Rule::new(
            vec![Atom::prop("p")],
            vec![],
            vec![Atom::prop("r"), Atom::prop("q")],
            vec![],
        );
        assert_eq!(
            Program::new(vec![r.clone(), r2.clone()]),
            Program::new(vec![r2])
        );
    }

    #[test]
    fn functions_and_predicates() {
        let r = Rule::new(
            vec![Atom::new("p", vec![Term::constant("a")])],
            vec![],
            vec![Atom::new(
                "q",
                vec![Term::app("f", vec![Term::constant("a")])],
            )],
            vec![],
        );
        let p = Program::new(vec![r]);
        let funs: Vec<_> = p.functions().into_iter().collect();
        assert_eq!(funs, vec![("a".to_string(), 0), ("f".to_string(), 1)]);
        assert_eq!(p.predicates().len(), 2);
        assert!(Program::default().predicates().is_empty());
    }
}
