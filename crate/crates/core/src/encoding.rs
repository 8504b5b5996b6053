//! The γ translation of programs into superscripted first-order formulas.

use std::collections::BTreeSet;

use crate::entail::{entails, Decider, Verdict};
use crate::formula::{is_universal, pred_lp, rename_0_to_1, Formula, SuperPredicate, Superscript};
use crate::program::{Atom, Program, Rule};
use crate::term::{Signature, Term};

/// γ(P) and S_P together with the program they encode.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedProgram {
    pub gamma: Formula,
    pub s: Formula,
    pub source: Program,
}

impl EncodedProgram {
    pub fn new(p: &Program) -> Self {
        EncodedProgram {
            gamma: gamma(p),
            s: s_formula(&p.predicates()),
            source: p.clone(),
        }
    }
}

fn atom_formula(a: &Atom, sup: Superscript) -> Formula {
    Formula::atom(
        SuperPredicate::from_lp(&a.predicate, a.args.len(), sup),
        a.args.clone(),
    )
}

/// γ⁰ (`sup = Zero`) or γ¹ (`sup = One`) of a single rule, as
/// `∀xs (body → head)`. Negated atoms always carry superscript 1.
pub fn gamma_rule(r: &Rule, sup: Superscript) -> Formula {
    let one = Superscript::One;
    let body = Formula::conj(
        r.pos_body.iter().map(|a| atom_formula(a, sup)).chain(
            r.neg_body
                .iter()
                .map(|a| Formula::not(atom_formula(a, one))),
        ),
    );
    let head = Formula::disj(
        r.pos_head.iter().map(|a| atom_formula(a, sup)).chain(
            r.neg_head
                .iter()
                .map(|a| Formula::not(atom_formula(a, one))),
        ),
    );
    let matrix = if r.has_body() {
        Formula::implies(body, head)
    } else {
        head
    };
    Formula::forall(r.variables(), matrix)
}

/// γ(P): both translations of every rule, with duplicate conjuncts removed.
pub fn gamma(p: &Program) -> Formula {
    let mut seen = BTreeSet::new();
    let mut parts = Vec::new();
    for r in &p.rules {
        for sup in [Superscript::Zero, Superscript::One] {
            let f = gamma_rule(r, sup);
            if seen.insert(f.clone()) {
                parts.push(f);
            }
        }
    }
    Formula::conj(parts)
}

/// `⋀ ∀xs (p⁰(xs) → p¹(xs))` over the given program-level predicates, in
/// name/arity order.
pub fn s_formula(preds: &BTreeSet<Signature>) -> Formula {
    Formula::conj(preds.iter().map(|(name, arity)| {
        let vars: Vec<String> = (1..=*arity).map(|i| format!("X{i}")).collect();
        let args: Vec<Term> = vars.iter().map(Term::var).collect();
        let p0 = Formula::atom(
            SuperPredicate::from_lp(name, *arity, Superscript::Zero),
            args.clone(),
        );
        let p1 = Formula::atom(
            SuperPredicate::from_lp(name, *arity, Superscript::One),
            args,
        );
        Formula::forall(vars, Formula::implies(p0, p1))
    }))
}

/// S_F for a formula: the S formula over its program-level predicates.
pub fn s_formula_of(f: &Formula) -> Formula {
    s_formula(&pred_lp(f))
}

/// Whether `f` is universal and `S_F ∧ F ⊨ rename₀→₁(F)`.
pub fn encodes_program_check(f: &Formula, decider: &Decider) -> Verdict {
    if !is_universal(f) {
        return Verdict::False;
    }
    let left = Formula::conj([s_formula_of(f), f.clone()]);
    entails(&left, &rename_0_to_1(f), decider)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::testutil::*;
    use crate::parser::parse_program;

    fn rule(text: &str) -> Rule {
        parse_program(text).unwrap().rules.remove(0)
    }

    #[test]
    fn gamma_of_single_rules() {
        let r = rule("r :- p, not q.");
        let g0 = gamma_rule(&r, Superscript::Zero);
        assert_eq!(
            g0,
            Formula::implies(
                Formula::conj([pa("p", 0), Formula::not(pa("q", 1))]),
                pa("r", 0)
            )
        );
        let g1 = gamma_rule(&r, Superscript::One);
        assert_eq!(
            g1,
            Formula::implies(
                Formula::conj([pa("p", 1), Formula::not(pa("q", 1))]),
                pa("r", 1)
            )
        );
        assert_eq!(rename_0_to_1(&g0), g1);

        let r = rule("not s :- not t, not u.");
        assert_eq!(
            gamma_rule(&r, Superscript::Zero),
            gamma_rule(&r, Superscript::One)
        );
    }

    #[test]
    fn gamma_of_programs() {
        assert_eq!(
            gamma(&parse_program("p.").unwrap()),
            Formula::conj([pa("p", 0), pa("p", 1)])
        );
        assert_eq!(gamma(&Program::default()), Formula::True);
        let g = gamma(&parse_program("r :- p, not q.\nnot s :- not t, not u.").unwrap());
        assert_eq!(g.children().len(), 3);
    }

    #[test]
    fn s_formulas() {
        assert_eq!(s_formula(&BTreeSet::new()), Formula::True);
        let s = s_formula(&BTreeSet::from([("p".to_string(), 0)]));
        assert_eq!(s, Formula::implies(pa("p", 0), pa("p", 1)));
        let s = s_formula(&BTreeSet::from([("q".to_string(), 1)]));
        assert_eq!(s.to_string(), "! [X1] : (q__0(X1) => q__1(X1))");
    }

    #[test]
    fn gamma_is_universal_and_covers_predicates() {
        let p = parse_program("c(X,Y,Z) :- r(X,Y), r(Y,Z).\n:- c(X,Y,Z), not r(X,Y).").unwrap();
        let enc = EncodedProgram::new(&p);
        assert!(is_universal(&enc.gamma));
        assert_eq!(pred_lp(&enc.gamma), p.predicates());
    }

    #[test]
    fn encoding_check_on_small_formulas() {
        let d = Decider::Ground { max_atoms: 64 };
        let c1 = Formula::disj([Formula::not(pa("p", 0)), pa("q", 1), pa("r", 0)]);
        assert_eq!(encodes_program_check(&c1, &d), Verdict::False);
        let b = Formula::disj([Formula::not(pa("p", 1)), pa("q", 1), pa("r", 0)]);
        assert_eq!(encodes_program_check(&b, &d), Verdict::True);
        let p = parse_program("r :- p, not q.\nnot s :- not t, not u.").unwrap();
        assert_eq!(encodes_program_check(&gamma(&p), &d), Verdict::True);
    }
}
