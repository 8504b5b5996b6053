//! Benchmark fixtures: small synthesis problems and a generator
//! of random propositional programs.

use std::collections::BTreeSet;

use lpsynth::{parse_program, Atom, Program, Rule, VocabularySpec};

pub struct Problem {
    pub name: &'static str,
    pub p: Program,
    pub q: Program,
    pub vocab: VocabularySpec,
}

fn names(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn plain(name: &'static str, p: &str, q: &str, v: &[&str]) -> Problem {
    Problem {
        name,
        p: parse_program(p).expect("fixture parses"),
        q: parse_program(q).expect("fixture parses"),
        vocab: VocabularySpec::Plain(names(v)),
    }
}

const MAPPING: &str =
    "p(X) :- q(X), not r(X).\np(X) :- s(X).\nnot r(X) ; s(X) :- p(X).\nq(X) ; s(X) :- p(X).\n";

pub fn problems() -> Vec<Problem> {
    vec![
        plain(
            "redundant",
            "",
            "p :- q, r.\np ; q :- r.\nq :- q, s.\n",
            &["p", "r"],
        ),
        plain("unfold", MAPPING, "t(X) :- p(X).\n", &["q", "r", "s", "t"]),
        plain(
            "fold",
            MAPPING,
            "t(X) :- q(X), not r(X).\nt(X) :- s(X).\n",
            &["p", "t"],
        ),
        plain(
            "chain",
            "c(X,Y,Z) :- r(X,Y), r(Y,Z).\n:- c(X,Y,Z), not r(X,Y).\n:- c(X,Y,Z), not r(Y,Z).\n",
            "r(X,Y) ; not r(X,Y).\n:- c(X,Y,Z), not r(X,Z).\n",
            &["r"],
        ),
        Problem {
            name: "positional",
            p: parse_program("p :- q.\nr :- p.\n").expect("fixture parses"),
            q: parse_program("s :- not r.\nr :- q.\n").expect("fixture parses"),
            vocab: VocabularySpec::Positional {
                plus: names(&["s"]),
                plus1: names(&["r"]),
                minus: names(&["p", "q", "r", "s"]),
            },
        },
    ]
}

/// Deterministic pseudo-random propositional program over `preds`
/// predicates with `rules` rules.
pub fn random_program(seed: u64, preds: usize, rules: usize) -> Program {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut pick = |k: u64| -> Vec<Atom> {
        (0..preds)
            .filter(|_| next() % k == 0)
            .map(|i| Atom::prop(format!("p{i}")))
            .collect()
    };
    Program::new(
        (0..rules)
            .map(|_| Rule::new(pick(3), pick(6), pick(3), pick(4)))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        assert_eq!(problems().len(), 5);
        let a = random_program(7, 6, 5);
        assert_eq!(a, random_program(7, 6, 5));
        assert_eq!(a.len(), 5);
    }
}
