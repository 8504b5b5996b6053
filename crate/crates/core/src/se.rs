//! Strong equivalence: `P` and `Q` are strongly equivalent iff
//! `S ∧ γ(P) ≡ S ∧ γ(Q)` for S over the predicates of both.

use std::collections::BTreeSet;
use std::fmt;

use crate::encoding::{gamma, s_formula};
use crate::entail::Verdict;
use crate::formula::{Formula, Superscript};
use crate::ground::{
    ground_entails_with, Countermodel, GroundError, GroundOutcome, DEFAULT_MAX_ATOMS,
};
use crate::program::{Atom, Program};
use crate::prover::{prove_entailment, SearchLimits};

/// An HT interpretation: atoms true "here" and atoms true "there".
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HtCountermodel {
    pub here: BTreeSet<Atom>,
    pub there: BTreeSet<Atom>,
    /// The program whose rules the interpretation satisfies (0 for the
    /// first argument, 1 for the second); the other one has a violated rule.
    pub model_of: usize,
}

impl HtCountermodel {
    pub fn from_model(m: &Countermodel, model_of: usize) -> Self {
        let mut out = HtCountermodel {
            model_of,
            ..Default::default()
        };
        for a in &m.true_atoms {
            let atom = Atom::new(a.pred.lp_name(), a.args.clone());
            match a.pred.sup {
                Superscript::Zero => out.here.insert(atom),
                Superscript::One => out.there.insert(atom),
            };
        }
        out
    }
}

impl fmt::Display for HtCountermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &BTreeSet<Atom>| {
            s.iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "here = {{{}}}, there = {{{}}}, satisfies program {} only",
            show(&self.here),
            show(&self.there),
            self.model_of + 1
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeOutcome {
    Equivalent,
    NotEquivalent(HtCountermodel),
}

fn sides(p: &Program, q: &Program) -> (Formula, Formula, Formula) {
    let preds = p.predicates().union(&q.predicates()).cloned().collect();
    (s_formula(&preds), gamma(p), gamma(q))
}

/// Exact check for function-free programs.
pub fn se_oracle_ground(p: &Program, q: &Program) -> Result<SeOutcome, GroundError> {
    se_oracle_ground_with(p, q, DEFAULT_MAX_ATOMS)
}

pub fn se_oracle_ground_with(
    p: &Program,
    q: &Program,
    max_atoms: usize,
) -> Result<SeOutcome, GroundError> {
    let (s, gp, gq) = sides(p, q);
    for (from, to, model_of) in [(&gp, &gq, 0), (&gq, &gp, 1)] {
        let left = Formula::conj([s.clone(), from.clone()]);
        if let GroundOutcome::Refuted(m) = ground_entails_with(&left, to, max_atoms)? {
            return Ok(SeOutcome::NotEquivalent(HtCountermodel::from_model(
                &m, model_of,
            )));
        }
    }
    Ok(SeOutcome::Equivalent)
}

/// Prover-based check; `True` when both directions are proved, otherwise
/// `Unknown`. The two directions are searched concurrently.
pub fn strongly_equivalent(p: &Program, q: &Program, limits: &SearchLimits) -> Verdict {
    let (s, gp, gq) = sides(p, q);
    let l1 = Formula::conj([s.clone(), gp.clone()]);
    let l2 = Formula::conj([s, gq.clone()]);
    let (a, b) = std::thread::scope(|sc| {
        let h = sc.spawn(|| prove_entailment(&l1, &gq, limits).is_ok());
        let b = prove_entailment(&l2, &gp, limits).is_ok();
        (h.join().unwrap_or(false), b)
    });
    if a && b {
        Verdict::True
    } else {
        Verdict::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn prog(t: &str) -> Program {
        parse_program(t).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let p = prog("r :- p, not q.\nnot s :- not t, not u.\nnot p :- not q, not r.");
        let p2 = prog("r :- p, not q.\nnot s :- not t, not u.");
        assert_eq!(se_oracle_ground(&p, &p2).unwrap(), SeOutcome::Equivalent);
        assert_eq!(se_oracle_ground(&p, &p).unwrap(), SeOutcome::Equivalent);

        match se_oracle_ground(&prog("p."), &prog("p :- not q.")).unwrap() {
            SeOutcome::NotEquivalent(m) => {
                assert_eq!(m.model_of, 1);
                assert!(!m.here.contains(&Atom::prop("p")));
                assert!(m.there.contains(&Atom::prop("q")));
            }
            SeOutcome::Equivalent => panic!("expected a countermodel"),
        }
        match se_oracle_ground(&prog("p."), &Program::default()).unwrap() {
            SeOutcome::NotEquivalent(m) => assert!(m.here.is_empty()),
            SeOutcome::Equivalent => panic!("expected a countermodel"),
        }
    }

    #[test]
    fn prover_agrees_on_small_pairs() {
        let l = SearchLimits::default();
        let p = prog("r :- p, not q.\nnot s :- not t, not u.\nnot p :- not q, not r.");
        let p2 = prog("r :- p, not q.\nnot s :- not t, not u.");
        assert_eq!(strongly_equivalent(&p, &p2, &l), Verdict::True);
        assert_eq!(
            strongly_equivalent(&prog("p."), &prog("p :- not q."), &l),
            Verdict::Unknown
        );
    }

    #[test]
    fn variables_are_handled_exactly() {
        let q = prog("q :- q, s.\np :- q, r.\np ; q :- r.");
        let r = prog("p :- r.\np ; q :- r.\nq :- q, s.");
        assert_eq!(se_oracle_ground(&q, &r).unwrap(), SeOutcome::Equivalent);
        let a = prog("p(X) :- q(X).");
        let b = prog("p(X) :- q(X), r(X).");
        assert!(matches!(
            se_oracle_ground(&a, &b).unwrap(),
            SeOutcome::NotEquivalent(_)
        ));
    }
}
