//! Synthesis of programs over a restricted vocabulary.
//!
//! Given a context `P`, a target `Q` and a vocabulary, look for `R` in that
//! vocabulary such that `P ∪ R` is strongly equivalent to `P ∪ Q`. Such an
//! `R` exists iff
//!
//! ```text
//! S ∧ γ(P) ∧ γ(Q) ⊨ ¬S′ ∨ ¬γ(P)′ ∨ γ(Q)′
//! ```
//!
//! where primes rename the predicates outside the vocabulary apart. An
//! LP-interpolant of that entailment decodes to `R`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::decode::{decode_with, DecodeError, DecodeOptions};
use crate::encoding::{gamma, s_formula};
use crate::entail::Verdict;
use crate::formula::{
    formula_functions, pred_signed, Formula, Polarity, SignedPredicate, SuperPredicate, Superscript,
};
use crate::ground::{
    ground_entails_with, Countermodel, GroundError, GroundOutcome, DEFAULT_MAX_ATOMS,
};
use crate::interpolation::{
    craig_lyndon_interpolants, lp_from_prime, InterpolationError, InterpolationTask,
};
use crate::program::{Atom, Program};
use crate::prover::SearchLimits;
use crate::se::{se_oracle_ground_with, strongly_equivalent, SeOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VocabularySpec {
    Plain(BTreeSet<String>),
    Positional {
        plus: BTreeSet<String>,
        plus1: BTreeSet<String>,
        minus: BTreeSet<String>,
    },
}

impl VocabularySpec {
    /// Every predicate of `P ∪ Q` except the hidden ones.
    pub fn complement(p: &Program, q: &Program, hidden: &BTreeSet<String>) -> Self {
        let all = predicate_names(p, q);
        VocabularySpec::Plain(all.difference(hidden).cloned().collect())
    }

    fn names(&self) -> BTreeSet<String> {
        match self {
            VocabularySpec::Plain(v) => v.clone(),
            VocabularySpec::Positional { plus, plus1, minus } => {
                plus.iter().chain(plus1).chain(minus).cloned().collect()
            }
        }
    }
}

/// Signed superscripted predicates allowed by a positional vocabulary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignedVocab {
    pub pairs: BTreeSet<SignedPredicate>,
}

impl SignedVocab {
    /// `{+p⁰ | p ∈ V₊} ∪ {+p¹ | p ∈ V₊ ∪ V₊₁} ∪ {−p⁰, −p¹ | p ∈ V₋}` over the
    /// predicates (with their arities) of the given programs.
    pub fn build(
        p: &Program,
        q: &Program,
        plus: &BTreeSet<String>,
        plus1: &BTreeSet<String>,
        minus: &BTreeSet<String>,
    ) -> Self {
        let mut pairs = BTreeSet::new();
        for (name, arity) in p.predicates().union(&q.predicates()) {
            let at = |s| SuperPredicate::new(name.clone(), *arity, s);
            if plus.contains(name) {
                pairs.insert(SignedPredicate::pos(at(Superscript::Zero)));
            }
            if plus.contains(name) || plus1.contains(name) {
                pairs.insert(SignedPredicate::pos(at(Superscript::One)));
            }
            if minus.contains(name) {
                pairs.insert(SignedPredicate::neg(at(Superscript::Zero)));
                pairs.insert(SignedPredicate::neg(at(Superscript::One)));
            }
        }
        SignedVocab { pairs }
    }

    pub fn contains(&self, pol: Polarity, p: &SuperPredicate) -> bool {
        self.pairs.contains(&SignedPredicate::new(pol, p.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("vocabulary names predicates not occurring in either program: {0}")]
    Vocabulary(String),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("decoded program is malformed: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthesisResult {
    Found(Program),
    /// No program exists; on ground inputs this carries a model refuting the
    /// characterizing entailment.
    NotFound(Option<Countermodel>),
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerificationMethod {
    GroundOracle,
    Prover,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisReport {
    pub result: SynthesisResult,
    pub left: Formula,
    pub right: Formula,
    /// `H′` as extracted; `None` unless an interpolant was computed.
    pub interpolant: Option<Formula>,
    pub lp_interpolant: Option<Formula>,
    pub verification: Option<(Verdict, VerificationMethod)>,
    /// Further verified solutions from alternative proofs.
    pub alternatives: Vec<Program>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthesisOptions {
    pub limits: SearchLimits,
    pub decode: DecodeOptions,
    /// Number of solutions to look for (1 = no enumeration).
    pub enumerate: usize,
    pub max_atoms: usize,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            limits: SearchLimits::default(),
            decode: DecodeOptions::default(),
            enumerate: 1,
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }
}

fn predicate_names(p: &Program, q: &Program) -> BTreeSet<String> {
    p.predicates()
        .union(&q.predicates())
        .map(|(n, _)| n.clone())
        .collect()
}

fn left_side(p: &Program, q: &Program) -> Formula {
    let preds = p.predicates().union(&q.predicates()).cloned().collect();
    Formula::conj([s_formula(&preds), gamma(p), gamma(q)]).simplify_constants()
}

/// `¬S ∨ ¬γ(P) ∨ γ(Q)` with S over the predicates of both programs.
fn unprimed_right(p: &Program, q: &Program) -> Formula {
    let preds = p.predicates().union(&q.predicates()).cloned().collect();
    Formula::disj([
        Formula::not(s_formula(&preds)),
        Formula::not(gamma(p)),
        gamma(q),
    ])
    .simplify_constants()
}

fn prime_where(f: &Formula, primed: &impl Fn(&SuperPredicate) -> bool) -> Formula {
    f.map_atoms(&mut |a| {
        let mut a = a.clone();
        if primed(&a.pred) {
            a.pred = a.pred.primed();
        }
        Formula::Atom(a)
    })
}

/// Left and right side of the characterizing entailment for a plain
/// vocabulary.
pub fn definability_entailment(
    p: &Program,
    q: &Program,
    v: &BTreeSet<String>,
) -> (Formula, Formula) {
    let right = prime_where(&unprimed_right(p, q), &|sp| !v.contains(&sp.name));
    (left_side(p, q), right)
}

/// Left side, right side and the auxiliary formula for a positional
/// vocabulary. Superscripted predicates allowed in only one polarity (or
/// not at all) are primed; the auxiliary formula links a one-polarity
/// predicate to its primed copy in the allowed direction. Primed predicates
/// that end up occurring in only one polarity are replaced by the truth
/// value that makes the right side weakest.
pub fn positional_entailment(
    p: &Program,
    q: &Program,
    plus: &BTreeSet<String>,
    plus1: &BTreeSet<String>,
    minus: &BTreeSet<String>,
) -> (Formula, Formula, Formula) {
    let vpm = SignedVocab::build(p, q, plus, plus1, minus);
    let base = unprimed_right(p, q);
    let w = pred_signed(&base);
    let keep =
        |sp: &SuperPredicate| vpm.contains(Polarity::Pos, sp) && vpm.contains(Polarity::Neg, sp);

    let mut supers = BTreeSet::new();
    for (name, arity) in p.predicates().union(&q.predicates()) {
        for s in [Superscript::Zero, Superscript::One] {
            supers.insert(SuperPredicate::new(name.clone(), *arity, s));
        }
    }
    let mut aux = Vec::new();
    for sp in &supers {
        let (pos, neg) = (
            vpm.contains(Polarity::Pos, sp),
            vpm.contains(Polarity::Neg, sp),
        );
        let vars: Vec<String> = (1..=sp.arity).map(|i| format!("X{i}")).collect();
        let args: Vec<crate::term::Term> = vars.iter().map(crate::term::Term::var).collect();
        let plain = Formula::atom(sp.clone(), args.clone());
        let primed = Formula::atom(sp.primed(), args);
        if pos && !neg && w.contains(&SignedPredicate::pos(sp.clone())) {
            aux.push(Formula::forall(vars, Formula::implies(plain, primed)));
        } else if neg && !pos && w.contains(&SignedPredicate::neg(sp.clone())) {
            aux.push(Formula::forall(vars, Formula::implies(primed, plain)));
        }
    }
    let aux = Formula::conj(aux);
    let primed_base = prime_where(&base, &|sp| !keep(sp));
    let right = Formula::disj([primed_base, Formula::not(aux.clone())]);

    let signed = pred_signed(&right);
    let right = right
        .map_atoms(&mut |a| {
            if !a.pred.primed {
                return Formula::Atom(a.clone());
            }
            let pos = signed.contains(&SignedPredicate::pos(a.pred.clone()));
            let neg = signed.contains(&SignedPredicate::neg(a.pred.clone()));
            match (pos, neg) {
                (true, false) => Formula::False,
                (false, true) => Formula::True,
                _ => Formula::Atom(a.clone()),
            }
        })
        .simplify_constants();
    (left_side(p, q), right, aux)
}

/// Whether `r` uses predicates only in the positions the vocabulary allows.
pub fn respects_vocabulary(r: &Program, v: &VocabularySpec) -> bool {
    fn names(atoms: &[Atom], allowed: &dyn Fn(&str) -> bool) -> bool {
        atoms.iter().all(|a| allowed(&a.predicate))
    }
    match v {
        VocabularySpec::Plain(v) => r.predicates().iter().all(|(n, _)| v.contains(n)),
        VocabularySpec::Positional { plus, plus1, minus } => r.rules.iter().all(|rule| {
            names(&rule.pos_head, &|n| plus.contains(n))
                && names(&rule.neg_body, &|n| plus.contains(n) || plus1.contains(n))
                && names(&rule.neg_head, &|n| minus.contains(n))
                && names(&rule.pos_body, &|n| minus.contains(n))
        }),
    }
}

fn function_free(f: &Formula) -> bool {
    formula_functions(f).iter().all(|(_, arity)| *arity == 0)
}

/// Verifies `P ∪ R ≡ P ∪ Q`, with the exact oracle when possible.
pub fn verify(
    p: &Program,
    q: &Program,
    r: &Program,
    opts: &SynthesisOptions,
) -> (Verdict, VerificationMethod) {
    let pr = p.union(r);
    let pq = p.union(q);
    if pr
        .functions()
        .iter()
        .chain(pq.functions().iter())
        .all(|(_, a)| *a == 0)
    {
        match se_oracle_ground_with(&pr, &pq, opts.max_atoms) {
            Ok(SeOutcome::Equivalent) => return (Verdict::True, VerificationMethod::GroundOracle),
            Ok(SeOutcome::NotEquivalent(_)) => {
                return (Verdict::False, VerificationMethod::GroundOracle)
            }
            Err(_) => {}
        }
    }
    (
        strongly_equivalent(&pr, &pq, &opts.limits),
        VerificationMethod::Prover,
    )
}

pub fn synthesize(
    p: &Program,
    q: &Program,
    v: &VocabularySpec,
    opts: &SynthesisOptions,
) -> Result<SynthesisReport, SynthesisError> {
    let known = predicate_names(p, q);
    let unknown: Vec<String> = v.names().difference(&known).cloned().collect();
    if !unknown.is_empty() {
        return Err(SynthesisError::Vocabulary(unknown.join(", ")));
    }
    let (left, right) = match v {
        VocabularySpec::Plain(names) => definability_entailment(p, q, names),
        VocabularySpec::Positional { plus, plus1, minus } => {
            let (l, r, _) = positional_entailment(p, q, plus, plus1, minus);
            (l, r)
        }
    };
    let mut report = SynthesisReport {
        result: SynthesisResult::Unknown(String::new()),
        left: left.clone(),
        right: right.clone(),
        interpolant: None,
        lp_interpolant: None,
        verification: None,
        alternatives: Vec::new(),
    };

    if function_free(&left) && function_free(&right) {
        if let GroundOutcome::Refuted(m) = ground_entails_with(&left, &right, opts.max_atoms)? {
            report.result = SynthesisResult::NotFound(Some(m));
            return Ok(report);
        }
    }

    let task = InterpolationTask::new(left, right);
    let interpolants = match craig_lyndon_interpolants(&task, &opts.limits, opts.enumerate.max(1)) {
        Ok(hs) => hs,
        Err(InterpolationError::Unknown(u)) => {
            report.result = SynthesisResult::Unknown(u.to_string());
            return Ok(report);
        }
        Err(e) => return Err(SynthesisError::Internal(e.to_string())),
    };

    let allowed_funs: BTreeSet<_> = p.functions().union(&q.functions()).cloned().collect();
    for h_prime in interpolants {
        let lp = lp_from_prime(&h_prime);
        let r = match decode_with(&lp.h, opts.decode) {
            Ok(r) => r,
            Err(e @ (DecodeError::Reserved(_) | DecodeError::NotUniversal)) => {
                return Err(SynthesisError::Internal(e.to_string()))
            }
            Err(e) => return Err(SynthesisError::Internal(e.to_string())),
        };
        if !respects_vocabulary(&r, v) || !r.functions().is_subset(&allowed_funs) {
            return Err(SynthesisError::Internal(format!(
                "solution leaves the vocabulary:\n{r}"
            )));
        }
        let verdict = verify(p, q, &r, opts);
        if verdict.0 != Verdict::True {
            if report.verification.is_none() {
                report.verification = Some(verdict);
                report.interpolant = Some(h_prime);
                report.lp_interpolant = Some(lp.h);
            }
            continue;
        }
        match report.result {
            SynthesisResult::Found(_) => {
                if !report.alternatives.contains(&r) {
                    report.alternatives.push(r)
                }
            }
            _ => {
                report.result = SynthesisResult::Found(r);
                report.interpolant = Some(h_prime);
                report.lp_interpolant = Some(lp.h);
                report.verification = Some(verdict);
            }
        }
    }
    if !matches!(report.result, SynthesisResult::Found(_)) {
        report.result = SynthesisResult::Unknown("no candidate passed verification".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn prog(t: &str) -> Program {
        parse_program(t).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn full_vocabulary_needs_no_priming() {
        let p = prog("p :- q.");
        let q = prog("r :- p.");
        let (_, right) = definability_entailment(&p, &q, &set(&["p", "q", "r"]));
        assert!(right.predicates().iter().all(|sp| !sp.primed));
        let (_, right) = definability_entailment(&p, &q, &set(&["p", "r"]));
        assert!(right
            .predicates()
            .iter()
            .any(|sp| sp.primed && sp.name == "q"));
    }

    #[test]
    fn positional_full_vocabulary_has_trivial_aux() {
        let p = prog("p :- q.");
        let q = prog("r :- p.");
        let all = set(&["p", "q", "r"]);
        let (_, right, aux) = positional_entailment(&p, &q, &all, &BTreeSet::new(), &all);
        assert_eq!(aux, Formula::True);
        assert_eq!(right, unprimed_right(&p, &q).simplify_constants());
    }

    #[test]
    fn vocabulary_is_validated() {
        let r = synthesize(
            &Program::default(),
            &prog("p :- q."),
            &VocabularySpec::Plain(set(&["z"])),
            &SynthesisOptions::default(),
        );
        assert!(matches!(r, Err(SynthesisError::Vocabulary(_))));
    }

    #[test]
    fn simple_synthesis() {
        let q = prog("p :- q, r.\np ; q :- r.\nq :- q, s.");
        let rep = synthesize(
            &Program::default(),
            &q,
            &VocabularySpec::Plain(set(&["p", "r"])),
            &SynthesisOptions::default(),
        )
        .unwrap();
        match rep.result {
            SynthesisResult::Found(r) => {
                assert_eq!(
                    se_oracle_ground_with(&r, &prog("p :- r."), 4096).unwrap(),
                    SeOutcome::Equivalent
                )
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn impossible_vocabulary_is_not_found() {
        // q cannot be expressed without q.
        let rep = synthesize(
            &Program::default(),
            &prog("q :- p."),
            &VocabularySpec::Plain(set(&["p"])),
            &SynthesisOptions::default(),
        )
        .unwrap();
        assert!(matches!(rep.result, SynthesisResult::NotFound(Some(_))));
    }
}
