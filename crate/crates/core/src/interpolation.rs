//! Craig-Lyndon interpolants read off closed connection tableaux.
//!
//! Left clauses come from the antecedent, right clauses from the negated
//! consequent. On a ground proof, a leaf closed against an ancestor yields
//! `⊥` when both are left literals, `⊤` when both are right literals, and
//! the left literal of the pair otherwise. Inner nodes combine the values of
//! their children disjunctively when the children's clause is a left clause
//! and conjunctively when it is a right clause.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::clausify::{clausify, Clausifier, ClausifyMode};
use crate::decode::simplify_clauses;
use crate::encoding::s_formula_of;
use crate::formula::{
    clauses_to_formula, formula_functions, is_universal, rename_0_to_1, FAtom, Formula,
};
use crate::prover::{
    entailment_problems, ground_proof, prove_many, Proof, SearchLimits, Side, Unknown,
};
use crate::term::{Signature, Term};

/// Clausal forms above this size are left unsimplified.
const SIMPLIFY_CLAUSE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationTask {
    pub left: Formula,
    pub right: Formula,
    pub shared_functions: BTreeSet<Signature>,
}

impl InterpolationTask {
    pub fn new(left: Formula, right: Formula) -> Self {
        let shared_functions = formula_functions(&left);
        InterpolationTask {
            left,
            right,
            shared_functions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpolationError {
    #[error("no proof found: {0}")]
    Unknown(Unknown),
    #[error("left side must be universal")]
    NonUniversalLeft,
}

/// `H′` together with `H = H′ ∧ rename₀→₁(H′)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpInterpolant {
    pub h_prime: Formula,
    pub h: Formula,
}

/// Interpolant of a proof; the proof is grounded first if needed.
pub fn extract_ground_interpolant(p: &Proof) -> Formula {
    let p = if p.is_ground() && p.global_subst.is_empty() {
        p.clone()
    } else {
        ground_proof(p)
    };
    fn node(p: &Proof, id: usize) -> Formula {
        let n = &p.nodes[id];
        match n.closed_by {
            Some(t) => {
                let target = &p.nodes[t];
                match (n.side, target.side) {
                    (Side::Left, Side::Left) => Formula::False,
                    (Side::Right, Side::Right) => Formula::True,
                    (Side::Left, Side::Right) => n.literal.to_formula(),
                    (Side::Right, Side::Left) => target.literal.to_formula(),
                }
            }
            None => combine(
                p.nodes[n.children[0]].side,
                n.children.iter().map(|&c| node(p, c)).collect(),
            ),
        }
    }
    fn combine(side: Side, parts: Vec<Formula>) -> Formula {
        match side {
            Side::Left => Formula::disj(parts),
            Side::Right => Formula::conj(parts),
        }
    }
    let parts = p.start.iter().map(|&c| node(&p, c)).collect();
    combine(p.clauses[p.start_clause].side, parts).simplify_constants()
}

/// Replaces every maximal term whose top symbol is not shared by a
/// universally quantified variable.
pub fn lift_interpolant(h0: &Formula, shared_functions: &BTreeSet<Signature>) -> Formula {
    let mut table: BTreeMap<Term, String> = BTreeMap::new();
    fn abstract_term(
        t: &Term,
        shared: &BTreeSet<Signature>,
        table: &mut BTreeMap<Term, String>,
    ) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => {
                if shared.contains(&(f.clone(), args.len())) {
                    Term::App(
                        f.clone(),
                        args.iter()
                            .map(|a| abstract_term(a, shared, table))
                            .collect(),
                    )
                } else {
                    let n = table.len() + 1;
                    Term::Var(
                        table
                            .entry(t.clone())
                            .or_insert_with(|| format!("U{n}"))
                            .clone(),
                    )
                }
            }
        }
    }
    let body = h0.map_atoms(&mut |a| {
        Formula::Atom(FAtom::new(
            a.pred.clone(),
            a.args
                .iter()
                .map(|t| abstract_term(t, shared_functions, &mut table))
                .collect(),
        ))
    });
    let mut vars: Vec<String> = table.into_values().collect();
    vars.sort_by_key(|v| v[1..].parse::<usize>().unwrap_or(0));
    Formula::forall(vars, body)
}

/// Constant folding, then (when small enough) clausal form with tautology,
/// duplicate and subsumption removal.
pub fn simplify_interpolant(h: &Formula) -> Formula {
    let h = h.simplify_constants();
    match clausify(&h, ClausifyMode::UniversalOnly) {
        Ok(cf) if cf.len() <= SIMPLIFY_CLAUSE_CAP => clauses_to_formula(&simplify_clauses(&cf)),
        _ => h,
    }
}

/// One universal Craig-Lyndon interpolant of `left ⊨ right`.
pub fn craig_lyndon_interpolant(
    task: &InterpolationTask,
    limits: &SearchLimits,
) -> Result<Formula, InterpolationError> {
    craig_lyndon_interpolants(task, limits, 1).map(|mut v| v.remove(0))
}

/// Up to `n` distinct interpolants from alternative proofs, in discovery
/// order. The negated right side is split into independent problems; the
/// k-th alternative combines the k-th proof of each piece where one exists.
pub fn craig_lyndon_interpolants(
    task: &InterpolationTask,
    limits: &SearchLimits,
    n: usize,
) -> Result<Vec<Formula>, InterpolationError> {
    if !is_universal(&task.left) {
        return Err(InterpolationError::NonUniversalLeft);
    }
    let mut per_piece: Vec<Vec<Formula>> = Vec::new();
    for problem in entailment_problems(&task.left, &task.right, &mut Clausifier::new()) {
        let (proofs, why) = prove_many(&problem, limits, n.max(1));
        if proofs.is_empty() {
            return Err(InterpolationError::Unknown(
                why.unwrap_or(Unknown::Saturated),
            ));
        }
        let mut seen = BTreeSet::new();
        let ipols: Vec<Formula> = proofs
            .iter()
            .map(|p| lift_interpolant(&extract_ground_interpolant(p), &task.shared_functions))
            .filter(|f| seen.insert(f.to_string()))
            .collect();
        per_piece.push(ipols);
    }
    let widest = per_piece.iter().map(Vec::len).max().unwrap_or(1).max(1);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for k in 0..widest.min(n.max(1)) {
        let h = simplify_interpolant(&Formula::conj(
            per_piece
                .iter()
                .map(|alts| alts[k.min(alts.len() - 1)].clone()),
        ));
        if seen.insert(h.to_string()) {
            out.push(h);
        }
    }
    Ok(out)
}

/// `H′ ∧ rename₀→₁(H′)`.
pub fn lp_from_prime(h_prime: &Formula) -> LpInterpolant {
    let h = Formula::conj([h_prime.clone(), rename_0_to_1(h_prime)]);
    LpInterpolant {
        h_prime: h_prime.clone(),
        h: simplify_interpolant(&h),
    }
}

/// LP-interpolant for `F` and `G`: interpolates `S_F ∧ F` and `S_G → G`.
pub fn lp_interpolant(
    f: &Formula,
    g: &Formula,
    limits: &SearchLimits,
) -> Result<LpInterpolant, InterpolationError> {
    let task = InterpolationTask::new(
        Formula::conj([s_formula_of(f), f.clone()]),
        Formula::implies(s_formula_of(g), g.clone()),
    );
    lp_interpolant_task(&task, limits)
}

/// LP-interpolant for explicitly given interpolation sides.
pub fn lp_interpolant_task(
    task: &InterpolationTask,
    limits: &SearchLimits,
) -> Result<LpInterpolant, InterpolationError> {
    craig_lyndon_interpolant(task, limits).map(|h| lp_from_prime(&h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::testutil::*;
    use crate::formula::{Clause, Literal, SuperPredicate, Superscript};
    use crate::ground::ground_entails;
    use crate::prover::{prove, ColoredClause};

    fn cc(lits: Vec<Literal>, side: Side) -> ColoredClause {
        ColoredClause::new(Clause::new(lits), side, "t")
    }

    #[test]
    fn single_cross_connection() {
        let cs = vec![
            cc(vec![lit(true, "p", 0)], Side::Left),
            cc(vec![lit(false, "p", 0)], Side::Right),
        ];
        let p = prove(&cs, &SearchLimits::default()).unwrap();
        assert_eq!(extract_ground_interpolant(&p), pa("p", 0));
    }

    #[test]
    fn left_contradiction_gives_false() {
        let cs = vec![
            cc(vec![lit(true, "p", 0)], Side::Left),
            cc(vec![lit(false, "p", 0)], Side::Left),
        ];
        let p = prove(&cs, &SearchLimits::default()).unwrap();
        assert_eq!(extract_ground_interpolant(&p), Formula::False);
    }

    #[test]
    fn chain_through_left() {
        let left = Formula::conj([pa("q", 0), Formula::implies(pa("q", 0), pa("r", 0))]);
        let right = Formula::disj([pa("r", 0), pa("s", 0)]);
        let h = craig_lyndon_interpolant(
            &InterpolationTask::new(left.clone(), right.clone()),
            &SearchLimits::default(),
        )
        .unwrap();
        assert_eq!(h, pa("r", 0));
        assert!(ground_entails(&left, &h).unwrap() && ground_entails(&h, &right).unwrap());
    }

    #[test]
    fn lifting_abstracts_alien_terms() {
        let p1 = |t: Term| Formula::atom(SuperPredicate::new("q", 1, Superscript::Zero), vec![t]);
        assert_eq!(lift_interpolant(&pa("r", 0), &BTreeSet::new()), pa("r", 0));
        let lifted = lift_interpolant(&p1(Term::constant("sk_1")), &BTreeSet::new());
        assert_eq!(
            lifted,
            Formula::forall(vec!["U1".into()], p1(Term::var("U1")))
        );
        let p2 = Formula::atom(
            SuperPredicate::new("p", 2, Superscript::Zero),
            vec![
                Term::constant("sk_1"),
                Term::app("f", vec![Term::constant("sk_1")]),
            ],
        );
        let shared = BTreeSet::from([("f".to_string(), 1)]);
        assert_eq!(
            lift_interpolant(&p2, &shared).to_string(),
            "! [U1] : p__0(U1,f(U1))"
        );
    }

    #[test]
    fn lp_construction_and_trivial_cases() {
        let x = Term::var("X");
        let at = |n: &str, s| Formula::atom(SuperPredicate::new(n, 1, s), vec![x.clone()]);
        let hp = Formula::forall(
            vec!["X".into()],
            Formula::implies(at("p", Superscript::Zero), at("r", Superscript::Zero)),
        );
        let lp = lp_from_prime(&hp);
        assert_eq!(lp.h.children().len(), 2);
        assert_eq!(lp_from_prime(&Formula::False).h, Formula::False);
        let h = lp_interpolant(&pa("p", 0), &pa("p", 0), &SearchLimits::default()).unwrap();
        assert!(ground_entails(&h.h, &pa("p", 0)).unwrap());
    }

    #[test]
    fn unprovable_task_is_unknown() {
        let t = InterpolationTask::new(pa("p", 0), pa("q", 0));
        assert!(matches!(
            craig_lyndon_interpolant(&t, &SearchLimits::default()),
            Err(InterpolationError::Unknown(_))
        ));
    }
}
