//! Reading a logic program back off a formula that encodes one.
//!
//! The formula is brought into clausal form and simplified modulo the S
//! axioms. Clauses with a 0-superscripted literal form M₀; the rest (M₁) is
//! split into clauses that must be kept and clauses already implied by the
//! renamed M₀. Each kept clause becomes one rule:
//!
//! | literal | rule component |
//! |---------|----------------|
//! | ¬A⁰     | positive body  |
//! | A¹      | negative body  |
//! | A⁰      | positive head  |
//! | ¬A¹     | negative head  |

use thiserror::Error;

use crate::clausify::{clausify, ClausifyMode, SKOLEM_PREFIX};
use crate::encoding::encodes_program_check;
use crate::entail::{Decider, Verdict};
use crate::formula::{ClausalForm, Clause, Formula, Literal, Superscript};
use crate::program::{Atom, Program, Rule};
use crate::term::{match_into, Substitution, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("formula is not universal")]
    NotUniversal,
    #[error("formula does not encode a logic program")]
    NotAnEncoding,
    #[error("could not decide whether the formula encodes a logic program")]
    Undetermined,
    #[error("internal symbol `{0}` cannot appear in a program")]
    Reserved(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Keep all of M₁ instead of dropping clauses implied by M₀.
    pub trivial_partition: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DecodePartition {
    pub m0: ClausalForm,
    pub m1_keep: ClausalForm,
    pub m1_drop: ClausalForm,
    /// For each dropped clause: the M₀ clause whose renaming subsumes it,
    /// and the matching substitution.
    pub witnesses: Vec<(usize, Substitution)>,
}

pub fn decode(f: &Formula) -> Result<Program, DecodeError> {
    decode_with(f, DecodeOptions::default())
}

/// Runs the encoding check first, so non-encodings are reported rather than
/// decoded into a program with a different meaning.
pub fn decode_checked(
    f: &Formula,
    decider: &Decider,
    opts: DecodeOptions,
) -> Result<Program, DecodeError> {
    match encodes_program_check(f, decider) {
        Verdict::True => decode_with(f, opts),
        Verdict::False => Err(DecodeError::NotAnEncoding),
        Verdict::Unknown => Err(DecodeError::Undetermined),
    }
}

pub fn decode_with(f: &Formula, opts: DecodeOptions) -> Result<Program, DecodeError> {
    let cf = clausify(f, ClausifyMode::UniversalOnly).map_err(|_| DecodeError::NotUniversal)?;
    for c in &cf {
        for l in &c.literals {
            if l.atom.pred.primed {
                return Err(DecodeError::Reserved(l.atom.pred.lp_name()));
            }
            let mut funs = Default::default();
            l.atom
                .args
                .iter()
                .for_each(|t| t.collect_functions(&mut funs));
            if let Some((name, _)) = funs.into_iter().find(|(n, _)| n.starts_with(SKOLEM_PREFIX)) {
                return Err(DecodeError::Reserved(name));
            }
        }
    }
    let cf = simplify_modulo_s(&cf);
    let (m0, m1): (ClausalForm, ClausalForm) = cf.into_iter().partition(|c| {
        c.literals
            .iter()
            .any(|l| l.atom.pred.sup == Superscript::Zero)
    });
    let part = if opts.trivial_partition {
        DecodePartition {
            m1_keep: m1,
            m0,
            ..Default::default()
        }
    } else {
        partition_m1(&m0, &m1)
    };
    Ok(Program::new(
        part.m0
            .iter()
            .chain(&part.m1_keep)
            .map(clause_to_rule)
            .collect(),
    ))
}

/// Splits M₁ by whether some renamed M₀ clause subsumes the clause.
pub fn partition_m1(m0: &[Clause], m1: &[Clause]) -> DecodePartition {
    let renamed: Vec<Clause> = m0
        .iter()
        .map(|d| d.rename_0_to_1().canonical("_D"))
        .collect();
    let mut part = DecodePartition {
        m0: m0.to_vec(),
        ..Default::default()
    };
    for c in m1 {
        let hit = renamed
            .iter()
            .enumerate()
            .find_map(|(i, d)| subsumes(d, c, same_signed_pred).map(|s| (i, s)));
        match hit {
            Some(w) => {
                part.m1_drop.push(c.clone());
                part.witnesses.push(w);
            }
            None => part.m1_keep.push(c.clone()),
        }
    }
    part
}

fn same_signed_pred(a: &Literal, b: &Literal) -> bool {
    a.positive == b.positive && a.atom.pred == b.atom.pred
}

/// Whether literal `a` entails literal `b` given the S axioms, ignoring
/// arguments: `p⁰` entails `p¹` and `¬p¹` entails `¬p⁰`.
fn s_covers(a: &Literal, b: &Literal) -> bool {
    if a.positive != b.positive
        || a.atom.pred.name != b.atom.pred.name
        || a.atom.pred.primed != b.atom.pred.primed
    {
        return false;
    }
    let (sa, sb) = (a.atom.pred.sup, b.atom.pred.sup);
    sa == sb || (a.positive && sa == Superscript::Zero) || (!a.positive && sa == Superscript::One)
}

fn s_tautology(c: &Clause) -> bool {
    c.is_tautology()
        || c.literals.iter().any(|l| {
            !l.positive
                && l.atom.pred.sup == Superscript::Zero
                && c.literals.iter().any(|m| {
                    m.positive
                        && m.atom.pred.sup == Superscript::One
                        && m.atom.pred.name == l.atom.pred.name
                        && m.atom.pred.primed == l.atom.pred.primed
                        && m.atom.args == l.atom.args
                })
        })
}

/// A substitution θ with every literal of `dθ` related by `covers` to a
/// literal of `c`. Variables of `c` are treated as constants.
fn subsumes(
    d: &Clause,
    c: &Clause,
    covers: impl Fn(&Literal, &Literal) -> bool + Copy,
) -> Option<Substitution> {
    fn go(
        d: &[Literal],
        c: &Clause,
        s: Substitution,
        covers: impl Fn(&Literal, &Literal) -> bool + Copy,
    ) -> Option<Substitution> {
        let Some((first, rest)) = d.split_first() else {
            return Some(s);
        };
        for target in &c.literals {
            if !covers(first, target) || first.atom.args.len() != target.atom.args.len() {
                continue;
            }
            let mut s2 = s.clone();
            if first
                .atom
                .args
                .iter()
                .zip(&target.atom.args)
                .all(|(p, t)| match_into(p, t, &mut s2))
            {
                if let Some(r) = go(rest, c, s2, covers) {
                    return Some(r);
                }
            }
        }
        None
    }
    if d.len() > c.len() && d.vars().is_empty() {
        return None;
    }
    go(&d.literals, c, Substitution::new(), covers)
}

/// Removes S-tautologies and S-subsumed clauses. Conjoined with the S
/// axioms, the result is equivalent to the input conjoined with them.
pub fn simplify_modulo_s(cf: &[Clause]) -> ClausalForm {
    let cands: Vec<Clause> = cf.iter().filter(|c| !s_tautology(c)).cloned().collect();
    let renamed: Vec<Clause> = cands.iter().map(|c| c.canonical("_S")).collect();
    let mut alive = vec![true; cands.len()];
    for i in 0..cands.len() {
        for j in 0..cands.len() {
            if i == j || !alive[j] || !alive[i] {
                continue;
            }
            if subsumes(&renamed[j], &cands[i], s_covers).is_some() {
                // Mutual subsumption keeps the earlier clause.
                let mutual = subsumes(&renamed[i], &cands[j], s_covers).is_some();
                if !mutual || j < i {
                    alive[i] = false;
                }
            }
        }
    }
    cands
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(c, _)| c)
        .collect()
}

/// Plain subsumption and tautology removal.
pub fn simplify_clauses(cf: &[Clause]) -> ClausalForm {
    let cands: Vec<Clause> = cf.iter().filter(|c| !c.is_tautology()).cloned().collect();
    let renamed: Vec<Clause> = cands.iter().map(|c| c.canonical("_S")).collect();
    let mut alive = vec![true; cands.len()];
    for i in 0..cands.len() {
        for j in 0..cands.len() {
            if i == j || !alive[j] || !alive[i] {
                continue;
            }
            if subsumes(&renamed[j], &cands[i], same_signed_pred).is_some() {
                let mutual = subsumes(&renamed[i], &cands[j], same_signed_pred).is_some();
                if !mutual || j < i {
                    alive[i] = false;
                }
            }
        }
    }
    cands
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(c, _)| c)
        .collect()
}

fn lp_atom(l: &Literal) -> Atom {
    Atom::new(l.atom.pred.name.clone(), l.atom.args.clone())
}

/// The rule read off one clause, with variables renamed to `X, Y, Z` (or
/// `X0, X1, …` when there are more than three) in order of appearance.
pub fn clause_to_rule(c: &Clause) -> Rule {
    let mut r = Rule::default();
    for l in &c.literals {
        let a = lp_atom(l);
        match (l.positive, l.atom.pred.sup) {
            (false, Superscript::Zero) => r.pos_body.push(a),
            (true, Superscript::One) => r.neg_body.push(a),
            (true, Superscript::Zero) => r.pos_head.push(a),
            (false, Superscript::One) => r.neg_head.push(a),
        }
    }
    sort_rule(&mut r);
    let vars = r.variables();
    let names: Vec<String> = if vars.len() <= 3 {
        ["X", "Y", "Z"]
            .iter()
            .take(vars.len())
            .map(|s| s.to_string())
            .collect()
    } else {
        (0..vars.len()).map(|i| format!("X{i}")).collect()
    };
    let s: Substitution = vars
        .into_iter()
        .zip(names)
        .map(|(v, n)| (v, Term::Var(n)))
        .collect();
    for list in [
        &mut r.pos_head,
        &mut r.neg_head,
        &mut r.pos_body,
        &mut r.neg_body,
    ] {
        for a in list.iter_mut() {
            a.args = a.args.iter().map(|t| t.apply(&s)).collect();
        }
    }
    sort_rule(&mut r);
    r.normalize();
    r
}

fn sort_rule(r: &mut Rule) {
    for list in [
        &mut r.pos_head,
        &mut r.neg_head,
        &mut r.pos_body,
        &mut r.neg_body,
    ] {
        list.sort();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::testutil::*;
    use crate::parser::parse_program;

    fn c(lits: &[(bool, &str, u8)]) -> Clause {
        Clause::new(lits.iter().map(|&(p, n, s)| lit(p, n, s)).collect())
    }

    fn three_clauses() -> (Clause, Clause, Clause) {
        (
            c(&[(false, "p", 0), (true, "q", 1), (true, "r", 0)]),
            c(&[(false, "s", 1), (true, "t", 1), (true, "u", 1)]),
            c(&[(false, "p", 1), (true, "q", 1), (true, "r", 1)]),
        )
    }

    #[test]
    fn partition_drops_renamed_m0() {
        let (c1, c2, c3) = three_clauses();
        let part = partition_m1(std::slice::from_ref(&c1), &[c2.clone(), c3.clone()]);
        assert_eq!(part.m1_keep, vec![c2.clone()]);
        assert_eq!(part.m1_drop, vec![c3]);
        assert_eq!(part.witnesses.len(), 1);
        let empty = partition_m1(&[c1], &[]);
        assert!(empty.m1_keep.is_empty() && empty.m1_drop.is_empty());
        assert_eq!(
            partition_m1(&[], std::slice::from_ref(&c2)).m1_keep,
            vec![c2]
        );
    }

    #[test]
    fn s_subsumption() {
        let (c1, _, c3) = three_clauses();
        let c2 = c(&[(false, "p", 0), (true, "q", 1), (true, "r", 1)]);
        assert_eq!(
            simplify_modulo_s(&[c1.clone(), c2, c3.clone()]),
            vec![c1.clone(), c3]
        );
        assert!(simplify_modulo_s(&[c(&[(true, "p", 0), (false, "p", 0)])]).is_empty());
        assert!(simplify_modulo_s(&[c(&[(false, "p", 0), (true, "p", 1)])]).is_empty());
        assert_eq!(simplify_modulo_s(std::slice::from_ref(&c1)), vec![c1]);
    }

    #[test]
    fn decode_example_clauses() {
        let (c1, c2, c3) = three_clauses();
        let f = Formula::conj([c1.to_formula(), c2.to_formula(), c3.to_formula()]);
        let short = decode(&f).unwrap();
        assert_eq!(
            short,
            parse_program("r :- p, not q.\nnot s :- not t, not u.").unwrap()
        );
        let full = decode_with(
            &f,
            DecodeOptions {
                trivial_partition: true,
            },
        )
        .unwrap();
        assert_eq!(
            full,
            parse_program("r :- p, not q.\nnot s :- not t, not u.\nnot p :- not q, not r.")
                .unwrap()
        );
        let b = c(&[(false, "p", 1), (true, "q", 1), (true, "r", 0)]);
        assert_eq!(
            decode(&b.to_formula()).unwrap(),
            parse_program("r ; not p :- not q.").unwrap()
        );
    }

    #[test]
    fn constraint_and_empty_clause() {
        let k = c(&[(false, "p", 0), (false, "q", 0)]);
        assert_eq!(
            decode(&k.to_formula()).unwrap(),
            parse_program(":- p, q.").unwrap()
        );
        let bot = decode(&Formula::False).unwrap();
        assert_eq!(bot.rules, vec![Rule::default()]);
        assert!(decode(&Formula::True).unwrap().is_empty());
    }

    #[test]
    fn rejects_internal_symbols() {
        let p = Formula::atom(
            crate::formula::SuperPredicate::new("p", 1, Superscript::Zero),
            vec![Term::constant("sk_1")],
        );
        assert_eq!(decode(&p), Err(DecodeError::Reserved("sk_1".into())));
        assert_eq!(
            decode(&Formula::Atom(crate::formula::FAtom::new(
                sp("p", 0).primed(),
                vec![]
            ))),
            Err(DecodeError::Reserved("p_pr".into()))
        );
    }
}
