//! Clausal normal form.
//!
//! Formulas go through negation normal form with all bound variables renamed
//! apart, then (in skolemizing mode) miniscoping and existential-variable
//! sharing across disjunctions before Skolemization, so that a disjunction of
//! existentially quantified formulas receives one block of Skolem symbols
//! rather than one per disjunct. `Iff` is expanded into both implications.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{ClausalForm, Clause, FAtom, Formula, Literal};
use crate::term::{Substitution, Term};

/// Prefix of Skolem function symbols. The `.lp` parser rejects it.
pub const SKOLEM_PREFIX: &str = "sk_";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClausifyMode {
    /// Input must be universal; no new function symbols are introduced.
    UniversalOnly,
    Skolemizing,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClausifyError {
    #[error("formula is not universal")]
    NotUniversal,
}

/// Negation normal form with n-ary connectives.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Nnf {
    True,
    False,
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    All(Vec<String>, Box<Nnf>),
    Ex(Vec<String>, Box<Nnf>),
}

impl Nnf {
    fn and(items: Vec<Nnf>) -> Nnf {
        let mut out = Vec::new();
        for f in items {
            match f {
                Nnf::True => {}
                Nnf::False => return Nnf::False,
                Nnf::And(inner) => out.extend(inner),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Nnf::True,
            1 => out.pop().unwrap(),
            _ => Nnf::And(out),
        }
    }

    fn or(items: Vec<Nnf>) -> Nnf {
        let mut out = Vec::new();
        for f in items {
            match f {
                Nnf::False => {}
                Nnf::True => return Nnf::True,
                Nnf::Or(inner) => out.extend(inner),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Nnf::False,
            1 => out.pop().unwrap(),
            _ => Nnf::Or(out),
        }
    }

    fn quant(universal: bool, vars: Vec<String>, body: Nnf) -> Nnf {
        let free = body.free_vars();
        let vars: Vec<String> = vars.into_iter().filter(|v| free.contains(v)).collect();
        if vars.is_empty() || matches!(body, Nnf::True | Nnf::False) {
            return body;
        }
        if universal {
            Nnf::All(vars, Box::new(body))
        } else {
            Nnf::Ex(vars, Box::new(body))
        }
    }

    fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Nnf::True | Nnf::False => {}
            Nnf::Lit(l) => l.atom.args.iter().for_each(|t| t.collect_vars(out)),
            Nnf::And(fs) | Nnf::Or(fs) => fs.iter().for_each(|f| f.collect_free(out)),
            Nnf::All(vs, f) | Nnf::Ex(vs, f) => {
                let mut inner = BTreeSet::new();
                f.collect_free(&mut inner);
                out.extend(inner.into_iter().filter(|v| !vs.contains(v)));
            }
        }
    }

    fn has_existential(&self) -> bool {
        match self {
            Nnf::Ex(..) => true,
            Nnf::True | Nnf::False | Nnf::Lit(_) => false,
            Nnf::And(fs) | Nnf::Or(fs) => fs.iter().any(Nnf::has_existential),
            Nnf::All(_, f) => f.has_existential(),
        }
    }

    /// Substitutes free variables. Bound variables are unique after
    /// renaming, so no capture can occur.
    fn apply(&self, s: &Substitution) -> Nnf {
        match self {
            Nnf::True | Nnf::False => self.clone(),
            Nnf::Lit(l) => Nnf::Lit(l.apply(s)),
            Nnf::And(fs) => Nnf::And(fs.iter().map(|f| f.apply(s)).collect()),
            Nnf::Or(fs) => Nnf::Or(fs.iter().map(|f| f.apply(s)).collect()),
            Nnf::All(vs, f) => Nnf::All(vs.clone(), Box::new(f.apply(s))),
            Nnf::Ex(vs, f) => Nnf::Ex(vs.clone(), Box::new(f.apply(s))),
        }
    }

    fn is_literalish(&self) -> bool {
        matches!(self, Nnf::Lit(_) | Nnf::True | Nnf::False)
    }
}

/// Per-invocation source of fresh variable and Skolem names.
#[derive(Debug, Default, Clone)]
pub struct Clausifier {
    next_var: usize,
    next_skolem: usize,
}

impl Clausifier {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh_var(&mut self) -> String {
        self.next_var += 1;
        format!("V{}", self.next_var)
    }

    fn fresh_skolem(&mut self) -> String {
        self.next_skolem += 1;
        format!("{SKOLEM_PREFIX}{}", self.next_skolem)
    }

    /// Number of Skolem symbols introduced so far.
    pub fn skolem_count(&self) -> usize {
        self.next_skolem
    }

    pub(crate) fn nnf(&mut self, f: &Formula) -> Nnf {
        let closed = f.clone().close();
        self.nnf_rec(&closed, true, &Substitution::new())
    }

    fn nnf_rec(&mut self, f: &Formula, positive: bool, ren: &Substitution) -> Nnf {
        match f {
            Formula::True => {
                if positive {
                    Nnf::True
                } else {
                    Nnf::False
                }
            }
            Formula::False => {
                if positive {
                    Nnf::False
                } else {
                    Nnf::True
                }
            }
            Formula::Atom(a) => Nnf::Lit(Literal {
                positive,
                atom: a.apply(ren),
            }),
            Formula::Not(g) => self.nnf_rec(g, !positive, ren),
            Formula::And(gs) | Formula::Or(gs) => {
                let items = gs.iter().map(|g| self.nnf_rec(g, positive, ren)).collect();
                if matches!(f, Formula::And(_)) == positive {
                    Nnf::and(items)
                } else {
                    Nnf::or(items)
                }
            }
            Formula::Implies(a, b) => {
                let na = self.nnf_rec(a, !positive, ren);
                let nb = self.nnf_rec(b, positive, ren);
                if positive {
                    Nnf::or(vec![na, nb])
                } else {
                    Nnf::and(vec![na, nb])
                }
            }
            Formula::Iff(a, b) => {
                let both = Formula::And(vec![
                    Formula::implies((**a).clone(), (**b).clone()),
                    Formula::implies((**b).clone(), (**a).clone()),
                ]);
                self.nnf_rec(&both, positive, ren)
            }
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                let mut ren = ren.clone();
                let mut fresh = Vec::new();
                for v in vs {
                    let nv = self.fresh_var();
                    ren.insert_raw(v.clone(), Term::Var(nv.clone()));
                    fresh.push(nv);
                }
                let body = self.nnf_rec(g, positive, &ren);
                let universal = matches!(f, Formula::Forall(..)) == positive;
                Nnf::quant(universal, fresh, body)
            }
        }
    }

    /// Clausal form of `f`.
    pub fn clausify(
        &mut self,
        f: &Formula,
        mode: ClausifyMode,
    ) -> Result<ClausalForm, ClausifyError> {
        let nnf = self.nnf(f);
        match mode {
            ClausifyMode::UniversalOnly => {
                if nnf.has_existential() {
                    return Err(ClausifyError::NotUniversal);
                }
                Ok(finish(cnf(&strip_universals(nnf))))
            }
            ClausifyMode::Skolemizing => Ok(self.skolemize_to_cnf(miniscope(nnf))),
        }
    }

    /// Like [`clausify`](Self::clausify) in skolemizing mode, but first splits
    /// top-level disjunctions of non-clausal formulas into separate problems:
    /// `f` is unsatisfiable iff every returned clause set is. At most `cap`
    /// pieces are produced; beyond that the formula is left whole.
    pub fn clausify_split(&mut self, f: &Formula, cap: usize) -> Vec<ClausalForm> {
        let nnf = miniscope(self.nnf(f));
        split_nnf(nnf, cap)
            .into_iter()
            .map(|piece| self.skolemize_to_cnf(piece))
            .collect()
    }

    fn skolemize_to_cnf(&mut self, nnf: Nnf) -> ClausalForm {
        let shared = share_existentials(nnf, self);
        let sk = self.skolemize(&shared, &mut Vec::new());
        finish(cnf(&sk))
    }

    fn skolemize(&mut self, f: &Nnf, universals: &mut Vec<String>) -> Nnf {
        match f {
            Nnf::True | Nnf::False | Nnf::Lit(_) => f.clone(),
            Nnf::And(fs) => Nnf::and(fs.iter().map(|g| self.skolemize(g, universals)).collect()),
            Nnf::Or(fs) => Nnf::or(fs.iter().map(|g| self.skolemize(g, universals)).collect()),
            Nnf::All(vs, g) => {
                let n = universals.len();
                universals.extend(vs.iter().cloned());
                let out = self.skolemize(g, universals);
                universals.truncate(n);
                out
            }
            Nnf::Ex(vs, g) => {
                let free = f.free_vars();
                let deps: Vec<Term> = universals
                    .iter()
                    .filter(|u| free.contains(*u))
                    .map(|u| Term::Var(u.clone()))
                    .collect();
                let s: Substitution = vs
                    .iter()
                    .map(|v| (v.clone(), Term::App(self.fresh_skolem(), deps.clone())))
                    .collect();
                self.skolemize(&g.apply(&s), universals)
            }
        }
    }
}

/// Clausifies with a fresh [`Clausifier`].
pub fn clausify(f: &Formula, mode: ClausifyMode) -> Result<ClausalForm, ClausifyError> {
    Clausifier::new().clausify(f, mode)
}

fn strip_universals(f: Nnf) -> Nnf {
    match f {
        Nnf::All(_, g) => strip_universals(*g),
        Nnf::And(fs) => Nnf::And(fs.into_iter().map(strip_universals).collect()),
        Nnf::Or(fs) => Nnf::Or(fs.into_iter().map(strip_universals).collect()),
        other => other,
    }
}

/// Pushes quantifiers inward as far as they go.
pub(crate) fn miniscope(f: Nnf) -> Nnf {
    match f {
        Nnf::And(fs) => Nnf::and(fs.into_iter().map(miniscope).collect()),
        Nnf::Or(fs) => Nnf::or(fs.into_iter().map(miniscope).collect()),
        Nnf::All(vs, g) => push_quant(true, vs, miniscope(*g)),
        Nnf::Ex(vs, g) => push_quant(false, vs, miniscope(*g)),
        other => other,
    }
}

fn push_quant(universal: bool, vars: Vec<String>, body: Nnf) -> Nnf {
    let free = body.free_vars();
    let vars: Vec<String> = vars.into_iter().filter(|v| free.contains(v)).collect();
    if vars.is_empty() {
        return body;
    }
    match body {
        // ∀ distributes over ∧, ∃ over ∨.
        Nnf::And(fs) if universal => Nnf::and(
            fs.into_iter()
                .map(|g| push_quant(true, vars.clone(), g))
                .collect(),
        ),
        Nnf::Or(fs) if !universal => Nnf::or(
            fs.into_iter()
                .map(|g| push_quant(false, vars.clone(), g))
                .collect(),
        ),
        Nnf::And(fs) | Nnf::Or(fs) => {
            let is_and = !universal;
            let (with, without): (Vec<Nnf>, Vec<Nnf>) = fs
                .into_iter()
                .partition(|g| vars.iter().any(|v| g.free_vars().contains(v)));
            let inner = if is_and {
                Nnf::and(with)
            } else {
                Nnf::or(with)
            };
            let mut items = without;
            items.push(Nnf::quant(universal, vars, inner));
            if is_and {
                Nnf::and(items)
            } else {
                Nnf::or(items)
            }
        }
        body => Nnf::quant(universal, vars, body),
    }
}

/// Rewrites `∃x̄ A ∨ ∃ȳ B` into `∃z̄ (A ∨ B)` with the variables renamed onto
/// a shared block, bottom-up.
fn share_existentials(f: Nnf, fresh: &mut Clausifier) -> Nnf {
    match f {
        Nnf::And(fs) => Nnf::and(
            fs.into_iter()
                .map(|g| share_existentials(g, fresh))
                .collect(),
        ),
        Nnf::All(vs, g) => Nnf::All(vs, Box::new(share_existentials(*g, fresh))),
        Nnf::Ex(vs, g) => Nnf::Ex(vs, Box::new(share_existentials(*g, fresh))),
        Nnf::Or(fs) => {
            let fs: Vec<Nnf> = fs
                .into_iter()
                .map(|g| share_existentials(g, fresh))
                .collect();
            let (ex, rest): (Vec<Nnf>, Vec<Nnf>) =
                fs.into_iter().partition(|g| matches!(g, Nnf::Ex(..)));
            if ex.len() < 2 {
                return Nnf::or(rest.into_iter().chain(ex).collect());
            }
            let width = ex
                .iter()
                .map(|g| if let Nnf::Ex(vs, _) = g { vs.len() } else { 0 })
                .max()
                .unwrap_or(0);
            let shared: Vec<String> = (0..width).map(|_| fresh.fresh_var()).collect();
            let bodies: Vec<Nnf> = ex
                .into_iter()
                .map(|g| match g {
                    Nnf::Ex(vs, body) => {
                        let s: Substitution = vs
                            .iter()
                            .zip(&shared)
                            .map(|(v, z)| (v.clone(), Term::Var(z.clone())))
                            .collect();
                        body.apply(&s)
                    }
                    _ => unreachable!(),
                })
                .collect();
            let mut items = rest;
            items.push(Nnf::quant(false, shared, Nnf::or(bodies)));
            Nnf::or(items)
        }
        other => other,
    }
}

fn split_nnf(f: Nnf, cap: usize) -> Vec<Nnf> {
    let conjuncts = match f {
        Nnf::And(fs) => fs,
        Nnf::False => return vec![Nnf::False],
        Nnf::True => return vec![Nnf::True],
        other => vec![other],
    };
    let mut pieces: Vec<Vec<Nnf>> = vec![vec![]];
    let mut kept: Vec<Nnf> = Vec::new();
    for c in conjuncts {
        match c {
            Nnf::Or(ds) if !ds.iter().all(Nnf::is_literalish) && pieces.len() * ds.len() <= cap => {
                pieces = pieces
                    .into_iter()
                    .flat_map(|p| {
                        ds.iter().map(move |d| {
                            let mut q = p.clone();
                            q.push(d.clone());
                            q
                        })
                    })
                    .collect();
            }
            c => kept.push(c),
        }
    }
    pieces
        .into_iter()
        .map(|mut p| {
            let mut all = kept.clone();
            all.append(&mut p);
            Nnf::and(all)
        })
        .collect()
}

fn cnf(f: &Nnf) -> Vec<Vec<Literal>> {
    match f {
        Nnf::True => vec![],
        Nnf::False => vec![vec![]],
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::And(fs) => fs.iter().flat_map(cnf).collect(),
        Nnf::Or(fs) => {
            let mut acc: Vec<Vec<Literal>> = vec![vec![]];
            for g in fs {
                let part = cnf(g);
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for b in &part {
                        let mut c = a.clone();
                        c.extend(b.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        Nnf::All(_, g) => cnf(g),
        Nnf::Ex(_, g) => cnf(g),
    }
}

/// Deduplicates literals and clauses and drops tautologies.
fn finish(raw: Vec<Vec<Literal>>) -> ClausalForm {
    let mut out: Vec<Clause> = Vec::new();
    let mut seen = BTreeSet::new();
    for lits in raw {
        let c = Clause::new(lits);
        if c.is_tautology() {
            continue;
        }
        if seen.insert(c.canonical("_")) {
            out.push(c);
        }
    }
    out
}

/// Atoms of a ground clause set, for callers that ground and enumerate.
pub fn clause_atoms(cf: &[Clause]) -> BTreeSet<FAtom> {
    cf.iter()
        .flat_map(|c| c.literals.iter().map(|l| l.atom.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{SuperPredicate, Superscript};

    fn p1(name: &str, t: Term) -> Formula {
        Formula::atom(SuperPredicate::new(name, 1, Superscript::Zero), vec![t])
    }

    fn x() -> Term {
        Term::var("X")
    }

    #[test]
    fn universal_implication_is_one_clause() {
        let f = Formula::forall(
            vec!["X".into()],
            Formula::implies(p1("p", x()), p1("q", x())),
        );
        let cf = clausify(&f, ClausifyMode::UniversalOnly).unwrap();
        assert_eq!(cf.len(), 1);
        assert_eq!(cf[0].len(), 2);
        assert!(!cf[0].literals[0].positive && cf[0].literals[1].positive);
        assert_eq!(cf[0].literals[0].atom.args, cf[0].literals[1].atom.args);
    }

    #[test]
    fn negated_universal_gets_one_skolem_constant() {
        let f = Formula::not(Formula::forall(
            vec!["X".into()],
            Formula::implies(p1("p", x()), p1("q", x())),
        ));
        assert_eq!(
            clausify(&f, ClausifyMode::UniversalOnly),
            Err(ClausifyError::NotUniversal)
        );
        let cf = clausify(&f, ClausifyMode::Skolemizing).unwrap();
        let sk = Term::constant("sk_1");
        assert_eq!(
            cf,
            vec![
                Clause::new(vec![Literal::pos(FAtom::new(
                    SuperPredicate::new("p", 1, Superscript::Zero),
                    vec![sk.clone()]
                ))]),
                Clause::new(vec![Literal::neg(FAtom::new(
                    SuperPredicate::new("q", 1, Superscript::Zero),
                    vec![sk]
                ))])
            ]
        );
    }

    #[test]
    fn disjoined_existentials_share_skolem_symbols() {
        // ∃x p(x) ∨ ∃y q(y): one Skolem constant instead of two.
        let f = Formula::disj([
            Formula::exists(vec!["X".into()], p1("p", x())),
            Formula::exists(vec!["Y".into()], p1("q", Term::var("Y"))),
        ]);
        let mut c = Clausifier::new();
        let cf = c.clausify(&f, ClausifyMode::Skolemizing).unwrap();
        assert_eq!(c.skolem_count(), 1);
        assert_eq!(cf.len(), 1);
        assert_eq!(cf[0].len(), 2);
    }

    #[test]
    fn skolem_function_depends_on_enclosing_universal() {
        // ∀x ∃y r(x,y)
        let r = Formula::atom(
            SuperPredicate::new("r", 2, Superscript::Zero),
            vec![x(), Term::var("Y")],
        );
        let f = Formula::forall(vec!["X".into()], Formula::exists(vec!["Y".into()], r));
        let cf = clausify(&f, ClausifyMode::Skolemizing).unwrap();
        let args = &cf[0].literals[0].atom.args;
        assert!(
            matches!(&args[1], Term::App(name, a) if name == "sk_1" && a.len() == 1 && a[0] == args[0])
        );
    }

    #[test]
    fn miniscoping_drops_dependencies() {
        // ∀x ∃y (p(x) ∨ q(y)) Skolemizes y to a constant after miniscoping.
        let f = Formula::forall(
            vec!["X".into()],
            Formula::exists(
                vec!["Y".into()],
                Formula::disj([p1("p", x()), p1("q", Term::var("Y"))]),
            ),
        );
        let cf = clausify(&f, ClausifyMode::Skolemizing).unwrap();
        assert_eq!(cf.len(), 1);
        let q = cf[0]
            .literals
            .iter()
            .find(|l| l.atom.pred.name == "q")
            .unwrap();
        assert_eq!(q.atom.args[0], Term::constant("sk_1"));
    }

    #[test]
    fn tautologies_and_constants() {
        let p = Formula::atom(SuperPredicate::new("p", 0, Superscript::Zero), vec![]);
        assert!(clausify(
            &Formula::disj([p.clone(), Formula::not(p.clone())]),
            ClausifyMode::UniversalOnly
        )
        .unwrap()
        .is_empty());
        assert_eq!(
            clausify(&Formula::False, ClausifyMode::UniversalOnly).unwrap(),
            vec![Clause::default()]
        );
        assert!(clausify(&Formula::True, ClausifyMode::UniversalOnly)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn split_separates_existential_disjuncts() {
        let a = |n: &str| Formula::atom(SuperPredicate::new(n, 0, Superscript::Zero), vec![]);
        let f = Formula::conj([
            Formula::disj([a("s"), a("t")]),
            Formula::disj([
                Formula::conj([a("p"), a("q")]),
                Formula::conj([a("r"), Formula::not(a("p"))]),
            ]),
        ]);
        let pieces = Clausifier::new().clausify_split(&f, 64);
        assert_eq!(pieces.len(), 2);
        for piece in &pieces {
            assert_eq!(piece.len(), 3);
        }
    }
}
