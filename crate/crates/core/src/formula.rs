//! First-order formulas over 0/1-superscripted predicates.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::{Signature, Substitution, Term};

/// The "here" (0) and "there" (1) copies of a program predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Superscript {
    Zero,
    One,
}

impl fmt::Display for Superscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Superscript::Zero => write!(f, "0"),
            Superscript::One => write!(f, "1"),
        }
    }
}

/// Suffix marking primed copies at the program-predicate level.
pub const PRIME_SUFFIX: &str = "_pr";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuperPredicate {
    pub name: String,
    pub arity: usize,
    pub sup: Superscript,
    pub primed: bool,
}

impl SuperPredicate {
    pub fn new(name: impl Into<String>, arity: usize, sup: Superscript) -> Self {
        SuperPredicate {
            name: name.into(),
            arity,
            sup,
            primed: false,
        }
    }

    pub fn with_sup(&self, sup: Superscript) -> Self {
        SuperPredicate {
            sup,
            ..self.clone()
        }
    }

    pub fn primed(&self) -> Self {
        SuperPredicate {
            primed: true,
            ..self.clone()
        }
    }

    /// Program-level name; primed copies carry the reserved suffix.
    pub fn lp_name(&self) -> String {
        if self.primed {
            format!("{}{}", self.name, PRIME_SUFFIX)
        } else {
            self.name.clone()
        }
    }

    pub fn lp_signature(&self) -> Signature {
        (self.lp_name(), self.arity)
    }

    /// Inverse of [`lp_name`](Self::lp_name).
    pub fn from_lp(name: &str, arity: usize, sup: Superscript) -> Self {
        match name.strip_suffix(PRIME_SUFFIX) {
            Some(base) => SuperPredicate {
                name: base.into(),
                arity,
                sup,
                primed: true,
            },
            None => SuperPredicate::new(name, arity, sup),
        }
    }
}

impl fmt::Display for SuperPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}__{}", self.name, self.sup)?;
        if self.primed {
            write!(f, "{PRIME_SUFFIX}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FAtom {
    pub pred: SuperPredicate,
    pub args: Vec<Term>,
}

impl FAtom {
    pub fn new(pred: SuperPredicate, args: Vec<Term>) -> Self {
        FAtom { pred, args }
    }

    pub fn apply(&self, s: &Substitution) -> FAtom {
        FAtom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|t| t.apply(s)).collect(),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }
}

impl fmt::Display for FAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        crate::term::write_args(f, &self.args)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: FAtom,
}

impl Literal {
    pub fn pos(atom: FAtom) -> Self {
        Literal {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: FAtom) -> Self {
        Literal {
            positive: false,
            atom,
        }
    }

    pub fn complement(&self) -> Self {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn apply(&self, s: &Substitution) -> Literal {
        Literal {
            positive: self.positive,
            atom: self.atom.apply(s),
        }
    }

    pub fn signed(&self) -> SignedPredicate {
        SignedPredicate {
            polarity: Polarity::from_bool(self.positive),
            predicate: self.atom.pred.clone(),
        }
    }

    pub fn to_formula(&self) -> Formula {
        let a = Formula::Atom(self.atom.clone());
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Pos,
    Neg,
}

impl Polarity {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Polarity::Pos
        } else {
            Polarity::Neg
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPredicate {
    pub polarity: Polarity,
    pub predicate: SuperPredicate,
}

impl SignedPredicate {
    pub fn new(polarity: Polarity, predicate: SuperPredicate) -> Self {
        SignedPredicate {
            polarity,
            predicate,
        }
    }

    pub fn pos(predicate: SuperPredicate) -> Self {
        Self::new(Polarity::Pos, predicate)
    }

    pub fn neg(predicate: SuperPredicate) -> Self {
        Self::new(Polarity::Neg, predicate)
    }

    pub fn flipped(&self) -> Self {
        Self::new(self.polarity.flip(), self.predicate.clone())
    }
}

impl fmt::Display for SignedPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.polarity {
            Polarity::Pos => '+',
            Polarity::Neg => '-',
        };
        write!(f, "{sign}{}/{}", self.predicate, self.predicate.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(FAtom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: SuperPredicate, args: Vec<Term>) -> Self {
        Formula::Atom(FAtom::new(pred, args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Conjunction; flattens nested conjunctions, `True` for no conjuncts.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::And(inner) => out.extend(inner),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction; flattens nested disjunctions, `False` for no disjuncts.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::Or(inner) => out.extend(inner),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    /// `∀vars f`, omitting the quantifier when `vars` is empty.
    pub fn forall(vars: Vec<String>, f: Formula) -> Self {
        if vars.is_empty() {
            f
        } else {
            Formula::Forall(vars, Box::new(f))
        }
    }

    pub fn exists(vars: Vec<String>, f: Formula) -> Self {
        if vars.is_empty() {
            f
        } else {
            Formula::Exists(vars, Box::new(f))
        }
    }

    /// Direct subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
        }
    }

    /// Rebuilds the formula with each atom replaced by `f(atom)`.
    pub fn map_atoms(&self, f: &mut impl FnMut(&FAtom) -> Formula) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Forall(vs, g) => Formula::Forall(vs.clone(), Box::new(g.map_atoms(f))),
            Formula::Exists(vs, g) => Formula::Exists(vs.clone(), Box::new(g.map_atoms(f))),
        }
    }

    /// Visits every atom together with the polarity of its occurrence.
    /// Atoms below an equivalence are visited once per polarity.
    pub fn visit_atoms(&self, visit: &mut impl FnMut(&FAtom, Polarity)) {
        self.visit_polar(Polarity::Pos, visit);
    }

    fn visit_polar(&self, pol: Polarity, visit: &mut impl FnMut(&FAtom, Polarity)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => visit(a, pol),
            Formula::Not(f) => f.visit_polar(pol.flip(), visit),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.visit_polar(pol, visit)),
            Formula::Implies(a, b) => {
                a.visit_polar(pol.flip(), visit);
                b.visit_polar(pol, visit);
            }
            Formula::Iff(a, b) => {
                for f in [a, b] {
                    f.visit_polar(pol, visit);
                    f.visit_polar(pol.flip(), visit);
                }
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.visit_polar(pol, visit),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                let mut vs = BTreeSet::new();
                a.args.iter().for_each(|t| t.collect_vars(&mut vs));
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                f.collect_free(bound, out);
                bound.truncate(n);
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_free(bound, out)),
        }
    }

    /// Universal closure over the free variables.
    pub fn close(self) -> Formula {
        let vars: Vec<String> = self.free_vars().into_iter().collect();
        Formula::forall(vars, self)
    }

    pub fn atoms(&self) -> Vec<&FAtom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a FAtom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_atoms(out)),
        }
    }

    /// Superscripted predicates occurring in the formula.
    pub fn predicates(&self) -> BTreeSet<SuperPredicate> {
        self.atoms().into_iter().map(|a| a.pred.clone()).collect()
    }

    /// Folds `True`/`False` through the connectives.
    pub fn simplify_constants(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(f) => match f.simplify_constants() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Not(g) => *g,
                g => Formula::not(g),
            },
            Formula::And(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.simplify_constants() {
                        Formula::False => return Formula::False,
                        Formula::True => {}
                        g => out.push(g),
                    }
                }
                Formula::conj(out)
            }
            Formula::Or(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.simplify_constants() {
                        Formula::True => return Formula::True,
                        Formula::False => {}
                        g => out.push(g),
                    }
                }
                Formula::disj(out)
            }
            Formula::Implies(a, b) => match (a.simplify_constants(), b.simplify_constants()) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, b) => b,
                (a, Formula::False) => Formula::not(a).simplify_constants(),
                (a, b) => Formula::implies(a, b),
            },
            Formula::Iff(a, b) => match (a.simplify_constants(), b.simplify_constants()) {
                (Formula::True, g) | (g, Formula::True) => g,
                (Formula::False, g) | (g, Formula::False) => Formula::not(g).simplify_constants(),
                (a, b) => Formula::iff(a, b),
            },
            Formula::Forall(vs, f) => match f.simplify_constants() {
                g @ (Formula::True | Formula::False) => g,
                g => Formula::Forall(vs.clone(), Box::new(g)),
            },
            Formula::Exists(vs, f) => match f.simplify_constants() {
                g @ (Formula::True | Formula::False) => g,
                g => Formula::Exists(vs.clone(), Box::new(g)),
            },
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::tptp::write_formula(f, self)
    }
}

/// Polarity/predicate pairs of all atom occurrences.
pub fn pred_signed(f: &Formula) -> BTreeSet<SignedPredicate> {
    let mut out = BTreeSet::new();
    f.visit_atoms(&mut |a, pol| {
        out.insert(SignedPredicate::new(pol, a.pred.clone()));
    });
    out
}

/// Program-level predicates underlying the superscripted ones.
pub fn pred_lp(f: &Formula) -> BTreeSet<Signature> {
    f.predicates()
        .iter()
        .map(SuperPredicate::lp_signature)
        .collect()
}

/// Function symbols, constants included.
pub fn formula_functions(f: &Formula) -> BTreeSet<Signature> {
    let mut out = BTreeSet::new();
    for a in f.atoms() {
        a.args.iter().for_each(|t| t.collect_functions(&mut out));
    }
    out
}

/// True iff every `∀` occurs positively and every `∃` negatively.
pub fn is_universal(f: &Formula) -> bool {
    fn walk(f: &Formula, pol: Polarity) -> bool {
        match f {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(g) => walk(g, pol.flip()),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().all(|g| walk(g, pol)),
            Formula::Implies(a, b) => walk(a, pol.flip()) && walk(b, pol),
            Formula::Iff(a, b) => [a, b].iter().all(|g| walk(g, pol) && walk(g, pol.flip())),
            Formula::Forall(_, g) => pol == Polarity::Pos && walk(g, pol),
            Formula::Exists(_, g) => pol == Polarity::Neg && walk(g, pol),
        }
    }
    walk(f, Polarity::Pos)
}

/// Replaces every 0-superscripted predicate by its 1-superscripted copy.
pub fn rename_0_to_1(f: &Formula) -> Formula {
    f.map_atoms(&mut |a| Formula::Atom(rename_atom_0_to_1(a)))
}

pub fn rename_atom_0_to_1(a: &FAtom) -> FAtom {
    FAtom::new(a.pred.with_sup(Superscript::One), a.args.clone())
}

/// A disjunction of literals with implicitly universal variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        let mut c = Clause { literals };
        c.dedup();
        c
    }

    pub fn dedup(&mut self) {
        let mut seen = BTreeSet::new();
        self.literals.retain(|l| seen.insert(l.clone()));
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .any(|l| l.positive && self.literals.contains(&l.complement()))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.atom.args.iter().for_each(|t| t.collect_vars(&mut out));
        }
        out
    }

    /// Variables in order of first occurrence.
    pub fn vars_ordered(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.literals {
            l.atom
                .args
                .iter()
                .for_each(|t| t.collect_vars_ordered(&mut out));
        }
        out
    }

    pub fn apply(&self, s: &Substitution) -> Clause {
        Clause::new(self.literals.iter().map(|l| l.apply(s)).collect())
    }

    pub fn rename_0_to_1(&self) -> Clause {
        Clause::new(
            self.literals
                .iter()
                .map(|l| Literal {
                    positive: l.positive,
                    atom: rename_atom_0_to_1(&l.atom),
                })
                .collect(),
        )
    }

    /// `∀vars (l₁ ∨ … ∨ lₙ)`.
    pub fn to_formula(&self) -> Formula {
        let body = Formula::disj(self.literals.iter().map(Literal::to_formula));
        Formula::forall(self.vars_ordered(), body)
    }

    /// Renames variables canonically so that syntactically equal clauses up to
    /// variable naming compare equal.
    pub fn canonical(&self, prefix: &str) -> Clause {
        let s: Substitution = self
            .vars_ordered()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, Term::Var(format!("{prefix}{i}"))))
            .collect();
        let mut c = Clause {
            literals: self.literals.iter().map(|l| l.apply(&s)).collect(),
        };
        c.dedup();
        c
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "$false");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub type ClausalForm = Vec<Clause>;

/// Conjunction of the clauses as a closed formula.
pub fn clauses_to_formula(cf: &[Clause]) -> Formula {
    Formula::conj(cf.iter().map(Clause::to_formula))
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    pub fn sp(name: &str, sup: u8) -> SuperPredicate {
        SuperPredicate::new(
            name,
            0,
            if sup == 0 {
                Superscript::Zero
            } else {
                Superscript::One
            },
        )
    }

    pub fn pa(name: &str, sup: u8) -> Formula {
        Formula::atom(sp(name, sup), vec![])
    }

    pub fn lit(positive: bool, name: &str, sup: u8) -> Literal {
        Literal {
            positive,
            atom: FAtom::new(sp(name, sup), vec![]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn signed_predicates_count_negations() {
        let f = Formula::disj([Formula::not(pa("p", 0)), pa("q", 1)]);
        let s = pred_signed(&f);
        assert_eq!(
            s,
            BTreeSet::from([
                SignedPredicate::neg(sp("p", 0)),
                SignedPredicate::pos(sp("q", 1))
            ])
        );

        let f = Formula::implies(pa("p", 0), Formula::implies(pa("q", 0), pa("r", 0)));
        let s = pred_signed(&f);
        assert_eq!(
            s,
            BTreeSet::from([
                SignedPredicate::neg(sp("p", 0)),
                SignedPredicate::neg(sp("q", 0)),
                SignedPredicate::pos(sp("r", 0))
            ])
        );
    }

    #[test]
    fn iff_yields_both_polarities() {
        let s = pred_signed(&Formula::iff(pa("p", 0), pa("q", 1)));
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn lp_predicates_and_functions() {
        let f = Formula::disj([Formula::not(pa("p", 0)), pa("q", 1), pa("r", 0)]);
        let names: Vec<String> = pred_lp(&f).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, vec!["p", "q", "r"]);
        assert!(pred_lp(&Formula::True).is_empty());

        let x = Term::var("X");
        let g = Formula::forall(
            vec!["X".into()],
            Formula::atom(
                SuperPredicate::new("p", 1, Superscript::Zero),
                vec![Term::app("f", vec![x, Term::constant("a")])],
            ),
        );
        assert_eq!(
            formula_functions(&g),
            BTreeSet::from([("a".to_string(), 0), ("f".to_string(), 2)])
        );
        assert!(formula_functions(&pa("p", 0)).is_empty());
    }

    #[test]
    fn universality() {
        let p = Formula::atom(
            SuperPredicate::new("p", 1, Superscript::Zero),
            vec![Term::var("X")],
        );
        let all = Formula::forall(vec!["X".into()], p.clone());
        assert!(is_universal(&all));
        assert!(!is_universal(&Formula::not(all.clone())));
        assert!(is_universal(&Formula::not(Formula::exists(
            vec!["X".into()],
            p.clone()
        ))));
        assert!(!is_universal(&Formula::iff(all, pa("q", 0))));
    }

    #[test]
    fn rename_maps_zero_to_one() {
        let c1 = Formula::disj([Formula::not(pa("p", 0)), pa("q", 1), pa("r", 0)]);
        let c3 = Formula::disj([Formula::not(pa("p", 1)), pa("q", 1), pa("r", 1)]);
        assert_eq!(rename_0_to_1(&c1), c3);
        assert_eq!(rename_0_to_1(&c3), c3);
        assert_eq!(rename_0_to_1(&Formula::True), Formula::True);
        assert!(pred_signed(&rename_0_to_1(&c1))
            .iter()
            .all(|s| s.predicate.sup == Superscript::One));
    }

    #[test]
    fn constant_folding() {
        let f = Formula::conj([Formula::True, Formula::disj([Formula::False, pa("p", 0)])]);
        assert_eq!(f.simplify_constants(), pa("p", 0));
        assert_eq!(
            Formula::implies(pa("p", 0), Formula::False).simplify_constants(),
            Formula::not(pa("p", 0))
        );
    }

    #[test]
    fn clause_tautology_and_canonical() {
        let c = Clause::new(vec![lit(true, "p", 0), lit(false, "p", 0)]);
        assert!(c.is_tautology());
        let c = Clause::new(vec![lit(true, "p", 0), lit(false, "p", 1)]);
        assert!(!c.is_tautology());
    }
}
