//! First-order terms shared by programs and formulas, with substitutions,
//! syntactic unification (occurs-check on) and one-way matching.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A function symbol or predicate identified by name and arity.
pub type Signature = (String, usize);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    /// A compound term; constants are compounds with no arguments.
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in order of first occurrence.
    pub fn collect_vars_ordered(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars_ordered(out)),
        }
    }

    pub fn collect_functions(&self, out: &mut BTreeSet<Signature>) {
        if let Term::App(f, args) = self {
            out.insert((f.clone(), args.len()));
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    pub fn apply(&self, subst: &Substitution) -> Term {
        match self {
            Term::Var(v) => match subst.get(v) {
                Some(t) => t.clone(),
                None => self.clone(),
            },
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.apply(subst)).collect())
            }
        }
    }

    /// Renames variables through `f`, leaving the structure intact.
    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::App(g, args) => {
                Term::App(g.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) => {
                write!(f, "{name}")?;
                write_args(f, args)
            }
        }
    }
}

pub(crate) fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    write!(f, "(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, ")")
}

/// An idempotent mapping from variable names to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    /// Adds `var ↦ term`, applying the new binding to the existing range so the
    /// substitution stays idempotent. `term` must already be normalized
    /// against `self`.
    pub fn bind(&mut self, var: impl Into<String>, term: Term) {
        let var = var.into();
        let single = Substitution {
            map: BTreeMap::from([(var.clone(), term.clone())]),
        };
        for t in self.map.values_mut() {
            *t = t.apply(&single);
        }
        self.map.insert(var, term);
    }

    /// Raw insertion without normalization; used by matching where the
    /// range never mentions domain variables.
    pub(crate) fn insert_raw(&mut self, var: String, term: Term) {
        self.map.insert(var, term);
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}↦{t}")?;
        }
        write!(f, "}}")
    }
}

/// Most general unifier of two terms, or `None` on clash or occurs-check
/// failure.
pub fn unify(t1: &Term, t2: &Term) -> Option<Substitution> {
    let mut subst = Substitution::new();
    unify_into(t1, t2, &mut subst).then_some(subst)
}

/// Unifies the argument lists pairwise.
pub fn unify_all(left: &[Term], right: &[Term]) -> Option<Substitution> {
    let mut subst = Substitution::new();
    unify_lists_into(left, right, &mut subst).then_some(subst)
}

/// Extends `subst` to a unifier of the two lists, if possible.
pub fn unify_lists_into(left: &[Term], right: &[Term], subst: &mut Substitution) -> bool {
    left.len() == right.len() && left.iter().zip(right).all(|(a, b)| unify_into(a, b, subst))
}

/// Extends `subst` to a unifier of `t1` and `t2`. On failure `subst` may be
/// partially extended.
pub fn unify_into(t1: &Term, t2: &Term, subst: &mut Substitution) -> bool {
    let mut stack = vec![(t1.apply(subst), t2.apply(subst))];
    while let Some((a, b)) = stack.pop() {
        let a = a.apply(subst);
        let b = b.apply(subst);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if t.contains_var(&x) {
                    return false;
                }
                subst.bind(x, t);
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                if f != g || fa.len() != ga.len() {
                    return false;
                }
                stack.extend(fa.into_iter().zip(ga));
            }
        }
    }
    true
}

/// One-way matching: extends `subst` so that `pattern·subst == target`.
/// Variables of `target` are treated as rigid, even when they share names
/// with pattern variables.
pub fn match_into(pattern: &Term, target: &Term, subst: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match subst.get(v) {
            Some(bound) => bound == target,
            None => {
                subst.insert_raw(v.clone(), target.clone());
                true
            }
        },
        Term::App(f, pa) => match target {
            Term::App(g, ta) if f == g && pa.len() == ta.len() => {
                pa.iter().zip(ta).all(|(p, t)| match_into(p, t, subst))
            }
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }
    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn unify_binds_both_sides() {
        let s = unify(
            &Term::app("f", vec![v("X"), c("a")]),
            &Term::app("f", vec![c("b"), v("Y")]),
        )
        .unwrap();
        assert_eq!(s.get("X"), Some(&c("b")));
        assert_eq!(s.get("Y"), Some(&c("a")));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn occurs_check_fails() {
        assert!(unify(&v("X"), &Term::app("f", vec![v("X")])).is_none());
    }

    #[test]
    fn repeated_variable_clash() {
        assert!(unify_all(&[v("X"), v("X")], &[c("a"), c("b")]).is_none());
    }

    #[test]
    fn chained_bindings_stay_idempotent() {
        let s = unify_all(&[v("X"), v("Y")], &[v("Y"), Term::app("g", vec![v("Z")])]).unwrap();
        for (_, t) in s.iter() {
            assert_eq!(t.apply(&s), *t);
        }
        assert_eq!(v("X").apply(&s), v("Y").apply(&s));
    }

    #[test]
    fn matching_is_one_way() {
        let mut s = Substitution::new();
        assert!(match_into(
            &Term::app("p", vec![v("X"), v("X")]),
            &Term::app("p", vec![c("a"), c("a")]),
            &mut s
        ));
        let mut s = Substitution::new();
        assert!(!match_into(
            &Term::app("p", vec![c("a")]),
            &Term::app("p", vec![v("X")]),
            &mut s
        ));
        // Shared names: target X is rigid.
        let mut s = Substitution::new();
        assert!(match_into(
            &Term::app("p", vec![v("X"), v("Y")]),
            &Term::app("p", vec![v("Y"), v("X")]),
            &mut s
        ));
    }
}
