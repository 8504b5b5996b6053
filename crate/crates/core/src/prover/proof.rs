//! Closed clausal tableaux and their independent replay check.

use std::fmt;

use thiserror::Error;

use super::{ColoredClause, Side};
use crate::formula::Literal;
use crate::ground::GROUND_CONSTANT;
use crate::term::{match_into, Substitution, Term};

#[derive(Debug, Clone, PartialEq)]
pub struct ProofNode {
    pub id: usize,
    /// `None` for the literals of the start clause.
    pub parent: Option<usize>,
    /// The literal as instantiated when its clause was attached.
    pub literal: Literal,
    /// Index into [`Proof::clauses`] of the clause this node is a literal of.
    pub clause: usize,
    pub side: Side,
    /// Complementary ancestor closing this leaf.
    pub closed_by: Option<usize>,
    pub children: Vec<usize>,
}

/// A closed connection tableau. Node literals are read under `global_subst`.
#[derive(Debug, Clone, PartialEq)]
pub struct Proof {
    pub clauses: Vec<ColoredClause>,
    pub nodes: Vec<ProofNode>,
    pub start_clause: usize,
    pub start: Vec<usize>,
    pub global_subst: Substitution,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("node {0} is neither expanded nor closed")]
    Open(usize),
    #[error("node {0} is both expanded and closed")]
    ExpandedLeaf(usize),
    #[error("node {node} is closed by {target}, which is not one of its ancestors")]
    NotAncestor { node: usize, target: usize },
    #[error("closure of node {node} by {target} is not complementary")]
    NotComplementary { node: usize, target: usize },
    #[error("literals below node {0:?} are not an instance of their clause")]
    NotInstance(Option<usize>),
    #[error("literal of node {node} repeats ancestor {ancestor}")]
    Irregular { node: usize, ancestor: usize },
    #[error("node links are inconsistent at node {0}")]
    Links(usize),
    #[error("global substitution is not idempotent")]
    Substitution,
}

impl Proof {
    pub fn literal(&self, id: usize) -> Literal {
        self.nodes[id].literal.apply(&self.global_subst)
    }

    /// Proper ancestors of a node, nearest first.
    pub fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.nodes[id].parent;
        while let Some(a) = cur {
            out.push(a);
            cur = self.nodes[a].parent;
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.nodes
            .iter()
            .all(|n| self.literal(n.id).atom.is_ground())
    }

    /// Full check: closures, clause instances, links and regularity.
    pub fn validate(&self) -> Result<(), ReplayError> {
        self.validate_closures()?;
        for n in &self.nodes {
            let lit = self.literal(n.id);
            for a in self.ancestors(n.id) {
                if self.literal(a) == lit {
                    return Err(ReplayError::Irregular {
                        node: n.id,
                        ancestor: a,
                    });
                }
            }
        }
        Ok(())
    }

    /// Everything except regularity, which grounding may legitimately break.
    pub fn validate_closures(&self) -> Result<(), ReplayError> {
        for (v, t) in self.global_subst.iter() {
            if t.apply(&self.global_subst) != *t || t.contains_var(v) {
                return Err(ReplayError::Substitution);
            }
        }
        self.check_instance(None, &self.start)?;
        for n in &self.start {
            if self.nodes.get(*n).map(|x| x.parent) != Some(None) {
                return Err(ReplayError::Links(*n));
            }
        }
        for n in &self.nodes {
            for c in &n.children {
                if self.nodes.get(*c).and_then(|x| x.parent) != Some(n.id) {
                    return Err(ReplayError::Links(n.id));
                }
            }
            match (n.children.is_empty(), n.closed_by) {
                (true, None) => return Err(ReplayError::Open(n.id)),
                (false, Some(_)) => return Err(ReplayError::ExpandedLeaf(n.id)),
                (false, None) => self.check_instance(Some(n.id), &n.children)?,
                (true, Some(t)) => {
                    if !self.ancestors(n.id).contains(&t) {
                        return Err(ReplayError::NotAncestor {
                            node: n.id,
                            target: t,
                        });
                    }
                    if self.literal(n.id) != self.literal(t).complement() {
                        return Err(ReplayError::NotComplementary {
                            node: n.id,
                            target: t,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_instance(&self, parent: Option<usize>, ids: &[usize]) -> Result<(), ReplayError> {
        let err = || ReplayError::NotInstance(parent);
        if ids.is_empty() && parent.is_none() {
            let empty = self
                .clauses
                .get(self.start_clause)
                .is_some_and(|c| c.clause.is_empty());
            return if empty { Ok(()) } else { Err(err()) };
        }
        let first = ids.first().ok_or_else(err)?;
        let ci = self.nodes.get(*first).ok_or_else(err)?.clause;
        let clause = &self.clauses.get(ci).ok_or_else(err)?.clause;
        if clause.len() != ids.len() {
            return Err(err());
        }
        let mut s = Substitution::new();
        for (pat, id) in clause.literals.iter().zip(ids) {
            let n = self.nodes.get(*id).ok_or_else(err)?;
            if n.clause != ci
                || n.side != self.clauses[ci].side
                || pat.positive != n.literal.positive
                || pat.atom.pred != n.literal.atom.pred
                || pat.atom.args.len() != n.literal.atom.args.len()
            {
                return Err(err());
            }
            for (p, t) in pat.atom.args.iter().zip(&n.literal.atom.args) {
                if !match_into(p, t, &mut s) {
                    return Err(err());
                }
            }
        }
        Ok(())
    }

    /// Line-oriented dump: `id parent literal origin side [closed_by]`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let parent = n.parent.map_or("-".to_string(), |p| p.to_string());
            let side = match n.side {
                Side::Left => "L",
                Side::Right => "R",
            };
            out.push_str(&format!(
                "{} {} {} {} {}",
                n.id,
                parent,
                self.literal(n.id),
                self.clauses[n.clause].origin,
                side
            ));
            if let Some(t) = n.closed_by {
                out.push_str(&format!(" closed_by={t}"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

/// Applies the global substitution everywhere and maps remaining variables
/// to [`GROUND_CONSTANT`].
pub fn ground_proof(p: &Proof) -> Proof {
    let mut q = p.clone();
    let c = Term::constant(GROUND_CONSTANT);
    for n in &mut q.nodes {
        let lit = n.literal.apply(&p.global_subst);
        let args = lit
            .atom
            .args
            .iter()
            .map(|t| t.map_vars(&mut |_| c.clone()))
            .collect();
        n.literal.atom.args = args;
    }
    q.global_subst = Substitution::new();
    q
}
