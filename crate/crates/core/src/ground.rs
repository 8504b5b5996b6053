//! Exact decision procedure for function-free (Bernays-Schönfinkel)
//! entailments: Skolemize, ground over the Herbrand universe, run DPLL.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::clausify::Clausifier;
use crate::formula::{Clause, FAtom, Formula};
use crate::term::{Substitution, Term};

pub const DEFAULT_MAX_ATOMS: usize = 4096;
const MAX_CLAUSE_INSTANCES: usize = 2_000_000;
const SPLIT_CAP: usize = 64;

/// Constant used for an otherwise empty Herbrand universe and for grounding
/// leftover proof variables.
pub const GROUND_CONSTANT: &str = "sk_g";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("function symbol `{0}` puts the problem outside the function-free fragment")]
    NotFunctionFree(String),
    #[error("grounding needs {atoms} atoms, above the limit of {limit}")]
    SizeGuard { atoms: usize, limit: usize },
}

/// A Herbrand model, given by its true ground atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Countermodel {
    pub true_atoms: BTreeSet<FAtom>,
    pub universe: Vec<Term>,
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<String> = self.true_atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", atoms.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundOutcome {
    Entailed,
    Refuted(Countermodel),
}

/// `f ⊨ g` with the default size guard.
pub fn ground_entails(f: &Formula, g: &Formula) -> Result<bool, GroundError> {
    Ok(ground_entails_with(f, g, DEFAULT_MAX_ATOMS)? == GroundOutcome::Entailed)
}

/// `f ⊨ g`, or a model of `f ∧ ¬g` (over the Skolemized signature).
pub fn ground_entails_with(
    f: &Formula,
    g: &Formula,
    max_atoms: usize,
) -> Result<GroundOutcome, GroundError> {
    let problem = Formula::conj([f.clone(), Formula::not(g.clone())]);
    let mut cl = Clausifier::new();
    for piece in cl.clausify_split(&problem, SPLIT_CAP) {
        if let Some(model) = ground_satisfiable(&piece, max_atoms)? {
            return Ok(GroundOutcome::Refuted(model));
        }
    }
    Ok(GroundOutcome::Entailed)
}

/// Satisfiability of a function-free clause set. Constants occurring in the
/// clauses form the universe, or [`GROUND_CONSTANT`] when there are none.
pub fn ground_satisfiable(
    clauses: &[Clause],
    max_atoms: usize,
) -> Result<Option<Countermodel>, GroundError> {
    let mut universe = BTreeSet::new();
    let mut preds = BTreeSet::new();
    for c in clauses {
        for l in &c.literals {
            preds.insert(l.atom.pred.clone());
            for t in &l.atom.args {
                collect_constants(t, &mut universe)?;
            }
        }
    }
    if universe.is_empty() {
        universe.insert(Term::constant(GROUND_CONSTANT));
    }
    let universe: Vec<Term> = universe.into_iter().collect();
    let n = universe.len();
    let atoms: usize = preds
        .iter()
        .map(|p| n.saturating_pow(p.arity as u32))
        .fold(0, usize::saturating_add);
    if atoms > max_atoms {
        return Err(GroundError::SizeGuard {
            atoms,
            limit: max_atoms,
        });
    }
    let instances: usize = clauses
        .iter()
        .map(|c| n.saturating_pow(c.vars().len() as u32))
        .fold(0, usize::saturating_add);
    if instances > MAX_CLAUSE_INSTANCES {
        return Err(GroundError::SizeGuard {
            atoms: instances,
            limit: MAX_CLAUSE_INSTANCES,
        });
    }

    let mut ids: HashMap<FAtom, usize> = HashMap::new();
    let mut table: Vec<FAtom> = Vec::new();
    let mut sat = Solver::default();
    for c in clauses {
        let vars: Vec<String> = c.vars().into_iter().collect();
        let mut idx = vec![0usize; vars.len()];
        loop {
            let s: Substitution = vars
                .iter()
                .zip(&idx)
                .map(|(v, &i)| (v.clone(), universe[i].clone()))
                .collect();
            let mut lits = Vec::with_capacity(c.len());
            for l in &c.literals {
                let a = l.atom.apply(&s);
                let id = *ids.entry(a.clone()).or_insert_with(|| {
                    table.push(a);
                    table.len() - 1
                });
                lits.push(Lit::new(id, l.positive));
            }
            sat.add_clause(lits);
            if !next_tuple(&mut idx, n) {
                break;
            }
        }
    }
    Ok(sat.solve(table.len()).map(|model| Countermodel {
        true_atoms: table
            .into_iter()
            .zip(model)
            .filter(|(_, v)| *v)
            .map(|(a, _)| a)
            .collect(),
        universe,
    }))
}

fn collect_constants(t: &Term, out: &mut BTreeSet<Term>) -> Result<(), GroundError> {
    match t {
        Term::Var(_) => Ok(()),
        Term::App(f, args) if args.is_empty() => {
            out.insert(Term::constant(f.clone()));
            Ok(())
        }
        Term::App(f, _) => Err(GroundError::NotFunctionFree(f.clone())),
    }
}

/// Odometer increment; false after the last tuple.
fn next_tuple(idx: &mut [usize], n: usize) -> bool {
    for i in idx.iter_mut().rev() {
        *i += 1;
        if *i < n {
            return true;
        }
        *i = 0;
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Lit(u32);

impl Lit {
    fn new(var: usize, positive: bool) -> Self {
        Lit((var as u32) << 1 | (!positive) as u32)
    }
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }
    fn positive(self) -> bool {
        self.0 & 1 == 0
    }
    fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }
    fn index(self) -> usize {
        self.0 as usize
    }
}

/// Chronological-backtracking DPLL with two watched literals.
#[derive(Default)]
struct Solver {
    clauses: Vec<Vec<Lit>>,
    units: Vec<Lit>,
    empty: bool,
    watches: Vec<Vec<usize>>,
    assign: Vec<i8>,
    trail: Vec<Lit>,
    /// Trail positions of decisions, with the decided literal.
    decisions: Vec<(usize, Lit)>,
    qhead: usize,
}

impl Solver {
    fn add_clause(&mut self, mut lits: Vec<Lit>) {
        lits.sort_by_key(|l| l.0);
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
            return;
        }
        match lits.len() {
            0 => self.empty = true,
            1 => self.units.push(lits[0]),
            _ => self.clauses.push(lits),
        }
    }

    fn value(&self, l: Lit) -> i8 {
        let v = self.assign[l.var()];
        if l.positive() {
            v
        } else {
            -v
        }
    }

    fn enqueue(&mut self, l: Lit) -> bool {
        match self.value(l) {
            1 => true,
            -1 => false,
            _ => {
                self.assign[l.var()] = if l.positive() { 1 } else { -1 };
                self.trail.push(l);
                true
            }
        }
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead].negate();
            self.qhead += 1;
            let watching = std::mem::take(&mut self.watches[falsified.index()]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = false;
            for (k, &ci) in watching.iter().enumerate() {
                if conflict {
                    keep.extend_from_slice(&watching[k..]);
                    break;
                }
                let c = &mut self.clauses[ci];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.assign[first.var()] != 0
                    && (self.assign[first.var()] == 1) == first.positive()
                {
                    keep.push(ci);
                    continue;
                }
                let mut moved = false;
                for j in 2..c.len() {
                    let l = c[j];
                    let v = self.assign[l.var()];
                    if v == 0 || (v == 1) == l.positive() {
                        c.swap(1, j);
                        self.watches[l.index()].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                keep.push(ci);
                if !self.enqueue(first) {
                    conflict = true;
                }
            }
            self.watches[falsified.index()] = keep;
            if conflict {
                return false;
            }
        }
        true
    }

    fn backtrack(&mut self) -> bool {
        let Some((pos, decided)) = self.decisions.pop() else {
            return false;
        };
        for l in self.trail.drain(pos..) {
            self.assign[l.var()] = 0;
        }
        self.qhead = pos;
        self.enqueue(decided.negate());
        true
    }

    /// A satisfying assignment, or `None` when unsatisfiable.
    fn solve(mut self, nvars: usize) -> Option<Vec<bool>> {
        if self.empty {
            return None;
        }
        self.assign = vec![0; nvars];
        self.watches = vec![Vec::new(); 2 * nvars];
        for (ci, c) in self.clauses.iter().enumerate() {
            self.watches[c[0].index()].push(ci);
            self.watches[c[1].index()].push(ci);
        }
        for l in std::mem::take(&mut self.units) {
            if !self.enqueue(l) {
                return None;
            }
        }
        let mut next_var = 0;
        loop {
            if !self.propagate() {
                if !self.backtrack() {
                    return None;
                }
                next_var = 0;
                continue;
            }
            while next_var < nvars && self.assign[next_var] != 0 {
                next_var += 1;
            }
            if next_var == nvars {
                return Some(self.assign.iter().map(|&v| v == 1).collect());
            }
            let l = Lit::new(next_var, false);
            self.decisions.push((self.trail.len(), l));
            self.enqueue(l);
        }
    }
}
