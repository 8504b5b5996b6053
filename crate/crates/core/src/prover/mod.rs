//! Connection-tableau refutation prover with iterative deepening on
//! tableau depth.
//!
//! Every proof is checked by [`Proof::validate`] before it is handed out;
//! the process-wide counters in [`replay_stats`] record how many proofs were
//! emitted and how many failed that check.

mod proof;

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::clausify::Clausifier;
use crate::formula::{ClausalForm, Clause, FAtom, Formula, Literal, SuperPredicate};
use crate::term::{Substitution, Term};

pub use proof::{ground_proof, Proof, ProofNode, ReplayError};

const SPLIT_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColoredClause {
    pub clause: Clause,
    pub side: Side,
    pub origin: String,
}

impl ColoredClause {
    pub fn new(clause: Clause, side: Side, origin: impl Into<String>) -> Self {
        ColoredClause {
            clause,
            side,
            origin: origin.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_depth: usize,
    pub max_inferences: u64,
    pub wall_time: Duration,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_depth: 12,
            max_inferences: 1_000_000,
            wall_time: Duration::from_secs(10),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    /// Every tableau up to the depth limit failed.
    DepthExhausted,
    /// No tableau of any depth closes.
    Saturated,
    Inferences,
    Timeout,
}

impl std::fmt::Display for Unknown {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Unknown::DepthExhausted => "depth limit reached",
            Unknown::Saturated => "search space exhausted",
            Unknown::Inferences => "inference limit reached",
            Unknown::Timeout => "time limit reached",
        })
    }
}

static PROOFS_EMITTED: AtomicU64 = AtomicU64::new(0);
static REPLAY_FAILURES: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayStats {
    pub emitted: u64,
    pub failed: u64,
}

/// Proofs produced by the search in this process, and how many of them
/// failed independent replay.
pub fn replay_stats() -> ReplayStats {
    ReplayStats {
        emitted: PROOFS_EMITTED.load(Ordering::Relaxed),
        failed: REPLAY_FAILURES.load(Ordering::Relaxed),
    }
}

/// Searches for one closed tableau.
pub fn prove(clauses: &[ColoredClause], limits: &SearchLimits) -> Result<Proof, Unknown> {
    let deadline = Instant::now() + limits.wall_time;
    let (mut proofs, why) = search(clauses, limits, deadline, 1);
    proofs.pop().ok_or(why.unwrap_or(Unknown::Saturated))
}

/// Up to `n` distinct proofs in discovery order. The second component says
/// why the search stopped early, if it did.
pub fn prove_many(
    clauses: &[ColoredClause],
    limits: &SearchLimits,
    n: usize,
) -> (Vec<Proof>, Option<Unknown>) {
    search(clauses, limits, Instant::now() + limits.wall_time, n)
}

/// Clause sets whose joint unsatisfiability is equivalent to `f ⊨ g`: the
/// clauses of `f` colored left, each split piece of `¬g` colored right.
pub fn entailment_problems(
    f: &Formula,
    g: &Formula,
    cl: &mut Clausifier,
) -> Vec<Vec<ColoredClause>> {
    let left: ClausalForm = cl.clausify_split(f, 1).into_iter().flatten().collect();
    let left: Vec<ColoredClause> = left
        .into_iter()
        .enumerate()
        .map(|(i, c)| ColoredClause::new(c, Side::Left, format!("left{i}")))
        .collect();
    cl.clausify_split(&Formula::not(g.clone()), SPLIT_CAP)
        .into_iter()
        .map(|piece| {
            let mut all = left.clone();
            all.extend(
                piece
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| ColoredClause::new(c, Side::Right, format!("right{i}"))),
            );
            all
        })
        .collect()
}

/// One proof per split piece of `f ⊨ g`, sharing one time budget.
pub fn prove_entailment(
    f: &Formula,
    g: &Formula,
    limits: &SearchLimits,
) -> Result<Vec<Proof>, Unknown> {
    let deadline = Instant::now() + limits.wall_time;
    let mut out = Vec::new();
    for problem in entailment_problems(f, g, &mut Clausifier::new()) {
        let (mut ps, why) = search(&problem, limits, deadline, 1);
        match ps.pop() {
            Some(p) => out.push(p),
            None => return Err(why.unwrap_or(Unknown::Saturated)),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Internal term representation.

#[derive(Debug, Clone, PartialEq, Eq)]
enum T {
    V(u32),
    F(u32, Vec<T>),
}

#[derive(Debug, Clone)]
struct ILit {
    pos: bool,
    pred: u32,
    args: Vec<T>,
}

struct IClause {
    lits: Vec<ILit>,
    nvars: u32,
    side: Side,
}

const NO_PARENT: u32 = u32::MAX;

struct Node {
    lit: ILit,
    parent: u32,
    clause: u32,
    depth: u32,
}

enum Item {
    Goal(u32),
    Marker {
        goal: u32,
        trail_len: usize,
        var_base: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Fail,
    /// Stop trying alternatives for this goal.
    Cut(u32),
    Stop,
    Abort(Unknown),
}

struct Search<'a> {
    input: &'a [ColoredClause],
    clauses: Vec<IClause>,
    preds: Vec<SuperPredicate>,
    funcs: Vec<String>,
    /// (predicate, polarity) -> (clause, literal) pairs.
    index: HashMap<(u32, bool), Vec<(u32, u32)>>,
    bind: Vec<Option<T>>,
    trail: Vec<u32>,
    nodes: Vec<Node>,
    closures: Vec<(u32, u32)>,
    depth_limit: u32,
    hit_limit: bool,
    inferences: u64,
    max_inferences: u64,
    deadline: Instant,
    want: usize,
    found: Vec<Proof>,
    seen: BTreeSet<String>,
    start_clause: u32,
}

fn search(
    input: &[ColoredClause],
    limits: &SearchLimits,
    deadline: Instant,
    want: usize,
) -> (Vec<Proof>, Option<Unknown>) {
    let mut s = Search::new(input, limits, deadline, want);
    let mut starts: Vec<u32> = (0..s.clauses.len() as u32)
        .filter(|&c| s.clauses[c as usize].side == Side::Right)
        .collect();
    starts
        .extend((0..s.clauses.len() as u32).filter(|&c| s.clauses[c as usize].side == Side::Left));
    let mut why = None;
    'deepening: for depth in 1..=limits.max_depth.max(1) as u32 {
        s.depth_limit = depth;
        s.hit_limit = false;
        for &c in &starts {
            match s.start(c) {
                Flow::Stop => break 'deepening,
                Flow::Abort(u) => {
                    why = Some(u);
                    break 'deepening;
                }
                Flow::Fail | Flow::Cut(_) => {}
            }
        }
        if !s.hit_limit {
            if s.found.len() < want {
                why = Some(Unknown::Saturated);
            }
            break;
        }
        if depth as usize == limits.max_depth.max(1) && s.found.len() < want {
            why = Some(Unknown::DepthExhausted);
        }
    }
    (s.found, why)
}

impl<'a> Search<'a> {
    fn new(
        input: &'a [ColoredClause],
        limits: &SearchLimits,
        deadline: Instant,
        want: usize,
    ) -> Self {
        let mut s = Search {
            input,
            clauses: Vec::new(),
            preds: Vec::new(),
            funcs: Vec::new(),
            index: HashMap::new(),
            bind: Vec::new(),
            trail: Vec::new(),
            nodes: Vec::new(),
            closures: Vec::new(),
            depth_limit: 1,
            hit_limit: false,
            inferences: 0,
            max_inferences: limits.max_inferences,
            deadline,
            want,
            found: Vec::new(),
            seen: BTreeSet::new(),
            start_clause: 0,
        };
        let mut pred_ids: HashMap<SuperPredicate, u32> = HashMap::new();
        let mut func_ids: HashMap<String, u32> = HashMap::new();
        for (ci, cc) in input.iter().enumerate() {
            let mut vars: HashMap<String, u32> = HashMap::new();
            let mut lits = Vec::new();
            for (li, l) in cc.clause.literals.iter().enumerate() {
                let pred = *pred_ids.entry(l.atom.pred.clone()).or_insert_with(|| {
                    s.preds.push(l.atom.pred.clone());
                    s.preds.len() as u32 - 1
                });
                let args = l
                    .atom
                    .args
                    .iter()
                    .map(|t| intern(t, &mut vars, &mut func_ids, &mut s.funcs))
                    .collect();
                s.index
                    .entry((pred, l.positive))
                    .or_default()
                    .push((ci as u32, li as u32));
                lits.push(ILit {
                    pos: l.positive,
                    pred,
                    args,
                });
            }
            s.clauses.push(IClause {
                lits,
                nvars: vars.len() as u32,
                side: cc.side,
            });
        }
        s
    }

    fn reset(&mut self) {
        self.bind.clear();
        self.trail.clear();
        self.nodes.clear();
        self.closures.clear();
    }

    fn start(&mut self, c: u32) -> Flow {
        self.reset();
        self.start_clause = c;
        let lits = self.instantiate(c);
        let first = self.nodes.len() as u32;
        for lit in lits {
            self.nodes.push(Node {
                lit,
                parent: NO_PARENT,
                clause: c,
                depth: 1,
            });
        }
        let mut stack: Vec<Item> = (first..self.nodes.len() as u32)
            .rev()
            .map(Item::Goal)
            .collect();
        self.run(&mut stack)
    }

    fn instantiate(&mut self, c: u32) -> Vec<ILit> {
        let base = self.bind.len() as u32;
        let clause = &self.clauses[c as usize];
        self.bind
            .resize(self.bind.len() + clause.nvars as usize, None);
        clause
            .lits
            .iter()
            .map(|l| ILit {
                pos: l.pos,
                pred: l.pred,
                args: l.args.iter().map(|t| offset(t, base)).collect(),
            })
            .collect()
    }

    fn tick(&mut self) -> Option<Unknown> {
        self.inferences += 1;
        if self.inferences > self.max_inferences {
            return Some(Unknown::Inferences);
        }
        if self.inferences.is_multiple_of(1024) && Instant::now() >= self.deadline {
            return Some(Unknown::Timeout);
        }
        None
    }

    /// Processes the goal stack; restores it before returning.
    fn run(&mut self, stack: &mut Vec<Item>) -> Flow {
        let Some(item) = stack.pop() else {
            return self.solution();
        };
        let r = match item {
            Item::Goal(g) => self.solve_goal(g, stack),
            Item::Marker {
                goal,
                trail_len,
                var_base,
            } => {
                let r = self.run(stack);
                let local = self.trail[trail_len..].iter().all(|&v| v >= var_base);
                if r == Flow::Fail && local && self.want == 1 {
                    Flow::Cut(goal)
                } else {
                    r
                }
            }
        };
        stack.push(item);
        r
    }

    fn solve_goal(&mut self, g: u32, stack: &mut Vec<Item>) -> Flow {
        if self.irregular(g) {
            return Flow::Fail;
        }
        let lit = self.nodes[g as usize].lit.clone();

        // Reductions.
        let mut anc = self.nodes[g as usize].parent;
        while anc != NO_PARENT {
            let a = &self.nodes[anc as usize];
            let next = a.parent;
            if a.lit.pos != lit.pos && a.lit.pred == lit.pred {
                let alits = a.lit.args.clone();
                if let Some(u) = self.tick() {
                    return Flow::Abort(u);
                }
                let mark = (
                    self.trail.len(),
                    self.bind.len(),
                    self.nodes.len(),
                    self.closures.len(),
                );
                if self.unify_args(&lit.args, &alits) {
                    self.closures.push((g, anc));
                    stack.push(Item::Marker {
                        goal: g,
                        trail_len: mark.0,
                        var_base: mark.1 as u32,
                    });
                    let r = self.run(stack);
                    stack.pop();
                    self.undo(mark);
                    match r {
                        Flow::Fail => {}
                        Flow::Cut(c) if c == g => return Flow::Fail,
                        other => return other,
                    }
                } else {
                    self.undo(mark);
                }
            }
            anc = next;
        }

        // Extensions.
        let depth = self.nodes[g as usize].depth;
        let Some(cands) = self.index.get(&(lit.pred, !lit.pos)).cloned() else {
            return Flow::Fail;
        };
        if depth > self.depth_limit {
            self.hit_limit = true;
            return Flow::Fail;
        }
        for (ci, li) in cands {
            if let Some(u) = self.tick() {
                return Flow::Abort(u);
            }
            let mark = (
                self.trail.len(),
                self.bind.len(),
                self.nodes.len(),
                self.closures.len(),
            );
            let inst = self.instantiate(ci);
            if !self.unify_args(&lit.args, &inst[li as usize].args) {
                self.undo(mark);
                continue;
            }
            let first = self.nodes.len() as u32;
            for l in inst {
                self.nodes.push(Node {
                    lit: l,
                    parent: g,
                    clause: ci,
                    depth: depth + 1,
                });
            }
            self.closures.push((first + li, g));
            let base = stack.len();
            stack.push(Item::Marker {
                goal: g,
                trail_len: mark.0,
                var_base: mark.1 as u32,
            });
            for k in (first..self.nodes.len() as u32).rev() {
                if k != first + li {
                    stack.push(Item::Goal(k));
                }
            }
            let r = self.run(stack);
            stack.truncate(base);
            self.undo(mark);
            match r {
                Flow::Fail => {}
                Flow::Cut(c) if c == g => return Flow::Fail,
                other => return other,
            }
        }
        Flow::Fail
    }

    fn undo(&mut self, (trail, vars, nodes, closures): (usize, usize, usize, usize)) {
        for v in self.trail.drain(trail..) {
            self.bind[v as usize] = None;
        }
        self.bind.truncate(vars);
        self.nodes.truncate(nodes);
        self.closures.truncate(closures);
    }

    fn irregular(&self, g: u32) -> bool {
        let n = &self.nodes[g as usize];
        let mut anc = n.parent;
        while anc != NO_PARENT {
            let a = &self.nodes[anc as usize];
            if a.lit.pos == n.lit.pos
                && a.lit.pred == n.lit.pred
                && self.equal_args(&a.lit.args, &n.lit.args)
            {
                return true;
            }
            anc = a.parent;
        }
        false
    }

    fn deref<'t>(&'t self, mut t: &'t T) -> &'t T {
        while let T::V(v) = t {
            match &self.bind[*v as usize] {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn equal_args(&self, a: &[T], b: &[T]) -> bool {
        a.iter().zip(b).all(|(x, y)| self.equal(x, y))
    }

    fn equal(&self, a: &T, b: &T) -> bool {
        match (self.deref(a), self.deref(b)) {
            (T::V(x), T::V(y)) => x == y,
            (T::F(f, xs), T::F(g, ys)) => f == g && self.equal_args(xs, ys),
            _ => false,
        }
    }

    fn occurs(&self, v: u32, t: &T) -> bool {
        match self.deref(t) {
            T::V(w) => *w == v,
            T::F(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify_args(&mut self, a: &[T], b: &[T]) -> bool {
        a.iter().zip(b).all(|(x, y)| self.unify(x, y))
    }

    fn unify(&mut self, a: &T, b: &T) -> bool {
        let a = self.deref(a).clone();
        let b = self.deref(b).clone();
        match (&a, &b) {
            (T::V(x), T::V(y)) if x == y => true,
            (T::V(x), t) | (t, T::V(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.bind[*x as usize] = Some(t.clone());
                self.trail.push(*x);
                true
            }
            (T::F(f, xs), T::F(g, ys)) => f == g && xs.len() == ys.len() && self.unify_args(xs, ys),
        }
    }

    fn solution(&mut self) -> Flow {
        // Regularity can be lost through bindings made after a goal was checked.
        for g in 0..self.nodes.len() as u32 {
            if self.irregular(g) {
                return Flow::Fail;
            }
        }
        let proof = self.to_proof();
        PROOFS_EMITTED.fetch_add(1, Ordering::Relaxed);
        if proof.validate().is_err() {
            REPLAY_FAILURES.fetch_add(1, Ordering::Relaxed);
            return Flow::Fail;
        }
        if self.want > 1 && !self.seen.insert(ground_proof(&proof).dump()) {
            return Flow::Fail;
        }
        self.found.push(proof);
        if self.found.len() >= self.want {
            Flow::Stop
        } else {
            Flow::Fail
        }
    }

    fn export(&self, t: &T) -> Term {
        match t {
            T::V(v) => Term::Var(format!("_G{v}")),
            T::F(f, args) => Term::App(
                self.funcs[*f as usize].clone(),
                args.iter().map(|a| self.export(a)).collect(),
            ),
        }
    }

    fn resolve(&self, t: &T) -> Term {
        match self.deref(t) {
            T::V(v) => Term::Var(format!("_G{v}")),
            T::F(f, args) => Term::App(
                self.funcs[*f as usize].clone(),
                args.iter().map(|a| self.resolve(a)).collect(),
            ),
        }
    }

    fn to_proof(&self) -> Proof {
        let mut nodes: Vec<ProofNode> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| ProofNode {
                id: i,
                parent: (n.parent != NO_PARENT).then_some(n.parent as usize),
                literal: Literal {
                    positive: n.lit.pos,
                    atom: FAtom::new(
                        self.preds[n.lit.pred as usize].clone(),
                        n.lit.args.iter().map(|a| self.export(a)).collect(),
                    ),
                },
                clause: n.clause as usize,
                side: self.clauses[n.clause as usize].side,
                closed_by: None,
                children: Vec::new(),
            })
            .collect();
        for i in 0..nodes.len() {
            if let Some(p) = nodes[i].parent {
                nodes[p].children.push(i);
            }
        }
        for &(leaf, target) in &self.closures {
            nodes[leaf as usize].closed_by = Some(target as usize);
        }
        let start = nodes
            .iter()
            .filter(|n| n.parent.is_none())
            .map(|n| n.id)
            .collect();
        let global_subst: Substitution = (0..self.bind.len() as u32)
            .filter(|&v| self.bind[v as usize].is_some())
            .map(|v| (format!("_G{v}"), self.resolve(&T::V(v))))
            .collect();
        Proof {
            clauses: self.input.to_vec(),
            nodes,
            start_clause: self.start_clause as usize,
            start,
            global_subst,
        }
    }
}

fn offset(t: &T, base: u32) -> T {
    match t {
        T::V(v) => T::V(v + base),
        T::F(f, args) => T::F(*f, args.iter().map(|a| offset(a, base)).collect()),
    }
}

fn intern(
    t: &Term,
    vars: &mut HashMap<String, u32>,
    funcs: &mut HashMap<String, u32>,
    table: &mut Vec<String>,
) -> T {
    match t {
        Term::Var(v) => {
            let n = vars.len() as u32;
            T::V(*vars.entry(v.clone()).or_insert(n))
        }
        Term::App(f, args) => {
            let id = *funcs.entry(f.clone()).or_insert_with(|| {
                table.push(f.clone());
                table.len() as u32 - 1
            });
            T::F(
                id,
                args.iter().map(|a| intern(a, vars, funcs, table)).collect(),
            )
        }
    }
}


#[cfg(test)]
mod empty_clause_tests {
    use super::*;

    #[test]
    fn trivial_entailment_is_proved() {
        let pieces = entailment_problems(&Formula::True, &Formula::True, &mut Clausifier::new());
        let p = prove(&pieces[0], &SearchLimits::default()).unwrap();
        assert!(p.nodes.is_empty());
        assert!(p.validate().is_ok());
    }
}
