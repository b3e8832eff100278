//! Small all-solutions search engine over Boolean variables.
//!
//! Chronological backtracking with unit propagation over a clause store
//! (two watched literals) and a programmatic callback consulted after every
//! decision and propagation fixpoint. Conflict clauses returned by the
//! callback are added to the store; every solution is blocked before the
//! search resumes, so the enumeration is complete and repetition-free.

use std::fmt;

use serde::Serialize;

pub type Var = usize;

/// A literal: variable plus polarity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(v: Var) -> Lit {
        Lit((v as u32) << 1)
    }

    pub fn neg(v: Var) -> Lit {
        Lit(((v as u32) << 1) | 1)
    }

    /// The literal that is true when `v` has `value`.
    pub fn with_value(v: Var, value: bool) -> Lit {
        if value {
            Lit::pos(v)
        } else {
            Lit::neg(v)
        }
    }

    pub fn var(self) -> Var {
        (self.0 >> 1) as Var
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_neg() {
            write!(f, "-v{}", self.var())
        } else {
            write!(f, "v{}", self.var())
        }
    }
}

/// What the programmatic callback concluded about a partial assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Nothing to report yet.
    Consistent,
    /// The clause is falsified by the current assignment and must hold in
    /// every solution.
    Conflict(Vec<Lit>),
    /// The (complete) assignment is a solution.
    Solution,
}

pub trait Propagator {
    fn check(&mut self, values: &[Option<bool>]) -> Verdict;
}

#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub clause_conflicts: u64,
    pub programmatic_conflicts: u64,
    pub learned: u64,
    pub solutions: u64,
}

#[derive(Clone, Copy, Debug)]
struct Decision {
    trail_len: usize,
    lit: Lit,
    flipped: bool,
}

pub struct Solver {
    values: Vec<Option<bool>>,
    clauses: Vec<Vec<Lit>>,
    /// Clause indices watching each literal (indexed by `Lit::index`).
    watches: Vec<Vec<usize>>,
    trail: Vec<Lit>,
    queue_head: usize,
    decisions: Vec<Decision>,
    order: Vec<Var>,
    /// Set when a clause added before search is empty or conflicting.
    unsat: bool,
    stats: SolverStats,
}

impl Solver {
    /// `order` lists the variables in decision order; unlisted variables are
    /// decided afterwards in ascending index.
    pub fn new(num_vars: usize, order: &[Var]) -> Self {
        let mut full: Vec<Var> = order.iter().copied().filter(|&v| v < num_vars).collect();
        let mut seen = vec![false; num_vars];
        for &v in &full {
            seen[v] = true;
        }
        full.extend((0..num_vars).filter(|&v| !seen[v]));
        Solver {
            values: vec![None; num_vars],
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            trail: Vec::new(),
            queue_head: 0,
            decisions: Vec::new(),
            order: full,
            unsat: false,
            stats: SolverStats::default(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.values[lit.var()].map(|v| v != lit.is_neg())
    }

    fn assign(&mut self, lit: Lit) {
        self.values[lit.var()] = Some(!lit.is_neg());
        self.trail.push(lit);
    }

    /// Adds a clause before the search starts. Unit clauses are asserted at
    /// the root.
    pub fn add_clause(&mut self, mut lits: Vec<Lit>) {
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
            return; // tautology
        }
        match lits.len() {
            0 => self.unsat = true,
            1 => match self.lit_value(lits[0]) {
                Some(true) => {}
                Some(false) => self.unsat = true,
                None => self.assign(lits[0]),
            },
            _ => {
                self.watch_new(lits);
            }
        }
    }

    fn watch_new(&mut self, lits: Vec<Lit>) -> usize {
        let idx = self.clauses.len();
        self.watches[lits[0].negate().index()].push(idx);
        self.watches[lits[1].negate().index()].push(idx);
        self.clauses.push(lits);
        idx
    }

    /// Stores a clause that is false under the current assignment, watching
    /// its two most recently assigned literals.
    fn learn(&mut self, mut lits: Vec<Lit>) {
        self.stats.learned += 1;
        lits.sort();
        lits.dedup();
        if lits.len() < 2 {
            // A unit learned clause holds at the root; keep it as a clause
            // over a single literal via the root trail once we return there.
            if let Some(&lit) = lits.first() {
                self.clauses.push(vec![lit]);
            }
            return;
        }
        let mut pos = vec![0usize; self.values.len()];
        for (i, l) in self.trail.iter().enumerate() {
            pos[l.var()] = i;
        }
        lits.sort_by_key(|l| std::cmp::Reverse(pos[l.var()]));
        self.watch_new(lits);
    }

    /// Unit propagation to fixpoint. Returns false on a clause conflict.
    fn propagate(&mut self) -> bool {
        while self.queue_head < self.trail.len() {
            let falsified = self.trail[self.queue_head].negate();
            self.queue_head += 1;
            // clauses watching `falsified` are registered under its negation,
            // i.e. the literal just made true
            let key = falsified.negate().index();
            let watching = std::mem::take(&mut self.watches[key]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = false;
            for (pos, &ci) in watching.iter().enumerate() {
                if conflict {
                    keep.extend_from_slice(&watching[pos..]);
                    break;
                }
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let other = clause[0];
                if self.values[other.var()].map(|v| v != other.is_neg()) == Some(true) {
                    keep.push(ci);
                    continue;
                }
                let replacement = (2..clause.len()).find(|&k| {
                    let l = clause[k];
                    self.values[l.var()].map(|v| v != l.is_neg()) != Some(false)
                });
                match replacement {
                    Some(k) => {
                        clause.swap(1, k);
                        let new_watch = clause[1].negate().index();
                        self.watches[new_watch].push(ci);
                    }
                    None => {
                        keep.push(ci);
                        match self.values[other.var()] {
                            None => {
                                self.stats.propagations += 1;
                                self.values[other.var()] = Some(!other.is_neg());
                                self.trail.push(other);
                            }
                            Some(_) => conflict = true,
                        }
                    }
                }
            }
            self.watches[key].extend(keep);
            if conflict {
                self.queue_head = self.trail.len();
                return false;
            }
        }
        true
    }

    /// Undoes to the latest unflipped decision and flips it. Returns false
    /// when the search space is exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some(d) = self.decisions.pop() {
            for lit in self.trail.drain(d.trail_len..) {
                self.values[lit.var()] = None;
            }
            self.queue_head = d.trail_len;
            if !d.flipped {
                let lit = d.lit.negate();
                self.decisions.push(Decision {
                    trail_len: d.trail_len,
                    lit,
                    flipped: true,
                });
                self.assign(lit);
                return true;
            }
        }
        false
    }

    fn next_unassigned(&self) -> Option<Var> {
        self.order
            .iter()
            .copied()
            .find(|&v| self.values[v].is_none())
    }

    /// Enumerates every total assignment accepted by `propagator` and the
    /// clause store, calling `on_solution` for each.
    pub fn enumerate(
        &mut self,
        propagator: &mut impl Propagator,
        mut on_solution: impl FnMut(&[bool]),
    ) {
        if self.unsat {
            return;
        }
        loop {
            if !self.propagate() {
                self.stats.clause_conflicts += 1;
                if !self.backtrack() {
                    return;
                }
                continue;
            }
            match propagator.check(&self.values) {
                Verdict::Conflict(clause) => {
                    self.stats.programmatic_conflicts += 1;
                    self.learn(clause);
                    if !self.backtrack() {
                        return;
                    }
                    continue;
                }
                Verdict::Solution => {
                    self.stats.solutions += 1;
                    let model: Vec<bool> = self.values.iter().map(|v| v.unwrap_or(false)).collect();
                    on_solution(&model);
                    let blocking = model
                        .iter()
                        .enumerate()
                        .map(|(v, &value)| Lit::with_value(v, !value))
                        .collect();
                    self.learn(blocking);
                    if !self.backtrack() {
                        return;
                    }
                    continue;
                }
                Verdict::Consistent => {}
            }
            match self.next_unassigned() {
                Some(v) => {
                    self.stats.decisions += 1;
                    let lit = Lit::neg(v);
                    self.decisions.push(Decision {
                        trail_len: self.trail.len(),
                        lit,
                        flipped: false,
                    });
                    self.assign(lit);
                }
                None => {
                    // Total assignment the callback did not classify; it is
                    // not a solution, so move on.
                    if !self.backtrack() {
                        return;
                    }
                }
            }
        }
    }
}
