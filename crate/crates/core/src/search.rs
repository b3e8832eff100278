//! Stage 2: all partners `B` (with `b0 = 1`) of a fixed first sequence `A`.
//!
//! Entry `b_k` is encoded by variables `v_{2k}, v_{2k+1}`:
//!
//! | v_{2k} | v_{2k+1} | b_k |
//! |--------|----------|-----|
//! | F      | F        | 1   |
//! | F      | T        | -1  |
//! | T      | F        | i   |
//! | T      | T        | -i  |
//!
//! so `v_{2k}` is true exactly when `b_k` is imaginary. The autocorrelation
//! equations `N_A(s) + N_B(s) = 0` are enforced by a programmatic callback
//! that emits a conflict clause over the entries of `N_B(s)` as soon as they
//! are all decided and the equation fails.

use serde::Serialize;

use crate::seq::{autocorrelation_of, GaussianInt, Sequence, Z4};
use crate::solver::{Lit, Propagator, Solver, SolverStats, Var, Verdict};

/// Two-variable encoding of one entry.
pub fn encode_entry(b: Z4) -> (bool, bool) {
    match b {
        Z4::ONE => (false, false),
        Z4::NEG_ONE => (false, true),
        Z4::I => (true, false),
        _ => (true, true),
    }
}

pub fn decode_entry(imaginary: bool, negative: bool) -> Z4 {
    match (imaginary, negative) {
        (false, false) => Z4::ONE,
        (false, true) => Z4::NEG_ONE,
        (true, false) => Z4::I,
        (true, true) => Z4::NEG_I,
    }
}

/// Clause sets for one first sequence.
#[derive(Clone, Debug)]
pub struct SearchInstance {
    pub a: Sequence,
    pub unit_clauses: Vec<Lit>,
    pub binary_clauses: Vec<[Lit; 2]>,
}

/// Unit clauses fixing `b0 = 1` plus the two parity clauses per mirrored
/// index pair: an even number of `a_k, a_{n-k-1}, b_k, b_{n-k-1}` are real.
pub fn encode_instance(a: &Sequence) -> SearchInstance {
    let n = a.len();
    let entries = a.entries();
    let mut binary_clauses = Vec::with_capacity(2 * (n / 2));
    for k in 0..n / 2 {
        let partner = n - k - 1;
        let x = 2 * k;
        let y = 2 * partner;
        if entries[k].is_real() != entries[partner].is_real() {
            binary_clauses.push([Lit::pos(x), Lit::pos(y)]);
            binary_clauses.push([Lit::neg(x), Lit::neg(y)]);
        } else {
            binary_clauses.push([Lit::pos(x), Lit::neg(y)]);
            binary_clauses.push([Lit::neg(x), Lit::pos(y)]);
        }
    }
    SearchInstance {
        a: a.clone(),
        unit_clauses: vec![Lit::neg(0), Lit::neg(1)],
        binary_clauses,
    }
}

/// Outcome of one callback invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Conflict(Vec<Lit>),
    Undetermined,
    Solution(Sequence),
}

/// The programmatic part of the instance: `N_A(s)` cached once.
#[derive(Clone, Debug)]
pub struct AutocorrelationOracle {
    n: usize,
    target: Vec<GaussianInt>,
}

impl AutocorrelationOracle {
    pub fn new(a: &Sequence) -> Self {
        // N_B(s) must equal -N_A(s)
        let target = (0..a.len())
            .map(|s| -autocorrelation_of(a.entries(), s))
            .collect();
        AutocorrelationOracle { n: a.len(), target }
    }

    fn entry(values: &[Option<bool>], k: usize) -> Option<Z4> {
        Some(decode_entry(values[2 * k]?, values[2 * k + 1]?))
    }

    /// Scans `s = n-1` down to `1`; the first decidable equation that fails
    /// yields a clause negating the current values of its entries.
    pub fn check(&self, values: &[Option<bool>]) -> Check {
        let n = self.n;
        let b: Vec<Option<Z4>> = (0..n).map(|k| Self::entry(values, k)).collect();
        for s in (1..n).rev() {
            let involved = (0..n - s).chain(s.max(n - s)..n);
            if involved.clone().any(|k| b[k].is_none()) {
                continue;
            }
            let mut total = GaussianInt::ZERO;
            for k in 0..n - s {
                total += b[k].unwrap() * b[k + s].unwrap().conj();
            }
            if total != self.target[s] {
                let clause = involved
                    .flat_map(|k| {
                        let (x, y) = (2 * k, 2 * k + 1);
                        [
                            Lit::with_value(x, !values[x].unwrap()),
                            Lit::with_value(y, !values[y].unwrap()),
                        ]
                    })
                    .collect();
                return Check::Conflict(clause);
            }
        }
        match b.into_iter().collect::<Option<Vec<Z4>>>() {
            Some(entries) => Check::Solution(Sequence::new(entries).expect("n >= 1")),
            None => Check::Undetermined,
        }
    }
}

impl Propagator for AutocorrelationOracle {
    fn check(&mut self, values: &[Option<bool>]) -> Verdict {
        match AutocorrelationOracle::check(self, values) {
            Check::Conflict(c) => Verdict::Conflict(c),
            Check::Undetermined => Verdict::Consistent,
            Check::Solution(_) => Verdict::Solution,
        }
    }
}

/// Single-shot form of the callback.
pub fn programmatic_check(a: &Sequence, partial: &[Option<bool>]) -> Check {
    AutocorrelationOracle::new(a).check(partial)
}

/// Entries decided from both ends inwards, so `N_B(n-1)`, `N_B(n-2)`, ...
/// become decidable one after another.
pub fn decision_order(n: usize) -> Vec<Var> {
    let mut order = Vec::with_capacity(2 * n);
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        order.extend([2 * lo, 2 * lo + 1]);
        lo += 1;
        if lo < hi {
            hi -= 1;
            order.extend([2 * hi, 2 * hi + 1]);
        }
    }
    order
}

#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
pub struct PartnerStats {
    pub solver: SolverStats,
    pub clauses: u64,
}

/// Every `B` with `b0 = 1` such that `(A, B)` is a Golay pair, sorted.
pub fn enumerate_partners(a: &Sequence) -> (Vec<Sequence>, PartnerStats) {
    let n = a.len();
    let instance = encode_instance(a);
    let mut solver = Solver::new(2 * n, &decision_order(n));
    for &u in &instance.unit_clauses {
        solver.add_clause(vec![u]);
    }
    for clause in &instance.binary_clauses {
        solver.add_clause(clause.to_vec());
    }
    let mut oracle = AutocorrelationOracle::new(a);
    let mut partners = Vec::new();
    solver.enumerate(&mut oracle, |model| {
        let entries = (0..n)
            .map(|k| decode_entry(model[2 * k], model[2 * k + 1]))
            .collect();
        let b = Sequence::new(entries).expect("n >= 1");
        // exact confirmation before emission
        if crate::seq::is_golay_pair(a, &b).unwrap_or(false) {
            partners.push(b);
        }
    });
    partners.sort();
    let stats = PartnerStats {
        solver: solver.stats(),
        clauses: solver.num_clauses() as u64,
    };
    (partners, stats)
}
