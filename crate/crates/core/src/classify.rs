//! Equivalence closure of the stage-2 pairs.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq::{EquivOp, PairRecord, Sequence};

/// Orbit of `p` under the operations E1..E5.
pub fn closure(p: &PairRecord) -> Result<HashSet<PairRecord>> {
    if !p.is_golay() {
        return Err(Error::domain(format!("{p} is not a Golay pair")));
    }
    Ok(orbit(p))
}

fn orbit(p: &PairRecord) -> HashSet<PairRecord> {
    let mut seen = HashSet::from([p.clone()]);
    let mut work = vec![p.clone()];
    while let Some(q) = work.pop() {
        for op in EquivOp::ALL {
            let r = q.apply(op);
            if !seen.contains(&r) {
                seen.insert(r.clone());
                work.push(r);
            }
        }
    }
    seen
}

#[derive(Clone, Debug, Default)]
pub struct ClassificationResult {
    pub omega_all: HashSet<PairRecord>,
    /// One representative per class, in order of discovery; each is the
    /// lexicographically least member of its class.
    pub omega_inequiv: Vec<PairRecord>,
    pub omega_seqs: BTreeSet<Sequence>,
}

/// Folds the stage-2 pairs into equivalence classes.
pub fn classify_all<'a>(
    pairs: impl IntoIterator<Item = &'a PairRecord>,
) -> Result<ClassificationResult> {
    let mut result = ClassificationResult::default();
    for p in pairs {
        if result.omega_all.contains(p) {
            continue;
        }
        let class = closure(p)?;
        let rep = class.iter().min().expect("orbit contains p").clone();
        result.omega_inequiv.push(rep);
        result.omega_all.extend(class);
    }
    for p in &result.omega_all {
        result.omega_seqs.insert(p.a.clone());
        result.omega_seqs.insert(p.b.clone());
    }
    Ok(result)
}

/// `(n, |seqs|, |all|, |inequiv|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub n: usize,
    pub seqs: u64,
    pub all: u64,
    pub inequiv: u64,
}

pub fn counts(n: usize, r: &ClassificationResult) -> ClassCounts {
    ClassCounts {
        n,
        seqs: r.omega_seqs.len() as u64,
        all: r.omega_all.len() as u64,
        inequiv: r.omega_inequiv.len() as u64,
    }
}
