//! Stage 1: assemble candidate first sequences from the half-sequence lists.
//!
//! Every half carries the key `(resum X, imsum X, resum iX, imsum iX)`, where
//! `iX` is positional scaling by i. A full sequence `A = odd + even` has
//! prescribed sums `u` exactly when `key(odd) = u - key(even)`, so for each
//! target `u` both lists are scanned once in key order and matching runs are
//! expanded.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::diophantine::{AdmissiblePairSet, SolvabilityTable};
use crate::error::{Error, Result};
use crate::preprocess::{HalfSequence, Parity};
use crate::seq::{Sequence, Z4};
use crate::spectral::{FilterSchedule, RootTable, SpectralFilter};

/// Number of precomputed evaluation points per list entry.
pub const STAGED_POINTS: usize = 32;

/// `(resum X, imsum X, resum iX, imsum iX)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct SosVector(pub [i64; 4]);

impl SosVector {
    fn from_support(support: impl Iterator<Item = (usize, Z4)>) -> Self {
        let mut v = [0i64; 4];
        for (k, a) in support {
            let plain = a.to_gaussian();
            let scaled = (a * Z4::I.pow(k)).to_gaussian();
            v[0] += plain.re;
            v[1] += plain.im;
            v[2] += scaled.re;
            v[3] += scaled.im;
        }
        SosVector(v)
    }

    pub fn of_sequence(a: &Sequence) -> Self {
        SosVector::from_support(a.entries().iter().copied().enumerate())
    }

    pub fn of_half(h: &HalfSequence) -> Self {
        SosVector::from_support(h.support())
    }

    pub fn target(first: (i64, i64), second: (i64, i64)) -> Self {
        SosVector([first.0, first.1, second.0, second.1])
    }

    fn sub(self, rhs: SosVector) -> SosVector {
        let mut v = self.0;
        for (x, y) in v.iter_mut().zip(rhs.0) {
            *x -= y;
        }
        SosVector(v)
    }
}

pub fn sos_vector(a: &Sequence) -> SosVector {
    SosVector::of_sequence(a)
}

/// A half-sequence prepared for joining.
#[derive(Clone, Debug)]
pub struct JoinEntry {
    pub half: HalfSequence,
    pub vec: SosVector,
    /// `half(exp(2 pi i j / 32))` for `j = 0..32`, unless built low-memory.
    pub spectra32: Option<Box<[Complex64; STAGED_POINTS]>>,
    /// Sums of the half after positional scaling by -1 and by -i.
    pub scaled_sums: [(i64, i64); 2],
}

impl JoinEntry {
    pub fn new(half: HalfSequence, precompute: bool, roots: &RootTable) -> Self {
        let spectra32 = precompute.then(|| spectrum32(&half, roots));
        JoinEntry {
            vec: SosVector::of_half(&half),
            scaled_sums: [scaled_sum(&half, Z4::NEG_ONE), scaled_sum(&half, Z4::NEG_I)],
            half,
            spectra32,
        }
    }

    fn spectrum(&self, roots: &RootTable) -> Cow<'_, [Complex64; STAGED_POINTS]> {
        match &self.spectra32 {
            Some(s) => Cow::Borrowed(&**s),
            None => Cow::Owned(*spectrum32(&self.half, roots)),
        }
    }
}

fn scaled_sum(half: &HalfSequence, c: Z4) -> (i64, i64) {
    half.support().fold((0, 0), |(re, im), (k, a)| {
        let g = (a * c.pow(k)).to_gaussian();
        (re + g.re, im + g.im)
    })
}

fn spectrum32(half: &HalfSequence, roots: &RootTable) -> Box<[Complex64; STAGED_POINTS]> {
    let values = roots.evaluate(&half.coefficients());
    let mut out = Box::new([Complex64::new(0.0, 0.0); STAGED_POINTS]);
    out.copy_from_slice(&values);
    out
}

fn odd_order(x: &JoinEntry, y: &JoinEntry) -> Ordering {
    x.vec.cmp(&y.vec).then_with(|| x.half.cmp(&y.half))
}

/// Even entries are ordered by the shifted key `u - vec`, i.e. by descending
/// `vec`.
fn even_order(x: &JoinEntry, y: &JoinEntry) -> Ordering {
    y.vec.cmp(&x.vec).then_with(|| x.half.cmp(&y.half))
}

pub fn sort_odd(list: &mut [JoinEntry]) {
    list.sort_by(odd_order);
}

pub fn sort_even(list: &mut [JoinEntry]) {
    list.sort_by(even_order);
}

fn check_sorted(
    list: &[JoinEntry],
    order: fn(&JoinEntry, &JoinEntry) -> Ordering,
    what: &str,
) -> Result<()> {
    match list
        .windows(2)
        .position(|w| order(&w[0], &w[1]) == Ordering::Greater)
    {
        Some(i) => Err(Error::Precondition(format!(
            "{what} list out of order at position {}",
            i + 1
        ))),
        None => Ok(()),
    }
}

/// Maximal blocks of equal keys.
fn runs(list: &[JoinEntry]) -> Vec<(SosVector, Range<usize>)> {
    let mut out: Vec<(SosVector, Range<usize>)> = Vec::new();
    for (i, e) in list.iter().enumerate() {
        match out.last_mut() {
            Some((key, range)) if *key == e.vec => range.end = i + 1,
            _ => out.push((e.vec, i..i + 1)),
        }
    }
    out
}

/// Sorted odd and even lists with their key runs, validated once.
#[derive(Debug)]
pub struct JoinIndex<'a> {
    odd: &'a [JoinEntry],
    even: &'a [JoinEntry],
    odd_runs: Vec<(SosVector, Range<usize>)>,
    even_runs: Vec<(SosVector, Range<usize>)>,
}

impl<'a> JoinIndex<'a> {
    /// `odd` must be sorted by [`sort_odd`], `even` by [`sort_even`].
    pub fn new(odd: &'a [JoinEntry], even: &'a [JoinEntry]) -> Result<Self> {
        check_sorted(odd, odd_order, "odd")?;
        check_sorted(even, even_order, "even")?;
        Ok(JoinIndex {
            odd,
            even,
            odd_runs: runs(odd),
            even_runs: runs(even),
        })
    }

    /// Calls `emit(odd_index, even_index)` for every pair whose keys add up
    /// to `target`. One forward pass over each run list.
    pub fn for_each_match(&self, target: SosVector, mut emit: impl FnMut(usize, usize)) {
        let (mut i, mut j) = (0, 0);
        while i < self.odd_runs.len() && j < self.even_runs.len() {
            let (odd_key, odd_range) = &self.odd_runs[i];
            let (even_key, even_range) = &self.even_runs[j];
            match odd_key.cmp(&target.sub(*even_key)) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    for x in odd_range.clone() {
                        for y in even_range.clone() {
                            emit(x, y);
                        }
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }

    pub fn odd(&self) -> &'a [JoinEntry] {
        self.odd
    }

    pub fn even(&self) -> &'a [JoinEntry] {
        self.even
    }
}

/// Every `A = odd + even` with `key(odd) = target - key(even)`.
pub fn merge_join(
    odd: &[JoinEntry],
    even: &[JoinEntry],
    target: SosVector,
) -> Result<Vec<Sequence>> {
    let index = JoinIndex::new(odd, even)?;
    let mut out = Vec::new();
    let mut failure = None;
    index.for_each_match(target, |x, y| {
        match HalfSequence::join(&odd[x].half, &even[y].half) {
            Ok(a) => out.push(a),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Options for [`stage1`].
#[derive(Clone, Copy, Debug, Default)]
pub struct JoinOptions {
    pub schedule: FilterSchedule,
    /// Recompute 32-point spectra on demand instead of storing them.
    pub low_memory: bool,
}

/// Rejection counters for one stage-1 run.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct JoinStats {
    pub targets: u64,
    pub joined: u64,
    pub rejected_sums: u64,
    /// Rejections at the 8-, 16- and 32-point staged checks.
    pub rejected_staged: [u64; 3],
    pub rejected_dense: u64,
    pub emitted: u64,
}

impl JoinStats {
    pub fn merge(&mut self, other: &JoinStats) {
        self.targets = self.targets.max(other.targets);
        self.joined += other.joined;
        self.rejected_sums += other.rejected_sums;
        for (x, y) in self.rejected_staged.iter_mut().zip(other.rejected_staged) {
            *x += y;
        }
        self.rejected_dense += other.rejected_dense;
        self.emitted += other.emitted;
    }
}

#[derive(Default)]
struct AtomicStats {
    joined: AtomicU64,
    rejected_sums: AtomicU64,
    rejected_staged: [AtomicU64; 3],
    rejected_dense: AtomicU64,
}

fn bump(counter: &AtomicU64) {
    counter.fetch_add(1, AtomicOrdering::Relaxed);
}

/// Prepared inputs for stage 1 at one length: sorted, keyed lists.
#[derive(Debug)]
pub struct Stage1Input {
    pub n: usize,
    pub odd: Vec<JoinEntry>,
    pub even: Vec<JoinEntry>,
}

impl Stage1Input {
    pub fn new(
        n: usize,
        odd: &[HalfSequence],
        even: &[HalfSequence],
        options: &JoinOptions,
    ) -> Result<Self> {
        for h in odd {
            if h.parity() != Parity::Odd || h.n() != n {
                return Err(Error::domain(format!(
                    "{h} is not an odd half of length {n}"
                )));
            }
        }
        for h in even {
            if h.parity() != Parity::Even || h.n() != n {
                return Err(Error::domain(format!(
                    "{h} is not an even half of length {n}"
                )));
            }
        }
        let roots = RootTable::new(STAGED_POINTS)?;
        let precompute = !options.low_memory;
        let mut odd: Vec<JoinEntry> = odd
            .par_iter()
            .map(|h| JoinEntry::new(h.clone(), precompute, &roots))
            .collect();
        let mut even: Vec<JoinEntry> = even
            .par_iter()
            .map(|h| JoinEntry::new(h.clone(), precompute, &roots))
            .collect();
        sort_odd(&mut odd);
        sort_even(&mut even);
        Ok(Stage1Input { n, odd, even })
    }

    /// Contiguous slice of the sorted odd list assigned to `shard`.
    pub fn odd_shard(&self, shards: usize, shard: usize) -> &[JoinEntry] {
        let len = self.odd.len();
        &self.odd[shard * len / shards..(shard + 1) * len / shards]
    }
}

/// Staged-check evaluation points as indices into the 32-point grid: odd `j`
/// over 8 points, then 16, then 32.
const STAGES: [(usize, usize); 3] = [(8, 4), (16, 2), (32, 1)];

/// Runs stage 1 over the given odd entries (the whole list or one shard)
/// against the full even list.
pub fn stage1_on(
    input: &Stage1Input,
    odd: &[JoinEntry],
    options: &JoinOptions,
) -> Result<(Vec<Sequence>, JoinStats)> {
    let n = input.n;
    let bound = 2.0 * n as f64;
    let limit = bound + options.schedule.epsilon;
    let table = SolvabilityTable::new(n);
    let admissible = AdmissiblePairSet::new(&table);
    let dense = SpectralFilter::new(options.schedule.dense())?;
    let roots = RootTable::new(STAGED_POINTS)?;
    let index = JoinIndex::new(odd, &input.even)?;

    let targets: Vec<SosVector> = admissible
        .iter()
        .flat_map(|first| {
            admissible
                .iter()
                .map(move |second| SosVector::target(first, second))
        })
        .collect();

    let counters = AtomicStats::default();
    let mut found: Vec<Sequence> = targets
        .par_iter()
        .flat_map_iter(|&target| {
            let mut local = Vec::new();
            index.for_each_match(target, |x, y| {
                bump(&counters.joined);
                let (o, e) = (&odd[x], &input.even[y]);
                let [f, r] = [0, 1].map(|i| {
                    let (p, q) = (o.scaled_sums[i], e.scaled_sums[i]);
                    (p.0 + q.0, p.1 + q.1)
                });
                if !table.completable(f.0, f.1) || !table.completable(r.0, r.1) {
                    bump(&counters.rejected_sums);
                    return;
                }

                let (so, se) = (o.spectrum(&roots), e.spectrum(&roots));
                for (stage, &(points, stride)) in STAGES.iter().enumerate() {
                    let hit = (1..points)
                        .step_by(2)
                        .any(|j| (so[j * stride] + se[j * stride]).norm_sqr() > limit);
                    if hit {
                        bump(&counters.rejected_staged[stage]);
                        return;
                    }
                }

                let a = match HalfSequence::join(&o.half, &e.half) {
                    Ok(a) => a,
                    Err(_) => return,
                };
                if dense.exceeds(&a.coefficients(), bound) {
                    bump(&counters.rejected_dense);
                    return;
                }
                local.push(a);
            });
            local
        })
        .collect();

    found.sort();
    found.dedup();

    let stats = JoinStats {
        targets: targets.len() as u64,
        joined: counters.joined.into_inner(),
        rejected_sums: counters.rejected_sums.into_inner(),
        rejected_staged: counters.rejected_staged.map(AtomicU64::into_inner),
        rejected_dense: counters.rejected_dense.into_inner(),
        emitted: found.len() as u64,
    };
    Ok((found, stats))
}

/// Stage 1 over the full lists.
pub fn stage1(
    n: usize,
    odd: &[HalfSequence],
    even: &[HalfSequence],
    options: &JoinOptions,
) -> Result<(Vec<Sequence>, JoinStats)> {
    let input = Stage1Input::new(n, odd, even, options)?;
    stage1_on(&input, &input.odd, options)
}
