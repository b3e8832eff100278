//! Completion of `R^2 + I^2 + x^2 + y^2 = 2n` and the admissible set U.

use std::collections::BTreeSet;

/// `d[|R|][|I|]` is true iff `R^2 + I^2 + x^2 + y^2 = 2n` has an integer
/// solution `(x, y)`.
#[derive(Clone, Debug)]
pub struct SolvabilityTable {
    n: usize,
    side: usize,
    cells: Vec<bool>,
}

impl SolvabilityTable {
    pub fn new(n: usize) -> Self {
        let target = 2 * n as i64;
        let side = isqrt(target) as usize + 1;
        let mut cells = vec![false; side * side];
        for r in 0..side {
            for i in 0..side {
                let rest = target - (r * r + i * i) as i64;
                cells[r * side + i] = rest >= 0 && is_sum_of_two_squares(rest);
            }
        }
        SolvabilityTable { n, side, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Indices run over `0..side()` in each coordinate.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Lookup by magnitude; out-of-range indices are unsolvable.
    pub fn get(&self, r: usize, i: usize) -> bool {
        r < self.side && i < self.side && self.cells[r * self.side + i]
    }

    /// Whether `(re, im)` can be completed to a four-squares decomposition of
    /// `2n`.
    pub fn completable(&self, re: i64, im: i64) -> bool {
        self.get(re.unsigned_abs() as usize, im.unsigned_abs() as usize)
    }
}

pub fn four_squares_table(n: usize) -> SolvabilityTable {
    SolvabilityTable::new(n)
}

/// All `(u, v)` with a completion against `2n` and `u + v = n (mod 2)`.
#[derive(Clone, Debug)]
pub struct AdmissiblePairSet {
    n: usize,
    pairs: BTreeSet<(i64, i64)>,
}

impl AdmissiblePairSet {
    pub fn new(table: &SolvabilityTable) -> Self {
        let n = table.n();
        let r = table.side() as i64;
        let mut pairs = BTreeSet::new();
        for u in -r..=r {
            for v in -r..=r {
                if table.completable(u, v) && (u + v).rem_euclid(2) == (n as i64) % 2 {
                    pairs.insert((u, v));
                }
            }
        }
        AdmissiblePairSet { n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, u: i64, v: i64) -> bool {
        self.pairs.contains(&(u, v))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.pairs.iter().copied()
    }
}

pub fn admissible_pairs(n: usize) -> AdmissiblePairSet {
    AdmissiblePairSet::new(&SolvabilityTable::new(n))
}

pub fn completable(re: i64, im: i64, table: &SolvabilityTable) -> bool {
    table.completable(re, im)
}

fn isqrt(m: i64) -> i64 {
    let mut r = (m as f64).sqrt() as i64;
    while r * r > m {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= m {
        r += 1;
    }
    r
}

fn is_sum_of_two_squares(m: i64) -> bool {
    (0..=isqrt(m)).any(|x| {
        let rest = m - x * x;
        let y = isqrt(rest);
        y * y == rest
    })
}
