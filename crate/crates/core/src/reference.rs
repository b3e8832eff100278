//! Published list sizes and pair counts for lengths 1..=28.

/// `(n, |L_even|, |L_odd|, |L_A|)`; `|L_odd|` is absent for n = 1.
pub const LIST_SIZES: [(usize, u64, Option<u64>, u64); 28] = [
    (1, 1, None, 1),
    (2, 3, Some(1), 3),
    (3, 3, Some(1), 1),
    (4, 3, Some(4), 3),
    (5, 12, Some(4), 5),
    (6, 12, Some(16), 14),
    (7, 39, Some(16), 12),
    (8, 48, Some(64), 36),
    (9, 153, Some(64), 44),
    (10, 153, Some(204), 118),
    (11, 561, Some(252), 99),
    (12, 645, Some(860), 445),
    (13, 2121, Some(884), 279),
    (14, 2463, Some(3284), 294),
    (15, 8340, Some(3572), 1650),
    (16, 9087, Some(12116), 829),
    (17, 31275, Some(12824), 3233),
    (18, 34560, Some(46080), 11159),
    (19, 117597, Some(50944), 10918),
    (20, 130215, Some(173620), 26876),
    (21, 446052, Some(194004), 81941),
    (22, 500478, Some(667304), 90163),
    (23, 1694871, Some(732232), 118747),
    (24, 1886562, Some(2515416), 200138),
    (25, 6447250, Some(2727452), 709584),
    (26, 7183879, Some(9578506), 737891),
    (27, 24426370, Some(10591928), 7618474),
    (28, 27265578, Some(36354113), 3687209),
];

/// `(n, |seqs|, |all|, |inequiv|)`.
pub const PAIR_COUNTS: [(usize, u64, u64, u64); 28] = [
    (1, 4, 16, 1),
    (2, 16, 64, 1),
    (3, 16, 128, 1),
    (4, 64, 512, 2),
    (5, 64, 512, 1),
    (6, 256, 2048, 3),
    (7, 0, 0, 0),
    (8, 768, 6656, 17),
    (9, 0, 0, 0),
    (10, 1536, 12288, 20),
    (11, 64, 512, 1),
    (12, 4608, 36864, 52),
    (13, 64, 512, 1),
    (14, 0, 0, 0),
    (15, 0, 0, 0),
    (16, 13312, 106496, 204),
    (17, 0, 0, 0),
    (18, 3072, 24576, 24),
    (19, 0, 0, 0),
    (20, 26880, 215040, 340),
    (21, 0, 0, 0),
    (22, 1024, 8192, 12),
    (23, 0, 0, 0),
    (24, 98304, 786432, 1056),
    (25, 0, 0, 0),
    (26, 1280, 10240, 16),
    (27, 0, 0, 0),
    (28, 0, 0, 0),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ListSizes {
    pub l_even: u64,
    pub l_odd: Option<u64>,
    pub l_a: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairCounts {
    pub seqs: u64,
    pub all: u64,
    pub inequiv: u64,
}

pub fn list_sizes(n: usize) -> Option<ListSizes> {
    LIST_SIZES
        .iter()
        .find(|row| row.0 == n)
        .map(|&(_, l_even, l_odd, l_a)| ListSizes { l_even, l_odd, l_a })
}

pub fn pair_counts(n: usize) -> Option<PairCounts> {
    PAIR_COUNTS
        .iter()
        .find(|row| row.0 == n)
        .map(|&(_, seqs, all, inequiv)| PairCounts { seqs, all, inequiv })
}
