//! Independent oracles shared by the integration suites. Nothing here calls
//! into the search code; sequences are plain exponent vectors.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use quadgolay::{PairRecord, Sequence};
use rand::Rng;

/// `i^e` as an integer pair.
pub fn unit(e: u8) -> (i64, i64) {
    [(1, 0), (0, 1), (-1, 0), (0, -1)][(e % 4) as usize]
}

/// `sum_k a_k conj(a_{k+s})`, straight from the definition.
pub fn autocorr(a: &[u8], s: usize) -> (i64, i64) {
    let mut total = (0, 0);
    for k in 0..a.len() - s {
        let (re, im) = unit(a[k] + 4 - a[k + s] % 4);
        total.0 += re;
        total.1 += im;
    }
    total
}

pub fn autocorr_vector(a: &[u8]) -> Vec<(i64, i64)> {
    (1..a.len()).map(|s| autocorr(a, s)).collect()
}

pub fn is_golay(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len()
        && (1..a.len()).all(|s| {
            let (x, y) = (autocorr(a, s), autocorr(b, s));
            x.0 + y.0 == 0 && x.1 + y.1 == 0
        })
}

pub fn to_seq(e: &[u8]) -> Sequence {
    Sequence::from_exponents(e).unwrap()
}

pub fn to_pair(a: &[u8], b: &[u8]) -> PairRecord {
    PairRecord::new(to_seq(a), to_seq(b)).unwrap()
}

pub fn exponents(s: &Sequence) -> Vec<u8> {
    s.entries().iter().map(|z| z.exponent()).collect()
}

/// Every length-n exponent vector with the first entry 0.
pub fn leading_one(n: usize) -> Vec<Vec<u8>> {
    (0..1usize << (2 * (n - 1)))
        .map(|mut code| {
            let mut v = vec![0u8; n];
            for slot in v.iter_mut().skip(1).rev() {
                *slot = (code & 3) as u8;
                code >>= 2;
            }
            v
        })
        .collect()
}

/// All Golay pairs with `a0 = b0 = 1`, found by bucketing the
/// autocorrelation vectors of all `4^(n-1)` candidates.
pub fn brute_force_pairs(n: usize) -> Vec<PairRecord> {
    let all = leading_one(n);
    let mut by_vector: HashMap<Vec<(i64, i64)>, Vec<usize>> = HashMap::new();
    for (i, a) in all.iter().enumerate() {
        by_vector.entry(autocorr_vector(a)).or_default().push(i);
    }
    let mut out = Vec::new();
    for a in &all {
        let want: Vec<(i64, i64)> = autocorr_vector(a).iter().map(|&(x, y)| (-x, -y)).collect();
        if let Some(bs) = by_vector.get(&want) {
            for &j in bs {
                out.push(to_pair(a, &all[j]));
            }
        }
    }
    out
}

/// The five operations, written out on exponent vectors.
pub fn apply_op(op: usize, a: &[u8], b: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let rev = |x: &[u8]| x.iter().rev().copied().collect::<Vec<u8>>();
    let scale = |x: &[u8]| {
        x.iter()
            .enumerate()
            .map(|(k, &e)| ((e as usize + k) % 4) as u8)
            .collect::<Vec<u8>>()
    };
    match op {
        0 => (rev(a), rev(b)),
        1 => (rev(a).iter().map(|&e| (4 - e) % 4).collect(), b.to_vec()),
        2 => (b.to_vec(), a.to_vec()),
        3 => (a.iter().map(|&e| (e + 1) % 4).collect(), b.to_vec()),
        _ => (scale(a), scale(b)),
    }
}

/// Orbit closure of a set of pairs, computed on exponent vectors.
pub fn orbit_closure(pairs: &[PairRecord]) -> HashSet<PairRecord> {
    let mut seen: HashSet<(Vec<u8>, Vec<u8>)> = HashSet::new();
    let mut work: Vec<(Vec<u8>, Vec<u8>)> = pairs
        .iter()
        .map(|p| (exponents(&p.a), exponents(&p.b)))
        .collect();
    while let Some(p) = work.pop() {
        if !seen.insert(p.clone()) {
            continue;
        }
        for op in 0..5 {
            let q = apply_op(op, &p.0, &p.1);
            if !seen.contains(&q) {
                work.push(q);
            }
        }
    }
    seen.iter().map(|(a, b)| to_pair(a, b)).collect()
}

pub fn random_exponents(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..4u8)).collect()
}

/// `|A(e^{i theta})|^2` by direct summation in floating point.
pub fn power_at(a: &[u8], theta: f64) -> f64 {
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for (k, &e) in a.iter().enumerate() {
        let (ur, ui) = unit(e);
        let (c, s) = ((k as f64 * theta).cos(), (k as f64 * theta).sin());
        re += ur as f64 * c - ui as f64 * s;
        im += ur as f64 * s + ui as f64 * c;
    }
    re * re + im * im
}

/// `N(0) + 2 Re sum_s N(s) e^{-i s theta}`.
pub fn power_from_autocorr(a: &[u8], theta: f64) -> f64 {
    let mut total = a.len() as f64;
    for s in 1..a.len() {
        let (re, im) = autocorr(a, s);
        let (c, sn) = ((s as f64 * theta).cos(), (s as f64 * theta).sin());
        // Re[(re + i im)(c - i sn)]
        total += 2.0 * (re as f64 * c + im as f64 * sn);
    }
    total
}
