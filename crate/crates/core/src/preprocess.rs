//! Enumeration and spectral filtering of normalized half-sequences.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq::{Sequence, Z4};
use crate::spectral::{FilterSchedule, SpectralFilter};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// The even- or odd-indexed entries of a length-`n` sequence, with the other
/// positions zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HalfSequence {
    n: usize,
    parity: Parity,
    entries: Vec<Z4>,
}

/// Number of nonzero positions of the given parity in a length-`n` sequence.
pub const fn support_len(n: usize, parity: Parity) -> usize {
    match parity {
        Parity::Even => n.div_ceil(2),
        Parity::Odd => n / 2,
    }
}

impl HalfSequence {
    pub fn new(n: usize, parity: Parity, entries: Vec<Z4>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("half-sequence length must be at least 1"));
        }
        if entries.len() != support_len(n, parity) {
            return Err(Error::domain(format!(
                "{} half of length {n} needs {} entries, got {}",
                parity.name(),
                support_len(n, parity),
                entries.len()
            )));
        }
        Ok(HalfSequence { n, parity, entries })
    }

    /// Splits a full sequence into its half of the given parity.
    pub fn of(a: &Sequence, parity: Parity) -> Self {
        HalfSequence {
            n: a.len(),
            parity,
            entries: a
                .entries()
                .iter()
                .skip(parity.offset())
                .step_by(2)
                .copied()
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Nonzero entries in index order.
    pub fn entries(&self) -> &[Z4] {
        &self.entries
    }

    /// `(position, value)` for each nonzero entry.
    pub fn support(&self) -> impl Iterator<Item = (usize, Z4)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(j, &a)| (2 * j + self.parity.offset(), a))
    }

    pub fn value_at(&self, k: usize) -> Option<Z4> {
        if k >= self.n || k % 2 != self.parity.offset() {
            return None;
        }
        Some(self.entries[k / 2])
    }

    /// Length-`n` coefficient vector with zeros at suppressed positions.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); self.n];
        for (k, a) in self.support() {
            c[k] = a.to_complex();
        }
        c
    }

    /// Interleaves an odd half and an even half of the same length.
    pub fn join(odd: &HalfSequence, even: &HalfSequence) -> Result<Sequence> {
        if odd.parity != Parity::Odd || even.parity != Parity::Even || odd.n != even.n {
            return Err(Error::domain(
                "join needs an odd and an even half of equal length",
            ));
        }
        let entries = (0..odd.n)
            .map(|k| {
                if k % 2 == 0 {
                    even.entries[k / 2]
                } else {
                    odd.entries[k / 2]
                }
            })
            .collect();
        Sequence::new(entries)
    }

    /// Whether this half satisfies the enumeration normalization.
    pub fn is_normalized(&self) -> bool {
        match (self.parity, self.entries.as_slice()) {
            (_, []) => true,
            // Length two keeps a0 in {1, -1, i}; see `enumerate_half`.
            (Parity::Even, [a0]) if self.n == 2 => *a0 != Z4::NEG_I,
            (Parity::Even, [a0, a2, ..]) => *a0 == Z4::ONE && *a2 != Z4::NEG_I,
            (_, [first, ..]) => *first == Z4::ONE,
        }
    }
}

impl fmt::Display for HalfSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n {
            match self.value_at(k) {
                Some(a) => write!(f, "{}", a.to_char())?,
                None => write!(f, "z")?,
            }
        }
        Ok(())
    }
}

impl FromStr for HalfSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let n = chars.len();
        if n == 0 {
            return Err(Error::Parse("empty half-sequence".into()));
        }
        let parity = if chars[0] == 'z' {
            Parity::Odd
        } else {
            Parity::Even
        };
        let mut entries = Vec::new();
        for (k, &c) in chars.iter().enumerate() {
            let expect_zero = k % 2 != parity.offset();
            match (expect_zero, c) {
                (true, 'z') => {}
                (false, c) => entries.push(
                    Z4::from_char(c)
                        .ok_or_else(|| Error::Parse(format!("bad half-sequence {s:?}")))?,
                ),
                (true, _) => return Err(Error::Parse(format!("bad half-sequence {s:?}"))),
            }
        }
        HalfSequence::new(n, parity, entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Counters from one half-sequence enumeration.
#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
pub struct HalfStats {
    pub candidates: u64,
    pub rejected: u64,
}

/// Per-position value ranges for the normalized candidates.
fn digit_ranges(n: usize, parity: Parity) -> Vec<u8> {
    let len = support_len(n, parity);
    let mut radix = vec![4u8; len];
    match parity {
        Parity::Even if n == 2 => radix[0] = 3,
        Parity::Even => {
            radix[0] = 1;
            if len >= 2 {
                radix[1] = 3;
            }
        }
        Parity::Odd => {
            if len >= 1 {
                radix[0] = 1;
            }
        }
    }
    radix
}

/// Decodes candidate number `index` in odometer order (lowest position most
/// significant). Digit values map to Z4 exponents directly, so digit ranges
/// `{0}`, `{0,1,2}` and `{0,1,2,3}` give `{1}`, `{1,i,-1}` and everything.
fn decode(mut index: u64, radix: &[u8]) -> Vec<Z4> {
    let mut out = vec![Z4::ONE; radix.len()];
    for (slot, &r) in out.iter_mut().zip(radix).rev() {
        *slot = Z4::new((index % r as u64) as u8);
        index /= r as u64;
    }
    out
}

/// All normalized half-sequences that survive the spectral filter, sorted by
/// text encoding.
pub fn enumerate_half(
    n: usize,
    parity: Parity,
    schedule: &FilterSchedule,
) -> Result<(Vec<HalfSequence>, HalfStats)> {
    if n == 0 {
        return Err(Error::domain("length must be at least 1"));
    }
    let filter = SpectralFilter::new(*schedule)?;
    let radix = digit_ranges(n, parity);
    let total: u64 = radix.iter().map(|&r| r as u64).product();
    let bound = 2.0 * n as f64;

    let kept: Vec<HalfSequence> = (0..total)
        .into_par_iter()
        .filter_map(|index| {
            let half = HalfSequence {
                n,
                parity,
                entries: decode(index, &radix),
            };
            (!filter.exceeds(&half.coefficients(), bound)).then_some(half)
        })
        .collect();

    let stats = HalfStats {
        candidates: total,
        rejected: total - kept.len() as u64,
    };
    Ok((kept, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(v: &[HalfSequence]) -> Vec<String> {
        v.iter().map(|h| h.to_string()).collect()
    }

    #[test]
    fn length_three() {
        let sched = FilterSchedule::default();
        let (even, _) = enumerate_half(3, Parity::Even, &sched).unwrap();
        assert_eq!(texts(&even), ["0z0", "0z1", "0z2"]);
        let (odd, _) = enumerate_half(3, Parity::Odd, &sched).unwrap();
        assert_eq!(texts(&odd), ["z0z"]);
    }

    #[test]
    fn length_one_and_two() {
        let sched = FilterSchedule::default();
        let (even, _) = enumerate_half(1, Parity::Even, &sched).unwrap();
        assert_eq!(texts(&even), ["0"]);
        let (odd, _) = enumerate_half(1, Parity::Odd, &sched).unwrap();
        assert_eq!(odd.len(), 1);
        assert!(odd[0].entries().is_empty());
        assert_eq!(odd[0].to_string(), "z");

        let (even, _) = enumerate_half(2, Parity::Even, &sched).unwrap();
        assert_eq!(texts(&even), ["0z", "1z", "2z"]);
        let (odd, _) = enumerate_half(2, Parity::Odd, &sched).unwrap();
        assert_eq!(texts(&odd), ["z0"]);
    }

    #[test]
    fn length_eight_is_unfiltered() {
        let sched = FilterSchedule::default();
        let (even, stats) = enumerate_half(8, Parity::Even, &sched).unwrap();
        assert_eq!(even.len(), 48);
        assert_eq!(stats.rejected, 0);
        let (odd, _) = enumerate_half(8, Parity::Odd, &sched).unwrap();
        assert_eq!(odd.len(), 64);
    }

    #[test]
    fn output_sorted_unique_normalized() {
        let sched = FilterSchedule::default();
        for n in 1..=11 {
            for parity in [Parity::Even, Parity::Odd] {
                let (v, _) = enumerate_half(n, parity, &sched).unwrap();
                let t = texts(&v);
                assert!(t.windows(2).all(|w| w[0] < w[1]), "n={n} {parity:?}");
                assert!(v.iter().all(HalfSequence::is_normalized));
            }
        }
    }

    #[test]
    fn text_round_trip_and_join() {
        let odd: HalfSequence = "z1z3".parse().unwrap();
        let even: HalfSequence = "0z2z".parse().unwrap();
        assert_eq!(odd.parity(), Parity::Odd);
        assert_eq!(even.to_string(), "0z2z");
        assert_eq!(HalfSequence::join(&odd, &even).unwrap().to_string(), "0123");
        assert!("0z2".parse::<HalfSequence>().is_ok());
        assert!("02z".parse::<HalfSequence>().is_err());
        assert!(HalfSequence::join(&even, &odd).is_err());
    }
}
