//! Exact algebra of quaternary sequences.
//!
//! Entries are stored as exponents in Z4, so `Z4(k)` is the unit `i^k`.
//! Autocorrelations and entry sums are computed in exact Gaussian-integer
//! arithmetic; floating point only appears in [`Sequence::hall_eval`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A fourth root of unity `i^exponent`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Z4(u8);

impl Z4 {
    pub const ONE: Z4 = Z4(0);
    pub const I: Z4 = Z4(1);
    pub const NEG_ONE: Z4 = Z4(2);
    pub const NEG_I: Z4 = Z4(3);
    pub const ALL: [Z4; 4] = [Z4::ONE, Z4::I, Z4::NEG_ONE, Z4::NEG_I];

    /// Builds `i^exponent`, reducing the exponent mod 4.
    pub const fn new(exponent: u8) -> Self {
        Z4(exponent & 3)
    }

    pub const fn exponent(self) -> u8 {
        self.0
    }

    pub const fn is_real(self) -> bool {
        self.0 & 1 == 0
    }

    pub const fn conj(self) -> Self {
        Z4((4 - self.0) & 3)
    }

    /// `self^k`.
    pub const fn pow(self, k: usize) -> Self {
        Z4(((self.0 as usize * (k & 3)) & 3) as u8)
    }

    pub const fn to_gaussian(self) -> GaussianInt {
        match self.0 {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, 1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, -1),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        let g = self.to_gaussian();
        Complex64::new(g.re as f64, g.im as f64)
    }

    pub const fn to_char(self) -> char {
        (b'0' + self.0) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0'..='3' => Some(Z4(c as u8 - b'0')),
            _ => None,
        }
    }
}

impl Mul for Z4 {
    type Output = Z4;

    fn mul(self, rhs: Z4) -> Z4 {
        Z4((self.0 + rhs.0) & 3)
    }
}

impl Neg for Z4 {
    type Output = Z4;

    fn neg(self) -> Z4 {
        Z4((self.0 + 2) & 3)
    }
}

/// Exact complex integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };

    pub const fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    pub const fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// `re^2 + im^2`.
    pub const fn norm_sqr(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;

    fn add(self, rhs: Self) -> Self {
        GaussianInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;

    fn sub(self, rhs: Self) -> Self {
        GaussianInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> Self {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl AddAssign<Z4> for GaussianInt {
    fn add_assign(&mut self, rhs: Z4) {
        *self += rhs.to_gaussian();
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}{im}i"),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

/// A nonempty sequence over {1, i, -1, -i}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sequence(Vec<Z4>);

impl Sequence {
    pub fn new(entries: Vec<Z4>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("sequence length must be at least 1"));
        }
        Ok(Sequence(entries))
    }

    /// Builds a sequence from raw exponents (each reduced mod 4).
    pub fn from_exponents(exponents: &[u8]) -> Result<Self> {
        Sequence::new(exponents.iter().map(|&e| Z4::new(e)).collect())
    }

    /// The all-ones sequence of length `n`.
    pub fn ones(n: usize) -> Result<Self> {
        Sequence::new(vec![Z4::ONE; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Z4] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Z4> {
        self.0
    }

    /// Nonperiodic autocorrelation `N(s) = sum_k a_k conj(a_{k+s})`.
    pub fn autocorrelation(&self, s: usize) -> Result<GaussianInt> {
        if s >= self.len() {
            return Err(Error::domain(format!(
                "shift {s} out of range for length {}",
                self.len()
            )));
        }
        Ok(autocorrelation_of(&self.0, s))
    }

    /// `N(s)` for every `s = 0..n`.
    pub fn autocorrelations(&self) -> Vec<GaussianInt> {
        (0..self.len())
            .map(|s| autocorrelation_of(&self.0, s))
            .collect()
    }

    /// Evaluates the generating polynomial at `z = e^{i theta}`.
    pub fn hall_eval(&self, theta: f64) -> Complex64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, a)| Complex64::from_polar(1.0, k as f64 * theta) * a.to_complex())
            .sum()
    }

    /// Complex coefficient vector of the generating polynomial.
    pub fn coefficients(&self) -> Vec<Complex64> {
        self.0.iter().map(|a| a.to_complex()).collect()
    }

    /// `c * A`: entry k multiplied by `c^k`, i.e. the coefficients of `A(cz)`.
    pub fn positional_scale(&self, c: Z4) -> Sequence {
        Sequence(
            self.0
                .iter()
                .enumerate()
                .map(|(k, &a)| a * c.pow(k))
                .collect(),
        )
    }

    /// Every entry multiplied by `c`.
    pub fn scaled(&self, c: Z4) -> Sequence {
        Sequence(self.0.iter().map(|&a| a * c).collect())
    }

    pub fn reversed(&self) -> Sequence {
        Sequence(self.0.iter().rev().copied().collect())
    }

    pub fn conj_reversed(&self) -> Sequence {
        Sequence(self.0.iter().rev().map(|a| a.conj()).collect())
    }

    /// Exact `(resum, imsum)`: real and imaginary parts of the entry sum.
    pub fn re_im_sum(&self) -> (i64, i64) {
        let mut total = GaussianInt::ZERO;
        for &a in &self.0 {
            total += a;
        }
        (total.re, total.im)
    }
}

pub(crate) fn autocorrelation_of(a: &[Z4], s: usize) -> GaussianInt {
    let mut total = GaussianInt::ZERO;
    for k in 0..a.len() - s {
        total += a[k] * a[k + s].conj();
    }
    total
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            write!(f, "{}", a.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .chars()
            .map(|c| {
                Z4::from_char(c).ok_or_else(|| {
                    Error::Parse(format!("invalid sequence character {c:?} in {s:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Sequence::new(entries).map_err(|_| Error::Parse("empty sequence".into()))
    }
}

/// True iff `N_A(s) + N_B(s) = 0` for every `s = 1..n`.
pub fn is_golay_pair(a: &Sequence, b: &Sequence) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::domain(format!(
            "lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok((1..a.len()).all(|s| (autocorrelation_of(&a.0, s) + autocorrelation_of(&b.0, s)).is_zero()))
}

/// The five equivalence operations on pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EquivOp {
    /// Reverse both sequences.
    E1,
    /// Conjugate-reverse the first sequence.
    E2,
    /// Swap.
    E3,
    /// Multiply the first sequence by i.
    E4,
    /// Positional scaling of both sequences by i.
    E5,
}

impl EquivOp {
    pub const ALL: [EquivOp; 5] = [
        EquivOp::E1,
        EquivOp::E2,
        EquivOp::E3,
        EquivOp::E4,
        EquivOp::E5,
    ];
}

/// An ordered pair of equal-length sequences.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PairRecord {
    pub a: Sequence,
    pub b: Sequence,
}

impl PairRecord {
    pub fn new(a: Sequence, b: Sequence) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::domain(format!(
                "pair lengths differ: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        Ok(PairRecord { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn is_golay(&self) -> bool {
        is_golay_pair(&self.a, &self.b).unwrap_or(false)
    }

    /// `a0 = a1 = b0 = 1` and `a2 != -i`, with missing positions ignored.
    pub fn is_normalized(&self) -> bool {
        let a = self.a.entries();
        a[0] == Z4::ONE
            && self.b.entries()[0] == Z4::ONE
            && a.get(1).is_none_or(|&x| x == Z4::ONE)
            && a.get(2).is_none_or(|&x| x != Z4::NEG_I)
    }

    pub fn apply(&self, op: EquivOp) -> PairRecord {
        match op {
            EquivOp::E1 => PairRecord {
                a: self.a.reversed(),
                b: self.b.reversed(),
            },
            EquivOp::E2 => PairRecord {
                a: self.a.conj_reversed(),
                b: self.b.clone(),
            },
            EquivOp::E3 => PairRecord {
                a: self.b.clone(),
                b: self.a.clone(),
            },
            EquivOp::E4 => PairRecord {
                a: self.a.scaled(Z4::I),
                b: self.b.clone(),
            },
            EquivOp::E5 => PairRecord {
                a: self.a.positional_scale(Z4::I),
                b: self.b.positional_scale(Z4::I),
            },
        }
    }

    /// Applies `ops` left to right.
    pub fn replay(&self, ops: &[EquivOp]) -> PairRecord {
        ops.iter().fold(self.clone(), |p, &op| p.apply(op))
    }
}

impl fmt::Display for PairRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.a, self.b)
    }
}

impl FromStr for PairRecord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("expected two sequences in {s:?}")))?;
        PairRecord::new(a.parse()?, b.parse()?)
            .map_err(|_| Error::Parse(format!("pair members differ in length: {s:?}")))
    }
}

/// Result of [`normalize`]: the normalized pair plus the operations applied.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub pair: PairRecord,
    pub ops: Vec<EquivOp>,
    /// Whether the input satisfied the Golay predicate.
    pub golay: bool,
}

/// Brings a pair to the form `a0 = a1 = b0 = 1`, `a2 in {1, -1, i}`.
pub fn normalize(p: &PairRecord) -> Normalized {
    let mut pair = p.clone();
    let mut ops = Vec::new();
    let mut step = |pair: &mut PairRecord, op: EquivOp| {
        *pair = pair.apply(op);
        ops.push(op);
    };

    while pair.a.entries()[0] != Z4::ONE {
        step(&mut pair, EquivOp::E4);
    }
    if pair.len() >= 2 {
        while pair.a.entries()[1] != Z4::ONE {
            step(&mut pair, EquivOp::E5);
        }
    }
    if pair.len() >= 3 && pair.a.entries()[2] == Z4::NEG_I {
        step(&mut pair, EquivOp::E1);
        step(&mut pair, EquivOp::E2);
    }
    if pair.b.entries()[0] != Z4::ONE {
        step(&mut pair, EquivOp::E3);
        while pair.a.entries()[0] != Z4::ONE {
            step(&mut pair, EquivOp::E4);
        }
        step(&mut pair, EquivOp::E3);
    }

    Normalized {
        golay: p.is_golay(),
        pair,
        ops,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequence {
        s.parse().unwrap()
    }

    fn pair(a: &str, b: &str) -> PairRecord {
        PairRecord::new(seq(a), seq(b)).unwrap()
    }

    #[test]
    fn autocorrelation_examples() {
        // [1,1,-1]
        let a = seq("002");
        assert_eq!(a.autocorrelation(1).unwrap(), GaussianInt::ZERO);
        assert_eq!(a.autocorrelation(2).unwrap(), GaussianInt::new(-1, 0));
        // [1,i,1]
        let b = seq("010");
        assert_eq!(b.autocorrelation(1).unwrap(), GaussianInt::ZERO);
        assert_eq!(b.autocorrelation(2).unwrap(), GaussianInt::new(1, 0));
        assert_eq!(
            seq("0123130").autocorrelation(0).unwrap(),
            GaussianInt::new(7, 0)
        );
        assert!(matches!(a.autocorrelation(3), Err(Error::Domain(_))));
    }

    #[test]
    fn hall_eval_examples() {
        let v = seq("000").hall_eval(0.0);
        assert!((v - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        assert!((seq("0").hall_eval(1.234) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let v = seq("002").hall_eval(std::f64::consts::FRAC_PI_2);
        assert!((v - Complex64::new(2.0, 1.0)).norm() < 1e-12);
        assert!((v.norm_sqr() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn positional_scale_examples() {
        assert_eq!(seq("002").positional_scale(Z4::I), seq("010"));
        assert_eq!(seq("0123").positional_scale(Z4::ONE), seq("0123"));
        assert_eq!(seq("001").positional_scale(Z4::I), seq("013"));
    }

    #[test]
    fn re_im_sum_examples() {
        assert_eq!(seq("0131").re_im_sum(), (1, 1));
        assert_eq!(seq("00000").re_im_sum(), (5, 0));
        assert_eq!(seq("002").re_im_sum(), (1, 0));
    }

    #[test]
    fn equivalence_examples() {
        let p = pair("002", "010");
        assert_eq!(p.apply(EquivOp::E3), pair("010", "002"));
        let e5 = p.apply(EquivOp::E5);
        assert_eq!(e5, pair("010", "022"));
        assert!(e5.is_golay());
        let e2 = p.apply(EquivOp::E2);
        assert_eq!(e2, pair("200", "010"));
        assert!(e2.is_golay());
    }

    #[test]
    fn normalize_examples() {
        // ([i,i,-i],[1,i,1])
        let n = normalize(&pair("113", "010"));
        assert_eq!(n.pair, pair("002", "010"));
        assert_eq!(n.ops, vec![EquivOp::E4; 3]);
        assert!(n.golay);

        let n = normalize(&pair("002", "010"));
        assert_eq!(n.pair, pair("002", "010"));
        assert!(n.ops.is_empty());

        // b0 = i: same A, B rotated by -i.
        let n = normalize(&pair("002", "121"));
        assert_eq!(n.pair, pair("002", "010"));
        assert_eq!(
            n.ops,
            vec![
                EquivOp::E3,
                EquivOp::E4,
                EquivOp::E4,
                EquivOp::E4,
                EquivOp::E3
            ]
        );
    }

    #[test]
    fn normalize_flags_non_golay_input() {
        let n = normalize(&pair("000", "000"));
        assert!(!n.golay);
        assert!(n.pair.is_normalized());
    }

    #[test]
    fn normalize_sends_minus_i_to_i() {
        // a2 = -i triggers the reversal step.
        let p = pair("0030", "0000");
        let n = normalize(&p);
        assert!(n.pair.is_normalized());
        assert_eq!(p.replay(&n.ops), n.pair);
    }

    #[test]
    fn golay_predicate_examples() {
        assert!(is_golay_pair(&seq("002"), &seq("010")).unwrap());
        assert!(!is_golay_pair(&seq("000"), &seq("000")).unwrap());
        assert!(is_golay_pair(&seq("0"), &seq("0")).unwrap());
        assert!(is_golay_pair(&seq("00"), &seq("000")).is_err());
    }

    #[test]
    fn text_encoding_rejects_garbage() {
        assert!("01x".parse::<Sequence>().is_err());
        assert!("".parse::<Sequence>().is_err());
        assert!("01 012".parse::<PairRecord>().is_err());
        assert_eq!(pair("002", "010").to_string(), "002 010");
    }
}
