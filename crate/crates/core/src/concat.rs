//! The concatenated expansion `.F_0 F_1 F_2 …` written in base β, and the
//! string statistics used as evidence of its normality.
//!
//! Fibonacci numbers are kept as base-β digit vectors and added with carries,
//! so digits are emitted without ever converting from binary.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

pub type Digit = u32;

fn check_base(base: u32) -> Result<()> {
    if base < 2 {
        Err(Error::InvalidInput(format!("base must be at least 2, got {base}")))
    } else {
        Ok(())
    }
}

/// A natural number as little-endian digits in base β.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    base: u32,
    digits: Vec<Digit>,
}

impl DigitVector {
    pub fn zero(base: u32) -> Result<Self> {
        check_base(base)?;
        Ok(DigitVector {
            base,
            digits: vec![0],
        })
    }

    /// Builds a vector from little-endian digits, dropping high-order zeros.
    pub fn from_digits_le(base: u32, mut digits: Vec<Digit>) -> Result<Self> {
        check_base(base)?;
        if let Some(&bad) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidInput(format!("digit {bad} out of range for base {base}")));
        }
        while digits.len() > 1 && digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.is_empty() {
            digits.push(0);
        }
        Ok(DigitVector { base, digits })
    }

    pub fn from_biguint(base: u32, value: &BigUint) -> Result<Self> {
        check_base(base)?;
        if value.is_zero() {
            return Self::zero(base);
        }
        let digits = if base <= 256 {
            value.to_radix_le(base).into_iter().map(Digit::from).collect()
        } else {
            let mut rest = value.clone();
            let mut out = Vec::new();
            while !rest.is_zero() {
                let (q, r) = rest.div_rem(&BigUint::from(base));
                out.push(r.to_u32().expect("digit below base"));
                rest = q;
            }
            out
        };
        Ok(DigitVector { base, digits })
    }

    pub fn to_biguint(&self) -> BigUint {
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * self.base + d)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits_le(&self) -> &[Digit] {
        &self.digits
    }

    /// Digits in writing order, most significant first.
    pub fn digits_msb(&self) -> impl DoubleEndedIterator<Item = Digit> + '_ {
        self.digits.iter().rev().copied()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The value of the lowest `count` digits, i.e. `self mod base^count`.
    pub fn low_value(&self, count: usize) -> BigUint {
        self.digits[..count.min(self.digits.len())]
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * self.base + d)
    }
}

impl fmt::Display for DigitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msb: Vec<Digit> = self.digits_msb().collect();
        f.write_str(&render_digits(&msb, self.base))
    }
}

/// Writes digits as `0-9a-z` for bases up to 36 and as a bracketed list above.
pub fn render_digits(digits: &[Digit], base: u32) -> String {
    if base <= 36 {
        digits
            .iter()
            .map(|&d| char::from_digit(d, base).expect("digit below base"))
            .collect()
    } else {
        let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
        format!("[{}]", parts.join(" "))
    }
}

/// Schoolbook addition with carry.
pub fn digit_add(a: &DigitVector, b: &DigitVector) -> Result<DigitVector> {
    if a.base != b.base {
        return Err(Error::BaseMismatch(a.base, b.base));
    }
    let base = a.base as u64;
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut digits = Vec::with_capacity(long.len() + 1);
    let mut carry = 0u64;
    for (i, &d) in long.digits.iter().enumerate() {
        let sum = d as u64 + short.digits.get(i).copied().unwrap_or(0) as u64 + carry;
        let (q, r) = sum.div_rem(&base);
        digits.push(r as Digit);
        carry = q;
    }
    if carry > 0 {
        digits.push(carry as Digit);
    }
    // canonical inputs give a canonical sum unless both are zero
    if digits.len() > 1 && digits.last() == Some(&0) {
        digits.pop();
    }
    Ok(DigitVector {
        base: a.base,
        digits,
    })
}

/// `F_0, F_1, F_2, …` as exact base-β digit vectors.
#[derive(Debug, Clone)]
pub struct FibVectors {
    current: DigitVector,
    next: DigitVector,
}

pub fn fib_vectors(base: u32) -> Result<FibVectors> {
    Ok(FibVectors {
        current: DigitVector::zero(base)?,
        next: DigitVector::from_digits_le(base, vec![1])?,
    })
}

impl Iterator for FibVectors {
    type Item = DigitVector;

    fn next(&mut self) -> Option<DigitVector> {
        let following = digit_add(&self.current, &self.next).expect("same base");
        let out = std::mem::replace(&mut self.current, std::mem::replace(&mut self.next, following));
        Some(out)
    }
}

/// Digits of the concatenation: each `F_n` most significant digit first.
#[derive(Debug, Clone)]
pub struct ConcatStream {
    base: u32,
    position: u64,
    numbers_emitted: u64,
    fibs: FibVectors,
    // pending digits of the current number, least significant first
    pending: Vec<Digit>,
}

impl ConcatStream {
    /// The stream starting `0 1 1 2 …`.
    pub fn new(base: u32) -> Result<Self> {
        Self::with_leading_zero(base, true)
    }

    /// With `include_zero = false` the stream starts at `F_1`.
    pub fn with_leading_zero(base: u32, include_zero: bool) -> Result<Self> {
        let mut fibs = fib_vectors(base)?;
        if !include_zero {
            fibs.next();
        }
        Ok(ConcatStream {
            base,
            position: 0,
            numbers_emitted: 0,
            fibs,
            pending: Vec::new(),
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Digits emitted so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    /// Fibonacci numbers whose digits have been completely emitted.
    pub fn numbers_completed(&self) -> u64 {
        self.numbers_emitted - u64::from(!self.pending.is_empty())
    }
}

impl Iterator for ConcatStream {
    type Item = Digit;

    #[inline]
    fn next(&mut self) -> Option<Digit> {
        if self.pending.is_empty() {
            let number = self.fibs.next()?;
            self.pending = number.digits;
            self.numbers_emitted += 1;
        }
        self.position += 1;
        self.pending.pop()
    }
}

/// The first `t` digits of the concatenation.
pub fn concat_digits(base: u32, t: u64) -> Result<Vec<Digit>> {
    let len = usize::try_from(t).map_err(|_| Error::InvalidInput(format!("t = {t} too large")))?;
    Ok(ConcatStream::new(base)?.take(len).collect())
}

/// Counts of every overlapping length-`k` window of a digit stream.
#[derive(Debug, Clone)]
pub struct StringCounter {
    base: u32,
    k: usize,
    modulus: u128,
    code: u128,
    filled: usize,
    windows: u64,
    counts: Counts,
}

#[derive(Debug, Clone)]
enum Counts {
    Dense(Vec<u64>),
    Sparse(HashMap<u128, u64>),
}

const DENSE_LIMIT: u128 = 1 << 24;

impl StringCounter {
    pub fn new(base: u32, k: usize) -> Result<Self> {
        check_base(base)?;
        if k == 0 {
            return Err(Error::InvalidInput("window length must be at least 1".into()));
        }
        let modulus = u32::try_from(k)
            .ok()
            .and_then(|k| (base as u128).checked_pow(k))
            .ok_or_else(|| {
                Error::InvalidInput(format!("{base}^{k} windows do not fit in 128 bits"))
            })?;
        let counts = if k <= 3 && modulus <= DENSE_LIMIT {
            Counts::Dense(vec![0; modulus as usize])
        } else {
            Counts::Sparse(HashMap::new())
        };
        Ok(StringCounter {
            base,
            k,
            modulus,
            code: 0,
            filled: 0,
            windows: 0,
            counts,
        })
    }

    #[inline]
    pub fn push(&mut self, digit: Digit) {
        self.code = (self.code * self.base as u128 + digit as u128) % self.modulus;
        if self.filled + 1 < self.k {
            self.filled += 1;
            return;
        }
        self.windows += 1;
        match &mut self.counts {
            Counts::Dense(v) => v[self.code as usize] += 1,
            Counts::Sparse(m) => *m.entry(self.code).or_insert(0) += 1,
        }
    }

    /// Windows seen so far: `max(0, t - k + 1)` after `t` digits.
    pub fn windows(&self) -> u64 {
        self.windows
    }

    pub fn window_len(&self) -> usize {
        self.k
    }

    fn encode(&self, pattern: &[Digit]) -> Result<u128> {
        if pattern.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "pattern length {} differs from window length {}",
                pattern.len(),
                self.k
            )));
        }
        pattern.iter().try_fold(0u128, |acc, &d| {
            if d >= self.base {
                Err(Error::InvalidInput(format!("digit {d} out of range for base {}", self.base)))
            } else {
                Ok(acc * self.base as u128 + d as u128)
            }
        })
    }

    fn decode(&self, mut code: u128) -> Vec<Digit> {
        let mut out = vec![0; self.k];
        for slot in out.iter_mut().rev() {
            *slot = (code % self.base as u128) as Digit;
            code /= self.base as u128;
        }
        out
    }

    pub fn count(&self, pattern: &[Digit]) -> Result<u64> {
        let code = self.encode(pattern)?;
        Ok(match &self.counts {
            Counts::Dense(v) => v[code as usize],
            Counts::Sparse(m) => m.get(&code).copied().unwrap_or(0),
        })
    }

    /// Observed windows and their counts, in lexicographic order.
    pub fn observed(&self) -> Vec<(Vec<Digit>, u64)> {
        let mut codes: Vec<(u128, u64)> = match &self.counts {
            Counts::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (i as u128, c))
                .collect(),
            Counts::Sparse(m) => m.iter().map(|(&k, &c)| (k, c)).collect(),
        };
        codes.sort_unstable();
        codes.into_iter().map(|(code, c)| (self.decode(code), c)).collect()
    }
}

/// `N(t)` for one pattern together with `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StringFrequency {
    pub count: u64,
    pub t: u64,
}

impl StringFrequency {
    /// `N(t) / t`.
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.count, self.t)
    }
}

/// Overlapping occurrences of `pattern` among the first `t` digits.
pub fn string_frequency(base: u32, pattern: &[Digit], t: u64) -> Result<StringFrequency> {
    check_base(base)?;
    let k = pattern.len();
    if k == 0 || k as u64 > t {
        return Err(Error::InvalidInput(format!(
            "pattern length {k} must be between 1 and t = {t}"
        )));
    }
    if let Some(&bad) = pattern.iter().find(|&&d| d >= base) {
        return Err(Error::InvalidInput(format!("digit {bad} out of range for base {base}")));
    }
    // Knuth–Morris–Pratt failure function
    let mut fail = vec![0usize; k];
    let mut j = 0;
    for i in 1..k {
        while j > 0 && pattern[i] != pattern[j] {
            j = fail[j - 1];
        }
        if pattern[i] == pattern[j] {
            j += 1;
        }
        fail[i] = j;
    }
    let mut count = 0;
    let mut matched = 0;
    for d in ConcatStream::new(base)?.take(t as usize) {
        while matched > 0 && d != pattern[matched] {
            matched = fail[matched - 1];
        }
        if d == pattern[matched] {
            matched += 1;
        }
        if matched == k {
            count += 1;
            matched = fail[k - 1];
        }
    }
    Ok(StringFrequency { count, t })
}

/// Single-digit frequencies over a prefix and their worst deviation from `1/base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitDeviation {
    pub base: u32,
    pub t: u64,
    pub counts: Vec<u64>,
    /// `max_d |count_d / t - 1/base|`.
    pub max_deviation: Ratio<u128>,
    pub worst_digit: Digit,
}

impl DigitDeviation {
    pub fn frequency(&self, digit: Digit) -> Ratio<u64> {
        Ratio::new(self.counts[digit as usize], self.t)
    }

    pub fn max_deviation_f64(&self) -> f64 {
        self.max_deviation.numer().to_f64().unwrap() / self.max_deviation.denom().to_f64().unwrap()
    }
}

fn deviation(base: u32, t: u64, count: u64) -> Ratio<u128> {
    // |count/t - 1/base| = |base*count - t| / (base*t)
    let scaled = base as u128 * count as u128;
    Ratio::new(scaled.abs_diff(t as u128), base as u128 * t as u128)
}

pub fn simple_normal_deviation(base: u32, t: u64) -> Result<DigitDeviation> {
    check_base(base)?;
    if t == 0 {
        return Err(Error::InvalidInput("t must be at least 1".into()));
    }
    let mut counts = vec![0u64; base as usize];
    for d in ConcatStream::new(base)?.take(t as usize) {
        counts[d as usize] += 1;
    }
    let (worst_digit, max_deviation) = counts
        .iter()
        .enumerate()
        .map(|(d, &c)| (d as Digit, deviation(base, t, c)))
        .fold((0, Ratio::from(0)), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(DigitDeviation {
        base,
        t,
        counts,
        max_deviation,
        worst_digit,
    })
}
