//! Place-value digit periods of the Fibonacci sequence in base β.
//!
//! The digit in the `β^k` place of `F_n` is `⌊F_n / β^k⌋ mod β`, which only
//! depends on `F_n mod β^{k+1}`. One period of that digit sequence therefore
//! has length `N_k = π(β^{k+1})` and is streamed from a single residue pair.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::fibcore::{
    factorize, fib_mod, pisano_factored, residue_stream, BigResidueStream, PeriodCache,
    PeriodDescriptor, ResidueStream,
};
use crate::{Budget, Error, Incomplete, Result};

pub type Digit = u32;

fn check_base(base: u32) -> Result<()> {
    if base < 2 {
        Err(Error::InvalidInput(format!("base must be at least 2, got {base}")))
    } else {
        Ok(())
    }
}

fn period_cache() -> &'static PeriodCache {
    static CACHE: OnceLock<PeriodCache> = OnceLock::new();
    CACHE.get_or_init(PeriodCache::new)
}

/// π(base^(place+1)), from the factorization of `base`.
pub fn place_period(base: u32, place: u32, budget: &Budget) -> Result<PeriodDescriptor> {
    check_base(base)?;
    let exponent = place
        .checked_add(1)
        .ok_or_else(|| Error::InvalidInput(format!("place {place} too large")))?;
    let modulus = BigUint::from(base).pow(exponent);
    period_cache().get_or_compute(&modulus, || {
        pisano_factored(&factorize(base as u64)?.pow(exponent), budget)
    })
}

/// The digit in the `base^place` place of `F_n`, without materializing `F_n`.
pub fn phi_digit(n: u64, base: u32, place: u32) -> Result<Digit> {
    check_base(base)?;
    let unit = BigUint::from(base).pow(place);
    let residue = fib_mod(&n.into(), &(&unit * base))?;
    Ok((residue.value() / unit).to_u32().expect("digit below base"))
}

/// One period of the `base^place` digits.
#[derive(Debug, Clone)]
pub struct PlaceDigitPeriod {
    base: u32,
    place: u32,
    length: u64,
    modulus: BigUint,
}

/// Streams one period of the `base^place` digits.
pub fn phi_period(base: u32, place: u32, budget: &Budget) -> Result<PlaceDigitPeriod> {
    let descriptor = place_period(base, place, budget)?;
    let length = descriptor
        .period_u64()
        .ok_or(Error::BudgetExceeded { limit: budget.limit() })?;
    budget.check(length)?;
    Ok(PlaceDigitPeriod {
        base,
        place,
        length,
        modulus: descriptor.modulus().clone(),
    })
}

impl PlaceDigitPeriod {
    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn place(&self) -> u32 {
        self.place
    }

    /// `N_k`, equal to π(base^(place+1)).
    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn digits(&self) -> PlaceDigits {
        let unit = BigUint::from(self.base).pow(self.place);
        let inner = match (self.modulus.to_u64(), unit.to_u64()) {
            (Some(m), Some(unit)) => DigitSource::Native {
                stream: ResidueStream::new(m).expect("nonzero modulus"),
                unit,
            },
            _ => DigitSource::Big {
                stream: residue_stream(&self.modulus).expect("nonzero modulus"),
                unit,
            },
        };
        PlaceDigits {
            inner,
            base: self.base,
            remaining: self.length,
        }
    }

    /// Shortest period of the materialized digit sequence. Equal to
    /// [`length`](Self::length) unless a Wall–Sun–Sun prime divides the base.
    pub fn minimal_period(&self) -> Result<u64> {
        let digits: Vec<Digit> = self.digits().collect();
        let mut period = self.length;
        if period == 1 {
            return Ok(1);
        }
        for (q, _) in factorize(period)?.pairs().to_vec() {
            while period % q == 0 {
                let shorter = period / q;
                if digits.iter().enumerate().all(|(i, d)| digits[i % shorter as usize] == *d) {
                    period = shorter;
                } else {
                    break;
                }
            }
        }
        Ok(period)
    }
}

enum DigitSource {
    Native { stream: ResidueStream, unit: u64 },
    Big { stream: BigResidueStream, unit: BigUint },
}

/// Iterator over exactly one period of place digits.
pub struct PlaceDigits {
    inner: DigitSource,
    base: u32,
    remaining: u64,
}

impl Iterator for PlaceDigits {
    type Item = Digit;

    #[inline]
    fn next(&mut self) -> Option<Digit> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let digit = match &mut self.inner {
            DigitSource::Native { stream, unit } => {
                (stream.next()? / *unit % self.base as u64) as Digit
            }
            DigitSource::Big { stream, unit } => {
                let r = stream.next()?;
                (r.value() / &*unit % self.base).to_u32().expect("digit below base")
            }
        };
        Some(digit)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, usize::try_from(self.remaining).ok())
    }
}

/// Exact digit counts over one full period of a place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    pub base: u32,
    pub place: u32,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl FrequencyTable {
    pub fn from_counts(place: u32, counts: Vec<u64>) -> Self {
        FrequencyTable {
            base: counts.len() as u32,
            place,
            total: counts.iter().sum(),
            counts,
        }
    }

    pub fn is_uniform(&self) -> bool {
        is_uniform(self)
    }

    pub fn frequency(&self, digit: Digit) -> Ratio<u64> {
        Ratio::new(self.counts[digit as usize], self.total)
    }
}

/// True iff every digit occurs equally often.
pub fn is_uniform(table: &FrequencyTable) -> bool {
    table.counts.windows(2).all(|w| w[0] == w[1])
}

pub fn digit_counts(base: u32, place: u32, budget: &Budget) -> Result<FrequencyTable> {
    let period = phi_period(base, place, budget)?;
    let mut counts = vec![0u64; base as usize];
    let mut meter = budget.meter();
    for digit in period.digits() {
        meter.step()?;
        counts[digit as usize] += 1;
    }
    Ok(FrequencyTable {
        base,
        place,
        total: period.length(),
        counts,
    })
}

/// Υ(base) as certified up to `searched_to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpsilonResult {
    pub base: u32,
    /// Smallest `K` such that every checked place `K..=searched_to` is uniform;
    /// `None` when the last checked place is not uniform.
    pub value: Option<u32>,
    /// Highest place actually checked, `None` if no place completed.
    pub searched_to: Option<u32>,
    /// Uniformity of places `0..=searched_to`.
    pub uniform: Vec<bool>,
}

impl UpsilonResult {
    fn from_flags(base: u32, uniform: Vec<bool>) -> Self {
        let searched_to = uniform.len().checked_sub(1).map(|k| k as u32);
        let value = match uniform.last() {
            Some(true) => {
                let suffix = uniform.iter().rev().take_while(|&&u| u).count();
                Some((uniform.len() - suffix) as u32)
            }
            _ => None,
        };
        UpsilonResult {
            base,
            value,
            searched_to,
            uniform,
        }
    }
}

/// Scans places `0..=max_place` for the start of the uniform suffix.
pub fn upsilon(
    base: u32,
    max_place: u32,
    budget: &Budget,
) -> Result<UpsilonResult, Incomplete<UpsilonResult>> {
    let mut flags = Vec::new();
    for place in 0..=max_place {
        match digit_counts(base, place, budget) {
            Ok(table) => flags.push(table.is_uniform()),
            Err(cause) => {
                return Err(Incomplete {
                    partial: UpsilonResult::from_flags(base, flags),
                    cause,
                })
            }
        }
    }
    Ok(UpsilonResult::from_flags(base, flags))
}

/// v(m, z) for every residue `z` seen in one period of `F_n mod m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueCountTable {
    pub modulus: u64,
    pub period: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl ResidueCountTable {
    /// v(m, z); zero for residues that never occur.
    pub fn v(&self, z: u64) -> u64 {
        self.counts.get(&(z % self.modulus)).copied().unwrap_or(0)
    }
}

pub fn residue_counts(m: u64, budget: &Budget) -> Result<ResidueCountTable> {
    let mut stream = ResidueStream::new(m)?;
    let start = stream.state();
    let mut counts = BTreeMap::new();
    let mut meter = budget.meter();
    let mut period = 0u64;
    loop {
        let z = stream.next().expect("endless stream");
        *counts.entry(z).or_insert(0) += 1;
        meter.step()?;
        period += 1;
        if stream.state() == start {
            break;
        }
    }
    Ok(ResidueCountTable {
        modulus: m,
        period,
        counts,
    })
}

/// Residue multiplicity predicted for moduli `5^x 2^y` with `y ≥ 5`.
pub fn jacobson_count(z: u64) -> u64 {
    if z % 4 == 3 {
        1
    } else if z % 8 == 0 {
        2
    } else if z % 4 == 1 {
        3
    } else if z % 32 == 2 {
        8
    } else {
        0
    }
}

/// True iff the residue counts modulo `5^x 2^y` follow [`jacobson_count`].
pub fn verify_jacobson(x: u32, y: u32, budget: &Budget) -> Result<bool> {
    let m = 5u64
        .checked_pow(x)
        .and_then(|f| 2u64.checked_pow(y).and_then(|g| f.checked_mul(g)))
        .ok_or_else(|| Error::InvalidInput(format!("5^{x} * 2^{y} exceeds 64 bits")))?;
    let table = residue_counts(m, budget)?;
    Ok(matches_jacobson(&table))
}

pub fn matches_jacobson(table: &ResidueCountTable) -> bool {
    table.counts.iter().all(|(&z, &v)| v == jacobson_count(z))
        && (0..table.modulus)
            .filter(|&z| jacobson_count(z) > 0)
            .all(|z| table.v(z) == jacobson_count(z))
}

/// Per-place and running digit counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunningRow {
    pub place: u32,
    /// `N_k`.
    pub length: u64,
    pub counts: Vec<u64>,
    /// Digits of places `0..=k`, each lower place weighted by how many of its
    /// periods fit into one period of place `k`.
    pub cumulative: Vec<u128>,
}

impl RunningRow {
    pub fn cumulative_total(&self) -> u128 {
        self.cumulative.iter().sum()
    }

    /// Exact share of each digit in `cumulative`, as a fraction of 1.
    pub fn shares(&self) -> Vec<Ratio<u128>> {
        let total = self.cumulative_total();
        self.cumulative.iter().map(|&c| Ratio::new(c, total)).collect()
    }

    /// Exact percentage of each digit in `cumulative`.
    pub fn percentages(&self) -> Vec<Ratio<u128>> {
        self.shares().into_iter().map(|s| s * 100).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunningStats {
    pub base: u32,
    pub rows: Vec<RunningRow>,
}

/// Running digit totals across places `0..=max_place`.
pub fn running_stats(
    base: u32,
    max_place: u32,
    budget: &Budget,
) -> Result<RunningStats, Incomplete<RunningStats>> {
    let mut stats = RunningStats {
        base,
        rows: Vec::new(),
    };
    for place in 0..=max_place {
        match running_row(stats.rows.last(), base, place, budget) {
            Ok(row) => stats.rows.push(row),
            Err(cause) => {
                return Err(Incomplete {
                    partial: stats,
                    cause,
                })
            }
        }
    }
    Ok(stats)
}

fn running_row(
    previous: Option<&RunningRow>,
    base: u32,
    place: u32,
    budget: &Budget,
) -> Result<RunningRow> {
    let table = digit_counts(base, place, budget)?;
    let length = table.total;
    let cumulative: Vec<u128> = match previous {
        None => table.counts.iter().map(|&c| c as u128).collect(),
        Some(prev) => {
            if length % prev.length != 0 {
                return Err(Error::CrossCheck(format!(
                    "N_{place} = {length} is not a multiple of N_{} = {}",
                    prev.place, prev.length
                )));
            }
            let nested = (length / prev.length) as u128;
            table
                .counts
                .iter()
                .zip(&prev.cumulative)
                .map(|(&c, &p)| c as u128 + nested * p)
                .collect()
        }
    };
    let row = RunningRow {
        place,
        length,
        counts: table.counts,
        cumulative,
    };
    // each of the place+1 rows contributes N_k weighted digits
    if row.cumulative_total() != (place as u128 + 1) * length as u128 {
        return Err(Error::CrossCheck(format!(
            "running total at place {place} does not telescope"
        )));
    }
    Ok(row)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Figure1Point {
    pub place: u32,
    pub digit: Digit,
    pub percent: Ratio<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Figure1 {
    pub base: u32,
    pub points: Vec<Figure1Point>,
    /// `1 / base`, the limit every running share should approach.
    pub reference: Ratio<u128>,
}

impl Figure1 {
    fn from_stats(stats: &RunningStats) -> Self {
        let points = stats
            .rows
            .iter()
            .flat_map(|row| {
                row.percentages()
                    .into_iter()
                    .enumerate()
                    .map(move |(digit, percent)| Figure1Point {
                        place: row.place,
                        digit: digit as Digit,
                        percent,
                    })
            })
            .collect();
        Figure1 {
            base: stats.base,
            points,
            reference: Ratio::new(1, stats.base as u128),
        }
    }
}

/// Running percentages flattened to one point per `(place, digit)`.
pub fn figure1_data(
    base: u32,
    max_place: u32,
    budget: &Budget,
) -> Result<Figure1, Incomplete<Figure1>> {
    match running_stats(base, max_place, budget) {
        Ok(stats) => Ok(Figure1::from_stats(&stats)),
        Err(Incomplete { partial, cause }) => Err(Incomplete {
            partial: Figure1::from_stats(&partial),
            cause,
        }),
    }
}
