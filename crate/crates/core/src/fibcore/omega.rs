use std::fmt;

use super::arith::ResidueStream;
use crate::{Budget, Error, Result};

/// ω(m): how many times `0` occurs in one Pisano period of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZeroCount {
    One = 1,
    Two = 2,
    Four = 4,
}

impl ZeroCount {
    pub fn from_count(n: u64) -> Option<Self> {
        match n {
            1 => Some(ZeroCount::One),
            2 => Some(ZeroCount::Two),
            4 => Some(ZeroCount::Four),
            _ => None,
        }
    }

    pub fn count(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for ZeroCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.count())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaClass {
    pub modulus: u64,
    pub zeros: ZeroCount,
    pub period: u64,
}

/// Streams one period of `F_n mod m`, counting zeros.
pub fn omega(m: u64, budget: &Budget) -> Result<OmegaClass> {
    let mut stream = ResidueStream::new(m)?;
    let start = stream.state();
    let mut meter = budget.meter();
    let (mut zeros, mut period) = (0u64, 0u64);
    loop {
        if stream.next() == Some(0) {
            zeros += 1;
        }
        meter.step()?;
        period += 1;
        if stream.state() == start {
            break;
        }
    }
    let zeros = ZeroCount::from_count(zeros).ok_or_else(|| {
        Error::CrossCheck(format!("{zeros} zeros in one period of {m}"))
    })?;
    Ok(OmegaClass {
        modulus: m,
        zeros,
        period,
    })
}

/// ω(lcm(m, n)) from ω(m) and ω(n) for coprime `m`, `n`.
///
/// A one-zero partner only keeps four zeros alive when it is 2 itself.
pub fn omega_lcm_predict(wm: ZeroCount, wn: ZeroCount, m: u64, n: u64) -> ZeroCount {
    use ZeroCount::*;
    match (wm, wn) {
        (One, One) => One,
        (Two, _) | (_, Two) => Two,
        (Four, Four) => Four,
        (One, Four) if m == 2 => Four,
        (Four, One) if n == 2 => Four,
        (One, Four) | (Four, One) => Two,
    }
}
