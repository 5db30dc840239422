use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::arith::{is_period, residue_stream, ResidueStream};
use super::factor::{factorize, is_prime_u64, Factorization};
use crate::{Budget, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeriodMethod {
    DirectIteration,
    FactoredLcm,
}

impl PeriodMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            PeriodMethod::DirectIteration => "direct-iteration",
            PeriodMethod::FactoredLcm => "factored-lcm",
        }
    }
}

impl fmt::Display for PeriodMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A modulus together with its Pisano period π(modulus).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodDescriptor {
    modulus: BigUint,
    period: BigUint,
    method: PeriodMethod,
}

impl PeriodDescriptor {
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn period(&self) -> &BigUint {
        &self.period
    }

    pub fn method(&self) -> PeriodMethod {
        self.method
    }

    pub fn period_u64(&self) -> Option<u64> {
        self.period.to_u64()
    }
}

fn direct_u64(m: u64, budget: &Budget) -> Result<u64> {
    let mut stream = ResidueStream::new(m)?;
    let start = stream.state();
    let mut meter = budget.meter();
    let mut k = 0u64;
    loop {
        stream.next();
        meter.step()?;
        k += 1;
        if stream.state() == start {
            return Ok(k);
        }
    }
}

/// π(m) by walking residue pairs until `(0, 1)` recurs.
pub fn pisano_direct(m: u64, budget: &Budget) -> Result<PeriodDescriptor> {
    let period = direct_u64(m, budget)?;
    Ok(PeriodDescriptor {
        modulus: m.into(),
        period: period.into(),
        method: PeriodMethod::DirectIteration,
    })
}

/// [`pisano_direct`] for moduli beyond 64 bits.
pub fn pisano_direct_big(m: &BigUint, budget: &Budget) -> Result<PeriodDescriptor> {
    if let Some(small) = m.to_u64() {
        return pisano_direct(small, budget);
    }
    let mut stream = residue_stream(m)?;
    let one = BigUint::one();
    let mut meter = budget.meter();
    let mut k = 0u64;
    loop {
        stream.next();
        meter.step()?;
        k += 1;
        let (a, b) = stream.state();
        if a.is_zero() && *b == one {
            return Ok(PeriodDescriptor {
                modulus: m.clone(),
                period: k.into(),
                method: PeriodMethod::DirectIteration,
            });
        }
    }
}

/// Factorization of π(p^e), found without assuming `p` is not a
/// Wall–Sun–Sun prime.
fn prime_power_period(p: u64, e: u32, budget: &Budget) -> Result<Factorization> {
    let base_period = direct_u64(p, budget)?;
    let period = BigUint::from(base_period);
    // t = largest exponent with π(p^t) = π(p); π(p) | π(p^j), so equality
    // holds exactly when π(p) is still a period modulo p^j.
    let mut t = 1;
    while t < e && is_period(&period, &BigUint::from(p).pow(t + 1))? {
        t += 1;
    }
    let scale = Factorization::from_pairs(if e > t { vec![(p, e - t)] } else { vec![] })?;
    Ok(factorize(base_period)?.mul(&scale))
}

/// π of a factored modulus together with the factorization of the period.
pub(crate) fn factored_period(f: &Factorization, budget: &Budget) -> Result<Factorization> {
    let mut candidate = Factorization::one();
    for &(p, e) in f.pairs() {
        candidate = candidate.lcm(&prime_power_period(p, e, budget)?);
    }
    let modulus = f.value();
    let period = candidate.value();
    if !is_period(&period, &modulus)? {
        return Err(Error::CrossCheck(format!(
            "LCM candidate {period} is not a period of {modulus}"
        )));
    }
    // Every period is a multiple of the shortest one, so it suffices to rule
    // out the maximal proper divisors period / q.
    for q in candidate.primes() {
        let smaller = &period / q;
        if is_period(&smaller, &modulus)? {
            return Err(Error::CrossCheck(format!(
                "{smaller} is a shorter period of {modulus} than the LCM candidate {period}"
            )));
        }
    }
    Ok(candidate)
}

/// π(m) through the factorization of `m` and the LCM of prime-power periods,
/// certified with fast doubling.
pub fn pisano_fast(m: u64, budget: &Budget) -> Result<PeriodDescriptor> {
    match m {
        0 => Err(Error::ZeroModulus),
        1 => pisano_factored(&Factorization::one(), budget),
        _ => pisano_factored(&factorize(m)?, budget),
    }
}

/// [`pisano_fast`] for a caller-factored modulus of any size.
pub fn pisano_factored(f: &Factorization, budget: &Budget) -> Result<PeriodDescriptor> {
    let period = factored_period(f, budget)?.value();
    Ok(PeriodDescriptor {
        modulus: f.value(),
        period,
        method: PeriodMethod::FactoredLcm,
    })
}

/// True when π(p) = π(p²), both found by direct iteration.
pub fn is_wall_sun_sun(p: u64, budget: &Budget) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let single = pisano_direct(p, budget)?;
    let square = match p.checked_mul(p) {
        Some(sq) => pisano_direct(sq, budget)?,
        None => pisano_direct_big(&(BigUint::from(p) * p), budget)?,
    };
    Ok(single.period == square.period)
}

/// Thread-safe memo of computed periods. Inserting the same modulus twice
/// keeps the first descriptor.
#[derive(Debug, Default)]
pub struct PeriodCache {
    map: RwLock<HashMap<BigUint, PeriodDescriptor>>,
}

impl PeriodCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, m: &BigUint) -> Option<PeriodDescriptor> {
        self.map.read().unwrap().get(m).cloned()
    }

    pub fn get_or_compute<F>(&self, m: &BigUint, compute: F) -> Result<PeriodDescriptor>
    where
        F: FnOnce() -> Result<PeriodDescriptor>,
    {
        if let Some(found) = self.get(m) {
            return Ok(found);
        }
        let fresh = compute()?;
        let mut map = self.map.write().unwrap();
        Ok(map.entry(m.clone()).or_insert(fresh).clone())
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibcore::is_period_u64;

    const TABLE_1: [u64; 19] = [
        3, 8, 6, 20, 24, 16, 12, 24, 60, 10, 24, 28, 48, 40, 24, 36, 24, 18, 60,
    ];

    fn direct(m: u64) -> u64 {
        pisano_direct(m, &Budget::default()).unwrap().period_u64().unwrap()
    }

    fn fast(m: u64) -> u64 {
        pisano_fast(m, &Budget::default()).unwrap().period_u64().unwrap()
    }

    #[test]
    fn first_twenty() {
        for (m, &want) in (2..=20).zip(TABLE_1.iter()) {
            assert_eq!(direct(m), want, "direct π({m})");
            assert_eq!(fast(m), want, "fast π({m})");
        }
        assert_eq!(direct(1), 1);
        assert_eq!(fast(1), 1);
    }

    #[test]
    fn powers_of_ten() {
        assert_eq!(fast(1000), 1500);
        assert_eq!(fast(10_000), 15_000);
        assert_eq!(direct(10_000), 15_000);
        let big = Factorization::from_pairs(vec![(2, 20), (5, 20)]).unwrap();
        let d = pisano_factored(&big, &Budget::default()).unwrap();
        assert_eq!(d.period(), &(BigUint::from(15u32) * BigUint::from(10u32).pow(19)));
    }

    #[test]
    fn five_to_x_two_to_y() {
        assert_eq!(fast(400), 600);
        for x in 0..4u32 {
            for y in 1..8u32 {
                let m = 5u64.pow(x) * 2u64.pow(y);
                let want = if y <= 3 {
                    12 * 5u64.pow(x)
                } else {
                    12 * 5u64.pow(x) * 2u64.pow(y - 3)
                };
                if x == 0 && y <= 3 {
                    // the closed form assumes a factor of 5
                    continue;
                }
                assert_eq!(fast(m), want, "π(5^{x} 2^{y})");
            }
        }
    }

    #[test]
    fn fast_matches_direct_up_to_thousand() {
        for m in 2..=1000 {
            assert_eq!(fast(m), direct(m), "m = {m}");
        }
    }

    #[test]
    fn period_is_minimal() {
        for m in 1..=1000u64 {
            let p = direct(m);
            assert!(is_period_u64(p, m).unwrap());
            for d in (1..p).filter(|d| p % d == 0) {
                assert!(!is_period_u64(d, m).unwrap(), "{d} | π({m})");
            }
        }
    }

    #[test]
    fn nesting() {
        let periods: Vec<u64> = (0..=500).map(|m| if m == 0 { 0 } else { direct(m) }).collect();
        for n in 1..=500usize {
            for m in (1..=n).filter(|m| n % m == 0) {
                assert_eq!(periods[n] % periods[m], 0, "π({m}) ∤ π({n})");
            }
        }
    }

    #[test]
    fn growth_of_powers() {
        // The LCM of strictly growing prime-power periods need not grow:
        // π(6) = π(36) = lcm(3, 8) = lcm(6, 24) = 24, and likewise for 12.
        let stalls = [6u64, 12];
        let budget = Budget::default();
        for m in 2..=50u64 {
            let f = factorize(m).unwrap();
            let p: Vec<BigUint> = (1..=3)
                .map(|i| pisano_factored(&f.pow(i), &budget).unwrap().period().clone())
                .collect();
            assert!((&p[1] % &p[0]).is_zero() && (&p[2] % &p[1]).is_zero());
            assert!(p[1] < p[2], "m = {m}");
            if stalls.contains(&m) {
                assert_eq!(p[0], p[1], "m = {m}");
            } else {
                assert!(p[0] < p[1], "m = {m}");
            }
        }
    }

    #[test]
    fn budget_exhaustion() {
        let err = pisano_direct(10_000, &Budget::new(100)).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { limit: 100 });
        assert!(pisano_direct(10, &Budget::new(60)).is_ok());
        assert!(pisano_direct(10, &Budget::new(59)).is_err());
        assert_eq!(pisano_fast(0, &Budget::default()), Err(Error::ZeroModulus));
    }

    #[test]
    fn big_direct_matches_native() {
        let budget = Budget::default();
        // F_100 has small period relative to its size: π(F_n) ∈ {n, 2n, 4n}
        let f100 = BigUint::parse_bytes(b"354224848179261915075", 10).unwrap();
        let d = pisano_direct_big(&f100, &budget).unwrap();
        assert!(is_period(d.period(), &f100).unwrap());
        assert_eq!(d.period_u64(), Some(200));
        assert_eq!(
            pisano_direct_big(&BigUint::from(360u32), &budget).unwrap(),
            pisano_direct(360, &budget).unwrap()
        );
    }

    #[test]
    fn wall_sun_sun() {
        let budget = Budget::default();
        assert!(!is_wall_sun_sun(2, &budget).unwrap());
        assert!(!is_wall_sun_sun(3, &budget).unwrap());
        assert_eq!(is_wall_sun_sun(4, &budget), Err(Error::NotPrime(4)));
        for p in (2..1000).filter(|&p| is_prime_u64(p)) {
            assert!(!is_wall_sun_sun(p, &budget).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn cache_is_idempotent() {
        let cache = PeriodCache::new();
        let budget = Budget::default();
        let m = BigUint::from(10u32);
        let a = cache.get_or_compute(&m, || pisano_fast(10, &budget)).unwrap();
        let b = cache.get_or_compute(&m, || pisano_direct(10, &budget)).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.method(), PeriodMethod::FactoredLcm);
        assert_eq!(cache.len(), 1);
    }
}
