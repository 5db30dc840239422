//! Trial division, Miller–Rabin and Pollard–Brent rho on 64-bit integers.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::{Error, Result};

const TRIAL_BOUND: u64 = 1 << 12;
const RHO_ITERATIONS: u64 = 1 << 22;
const RHO_ATTEMPTS: u64 = 16;

/// Prime factorization as strictly increasing `(prime, exponent)` pairs.
///
/// The factored value itself may exceed 64 bits; only the primes are bounded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// The factorization of 1.
    pub fn one() -> Self {
        Factorization { pairs: Vec::new() }
    }

    /// Validates a caller-supplied factorization.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> Result<Self> {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidInput(format!("prime {} listed twice", w[0].0)));
            }
        }
        for &(p, e) in &pairs {
            if e == 0 {
                return Err(Error::InvalidInput(format!("prime {p} has exponent 0")));
            }
            if !is_prime_u64(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(Factorization { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn value(&self) -> BigUint {
        self.pairs
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e))
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.value().to_u64()
    }

    /// Every exponent multiplied by `k`: the factorization of `value^k`.
    pub fn pow(&self, k: u32) -> Self {
        Factorization {
            pairs: self.pairs.iter().map(|&(p, e)| (p, e * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a + b)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.merge(other, u32::max)
    }

    fn merge(&self, other: &Self, combine: impl Fn(u32, u32) -> u32) -> Self {
        let mut pairs = Vec::with_capacity(self.pairs.len() + other.pairs.len());
        let (mut i, mut j) = (0, 0);
        while i < self.pairs.len() || j < other.pairs.len() {
            match (self.pairs.get(i), other.pairs.get(j)) {
                (Some(&(p, e)), Some(&(q, f))) if p == q => {
                    pairs.push((p, combine(e, f)));
                    i += 1;
                    j += 1;
                }
                (Some(&(p, e)), Some(&(q, _))) if p < q => {
                    pairs.push((p, e));
                    i += 1;
                }
                (Some(_), Some(&(q, f))) => {
                    pairs.push((q, f));
                    j += 1;
                }
                (Some(&pe), None) => {
                    pairs.push(pe);
                    i += 1;
                }
                (None, Some(&qf)) => {
                    pairs.push(qf);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Factorization { pairs }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's cycle detection with batched gcds.
fn rho(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let (mut x, mut ys) = (y, y);
    let mut g = 1;
    let batch = 128;
    let mut spent = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..batch.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += batch;
        }
        spent += r;
        if spent > RHO_ITERATIONS {
            return None;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split(n: u64, out: &mut Vec<u64>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        out.push(n);
        return Ok(());
    }
    let root = n.isqrt();
    if root * root == n {
        split(root, out)?;
        return split(root, out);
    }
    for c in 1..=RHO_ATTEMPTS {
        if let Some(d) = rho(n, c) {
            split(d, out)?;
            return split(n / d, out);
        }
    }
    Err(Error::FactorizationFailed(n.to_string()))
}

/// Complete prime factorization of `m ≥ 2`.
pub fn factorize(m: u64) -> Result<Factorization> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("cannot factor {m}")));
    }
    let mut pairs = Vec::new();
    let mut rest = m;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut p = 3;
    while p < TRIAL_BOUND && p * p <= rest {
        push(p, &mut rest);
        p += 2;
    }
    if rest > 1 {
        let mut large = Vec::new();
        if p * p > rest {
            large.push(rest);
        } else {
            split(rest, &mut large)?;
        }
        large.sort_unstable();
        for chunk in large.chunk_by(|a, b| a == b) {
            pairs.push((chunk[0], chunk.len() as u32));
        }
    }
    let f = Factorization { pairs };
    debug_assert_eq!(f.value_u64(), Some(m));
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_numbers() {
        assert_eq!(factorize(10).unwrap().pairs(), &[(2, 1), (5, 1)]);
        assert_eq!(factorize(400).unwrap().pairs(), &[(2, 4), (5, 2)]);
        assert_eq!(factorize(2).unwrap().pairs(), &[(2, 1)]);
        assert!(factorize(1).is_err());
        assert!(factorize(0).is_err());
    }

    #[test]
    fn product_reconstruction() {
        let f = factorize(104_044).unwrap();
        assert_eq!(f.pairs(), &[(2, 2), (19, 1), (37, 2)]);
        assert_eq!(f.value_u64(), Some(104_044));
    }

    #[test]
    fn hard_semiprimes() {
        // two 32-bit primes
        let (p, q) = (4_294_967_291u64, 4_294_967_279u64);
        let f = factorize(p * q).unwrap();
        assert_eq!(f.pairs(), &[(q, 1), (p, 1)]);
        let f = factorize(1_000_003u64 * 1_000_003 * 999_983).unwrap();
        assert_eq!(f.pairs(), &[(999_983, 1), (1_000_003, 2)]);
        assert_eq!(factorize(u64::MAX).unwrap().value_u64(), Some(u64::MAX));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..50).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        // strong pseudoprime to bases 2..=23
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
    }

    #[test]
    fn caller_supplied() {
        let f = Factorization::from_pairs(vec![(5, 30), (2, 30)]).unwrap();
        assert_eq!(f.value(), BigUint::from(10u32).pow(30));
        assert_eq!(f.value_u64(), None);
        assert_eq!(Factorization::from_pairs(vec![(4, 1)]), Err(Error::NotPrime(4)));
        assert!(Factorization::from_pairs(vec![(3, 0)]).is_err());
        assert!(Factorization::from_pairs(vec![(3, 1), (3, 2)]).is_err());
    }

    #[test]
    fn lcm_and_pow() {
        let a = factorize(12).unwrap();
        let b = factorize(90).unwrap();
        assert_eq!(a.lcm(&b).value_u64(), Some(180));
        assert_eq!(a.mul(&b).value_u64(), Some(1080));
        assert_eq!(a.pow(3).value_u64(), Some(1728));
        assert_eq!(a.to_string(), "2^2 * 3");
    }

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    proptest! {
        #[test]
        fn factors_multiply_back(m in 2u64..) {
            let f = factorize(m).unwrap();
            prop_assert_eq!(f.value_u64(), Some(m));
            prop_assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.primes().all(is_prime_u64));
        }

        #[test]
        fn miller_rabin_matches_trial_division(n in 0u64..2_000_000) {
            prop_assert_eq!(is_prime_u64(n), trial(n));
        }
    }
}
