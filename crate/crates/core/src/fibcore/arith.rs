use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// An element of Z/mZ with an unbounded modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BigResidue {
    value: BigUint,
    modulus: BigUint,
}

impl BigResidue {
    pub fn new(value: BigUint, modulus: BigUint) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::ZeroModulus);
        }
        if value >= modulus {
            return Err(Error::InvalidInput(format!(
                "residue {value} is not reduced modulo {modulus}"
            )));
        }
        Ok(BigResidue { value, modulus })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }
}

#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    // a, b < m; avoids overflow for moduli above 2^63
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `(F_n mod m, F_{n+1} mod m)` by fast doubling on native words.
pub fn fib_pair_mod_u64(n: u64, m: u64) -> Result<(u64, u64)> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let (mut a, mut b) = (0u64, 1 % m);
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        // F_2k = F_k (2 F_{k+1} - F_k), F_2k+1 = F_k^2 + F_{k+1}^2
        let twice_b_minus_a = sub_mod(add_mod(b, b, m), a, m);
        let c = mul_mod(a, twice_b_minus_a, m);
        let d = add_mod(mul_mod(a, a, m), mul_mod(b, b, m), m);
        if (n >> bit) & 1 == 1 {
            a = d;
            b = add_mod(c, d, m);
        } else {
            a = c;
            b = d;
        }
    }
    Ok((a, b))
}

pub fn fib_mod_u64(n: u64, m: u64) -> Result<u64> {
    fib_pair_mod_u64(n, m).map(|(f, _)| f)
}

/// `(F_n mod m, F_{n+1} mod m)` for unbounded `n` and `m`.
pub fn fib_pair_mod(n: &BigUint, m: &BigUint) -> Result<(BigUint, BigUint)> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if let (Some(n), Some(m)) = (n.to_u64(), m.to_u64()) {
        let (a, b) = fib_pair_mod_u64(n, m)?;
        return Ok((a.into(), b.into()));
    }
    Ok(fib_pair_mod_slow(n, m))
}

pub(crate) fn fib_pair_mod_slow(n: &BigUint, m: &BigUint) -> (BigUint, BigUint) {
    let mut a = BigUint::zero();
    let mut b = BigUint::one() % m;
    for bit in (0..n.bits()).rev() {
        let twice_b_minus_a = ((&b << 1u32) + m - &a) % m;
        let c = (&a * twice_b_minus_a) % m;
        let d = (&a * &a + &b * &b) % m;
        if n.bit(bit) {
            b = (&c + &d) % m;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

/// `F_n mod m` in O(log n) modular multiplications.
pub fn fib_mod(n: &BigUint, m: &BigUint) -> Result<BigResidue> {
    let (value, _) = fib_pair_mod(n, m)?;
    Ok(BigResidue {
        value,
        modulus: m.clone(),
    })
}

/// True when `F_k ≡ 0` and `F_{k+1} ≡ 1 (mod m)`, i.e. `k` is a multiple of π(m).
pub fn is_period(k: &BigUint, m: &BigUint) -> Result<bool> {
    let (a, b) = fib_pair_mod(k, m)?;
    Ok(a.is_zero() && b == BigUint::one() % m)
}

pub fn is_period_u64(k: u64, m: u64) -> Result<bool> {
    let (a, b) = fib_pair_mod_u64(k, m)?;
    Ok(a == 0 && b == 1 % m)
}

/// Residues `F_0, F_1, … mod m` on native words; two words of state.
#[derive(Debug, Clone)]
pub struct ResidueStream {
    current: u64,
    next: u64,
    modulus: u64,
}

impl ResidueStream {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(ResidueStream {
            current: 0,
            next: 1 % modulus,
            modulus,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The pair `(F_n, F_{n+1})` that the next call to `next` starts from.
    pub fn state(&self) -> (u64, u64) {
        (self.current, self.next)
    }
}

impl Iterator for ResidueStream {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        let out = self.current;
        let following = add_mod(self.current, self.next, self.modulus);
        self.current = self.next;
        self.next = following;
        Some(out)
    }
}

/// Residues `F_0, F_1, … mod m` for an unbounded modulus.
#[derive(Debug, Clone)]
pub struct BigResidueStream {
    current: BigUint,
    next: BigUint,
    modulus: BigUint,
}

pub fn residue_stream(m: &BigUint) -> Result<BigResidueStream> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    Ok(BigResidueStream {
        current: BigUint::zero(),
        next: BigUint::one() % m,
        modulus: m.clone(),
    })
}

impl BigResidueStream {
    pub fn state(&self) -> (&BigUint, &BigUint) {
        (&self.current, &self.next)
    }
}

impl Iterator for BigResidueStream {
    type Item = BigResidue;

    fn next(&mut self) -> Option<BigResidue> {
        let mut following = &self.current + &self.next;
        if following >= self.modulus {
            following -= &self.modulus;
        }
        let out = std::mem::replace(&mut self.current, std::mem::replace(&mut self.next, following));
        Some(BigResidue {
            value: out,
            modulus: self.modulus.clone(),
        })
    }
}
