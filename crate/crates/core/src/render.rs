//! Fixed-point rendering of exact rationals.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Renders a nonnegative rational with exactly `places` decimals, rounding
/// half to even.
pub fn decimal(value: &Ratio<u128>, places: u32) -> String {
    decimal_parts(
        &BigUint::from(*value.numer()),
        &BigUint::from(*value.denom()),
        places,
    )
}

/// `100 * count / total` rendered with `places` decimals.
pub fn percent(count: u128, total: u128, places: u32) -> String {
    decimal_parts(
        &(BigUint::from(count) * 100u32),
        &BigUint::from(total),
        places,
    )
}

pub fn decimal_parts(numer: &BigUint, denom: &BigUint, places: u32) -> String {
    assert!(!denom.is_zero(), "zero denominator");
    let scale = BigUint::from(10u32).pow(places);
    let (mut q, r) = (numer * &scale).div_rem(denom);
    let twice = r << 1u32;
    if twice > *denom || (twice == *denom && q.is_odd()) {
        q += BigUint::one();
    }
    let (int, frac) = q.div_rem(&scale);
    if places == 0 {
        int.to_string()
    } else {
        format!("{int}.{:0>width$}", frac.to_string(), width = places as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_half_to_even() {
        assert_eq!(decimal(&Ratio::new(1, 8), 2), "0.12");
        assert_eq!(decimal(&Ratio::new(3, 8), 2), "0.38");
        assert_eq!(decimal(&Ratio::new(5, 2), 0), "2");
        assert_eq!(decimal(&Ratio::new(7, 2), 0), "4");
    }

    #[test]
    fn percentages() {
        assert_eq!(percent(15, 48, 4), "31.2500");
        assert_eq!(percent(63, 216, 4), "29.1667");
        assert_eq!(percent(1, 3, 4), "33.3333");
        assert_eq!(percent(0, 5, 4), "0.0000");
        assert_eq!(percent(5, 5, 1), "100.0");
    }

    #[test]
    fn reference_line() {
        assert_eq!(decimal(&Ratio::new(1, 7), 6), "0.142857");
        assert_eq!(decimal(&Ratio::new(1, 3), 6), "0.333333");
    }
}
