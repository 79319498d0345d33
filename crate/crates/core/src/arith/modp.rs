//! Arithmetic modulo the Mersenne prime `2^61 - 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub(crate) const PRIME: u64 = (1 << 61) - 1;

pub(crate) fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

pub(crate) fn add(a: u64, b: u64) -> u64 {
    (a + b) % PRIME
}

pub(crate) fn sub(a: u64, b: u64) -> u64 {
    (a + PRIME - b) % PRIME
}

pub(crate) fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv(a: u64) -> Option<u64> {
    (a != 0).then(|| pow(a, PRIME - 2))
}

pub(crate) fn from_int(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(PRIME))
        .to_u64()
        .expect("reduced below the prime")
}

/// Image of `r`, or `None` when its denominator vanishes.
pub(crate) fn from_rational(r: &BigRational) -> Option<u64> {
    Some(mul(from_int(r.numer()), inv(from_int(r.denom()))?))
}

/// Symmetric lift into `(-p/2, p/2]`.
pub(crate) fn lift(a: u64) -> BigInt {
    if a > PRIME / 2 {
        BigInt::from(a as i128 - PRIME as i128)
    } else {
        BigInt::from(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_and_lifts() {
        assert_eq!(mul(inv(7).unwrap(), 7), 1);
        assert_eq!(
            mul(from_rational(&crate::arith::ratio(1, 2)).unwrap(), 2),
            1
        );
        assert_eq!(add(from_int(&BigInt::from(-1)), 1), 0);
        assert_eq!(lift(from_int(&BigInt::from(-5))), BigInt::from(-5));
        assert_eq!(sub(3, 5), PRIME - 2);
        assert_eq!(inv(0), None);
    }
}
