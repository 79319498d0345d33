//! Exact arithmetic: arbitrary-precision rationals, univariate polynomials
//! in `q` and the rational-function field `Q(q)` in canonical form.

pub(crate) mod modp;
mod qpoly;
mod qrat;

pub use num_rational::BigRational;
pub use qpoly::QPoly;
pub use qrat::QRational;

use num_bigint::BigInt;

/// Shorthand for an integer-valued [`BigRational`].
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den` as a reduced [`BigRational`].
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `binom(n, 2)` for signed `n`, the exponent of the usual q-power weights.
pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}
