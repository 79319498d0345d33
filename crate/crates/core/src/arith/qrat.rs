use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::qpoly::{write_laurent, QPoly};
use crate::error::{Error, Result};

/// Element of `Q(q)`: a reduced fraction of polynomials in `q` whose
/// denominator is monic. Equal values have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QRational {
    num: QPoly,
    den: QPoly,
}

impl Default for QRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl QRational {
    pub fn zero() -> Self {
        QRational {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(QPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(super::rat(n))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn from_poly(num: QPoly) -> Self {
        QRational {
            num,
            den: QPoly::one(),
        }
    }

    /// `q^exponent`; negative exponents put a power of `q` in the denominator.
    pub fn q_power(exponent: i64) -> Self {
        if exponent >= 0 {
            Self::from_poly(QPoly::q_pow(exponent as usize))
        } else {
            QRational {
                num: QPoly::one(),
                den: QPoly::q_pow(exponent.unsigned_abs() as usize),
            }
        }
    }

    /// Reduces `num/den` to canonical form; `den` must be nonzero.
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = QPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Self::make_monic(num, den)
    }

    fn make_monic(num: QPoly, den: QPoly) -> Self {
        let lead = den.leading().expect("nonzero denominator");
        if lead.is_one() {
            QRational { num, den }
        } else {
            let inv = lead.recip();
            QRational {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a polynomial in `q` (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The rational constant, if the value does not depend on `q`.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::make_monic(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &QRational) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QRational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Exact value at `q = q0`.
    pub fn eval(&self, q0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(Error::EvaluationPole(q0.to_string()));
        }
        Ok(self.num.eval(q0) / d)
    }

    /// Whether the displayed form starts with a minus sign.
    pub fn displays_negative(&self) -> bool {
        let lowest = |p: &QPoly| p.valuation().map(|v| p.coeffs()[v].is_negative());
        match (lowest(&self.num), lowest(&self.den)) {
            (Some(n), Some(d)) if !self.den.is_q_power() => n != d,
            (Some(n), _) => n,
            _ => false,
        }
    }

    fn laurent_den(&self) -> Option<usize> {
        if self.den.is_q_power() {
            self.den.degree()
        } else {
            None
        }
    }
}

/// `a / q^i` over `q^j` style fast path: both denominators are powers of `q`.
fn laurent_reduce(num: QPoly, den_pow: usize) -> QRational {
    if num.is_zero() {
        return QRational::zero();
    }
    let k = num.valuation().unwrap().min(den_pow);
    QRational {
        num: num.shift_down(k),
        den: QPoly::q_pow(den_pow - k),
    }
}

impl Add for &QRational {
    type Output = QRational;
    fn add(self, rhs: &QRational) -> QRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if let (Some(i), Some(j)) = (self.laurent_den(), rhs.laurent_den()) {
            let m = i.max(j);
            let num = &self.num.shift_up(m - i) + &rhs.num.shift_up(m - j);
            return laurent_reduce(num, m);
        }
        if self.den == rhs.den {
            return QRational::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = QPoly::gcd(&self.den, &rhs.den);
        let sd = self.den.exact_div(&g);
        let rd = rhs.den.exact_div(&g);
        let num = &(&self.num * &rd) + &(&rhs.num * &sd);
        let den = &sd * &rhs.den;
        QRational::reduce(num, den)
    }
}

impl Sub for &QRational {
    type Output = QRational;
    fn sub(self, rhs: &QRational) -> QRational {
        self + &(-rhs)
    }
}

impl Neg for &QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        QRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &QRational {
    type Output = QRational;
    fn mul(self, rhs: &QRational) -> QRational {
        if self.is_zero() || rhs.is_zero() {
            return QRational::zero();
        }
        if let (Some(i), Some(j)) = (self.laurent_den(), rhs.laurent_den()) {
            return laurent_reduce(&self.num * &rhs.num, i + j);
        }
        let g1 = QPoly::gcd(&self.num, &rhs.den);
        let g2 = QPoly::gcd(&rhs.num, &self.den);
        let num = &self.num.exact_div(&g1) * &rhs.num.exact_div(&g2);
        let den = &self.den.exact_div(&g2) * &rhs.den.exact_div(&g1);
        QRational::make_monic(num, den)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QRational {
            type Output = QRational;
            fn $m(self, rhs: QRational) -> QRational {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QRational> for QRational {
            type Output = QRational;
            fn $m(self, rhs: &QRational) -> QRational {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        -&self
    }
}

impl From<i64> for QRational {
    fn from(n: i64) -> Self {
        QRational::from_int(n)
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.laurent_den() {
            return write_laurent(f, self.num.coeffs(), -(k as i64));
        }
        // Display only: show the denominator with a positive constant term.
        let flip = self
            .den
            .valuation()
            .map(|v| self.den.coeffs()[v].is_negative())
            .unwrap_or(false);
        let (num, den) = if flip {
            (-&self.num, -&self.den)
        } else {
            (self.num.clone(), self.den.clone())
        };
        if num.term_count() > 1 {
            write!(f, "({num})")?;
        } else {
            write!(f, "{num}")?;
        }
        if den.term_count() > 1 {
            write!(f, "/({den})")
        } else {
            write!(f, "/{den}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn poly(c: &[i64]) -> QRational {
        QRational::from_poly(QPoly::from_ints(c))
    }

    fn frac(n: &[i64], d: &[i64]) -> QRational {
        QRational::new(QPoly::from_ints(n), QPoly::from_ints(d)).unwrap()
    }

    #[test]
    fn inverse_pair() {
        let a = frac(&[1], &[1, -1]);
        assert!((&a * &poly(&[1, -1])).is_one());
        assert!((QRational::q_power(-3) * QRational::q_power(3)).is_one());
    }

    #[test]
    fn long_division_oracle() {
        // (1 - q^2)/(1 - q) + 0 = 1 + q
        let a = frac(&[1, 0, -1], &[1, -1]);
        assert_eq!(&a + &QRational::zero(), poly(&[1, 1]));
        let (quot, rem) = QPoly::from_ints(&[1, 0, -1]).div_rem(&QPoly::from_ints(&[1, -1]));
        assert!(rem.is_zero());
        assert_eq!(QRational::from_poly(quot), a);
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            poly(&[1]).checked_div(&QRational::zero()),
            Err(Error::DivisionByZero)
        );
        assert!(QRational::new(QPoly::one(), QPoly::zero()).is_err());
    }

    #[test]
    fn q_power_examples() {
        assert!(QRational::q_power(0).is_one());
        assert_eq!(QRational::q_power(-1), frac(&[1], &[0, 1]));
        assert_eq!(QRational::q_power(6), poly(&[0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn evaluation() {
        assert_eq!(frac(&[1], &[1, -1]).eval(&ratio(1, 2)).unwrap(), rat(2));
        assert_eq!(QRational::q_power(2).eval(&rat(3)).unwrap(), rat(9));
        assert!(matches!(
            frac(&[1], &[1, -1]).eval(&rat(1)),
            Err(Error::EvaluationPole(_))
        ));
    }

    #[test]
    fn denominator_is_monic() {
        let a = frac(&[2], &[4, -2]);
        assert_eq!(a.denom().leading(), Some(&rat(1)));
        assert_eq!(a, frac(&[1], &[2, -1]));
    }

    #[test]
    fn mixed_laurent_and_general() {
        let a = &QRational::q_power(-2) * &frac(&[1], &[1, -1]);
        let back = &a * &poly(&[0, 0, 1, -1]);
        assert!(back.is_one());
        let s = &QRational::q_power(-1) + &frac(&[1], &[1, -1]);
        assert_eq!(s, frac(&[1], &[0, 1, -1]));
    }

    #[test]
    fn rendering() {
        assert_eq!(frac(&[1], &[1, -1]).to_string(), "1/(1 - q)");
        assert_eq!(QRational::q_power(-3).to_string(), "q^-3");
        assert_eq!(frac(&[1, 1], &[0, 1]).to_string(), "q^-1 + 1");
        assert_eq!(poly(&[1, 1]).to_string(), "1 + q");
        assert_eq!(QRational::from_rational(ratio(-3, 2)).to_string(), "-3/2");
    }
}
