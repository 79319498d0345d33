//! Sparse multivariate polynomials over `Q(q)` in a fixed variable alphabet.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic with `x > y > z > xi > ... > c9`. Iteration therefore
//! starts at the graded-lex least monomial; rendering walks it in reverse so
//! the leading term comes first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::QRational;
use crate::error::{Error, Result};

pub const NUM_VARS: usize = 21;

/// The closed symbol alphabet. `q` is deliberately absent: it only lives
/// inside [`QRational`] coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    Xi,
    Zeta,
    BigX,
    BigY,
    BigZ,
    Omega,
    U,
    A,
    C0,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
}

impl Var {
    pub const ALL: [Var; NUM_VARS] = [
        Var::X,
        Var::Y,
        Var::Z,
        Var::Xi,
        Var::Zeta,
        Var::BigX,
        Var::BigY,
        Var::BigZ,
        Var::Omega,
        Var::U,
        Var::A,
        Var::C0,
        Var::C1,
        Var::C2,
        Var::C3,
        Var::C4,
        Var::C5,
        Var::C6,
        Var::C7,
        Var::C8,
        Var::C9,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        const NAMES: [&str; NUM_VARS] = [
            "x", "y", "z", "xi", "zeta", "X", "Y", "Z", "Omega", "U", "a", "c0", "c1", "c2", "c3",
            "c4", "c5", "c6", "c7", "c8", "c9",
        ];
        NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == name)
    }

    /// Scratch symbol `c_i`, `i < 10`.
    pub fn scratch(i: usize) -> Option<Var> {
        (i < 10).then(|| Var::ALL[Var::C0.index() + i])
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over the alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial([u16; NUM_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NUM_VARS])
    }

    pub fn var(v: Var) -> Self {
        let mut m = Self::one();
        m.0[v.index()] = 1;
        m
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn exponents(&self) -> &[u16; NUM_VARS] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        Var::ALL
            .iter()
            .copied()
            .map(|v| (v, self.0[v.index()]))
            .filter(|(_, e)| *e > 0)
    }

    /// The same monomial with `v` removed.
    pub fn without(&self, v: Var) -> Monomial {
        let mut out = *self;
        out.0[v.index()] = 0;
        out
    }

    fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
            *o += r;
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with [`QRational`] coefficients; zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, QRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(QRational::one())
    }

    pub fn constant(c: QRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(QRational::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(QRational::one(), Monomial::var(v))
    }

    /// `q^e`
    pub fn q_power(e: i64) -> Self {
        Self::constant(QRational::q_power(e))
    }

    pub fn term(c: QRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(items: impl IntoIterator<Item = (Monomial, QRational)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in items {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &QRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Drops zero coefficients. Every constructor already does this, so the
    /// call is idempotent and a no-op on values built through the API.
    pub fn normalize(&self) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &QRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> QRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The coefficient when the polynomial is a constant.
    pub fn as_scalar(&self) -> Option<QRational> {
        match self.terms.len() {
            0 => Some(QRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// The single term, when there is at most one (zero yields `None`).
    pub fn as_monomial(&self) -> Option<(&Monomial, &QRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_monomial_or_zero(&self) -> bool {
        self.terms.len() <= 1
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .iter()
            .copied()
            .filter(|v| self.terms.keys().any(|m| m.exponent(*v) > 0))
            .collect()
    }

    pub fn scale(&self, c: &QRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Rescales variables: `subs` maps `v` to `c * v` for a nonzero scalar `c`.
    pub fn scale_substitute(&self, subs: &[(Var, MultiPoly)]) -> Result<Self> {
        let mut factors: Vec<(Var, QRational)> = Vec::with_capacity(subs.len());
        for (v, target) in subs {
            let (m, c) = target.as_monomial().ok_or_else(|| {
                Error::InvalidSubstitution(format!(
                    "{v} -> {target} is not a scalar multiple of {v}"
                ))
            })?;
            if *m != Monomial::var(*v) {
                return Err(Error::InvalidSubstitution(format!(
                    "{v} -> {target} is not a scalar multiple of {v}"
                )));
            }
            factors.push((*v, c.clone()));
        }
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            for (v, f) in &factors {
                let e = m.exponent(*v);
                if e > 0 {
                    coef = &coef * &f.pow(e as u32);
                }
            }
            out.add_term(*m, &coef);
        }
        Ok(out)
    }

    /// Replaces each variable with a polynomial (unmapped variables stay).
    pub fn compose(&self, subs: &HashMap<Var, MultiPoly>) -> Self {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone());
            let mut keep = Monomial::one();
            for (v, e) in m.vars() {
                match subs.get(&v) {
                    Some(p) => t = &t * &p.pow(e as u32),
                    None => keep.0[v.index()] = e,
                }
            }
            let kept = MultiPoly::term(QRational::one(), keep);
            out = &out + &(&t * &kept);
        }
        out
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &HashMap<Var, BigRational>, q0: &BigRational) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.eval(q0)?;
            for (v, e) in m.vars() {
                let val = point
                    .get(&v)
                    .ok_or_else(|| Error::UnboundVariable(v.name().to_string()))?;
                t *= pow_rat(val, e as u32);
            }
            acc += t;
        }
        Ok(acc)
    }
}

fn pow_rat(b: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (mut out, other) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl From<QRational> for MultiPoly {
    fn from(c: QRational) -> Self {
        MultiPoly::constant(c)
    }
}

/// Renders one coefficient so that it can prefix a monomial.
fn render_coeff(c: &QRational) -> (bool, String) {
    let neg = c.displays_negative();
    let mag = if neg { -c } else { c.clone() };
    let text = mag.to_string();
    if mag.numer().term_count() > 1 && mag.denom().is_q_power() {
        (neg, format!("({text})"))
    } else {
        (neg, text)
    }
}

impl fmt::Display for MultiPoly {
    /// Byte-deterministic canonical text: leading term first, coefficients as
    /// reduced fractions in `q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        if let Some(c) = self.as_scalar() {
            return write!(f, "{c}");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = render_coeff(c);
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&mag)?;
            } else if mag == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio, QPoly};

    fn x() -> MultiPoly {
        MultiPoly::var(Var::X)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(Var::Y)
    }
    fn z() -> MultiPoly {
        MultiPoly::var(Var::Z)
    }
    fn qp(e: i64) -> MultiPoly {
        MultiPoly::q_power(e)
    }

    #[test]
    fn cauchy_factor_product() {
        let p = &(&x() - &y()) * &(&x() - &(&qp(1) * &y()));
        let expected = &(&x().pow(2)
            - &(&(&x() * &y())
                * &MultiPoly::constant(QRational::from_poly(QPoly::from_ints(&[1, 1])))))
            + &(&qp(1) * &y().pow(2));
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "x^2 - (1 + q)*x*y + q*y^2");
    }

    #[test]
    fn additive_inverse_and_identity() {
        let p = &(&x() - &y()) + &z();
        assert!((&p + &(-&p)).is_zero());
        assert_eq!(&p * &MultiPoly::one(), p);
    }

    #[test]
    fn scale_substitute_examples() {
        let p = &(&x() - &y()) + &z();
        let s = p.scale_substitute(&[(Var::Z, &qp(1) * &z())]).unwrap();
        assert_eq!(s, &(&x() - &y()) + &(&qp(1) * &z()));

        let s = x()
            .pow(2)
            .scale_substitute(&[(Var::X, &qp(-1) * &x())])
            .unwrap();
        assert_eq!(s, &qp(-2) * &x().pow(2));

        let xy = &x() * &y();
        let s = xy
            .scale_substitute(&[(Var::X, &qp(-1) * &x()), (Var::Y, &qp(1) * &y())])
            .unwrap();
        assert_eq!(s, xy);
    }

    #[test]
    fn scale_substitute_rejects_other_variables() {
        let p = x();
        assert!(matches!(
            p.scale_substitute(&[(Var::X, y())]),
            Err(Error::InvalidSubstitution(_))
        ));
        assert!(matches!(
            p.scale_substitute(&[(Var::X, &x() + &y())]),
            Err(Error::InvalidSubstitution(_))
        ));
    }

    #[test]
    fn evaluation_examples() {
        let ones: HashMap<Var, BigRational> =
            [(Var::X, rat(1)), (Var::Y, rat(1)), (Var::Z, rat(1))].into();
        let p = &(&x() - &y()) + &z();
        assert_eq!(p.eval(&ones, &ratio(3, 7)).unwrap(), rat(1));

        let at2: HashMap<Var, BigRational> = [(Var::X, rat(2))].into();
        assert_eq!((&qp(1) * &x()).eval(&at2, &ratio(1, 2)).unwrap(), rat(1));

        // P_2(x, y) at (2, 1), q = 1/3
        let p2 = &(&x() - &y()) * &(&x() - &(&qp(1) * &y()));
        let pt: HashMap<Var, BigRational> = [(Var::X, rat(2)), (Var::Y, rat(1))].into();
        assert_eq!(p2.eval(&pt, &ratio(1, 3)).unwrap(), ratio(5, 3));

        assert!(matches!(
            p2.eval(&at2, &ratio(1, 3)),
            Err(Error::UnboundVariable(v)) if v == "y"
        ));
    }

    #[test]
    fn graded_lex_order() {
        let m = |v| Monomial::var(v);
        assert!(m(Var::X) > m(Var::Y));
        assert!(Monomial::var(Var::C9) > Monomial::one());
        let y2 = Monomial::var(Var::Y).mul(&Monomial::var(Var::Y));
        assert!(y2 > m(Var::X));
    }

    #[test]
    fn rendering_is_canonical() {
        let p = &(&x() * &MultiPoly::constant(QRational::q_power(-1))) - &y();
        assert_eq!(p.to_string(), "q^-1*x - y");
        let d =
            MultiPoly::constant(QRational::new(QPoly::one(), QPoly::from_ints(&[1, -1])).unwrap());
        assert_eq!((&d * &x()).to_string(), "1/(1 - q)*x");
        assert_eq!((-&d).to_string(), "-1/(1 - q)");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }
}
