use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp;

/// Dense polynomial in `q` with rational coefficients, lowest degree first.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^degree`
    pub fn monomial(c: BigRational, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        QPoly { coeffs }
    }

    /// `q^degree`
    pub fn q_pow(degree: usize) -> Self {
        Self::monomial(BigRational::one(), degree)
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    /// Builds a polynomial from small integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> BigRational {
        self.coeffs
            .get(degree)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// True for `q^k` with unit coefficient (including the constant 1).
    pub fn is_q_power(&self) -> bool {
        match self.leading() {
            Some(l) => l.is_one() && self.valuation() == self.degree(),
            None => false,
        }
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Divides by `q^k`; the caller guarantees `k <= valuation`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.is_zero() || self.valuation().unwrap() >= k);
        if self.is_zero() {
            return Self::zero();
        }
        QPoly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    /// Horner evaluation at `q = q0`.
    pub fn eval(&self, q0: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * q0 + c)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        if let (Some(u), Some(v)) = (int_coeffs(self), int_coeffs(divisor)) {
            if v[dd].abs().is_one() {
                let (quot, rem) = int_div_rem(&u, &v).expect("unit leading coefficient");
                return (from_int_vec(quot), from_int_vec(rem));
            }
        }
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    /// Division known to be exact.
    pub fn exact_div(&self, divisor: &QPoly) -> QPoly {
        if divisor.is_one() {
            return self.clone();
        }
        if divisor.is_q_power() {
            return self.shift_down(divisor.degree().unwrap());
        }
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.degree() == Some(0) || b.degree() == Some(0) {
            return QPoly::one();
        }
        if a.is_q_power() || b.is_q_power() {
            let k = a.valuation().unwrap().min(b.valuation().unwrap());
            return QPoly::q_pow(k);
        }
        // Strip common powers of q first; the rest is a primitive PRS over Z.
        let shift = a.valuation().unwrap().min(b.valuation().unwrap());
        let mut u = primitive_int(&a.shift_down(a.valuation().unwrap()));
        let mut v = primitive_int(&b.shift_down(b.valuation().unwrap()));
        if let Some(g) = modular_gcd(&u, &v) {
            return from_int_vec(g).monic().shift_up(shift);
        }
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        while !v.is_empty() {
            if v.len() == 1 {
                u = vec![BigInt::one()];
                break;
            }
            let r = primitive_int_vec(pseudo_rem(&u, &v));
            u = v;
            v = r;
        }
        let g = QPoly::from_coeffs(u.into_iter().map(BigRational::from_integer).collect());
        g.monic().shift_up(shift)
    }
}

/// Clears denominators and divides out the integer content.
fn primitive_int(p: &QPoly) -> Vec<BigInt> {
    let lcm = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    primitive_int_vec(ints)
}

fn primitive_int_vec(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() && !content.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &content;
        }
    }
    if v.last().is_some_and(Signed::is_negative) {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

fn from_int_vec(v: Vec<BigInt>) -> QPoly {
    QPoly::from_coeffs(v.into_iter().map(BigRational::from_integer).collect())
}

/// Integer coefficients, if every coefficient is an integer.
fn int_coeffs(p: &QPoly) -> Option<Vec<BigInt>> {
    p.coeffs
        .iter()
        .map(|c| c.is_integer().then(|| c.numer().clone()))
        .collect()
}

/// `(ints, d)` with `p = ints / d`.
fn scaled_int(p: &QPoly) -> (Vec<BigInt>, BigInt) {
    let d = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&d / c.denom()))
        .collect();
    (ints, d)
}

fn small(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(|c| c.to_i64().map(i128::from)).collect()
}

fn convolve_small(a: &[i128], b: &[i128]) -> Option<Vec<BigInt>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(x.checked_mul(*y)?)?;
        }
    }
    Some(out.into_iter().map(BigInt::from).collect())
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if let (Some(sa), Some(sb)) = (small(a), small(b)) {
        if let Some(out) = convolve_small(&sa, &sb) {
            return out;
        }
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_div_rem_small(u: &[i128], v: &[i128]) -> Option<Option<(Vec<BigInt>, Vec<BigInt>)>> {
    let dv = v.len() - 1;
    let lv = v[dv];
    let mut rem = u.to_vec();
    let mut quot = vec![0i128; u.len() - dv];
    for i in (0..quot.len()).rev() {
        let top = rem[i + dv];
        if top == 0 {
            continue;
        }
        if top % lv != 0 {
            return Some(None);
        }
        let c = top / lv;
        for (j, d) in v.iter().enumerate() {
            rem[i + j] = rem[i + j].checked_sub(c.checked_mul(*d)?)?;
        }
        quot[i] = c;
    }
    rem.truncate(dv);
    let big = |v: Vec<i128>| v.into_iter().map(BigInt::from).collect();
    Some(Some((big(quot), big(rem))))
}

/// Division over `Z`; `None` when some quotient coefficient is not an integer.
fn int_div_rem(u: &[BigInt], v: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let dv = v.len() - 1;
    if u.len() <= dv {
        return Some((Vec::new(), u.to_vec()));
    }
    if let (Some(su), Some(sv)) = (small(u), small(v)) {
        if let Some(done) = int_div_rem_small(&su, &sv) {
            return done;
        }
    }
    let lv = &v[dv];
    let mut rem = u.to_vec();
    let mut quot = vec![BigInt::zero(); u.len() - dv];
    for i in (0..quot.len()).rev() {
        if rem[i + dv].is_zero() {
            continue;
        }
        let (c, r) = rem[i + dv].div_rem(lv);
        if !r.is_zero() {
            return None;
        }
        for (j, d) in v.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    rem.truncate(dv);
    Some((quot, rem))
}

fn divides(u: &[BigInt], v: &[BigInt]) -> bool {
    int_div_rem(u, v).is_some_and(|(_, r)| r.iter().all(Zero::is_zero))
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let db = b.len() - 1;
        let inv = modp::inv(b[db]).expect("nonzero leading coefficient");
        while a.len() > db {
            let top = a.len() - 1;
            let c = modp::mul(a[top], inv);
            if c != 0 {
                for (j, d) in b.iter().enumerate() {
                    a[top - db + j] = modp::sub(a[top - db + j], modp::mul(c, *d));
                }
            }
            a.pop();
        }
        trim(&mut a);
        std::mem::swap(&mut a, &mut b);
    }
    let inv = modp::inv(*a.last().expect("nonzero input")).expect("nonzero");
    a.iter().map(|c| modp::mul(*c, inv)).collect()
}

/// Gcd of primitive integer polynomials via a single modular image, accepted
/// only after exact division confirms it; `None` means "use the PRS".
fn modular_gcd(u: &[BigInt], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let lc = u.last()?.gcd(v.last()?);
    let um: Vec<u64> = u.iter().map(modp::from_int).collect();
    let vm: Vec<u64> = v.iter().map(modp::from_int).collect();
    if um.last() == Some(&0) || vm.last() == Some(&0) {
        return None;
    }
    let gm = gcd_mod(um, vm);
    if gm.len() == 1 {
        return Some(vec![BigInt::one()]);
    }
    let scale = modp::from_int(&lc);
    let g = primitive_int_vec(
        gm.iter()
            .map(|c| modp::lift(modp::mul(*c, scale)))
            .collect(),
    );
    (divides(u, &g) && divides(v, &g)).then_some(g)
}

/// Pseudo-remainder of `u` by `v` (both nonempty, no trailing zeros).
fn pseudo_rem(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    let dv = v.len() - 1;
    let lv = &v[dv];
    let mut r = u.to_vec();
    while r.len() > dv {
        let top = r.len() - 1;
        let lr = r[top].clone();
        if lr.is_zero() {
            r.pop();
            continue;
        }
        let off = top - dv;
        for c in r.iter_mut() {
            *c *= lv;
        }
        for (j, d) in v.iter().enumerate() {
            r[off + j] -= &lr * d;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let (a, da) = scaled_int(self);
        let (b, db) = scaled_int(rhs);
        let c = convolve(&a, &b);
        let d = da * db;
        if d.is_one() {
            from_int_vec(c)
        } else {
            QPoly::from_coeffs(
                c.into_iter()
                    .map(|n| BigRational::new(n, d.clone()))
                    .collect(),
            )
        }
    }
}

/// Writes `sum c_i q^(i + offset)`, lowest degree first.
pub(crate) fn write_laurent(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[BigRational],
    offset: i64,
) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = i as i64 + offset;
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        match (e, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => f.write_str("q")?,
            (1, false) => write!(f, "{mag}*q")?,
            (_, true) => write!(f, "q^{e}")?,
            (_, false) => write!(f, "{mag}*q^{e}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_laurent(f, &self.coeffs, 0)
    }
}
