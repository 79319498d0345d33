//! Truncated formal power series in a formal variable `t` (and bivariate
//! `(u, t)`) with [`MultiPoly`] coefficients.

use crate::arith::{binom2, QRational};
use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;

/// `sum_{k <= N} c_k t^k`; the coefficient vector always has length `N + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    coeffs: Vec<MultiPoly>,
}

impl TruncSeries {
    pub fn new(mut coeffs: Vec<MultiPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, MultiPoly::zero());
        TruncSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(MultiPoly::one(), order)
    }

    pub fn constant(c: MultiPoly, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> MultiPoly) -> Self {
        TruncSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<MultiPoly> {
        self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> Result<&MultiPoly> {
        self.coeffs.get(k).ok_or(Error::OrderExceeded {
            index: k,
            order: self.order(),
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn mul(&self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order().min(rhs.order());
        TruncSeries::from_fn(n, |k| {
            (0..=k).fold(MultiPoly::zero(), |acc, i| {
                let (a, b) = (&self.coeffs[i], &rhs.coeffs[k - i]);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    &acc + &(a * b)
                }
            })
        })
    }

    /// Multiplicative inverse; the constant term must be a nonzero scalar.
    pub fn inverse(&self) -> Result<TruncSeries> {
        let c0 = self.coeffs[0]
            .as_scalar()
            .filter(|c| !c.is_zero())
            .ok_or(Error::NonUnitConstantTerm)?;
        let inv0 = MultiPoly::constant(c0.recip()?);
        let mut out: Vec<MultiPoly> = vec![inv0.clone()];
        for k in 1..=self.order() {
            let s = (1..=k).fold(MultiPoly::zero(), |acc, i| {
                &acc + &(&self.coeffs[i] * &out[k - i])
            });
            out.push(-&(&inv0 * &s));
        }
        Ok(TruncSeries { coeffs: out })
    }

    pub fn scale(&self, c: &MultiPoly) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }
}

/// `sum_{i <= M, j <= N} c_{ij} u^i t^j` on a rectangular index grid.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiTruncSeries {
    rows: Vec<Vec<MultiPoly>>,
}

impl BiTruncSeries {
    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> MultiPoly) -> Self {
        BiTruncSeries {
            rows: (0..=m)
                .map(|i| (0..=n).map(|j| f(i, j)).collect())
                .collect(),
        }
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.rows.len() - 1, self.rows[0].len() - 1)
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Result<&MultiPoly> {
        let (m, n) = self.orders();
        if i > m {
            return Err(Error::OrderExceeded { index: i, order: m });
        }
        if j > n {
            return Err(Error::OrderExceeded { index: j, order: n });
        }
        Ok(&self.rows[i][j])
    }

    /// Row-major flattening, `u^0 t^0, u^0 t^1, ...`.
    pub fn flatten(&self) -> Vec<MultiPoly> {
        self.rows.iter().flatten().cloned().collect()
    }
}

/// `(q;q)_n` as an element of `Q(q)`.
pub fn q_factorial(n: usize) -> QRational {
    use crate::arith::QPoly;
    let mut acc = QPoly::one();
    for k in 1..=n {
        let mut f = vec![0i64; k + 1];
        f[0] = 1;
        f[k] = -1;
        acc = &acc * &QPoly::from_ints(&f);
    }
    QRational::from_poly(acc)
}

fn require_monomial(c: &MultiPoly) -> Result<()> {
    if c.is_monomial_or_zero() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "expected a single term, got {c}"
        )))
    }
}

/// `(c t; q)_inf` through `t^N`: coefficients `(-1)^k q^binom(k,2) c^k / (q;q)_k`.
pub fn pochhammer_product_series(c: &MultiPoly, order: usize) -> Result<TruncSeries> {
    require_monomial(c)?;
    let mut power = MultiPoly::one();
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let w = QRational::q_power(binom2(k as i64))
            .checked_div(&q_factorial(k))?
            .scale_rational(&crate::arith::rat(sign));
        out.push(power.scale(&w));
        power = &power * c;
    }
    Ok(TruncSeries { coeffs: out })
}

/// `1 / (c t; q)_inf` through `t^N`: coefficients `c^k / (q;q)_k`.
pub fn euler_inv_series(c: &MultiPoly, order: usize) -> Result<TruncSeries> {
    require_monomial(c)?;
    let mut power = MultiPoly::one();
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        out.push(power.scale(&q_factorial(k).recip()?));
        power = &power * c;
    }
    Ok(TruncSeries { coeffs: out })
}

/// Expands `sum_j F(j) (u (+)_q t)^j / (q;q)_j` on the grid `i <= M, s <= N`:
/// entry `(i, s)` is `F(i + s) q^binom(s,2) / ((q;q)_i (q;q)_s)`.
pub fn jhc_substitute(seq: &[MultiPoly], m: usize, n: usize) -> Result<BiTruncSeries> {
    if seq.len() < m + n + 1 {
        return Err(Error::InsufficientTerms {
            got: seq.len(),
            needed: m + n + 1,
        });
    }
    let inv: Vec<QRational> = (0..=m.max(n))
        .map(|k| q_factorial(k).recip())
        .collect::<Result<_>>()?;
    Ok(BiTruncSeries::from_fn(m, n, |i, s| {
        let w = &(&QRational::q_power(binom2(s as i64)) * &inv[i]) * &inv[s];
        seq[i + s].scale(&w)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::Var;

    fn t_poly(c: &[i64], order: usize) -> TruncSeries {
        TruncSeries::new(c.iter().map(|&v| MultiPoly::int(v)).collect(), order)
    }

    fn frac_1_minus_q() -> QRational {
        q_factorial(1).recip().unwrap()
    }

    #[test]
    fn product_and_identity() {
        assert_eq!(
            t_poly(&[1, 1], 2).mul(&t_poly(&[1, -1], 2)),
            t_poly(&[1, 0, -1], 2)
        );
        let a = t_poly(&[3, 1, 4], 2);
        assert_eq!(a.mul(&TruncSeries::one(2)), a);
        // truncates to the smaller order
        assert_eq!(a.mul(&TruncSeries::one(1)).order(), 1);
    }

    #[test]
    fn geometric_inverse() {
        assert_eq!(
            t_poly(&[1, -1], 3).inverse().unwrap(),
            t_poly(&[1, 1, 1, 1], 3)
        );
        assert_eq!(TruncSeries::one(4).inverse().unwrap(), TruncSeries::one(4));
        let bad = TruncSeries::new(vec![MultiPoly::var(Var::X)], 2);
        assert_eq!(bad.inverse(), Err(Error::NonUnitConstantTerm));
        assert_eq!(
            t_poly(&[0, 1], 2).inverse(),
            Err(Error::NonUnitConstantTerm)
        );
    }

    #[test]
    fn pochhammer_coefficients() {
        let x = MultiPoly::var(Var::X);
        assert_eq!(
            pochhammer_product_series(&MultiPoly::zero(), 4).unwrap(),
            TruncSeries::one(4)
        );
        let s = pochhammer_product_series(&x, 3).unwrap();
        assert_eq!(s.coefficient(1).unwrap(), &(-&x).scale(&frac_1_minus_q()));
        let w = QRational::q_power(1).checked_div(&q_factorial(2)).unwrap();
        assert_eq!(s.coefficient(2).unwrap(), &x.pow(2).scale(&w));
        let sum = &x + &MultiPoly::var(Var::Y);
        assert!(matches!(
            pochhammer_product_series(&sum, 3),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn euler_coefficients_and_pair() {
        let y = MultiPoly::var(Var::Y);
        assert_eq!(
            euler_inv_series(&MultiPoly::zero(), 3).unwrap(),
            TruncSeries::one(3)
        );
        let e = euler_inv_series(&y, 6).unwrap();
        assert_eq!(e.coefficient(1).unwrap(), &y.scale(&frac_1_minus_q()));
        let p = pochhammer_product_series(&y, 6).unwrap();
        assert_eq!(e.mul(&p), TruncSeries::one(6));
        assert_eq!(p.inverse().unwrap(), e);
    }

    #[test]
    fn coefficient_bounds() {
        let s = t_poly(&[1, -1], 1);
        assert_eq!(s.coefficient(1).unwrap(), &MultiPoly::int(-1));
        assert_eq!(s.coefficient(0).unwrap(), &MultiPoly::int(1));
        assert_eq!(
            s.coefficient(2),
            Err(Error::OrderExceeded { index: 2, order: 1 })
        );
    }

    #[test]
    fn jhc_entries() {
        let mut unit = vec![MultiPoly::zero(); 5];
        unit[0] = MultiPoly::one();
        let b = jhc_substitute(&unit, 2, 2).unwrap();
        for i in 0..=2 {
            for j in 0..=2 {
                let expected = if i == 0 && j == 0 {
                    MultiPoly::one()
                } else {
                    MultiPoly::zero()
                };
                assert_eq!(b.coefficient(i, j).unwrap(), &expected);
            }
        }
        let seq: Vec<MultiPoly> = (0..5)
            .map(|i| MultiPoly::var(Var::scratch(i).unwrap()))
            .collect();
        let b = jhc_substitute(&seq, 2, 2).unwrap();
        let w = &frac_1_minus_q() * &frac_1_minus_q();
        assert_eq!(
            b.coefficient(1, 1).unwrap(),
            &MultiPoly::var(Var::C2).scale(&w)
        );
        assert_eq!(
            jhc_substitute(&seq, 3, 2),
            Err(Error::InsufficientTerms { got: 5, needed: 6 })
        );
    }
}
