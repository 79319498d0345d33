//! q-calculus primitives: shifted factorials, Gaussian binomials, Cauchy
//! polynomials, the Jackson-Hahn-Cigler q-addition, the two q-exponentials,
//! truncated basic hypergeometric series and the generalized Cauchy kernel.
//!
//! Conventions: `e_q(w) = 1/(w;q)_inf` and `E_q(w) = (-w;q)_inf`, which are
//! the only choices compatible with the product form of the trivariate
//! generating function.

use crate::arith::{binom2, rat, QPoly, QRational};
use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::series::{euler_inv_series, pochhammer_product_series, q_factorial, TruncSeries};

/// `(a;q)_n = prod_{k<n} (1 - a q^k)`.
pub fn qpochhammer(a: &MultiPoly, n: usize) -> MultiPoly {
    (0..n).fold(MultiPoly::one(), |acc, k| {
        &acc * &(&MultiPoly::one() - &(a * &MultiPoly::q_power(k as i64)))
    })
}

/// Gaussian binomial `[n, k]_q`, computed as the reduced ratio
/// `(q;q)_n / ((q;q)_k (q;q)_{n-k})`.
pub fn qbinom(n: i64, k: i64) -> Result<QRational> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::InvalidArgument(format!("qbinom({n}, {k})")));
    }
    let (n, k) = (n as usize, k as usize);
    let k = k.min(n - k);
    // prod_{i=1..k} (1 - q^{n-k+i}) / (1 - q^i)
    let mut num = QPoly::one();
    let mut den = QPoly::one();
    for i in 1..=k {
        num = &num * &one_minus_q_pow(n - k + i);
        den = &den * &one_minus_q_pow(i);
    }
    Ok(QRational::from_poly(num.exact_div(&den)))
}

fn one_minus_q_pow(e: usize) -> QPoly {
    let mut c = vec![0i64; e + 1];
    c[0] = 1;
    c[e] -= 1;
    QPoly::from_ints(&c)
}

/// Cauchy polynomial `P_n(x, y) = (x - y)(x - qy)...(x - q^{n-1} y)`.
pub fn cauchy_p(n: usize, x: &MultiPoly, y: &MultiPoly) -> MultiPoly {
    (0..n).fold(MultiPoly::one(), |acc, k| {
        &acc * &(x - &(y * &MultiPoly::q_power(k as i64)))
    })
}

/// Coefficients `[n, k]_q q^binom(k,2)` of `x^{n-k} y^k` in `(x (+)_q y)^n`.
pub fn q_add_coeffs(n: usize) -> Vec<QRational> {
    (0..=n)
        .map(|k| {
            let b = qbinom(n as i64, k as i64).expect("0 <= k <= n");
            &b * &QRational::q_power(binom2(k as i64))
        })
        .collect()
}

/// The JHC power `(x (+)_q y)^n = sum_k [n,k]_q q^binom(k,2) x^{n-k} y^k`.
pub fn q_add_pow(n: usize, x: &MultiPoly, y: &MultiPoly) -> MultiPoly {
    q_add_coeffs(n)
        .iter()
        .enumerate()
        .fold(MultiPoly::zero(), |acc, (k, c)| {
            &acc + &(&x.pow((n - k) as u32) * &y.pow(k as u32)).scale(c)
        })
}

/// `e_q(c t) = 1/(c t; q)_inf` through `t^N`.
pub fn e_q_series(c: &MultiPoly, order: usize) -> Result<TruncSeries> {
    euler_inv_series(c, order)
}

/// `E_q(c t) = (-c t; q)_inf` through `t^N`.
pub fn big_e_q_series(c: &MultiPoly, order: usize) -> Result<TruncSeries> {
    pochhammer_product_series(&-c, order)
}

/// Partial sum through `n = N` of `r phi s [upper; lower; q, z]`, returned as
/// a series whose `n`-th coefficient is the `n`-th summand.
///
/// Each summand carries `[(-1)^n q^binom(n,2)]^(1+s-r)`. Lower parameters must
/// be scalars, since the summand divides by `(b;q)_n`.
pub fn phi_series(
    upper: &[MultiPoly],
    lower: &[MultiPoly],
    z: &MultiPoly,
    order: usize,
) -> Result<TruncSeries> {
    if !z.is_monomial_or_zero() {
        return Err(Error::InvalidArgument(format!(
            "phi argument {z} is not a single term"
        )));
    }
    let lower: Vec<QRational> = lower
        .iter()
        .map(|b| {
            b.as_scalar().ok_or_else(|| {
                Error::InvalidArgument(format!("lower parameter {b} must not involve variables"))
            })
        })
        .collect::<Result<_>>()?;
    let excess = 1 + lower.len() as i64 - upper.len() as i64;

    let mut upper_poch = MultiPoly::one();
    let mut lower_poch = QRational::one();
    let mut z_pow = MultiPoly::one();
    let mut out = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let sign = if (n as i64 * excess) % 2 == 0 { 1 } else { -1 };
        let correction = QRational::q_power(binom2(n as i64) * excess).scale_rational(&rat(sign));
        let w = (&correction * &q_factorial(n).recip()?).checked_div(&lower_poch)?;
        out.push((&upper_poch * &z_pow).scale(&w));

        for a in upper {
            upper_poch = &upper_poch * &(&MultiPoly::one() - &(a * &MultiPoly::q_power(n as i64)));
        }
        for b in &lower {
            let factor = &QRational::one() - &(b * &QRational::q_power(n as i64));
            if factor.is_zero() && n < order {
                return Err(Error::DenominatorDegeneracy(format!(
                    "(1 - ({b}) q^{n}) vanishes"
                )));
            }
            lower_poch = &lower_poch * &factor;
        }
        z_pow = &z_pow * z;
    }
    Ok(TruncSeries::new(out, order))
}

/// Generalized Cauchy kernel: `G(m)` in
/// `sum_m G(m) s^m/(q;q)_m = (alpha s)_inf (beta s)_inf / ((gamma s)_inf (delta s)_inf)`.
///
/// With `(alpha, beta, gamma, delta) = (y, zeta, xi, z)` this is the kernel
/// written `P_m(xi (-)_q y, zeta (-)_q z)`.
pub fn ratio_coeff(
    m: usize,
    alpha: &MultiPoly,
    beta: &MultiPoly,
    gamma: &MultiPoly,
    delta: &MultiPoly,
) -> Result<MultiPoly> {
    let s = pochhammer_product_series(alpha, m)?
        .mul(&pochhammer_product_series(beta, m)?)
        .mul(&euler_inv_series(gamma, m)?)
        .mul(&euler_inv_series(delta, m)?);
    Ok(s.coefficient(m)?.scale(&q_factorial(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::Var;

    fn v(x: Var) -> MultiPoly {
        MultiPoly::var(x)
    }

    fn qpoly(c: &[i64]) -> QRational {
        QRational::from_poly(QPoly::from_ints(c))
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(qpochhammer(&v(Var::A), 0), MultiPoly::one());
        let q = MultiPoly::q_power(1);
        let expected = MultiPoly::constant(&qpoly(&[1, -1]) * &qpoly(&[1, 0, -1]));
        assert_eq!(qpochhammer(&q, 2), expected);
        assert_eq!(qpochhammer(&MultiPoly::zero(), 5), MultiPoly::one());
        assert_eq!(qpochhammer(&v(Var::A), 3).total_degree(), Some(3));
    }

    #[test]
    fn qbinom_examples() {
        assert!(qbinom(7, 0).unwrap().is_one());
        assert_eq!(qbinom(2, 1).unwrap(), qpoly(&[1, 1]));
        assert_eq!(qbinom(4, 2).unwrap(), qpoly(&[1, 1, 2, 1, 1]));
        assert!(matches!(qbinom(2, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(qbinom(-1, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn cauchy_examples() {
        let (x, y) = (v(Var::X), v(Var::Y));
        assert_eq!(cauchy_p(0, &x, &y), MultiPoly::one());
        assert_eq!(cauchy_p(2, &x, &y).to_string(), "x^2 - (1 + q)*x*y + q*y^2");
        assert_eq!(cauchy_p(4, &x, &MultiPoly::zero()), x.pow(4));
    }

    #[test]
    fn q_addition_examples() {
        let (x, y) = (v(Var::X), v(Var::Y));
        assert_eq!(q_add_pow(1, &x, &y), &x + &y);
        assert_eq!(
            q_add_pow(2, &x, &y).to_string(),
            "x^2 + (1 + q)*x*y + q*y^2"
        );
        for n in 0..=6 {
            assert_eq!(q_add_pow(n, &x, &y), cauchy_p(n, &x, &-&y));
        }
    }

    #[test]
    fn exponential_pair_and_first_coefficient() {
        let c = v(Var::Z);
        assert_eq!(
            e_q_series(&MultiPoly::zero(), 5).unwrap(),
            TruncSeries::one(5)
        );
        let prod = e_q_series(&c, 8)
            .unwrap()
            .mul(&big_e_q_series(&-&c, 8).unwrap());
        assert_eq!(prod, TruncSeries::one(8));
        // E_q(-c t) = (c t; q)_inf, so its t coefficient is -c/(1-q)
        let inv = q_factorial(1).recip().unwrap();
        assert_eq!(
            big_e_q_series(&-&c, 3).unwrap().coefficient(1).unwrap(),
            &(-&c).scale(&inv)
        );
        assert_eq!(
            big_e_q_series(&c, 3).unwrap().coefficient(1).unwrap(),
            &c.scale(&inv)
        );
    }

    #[test]
    fn phi_reductions() {
        let z = v(Var::Z);
        // 0 phi 0 is E_q(-z t) in the slot
        let p = phi_series(&[], &[], &z, 6).unwrap();
        assert_eq!(p, pochhammer_product_series(&z, 6).unwrap());
        // upper 0 gives the Euler series
        let p = phi_series(&[MultiPoly::zero()], &[], &z, 6).unwrap();
        assert_eq!(p, euler_inv_series(&z, 6).unwrap());
    }

    #[test]
    fn phi_q_binomial_theorem() {
        let (a, z) = (v(Var::A), v(Var::Z));
        let lhs = phi_series(std::slice::from_ref(&a), &[], &z, 8).unwrap();
        let rhs = pochhammer_product_series(&(&a * &z), 8)
            .unwrap()
            .mul(&euler_inv_series(&z, 8).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_rejects_degenerate_lower() {
        let z = v(Var::Z);
        let b = MultiPoly::q_power(-2);
        assert!(matches!(
            phi_series(&[v(Var::A)], std::slice::from_ref(&b), &z, 5),
            Err(Error::DenominatorDegeneracy(_))
        ));
        // (q^-2; q)_n only vanishes from n = 3 on
        assert!(phi_series(&[v(Var::A)], &[b], &z, 2).is_ok());
        assert!(matches!(
            phi_series(&[], &[v(Var::A)], &z, 2),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn kernel_examples() {
        let (y, zeta, xi, z) = (v(Var::Y), v(Var::Zeta), v(Var::Xi), v(Var::Z));
        assert_eq!(
            ratio_coeff(0, &y, &zeta, &xi, &z).unwrap(),
            MultiPoly::one()
        );
        let first = &(&(&xi + &z) - &y) - &zeta;
        assert_eq!(ratio_coeff(1, &y, &zeta, &xi, &z).unwrap(), first);
        for m in 0..=5 {
            assert_eq!(
                ratio_coeff(m, &y, &z, &xi, &z).unwrap(),
                cauchy_p(m, &xi, &y)
            );
        }
    }
}
