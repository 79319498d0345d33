//! Trivariate q-polynomials `F_n(x, y, z; q)`, the second Hahn polynomials
//! and the q-difference residuals they are tested against.

use crate::arith::{binom2, rat, QRational};
use crate::error::{Error, Result};
use crate::multipoly::{MultiPoly, Var};
use crate::qcore::{cauchy_p, qbinom};
use crate::series::{euler_inv_series, pochhammer_product_series, q_factorial, TruncSeries};

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `F_n = (-1)^n q^-binom(n,2) sum_k [n,k]_q (-1)^k q^binom(k,2) P_{n-k}(y, x) z^k`.
pub fn f_poly(n: usize, x: &MultiPoly, y: &MultiPoly, z: &MultiPoly) -> MultiPoly {
    let mut sum = MultiPoly::zero();
    let mut z_pow = MultiPoly::one();
    for k in 0..=n {
        let w = (&qbinom(n as i64, k as i64).expect("k <= n")
            * &QRational::q_power(binom2(k as i64)))
            .scale_rational(&rat(sign(k)));
        sum = &sum + &(&cauchy_p(n - k, y, x) * &z_pow).scale(&w);
        z_pow = &z_pow * z;
    }
    let outer = QRational::q_power(-binom2(n as i64)).scale_rational(&rat(sign(n)));
    sum.scale(&outer)
}

/// `F_n` on the default slots `(x, y, z)`.
pub fn f_poly_xyz(n: usize) -> MultiPoly {
    f_poly(n, &Var::X.into(), &Var::Y.into(), &Var::Z.into())
}

/// `(xt;q)_inf (zt;q)_inf / (yt;q)_inf` through `t^N`. The slots must be
/// single terms.
pub fn f_gf(order: usize, x: &MultiPoly, y: &MultiPoly, z: &MultiPoly) -> Result<TruncSeries> {
    Ok(pochhammer_product_series(x, order)?
        .mul(&pochhammer_product_series(z, order)?)
        .mul(&euler_inv_series(y, order)?))
}

/// Weight `(-1)^k q^binom(k,2) / (q;q)_k` that ties `F_k` to the `t^k`
/// coefficient of [`f_gf`].
pub fn f_gf_weight(k: usize) -> QRational {
    (&QRational::q_power(binom2(k as i64)) * &q_factorial(k).recip().expect("nonzero"))
        .scale_rational(&rat(sign(k)))
}

/// Second Hahn polynomial `psi_n^(a)(x, y | q) := F_n(x, a x, y; q)`.
pub fn psi_poly(n: usize, a: &MultiPoly, x: &MultiPoly, y: &MultiPoly) -> MultiPoly {
    f_poly(n, x, &(a * x), y)
}

/// Which variant of the q-difference equation to evaluate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QDiffVariant {
    /// Carries the extra factor `z` on its last term.
    Theorem1,
    Theorem2,
}

/// Residual of the q-difference equation
/// `(x/q - y)[f - f(x,y,qz)] = z[f(x/q,y,qz) - f(x,qy,qz)]` (LHS minus RHS);
/// the `Theorem1` variant multiplies the last term by another `z`.
pub fn qdiff_residual(f: &MultiPoly, variant: QDiffVariant) -> Result<MultiPoly> {
    if let Some(v) = f
        .variables()
        .into_iter()
        .find(|v| !matches!(v, Var::X | Var::Y | Var::Z))
    {
        return Err(Error::InvalidArgument(format!(
            "q-difference residual expects x, y, z only, found {v}"
        )));
    }
    let x = MultiPoly::var(Var::X);
    let y = MultiPoly::var(Var::Y);
    let z = MultiPoly::var(Var::Z);
    let qz = (Var::Z, &MultiPoly::q_power(1) * &z);
    let f_qz = f.scale_substitute(std::slice::from_ref(&qz))?;
    let f_x_qz = f.scale_substitute(&[(Var::X, &MultiPoly::q_power(-1) * &x), qz.clone()])?;
    let f_y_qz = f.scale_substitute(&[(Var::Y, &MultiPoly::q_power(1) * &y), qz])?;

    let lhs = &(&(&MultiPoly::q_power(-1) * &x) - &y) * &(f - &f_qz);
    let last = match variant {
        QDiffVariant::Theorem1 => &z * &f_y_qz,
        QDiffVariant::Theorem2 => f_y_qz,
    };
    let rhs = &z * &(&f_x_qz - &last);
    Ok(&lhs - &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> MultiPoly {
        MultiPoly::var(x)
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(f_poly_xyz(0), MultiPoly::one());
        let f1 = &(&v(Var::X) - &v(Var::Y)) + &v(Var::Z);
        assert_eq!(f_poly_xyz(1), f1);
    }

    #[test]
    fn z_zero_collapse() {
        let (x, y) = (v(Var::X), v(Var::Y));
        for n in 0..=6 {
            let w = QRational::q_power(-binom2(n as i64)).scale_rational(&rat(sign(n)));
            assert_eq!(
                f_poly(n, &x, &y, &MultiPoly::zero()),
                cauchy_p(n, &y, &x).scale(&w)
            );
        }
    }

    #[test]
    fn generating_function_low_order() {
        let (x, y, z) = (v(Var::X), v(Var::Y), v(Var::Z));
        let gf = f_gf(3, &x, &y, &z).unwrap();
        assert_eq!(gf.coefficient(0).unwrap(), &MultiPoly::one());
        let inv = q_factorial(1).recip().unwrap();
        let expected = (&(&y - &x) - &z).scale(&inv);
        assert_eq!(gf.coefficient(1).unwrap(), &expected);
    }

    #[test]
    fn psi_values() {
        let (a, x, y) = (v(Var::A), v(Var::X), v(Var::Y));
        assert_eq!(psi_poly(0, &a, &x, &y), MultiPoly::one());
        let expected = &(&x - &(&a * &x)) + &y;
        assert_eq!(psi_poly(1, &a, &x, &y), expected);
        for n in 0..=4 {
            let w = QRational::q_power(-binom2(n as i64)).scale_rational(&rat(sign(n)));
            assert_eq!(
                psi_poly(n, &a, &x, &MultiPoly::zero()),
                cauchy_p(n, &(&a * &x), &x).scale(&w)
            );
        }
    }

    #[test]
    fn residual_examples() {
        let one = MultiPoly::one();
        assert!(qdiff_residual(&one, QDiffVariant::Theorem2)
            .unwrap()
            .is_zero());
        // the Theorem1 form leaves -z + z^2 for a constant
        let z = v(Var::Z);
        assert_eq!(
            qdiff_residual(&one, QDiffVariant::Theorem1).unwrap(),
            &z.pow(2) - &z
        );

        assert!(qdiff_residual(&f_poly_xyz(1), QDiffVariant::Theorem2)
            .unwrap()
            .is_zero());

        let x = v(Var::X);
        let y = v(Var::Y);
        let expected = &(&(&MultiPoly::q_power(-1) * &x) - &y)
            * &(&z * &MultiPoly::constant(QRational::from_int(1) - QRational::q_power(1)));
        assert_eq!(
            qdiff_residual(&z, QDiffVariant::Theorem2).unwrap(),
            expected
        );

        assert!(matches!(
            qdiff_residual(&v(Var::A), QDiffVariant::Theorem2),
            Err(Error::InvalidArgument(_))
        ));
    }
}
