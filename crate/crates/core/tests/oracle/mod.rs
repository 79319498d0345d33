//! Independent brute-force oracle for the connection formulae.
//!
//! Everything here works on plain `BigRational` scalars at random rational
//! points and is built from the defining products and sums only. Nothing
//! from the library's polynomial or series types is used, so agreement with
//! the verifier is a genuine cross-check. A cell passes when both sides agree
//! at every sample point.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type R = BigRational;

pub fn int(n: i64) -> R {
    R::from_integer(BigInt::from(n))
}

pub fn qpow(q: &R, e: i64) -> R {
    let mut acc = R::one();
    for _ in 0..e.unsigned_abs() {
        acc *= q;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn c2(n: i64) -> i64 {
    n * (n - 1) / 2
}

pub fn sign(n: i64) -> R {
    if n.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// `(q;q)_n`
pub fn qfact(n: i64, q: &R) -> R {
    (1..=n).fold(R::one(), |acc, k| acc * (R::one() - qpow(q, k)))
}

pub fn qbinom(n: i64, k: i64, q: &R) -> R {
    qfact(n, q) / (qfact(k, q) * qfact(n - k, q))
}

/// `(x - y)(x - qy)...(x - q^{n-1} y)`
pub fn cauchy(n: i64, x: &R, y: &R, q: &R) -> R {
    (0..n).fold(R::one(), |acc, k| acc * (x - qpow(q, k) * y))
}

/// Trivariate polynomial from its defining finite sum.
pub fn f(n: i64, x: &R, y: &R, z: &R, q: &R) -> R {
    let mut s = R::zero();
    for k in 0..=n {
        s += qbinom(n, k, q) * sign(k) * qpow(q, c2(k)) * cauchy(n - k, y, x, q) * qpow(z, k);
    }
    sign(n) * qpow(q, -c2(n)) * s
}

/// Coefficient `G(m)` of `s^m/(q;q)_m` in
/// `(alpha s)_inf (beta s)_inf / ((gamma s)_inf (delta s)_inf)`, obtained by
/// splitting the ratio into two Cauchy generating functions.
pub fn kernel(m: i64, alpha: &R, beta: &R, gamma: &R, delta: &R, q: &R) -> R {
    (0..=m)
        .map(|a| qbinom(m, a, q) * cauchy(a, gamma, alpha, q) * cauchy(m - a, delta, beta, q))
        .sum()
}

pub fn psi(n: i64, a: &R, x: &R, y: &R, q: &R) -> R {
    f(n, x, &(a * x), y, q)
}

/// One random sample point for every symbol plus `q`.
#[derive(Clone, Debug)]
pub struct Point {
    pub x: R,
    pub y: R,
    pub z: R,
    pub xi: R,
    pub zeta: R,
    pub big_x: R,
    pub big_y: R,
    pub big_z: R,
    pub omega: R,
    pub u: R,
    pub a: R,
    pub q: R,
}

fn random_rat(rng: &mut ChaCha8Rng) -> R {
    loop {
        let n: i64 = rng.gen_range(-29..=29);
        let d: i64 = rng.gen_range(1..=23);
        if n != 0 {
            return R::new(BigInt::from(n), BigInt::from(d));
        }
    }
}

pub fn sample_points(seed: u64, count: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut q = random_rat(&mut rng);
            while q == int(1) || q == int(-1) {
                q = random_rat(&mut rng);
            }
            Point {
                x: random_rat(&mut rng),
                y: random_rat(&mut rng),
                z: random_rat(&mut rng),
                xi: random_rat(&mut rng),
                zeta: random_rat(&mut rng),
                big_x: random_rat(&mut rng),
                big_y: random_rat(&mut rng),
                big_z: random_rat(&mut rng),
                omega: random_rat(&mut rng),
                u: random_rat(&mut rng),
                a: random_rat(&mut rng),
                q,
            }
        })
        .collect()
}

/// Both sides of one identity cell at one point.
pub fn sides(id: &str, p1: i64, p2: i64, pt: &Point) -> (R, R) {
    let q = &pt.q;
    match id {
        // F_{k+l}(x, xi, zeta) double sum
        "thm3.1-general" => {
            let (k, l) = (p1, p2);
            let lhs = f(k + l, &pt.x, &pt.xi, &pt.zeta, q);
            let mut rhs = R::zero();
            for n in 0..=k {
                for r in 0..=l {
                    let e = -c2(n + 1) - r * (n + l + 1) - (k + l) * (n + r);
                    rhs += qbinom(k, n, q)
                        * qbinom(l, r, q)
                        * sign(n + r)
                        * qpow(q, e)
                        * kernel(n + r, &pt.y, &pt.zeta, &pt.xi, &pt.z, q)
                        * f(k + l - n - r, &pt.x, &pt.y, &pt.z, q);
                }
            }
            (lhs, rhs)
        }
        "thm3.1-l" => {
            let l = p1;
            let lhs = f(l, &pt.x, &pt.xi, &pt.zeta, q);
            let rhs = (0..=l)
                .map(|r| {
                    qbinom(l, r, q)
                        * sign(r)
                        * qpow(q, -r * (2 * l + 1))
                        * kernel(r, &pt.y, &pt.zeta, &pt.xi, &pt.z, q)
                        * f(l - r, &pt.x, &pt.y, &pt.z, q)
                })
                .sum();
            (lhs, rhs)
        }
        "cor3.2" => {
            let (k, l) = (p1, p2);
            let lhs = f(k + l, &pt.x, &pt.xi, &pt.z, q);
            let mut rhs = R::zero();
            for n in 0..=k {
                for r in 0..=l {
                    let e = -c2(n + 1) - r * (n + l + 1) - (k + l) * (n + r);
                    rhs += qbinom(k, n, q)
                        * qbinom(l, r, q)
                        * sign(n + r)
                        * qpow(q, e)
                        * cauchy(n + r, &pt.xi, &pt.y, q)
                        * f(k + l - n - r, &pt.x, &pt.y, &pt.z, q);
                }
            }
            (lhs, rhs)
        }
        "cor3.2-l" => {
            let l = p1;
            let lhs = f(l, &pt.x, &pt.xi, &pt.z, q);
            let rhs = (0..=l)
                .map(|r| {
                    qbinom(l, r, q)
                        * sign(r)
                        * qpow(q, -r * (2 * l + 1))
                        * cauchy(r, &pt.xi, &pt.y, q)
                        * f(l - r, &pt.x, &pt.y, &pt.z, q)
                })
                .sum();
            (lhs, rhs)
        }
        "thm4" => {
            let (n, r) = (p1, p2);
            let lhs = f(n, &pt.x, &pt.xi, &pt.zeta, q) * f(r, &pt.big_x, &pt.omega, &pt.u, q);
            let mut rhs = R::zero();
            for k in 0..=n {
                for m in 0..=r {
                    let e = c2(k + 1) + c2(m + 1) - m * r - n * k;
                    rhs += qbinom(n, k, q)
                        * qbinom(r, m, q)
                        * sign(k + m)
                        * qpow(q, e)
                        * kernel(k, &pt.zeta, &pt.y, &pt.xi, &pt.z, q)
                        * f(n - k, &pt.x, &pt.y, &pt.z, q)
                        * kernel(m, &pt.u, &pt.big_y, &pt.omega, &pt.big_z, q)
                        * f(r - m, &pt.big_x, &pt.big_y, &pt.big_z, q);
                }
            }
            (lhs, rhs)
        }
        "cor-psi" => {
            let (k, l) = (p1, p2);
            let lhs = psi(k + l, &pt.a, &pt.x, &pt.xi, q);
            let mut rhs = R::zero();
            for n in 0..=k {
                for r in 0..=l {
                    let e = c2(n + r) - c2(n + 1) - r * (n + l + 1) - (k + l) * (n + r);
                    rhs += qbinom(k, n, q)
                        * qbinom(l, r, q)
                        * qpow(q, e)
                        * cauchy(n + r, &pt.xi, &pt.y, q)
                        * psi(k + l - n - r, &pt.a, &pt.x, &pt.y, q);
                }
            }
            (lhs, rhs)
        }
        "cor-psi-l" => {
            let l = p1;
            let lhs = psi(l, &pt.a, &pt.x, &pt.xi, q);
            let rhs = (0..=l)
                .map(|r| {
                    qbinom(l, r, q)
                        * qpow(q, c2(r) - r * (2 * l + 1))
                        * cauchy(r, &pt.xi, &pt.y, q)
                        * psi(l - r, &pt.a, &pt.x, &pt.y, q)
                })
                .sum();
            (lhs, rhs)
        }
        "qdiff-thm1" | "qdiff-thm2" => {
            let n = p1;
            let (x, y, z) = (&pt.x, &pt.y, &pt.z);
            let qx_inv = x / q;
            let fv = |a: &R, b: &R, c: &R| f(n, a, b, c, q);
            let lhs = (&qx_inv - y) * (fv(x, y, z) - fv(x, y, &(q * z)));
            let last = fv(x, &(q * y), &(q * z));
            let last = if id == "qdiff-thm1" { z * last } else { last };
            let rhs = z * (fv(&qx_inv, y, &(q * z)) - last);
            (lhs, rhs)
        }
        other => panic!("oracle has no identity {other}"),
    }
}

pub fn status(id: &str, p1: i64, p2: i64, points: &[Point]) -> &'static str {
    if points.iter().all(|pt| {
        let (l, r) = sides(id, p1, p2, pt);
        l == r
    }) {
        "pass"
    } else {
        "fail"
    }
}

/// Grid description: id, parameter names, inclusive upper bounds.
pub type Grid = &'static [(&'static str, &'static [(&'static str, i64)])];

pub const THEOREM_GRID: Grid = &[
    ("cor-psi", &[("k", 3), ("l", 3)]),
    ("cor3.2", &[("k", 3), ("l", 3)]),
    ("thm3.1-general", &[("k", 3), ("l", 3)]),
    ("thm3.1-l", &[("l", 4)]),
    ("thm4", &[("n", 3), ("r", 3)]),
];

pub const EXTENDED_GRID: Grid = &[
    ("cor-psi-l", &[("l", 4)]),
    ("cor3.2-l", &[("l", 4)]),
    ("qdiff-thm1", &[("n", 8)]),
    ("qdiff-thm2", &[("n", 8)]),
];

/// Status table in the verifier's line format, `id name=value ... status`.
pub fn status_table(grid: Grid, points: &[Point]) -> String {
    let mut out = String::new();
    for (id, params) in grid {
        let cells: Vec<(i64, i64)> = match params.len() {
            1 => (0..=params[0].1).map(|a| (a, 0)).collect(),
            _ => (0..=params[0].1)
                .flat_map(|a| (0..=params[1].1).map(move |b| (a, b)))
                .collect(),
        };
        for (a, b) in cells {
            let mut line = format!("{id} {}={a}", params[0].0);
            if params.len() == 2 {
                line.push_str(&format!(" {}={b}", params[1].0));
            }
            line.push(' ');
            line.push_str(status(id, a, b, points));
            line.push('\n');
            out.push_str(&line);
        }
    }
    out
}
