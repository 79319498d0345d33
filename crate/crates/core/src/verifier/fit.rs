//! Bounded search for integer exponent corrections `q^e(indices)` that turn
//! a failing termwise identity into a passing one.
//!
//! Candidates are screened by evaluating every term modulo a 61-bit prime at
//! two random points; survivors are then confirmed by exact symbolic
//! comparison, so a returned fit is always exact.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{IdentitySpec, Params, Registry, Status, Termwise};
use crate::arith::{modp, QPoly, QRational};
use crate::error::{Error, Result};
use crate::multipoly::{MultiPoly, NUM_VARS};

/// Product of index variables, e.g. `1`, `r`, `r*l`, `r^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMonomial {
    factors: Vec<(String, u32)>,
}

impl IndexMonomial {
    pub fn one() -> Self {
        IndexMonomial {
            factors: Vec::new(),
        }
    }

    pub fn var(name: &str) -> Self {
        IndexMonomial {
            factors: vec![(name.to_string(), 1)],
        }
    }

    pub fn eval(&self, indices: &Params) -> Result<i64> {
        self.factors.iter().try_fold(1i64, |acc, (name, e)| {
            let v = indices.get(name).ok_or_else(|| {
                Error::InvalidArgument(format!("index `{name}` not present in term"))
            })?;
            Ok(acc * v.pow(*e))
        })
    }

    /// Parses a comma-separated list such as `1,r,l,r*l,r^2`.
    pub fn parse_list(s: &str) -> Result<Vec<IndexMonomial>> {
        s.split(',').map(|t| t.trim().parse()).collect()
    }
}

impl FromStr for IndexMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::one());
        }
        let bad = || Error::InvalidArgument(format!("bad basis monomial `{s}`"));
        let mut factors = Vec::new();
        for f in s.split('*') {
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| bad())?),
                None => (f.trim(), 1),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic()) {
                return Err(bad());
            }
            factors.push((name.to_string(), e));
        }
        Ok(IndexMonomial { factors })
    }
}

impl fmt::Display for IndexMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(n, e)| {
                if *e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Outcome of a successful search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionFit {
    pub id: String,
    pub basis: Vec<IndexMonomial>,
    pub coefficients: Vec<i64>,
    pub cells: usize,
    /// Status of every fitted cell after applying the correction.
    pub status: Status,
}

impl CorrectionFit {
    /// Human-readable exponent, e.g. `-n + 2*r`.
    pub fn exponent_text(&self) -> String {
        let parts: Vec<String> = self
            .basis
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| **c != 0)
            .map(|(b, c)| match (*c, b.factors.is_empty()) {
                (c, true) => c.to_string(),
                (1, false) => b.to_string(),
                (-1, false) => format!("-{b}"),
                (c, false) => format!("{c}*{b}"),
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

pub(super) fn exponent(basis: &[IndexMonomial], coeffs: &[i64], indices: &Params) -> Result<i64> {
    basis
        .iter()
        .zip(coeffs)
        .try_fold(0i64, |acc, (b, c)| Ok(acc + c * b.eval(indices)?))
}

const MAX_CANDIDATES: u128 = 50_000_000;

fn qpoly_mod(p: &QPoly, q0: u64) -> Option<u64> {
    p.coeffs().iter().rev().try_fold(0u64, |acc, c| {
        Some(modp::add(modp::mul(acc, q0), modp::from_rational(c)?))
    })
}

fn qrat_mod(r: &QRational, q0: u64) -> Option<u64> {
    Some(modp::mul(
        qpoly_mod(r.numer(), q0)?,
        modp::inv(qpoly_mod(r.denom(), q0)?)?,
    ))
}

struct ModPoint {
    vars: [u64; NUM_VARS],
    q0: u64,
    q0_inv: u64,
}

impl ModPoint {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        let mut vars = [0u64; NUM_VARS];
        for v in vars.iter_mut() {
            *v = rng.gen_range(2..modp::PRIME);
        }
        let q0 = rng.gen_range(2..modp::PRIME);
        ModPoint {
            vars,
            q0,
            q0_inv: modp::inv(q0).expect("nonzero"),
        }
    }

    fn eval(&self, p: &MultiPoly) -> Option<u64> {
        p.terms().try_fold(0u64, |acc, (m, c)| {
            let mut t = qrat_mod(c, self.q0)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = modp::mul(t, modp::pow(self.vars[i], e as u64));
                }
            }
            Some(modp::add(acc, t))
        })
    }

    fn q_pow(&self, e: i64) -> u64 {
        if e >= 0 {
            modp::pow(self.q0, e as u64)
        } else {
            modp::pow(self.q0_inv, e.unsigned_abs())
        }
    }
}

/// Images of one cell at one point: closed side and every term.
struct CellImage {
    lhs: u64,
    terms: Vec<u64>,
}

fn images(points: &[ModPoint], cells: &[Termwise]) -> Option<Vec<Vec<CellImage>>> {
    points
        .iter()
        .map(|pt| {
            cells
                .iter()
                .map(|c| {
                    Some(CellImage {
                        lhs: pt.eval(&c.lhs)?,
                        terms: c
                            .terms
                            .iter()
                            .map(|t| pt.eval(&t.value))
                            .collect::<Option<_>>()?,
                    })
                })
                .collect()
        })
        .collect()
}

fn screen(
    coeffs: &[i64],
    features: &[Vec<Vec<i64>>],
    points: &[ModPoint],
    imgs: &[Vec<CellImage>],
) -> bool {
    points.iter().zip(imgs).all(|(pt, cells)| {
        cells.iter().zip(features).all(|(img, feats)| {
            let sum = img.terms.iter().zip(feats).fold(0u64, |acc, (t, f)| {
                let e: i64 = f.iter().zip(coeffs).map(|(a, b)| a * b).sum();
                modp::add(acc, modp::mul(*t, pt.q_pow(e)))
            });
            sum == img.lhs
        })
    })
}

fn exact_check(coeffs: &[i64], features: &[Vec<Vec<i64>>], cells: &[Termwise]) -> bool {
    cells.iter().zip(features).all(|(c, feats)| {
        let rhs = c
            .terms
            .iter()
            .zip(feats)
            .fold(MultiPoly::zero(), |acc, (t, f)| {
                let e: i64 = f.iter().zip(coeffs).map(|(a, b)| a * b).sum();
                &acc + &t.value.scale(&QRational::q_power(e))
            });
        rhs == c.lhs
    })
}

/// Searches `range^basis.len()` for the correction that makes `spec` hold on
/// every cell. The zero vector is tried first; otherwise the
/// lexicographically least passing vector is returned.
pub fn fit_exponent_correction(
    spec: &IdentitySpec,
    basis: &[IndexMonomial],
    range: RangeInclusive<i64>,
    cells: &[Params],
) -> Result<Option<CorrectionFit>> {
    if !spec.is_termwise() {
        return Err(Error::UnsupportedIdentity(spec.id.clone()));
    }
    if range.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient range".into()));
    }
    let width = (range.end() - range.start() + 1) as u128;
    if width
        .checked_pow(basis.len() as u32)
        .is_none_or(|n| n > MAX_CANDIDATES)
    {
        return Err(Error::InvalidArgument("search space too large".into()));
    }

    let expanded: Vec<Termwise> = cells
        .par_iter()
        .map(|p| spec.termwise(p))
        .collect::<Result<_>>()?;
    let features: Vec<Vec<Vec<i64>>> = expanded
        .iter()
        .map(|c| {
            c.terms
                .iter()
                .map(|t| {
                    basis
                        .iter()
                        .map(|b| b.eval(&t.indices))
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x0f17);
    let (points, imgs) = loop {
        let points: Vec<ModPoint> = (0..2).map(|_| ModPoint::random(&mut rng)).collect();
        if let Some(imgs) = images(&points, &expanded) {
            break (points, imgs);
        }
    };

    let found = |coeffs: &[i64]| {
        screen(coeffs, &features, &points, &imgs) && exact_check(coeffs, &features, &expanded)
    };
    let fit = |coefficients: Vec<i64>| CorrectionFit {
        id: spec.id.clone(),
        basis: basis.to_vec(),
        coefficients,
        cells: cells.len(),
        status: Status::Pass,
    };

    let zero = vec![0i64; basis.len()];
    if found(&zero) {
        return Ok(Some(fit(zero)));
    }
    let mut current = vec![*range.start(); basis.len()];
    loop {
        if current != zero && found(&current) {
            return Ok(Some(fit(current)));
        }
        // odometer, last coordinate fastest
        let mut i = basis.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if current[i] < *range.end() {
                current[i] += 1;
                break;
            }
            current[i] = *range.start();
        }
    }
}

impl Registry {
    /// [`fit_exponent_correction`] for a registered identity.
    pub fn fit_exponent_correction(
        &self,
        id: &str,
        basis: &[IndexMonomial],
        range: RangeInclusive<i64>,
        cells: &[Params],
    ) -> Result<Option<CorrectionFit>> {
        fit_exponent_correction(self.get(id)?, basis, range, cells)
    }
}
