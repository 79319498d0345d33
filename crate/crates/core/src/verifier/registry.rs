use std::collections::BTreeMap;

use super::{Grid, IdentitySpec, Layout, ParamSpec, Params, Sides, Term, Termwise};
use crate::arith::{binom2, QRational};
use crate::error::{Error, Result};
use crate::multipoly::{MultiPoly, Var};
use crate::qcore::{
    big_e_q_series, cauchy_p, e_q_series, phi_series, q_add_pow, qbinom, ratio_coeff,
};
use crate::series::{
    euler_inv_series, jhc_substitute, pochhammer_product_series, q_factorial, TruncSeries,
};
use crate::trivariate::{f_gf, f_gf_weight, f_poly, psi_poly, qdiff_residual, QDiffVariant};

pub const DEFAULT_MAX_ORDER: i64 = 16;

type Put<'a> = dyn FnMut(&str, &[(&str, std::ops::RangeInclusive<i64>)]) + 'a;

/// Immutable set of identities, keyed by id.
pub struct Registry {
    specs: BTreeMap<String, IdentitySpec>,
    max_order: i64,
}

fn v(x: Var) -> MultiPoly {
    MultiPoly::var(x)
}

fn param(
    name: &'static str,
    bounds: std::ops::RangeInclusive<i64>,
    default: std::ops::RangeInclusive<i64>,
) -> ParamSpec {
    ParamSpec {
        name,
        bounds,
        default,
    }
}

fn get(p: &Params, name: &str) -> usize {
    p[name] as usize
}

fn signed(k: usize) -> QRational {
    if k.is_multiple_of(2) {
        QRational::one()
    } else {
        QRational::from_int(-1)
    }
}

fn qb(n: usize, k: usize) -> QRational {
    qbinom(n as i64, k as i64).expect("0 <= k <= n")
}

fn series_sides(lhs: TruncSeries, rhs: TruncSeries) -> Sides {
    Sides {
        lhs: lhs.into_coeffs(),
        rhs: rhs.into_coeffs(),
        layout: Layout::Series,
    }
}

fn indices(items: &[(&str, usize)]) -> Params {
    items
        .iter()
        .map(|(k, v)| (k.to_string(), *v as i64))
        .collect()
}

/// Kernel `P_m(xi (-)_q y, zeta (-)_q z)` for `m = 0..=max`.
fn kernels(
    max: usize,
    a: &MultiPoly,
    b: &MultiPoly,
    c: &MultiPoly,
    d: &MultiPoly,
) -> Result<Vec<MultiPoly>> {
    (0..=max).map(|m| ratio_coeff(m, a, b, c, d)).collect()
}

/// The test sequences for the JHC expansion.
fn jhc_sequence(kind: usize, len: usize) -> Result<Vec<MultiPoly>> {
    let (x, y) = (v(Var::X), v(Var::Y));
    Ok((0..len)
        .map(|j| match kind {
            0 => MultiPoly::one(),
            1 => MultiPoly::q_power(j as i64),
            2 => cauchy_p(j, &x, &y),
            _ => {
                let c = v(Var::scratch(j % 10).expect("index below 10"));
                &c * &v(Var::A).pow((j / 10) as u32)
            }
        })
        .collect())
}

/// Splits a polynomial in the stand-ins `X`, `Y` into its `X^i Y^s` parts.
fn split_xy(p: &MultiPoly, m: usize, n: usize) -> Vec<MultiPoly> {
    let mut parts = vec![vec![Vec::new(); n + 1]; m + 1];
    for (mono, c) in p.terms() {
        let i = mono.exponent(Var::BigX) as usize;
        let s = mono.exponent(Var::BigY) as usize;
        if i <= m && s <= n {
            let rest = mono.without(Var::BigX).without(Var::BigY);
            parts[i][s].push((rest, c.clone()));
        }
    }
    parts
        .into_iter()
        .flatten()
        .map(MultiPoly::from_terms)
        .collect()
}

impl Registry {
    pub fn new() -> Self {
        Self::with_max_order(DEFAULT_MAX_ORDER)
    }

    /// Registry whose series orders are capped at `max_order`.
    pub fn with_max_order(max_order: i64) -> Self {
        let mut r = Registry {
            specs: BTreeMap::new(),
            max_order,
        };
        r.register_foundational();
        r.register_connection();
        r.register_qdiff();
        r
    }

    pub fn max_order(&self) -> i64 {
        self.max_order
    }

    fn add(&mut self, spec: IdentitySpec) {
        let prev = self.specs.insert(spec.id.clone(), spec);
        assert!(prev.is_none(), "duplicate identity id");
    }

    pub fn get(&self, id: &str) -> Result<&IdentitySpec> {
        self.specs
            .get(id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.specs.keys().map(String::as_str)
    }

    pub fn specs(&self) -> impl Iterator<Item = &IdentitySpec> {
        self.specs.values()
    }

    fn order_param(&self, name: &'static str, default: i64) -> ParamSpec {
        let d = default.min(self.max_order);
        param(name, 0..=self.max_order, d..=d)
    }

    fn register_foundational(&mut self) {
        self.add(IdentitySpec::with_terms(
            "eq2.7",
            "P_n(x, -y) = sum_k [n,k]_q q^binom(k,2) x^(n-k) y^k, the JHC power (x (+)_q y)^n",
            vec![param("n", 0..=40, 0..=12)],
            |p| {
                let n = get(p, "n");
                let (x, y) = (v(Var::X), v(Var::Y));
                let terms = (0..=n)
                    .map(|k| Term {
                        indices: indices(&[("n", n), ("k", k)]),
                        value: (&x.pow((n - k) as u32) * &y.pow(k as u32))
                            .scale(&(&qb(n, k) * &QRational::q_power(binom2(k as i64)))),
                    })
                    .collect();
                Ok(Termwise {
                    lhs: cauchy_p(n, &x, &-&y),
                    terms,
                })
            },
        ));

        self.add(IdentitySpec::with_sides(
            "eq2.12",
            "e_q(x t) E_q(-x t) = 1",
            vec![self.order_param("N", 16)],
            |p| {
                let n = get(p, "N");
                let x = v(Var::X);
                let lhs = e_q_series(&x, n)?.mul(&big_e_q_series(&-&x, n)?);
                Ok(series_sides(lhs, TruncSeries::one(n)))
            },
        ));

        self.add(IdentitySpec::with_sides(
            "eq2.12-add",
            "e_q(x t) E_q(y t) = e_q((x (+)_q y) t)",
            vec![self.order_param("N", 12)],
            |p| {
                let n = get(p, "N");
                let (x, y) = (v(Var::X), v(Var::Y));
                let lhs = e_q_series(&x, n)?.mul(&big_e_q_series(&y, n)?);
                let rhs = TruncSeries::from_fn(n, |k| {
                    q_add_pow(k, &x, &y).scale(&q_factorial(k).recip().expect("nonzero"))
                });
                Ok(series_sides(lhs, rhs))
            },
        ));

        self.add(IdentitySpec::with_sides(
            "gener",
            "sum_n P_n(x, y) t^n / (q;q)_n = (y t; q)_inf / (x t; q)_inf",
            vec![self.order_param("N", 10)],
            |p| {
                let n = get(p, "N");
                let (x, y) = (v(Var::X), v(Var::Y));
                let lhs = TruncSeries::from_fn(n, |k| {
                    cauchy_p(k, &x, &y).scale(&q_factorial(k).recip().expect("nonzero"))
                });
                let rhs = euler_inv_series(&x, n)?.mul(&pochhammer_product_series(&y, n)?);
                Ok(series_sides(lhs, rhs))
            },
        ));

        self.add(IdentitySpec::with_sides(
            "putt",
            "1phi0(a; -; q, z t) = (a z t; q)_inf / (z t; q)_inf",
            vec![self.order_param("N", 12)],
            |p| {
                let n = get(p, "N");
                let (a, z) = (v(Var::A), v(Var::Z));
                let lhs = phi_series(std::slice::from_ref(&a), &[], &z, n)?;
                let rhs = pochhammer_product_series(&(&a * &z), n)?.mul(&euler_inv_series(&z, n)?);
                Ok(series_sides(lhs, rhs))
            },
        ));

        self.add(IdentitySpec::with_sides(
            "gf3.6",
            "sum_k F_k(x,y,z) (-1)^k q^binom(k,2) t^k / (q;q)_k = (x t, z t; q)_inf / (y t; q)_inf",
            vec![self.order_param("N", 10)],
            |p| {
                let n = get(p, "N");
                let (x, y, z) = (v(Var::X), v(Var::Y), v(Var::Z));
                let lhs = TruncSeries::from_fn(n, |k| f_poly(k, &x, &y, &z).scale(&f_gf_weight(k)));
                Ok(series_sides(lhs, f_gf(n, &x, &y, &z)?))
            },
        ));

        self.add(IdentitySpec::with_sides(
            "jhc3.14",
            "sum_j F(j) (u (+)_q t)^j / (q;q)_j = sum_{j,s} F(j+s) q^binom(s,2) u^j t^s / ((q;q)_j (q;q)_s); \
             seq 0: F = 1, 1: q^j, 2: P_j(x,y), 3: scratch symbols",
            vec![
                self.order_param("M", 8),
                self.order_param("N", 8),
                param("seq", 0..=3, 0..=3),
            ],
            |p| {
                let (m, n, kind) = (get(p, "M"), get(p, "N"), get(p, "seq"));
                let seq = jhc_sequence(kind, m + n + 1)?;
                // u, t are carried by the stand-ins X, Y, which no sequence uses
                let (u, t) = (v(Var::BigX), v(Var::BigY));
                let mut lhs_poly = MultiPoly::zero();
                for (j, fj) in seq.iter().enumerate() {
                    let w = q_factorial(j).recip()?;
                    lhs_poly = &lhs_poly + &(fj * &q_add_pow(j, &u, &t)).scale(&w);
                }
                Ok(Sides {
                    lhs: split_xy(&lhs_poly, m, n),
                    rhs: jhc_substitute(&seq, m, n)?.flatten(),
                    layout: Layout::BiSeries { cols: n + 1 },
                })
            },
        ));
    }

    fn register_connection(&mut self) {
        // P_{n+r}(xi (-)_q y, zeta (-)_q z) F_{k+l-n-r}(x,y,z) double sum
        self.add(IdentitySpec::with_terms(
            "thm3.1-general",
            "F_{k+l}(x,xi,zeta) = sum_{n<=k,r<=l} [k,n][l,r] (-1)^(n+r) \
             q^(-binom(n+1,2)-r(n+l+1)-(k+l)(n+r)) P_{n+r}(xi-y, zeta-z) F_{k+l-n-r}(x,y,z)",
            vec![param("k", 0..=6, 0..=3), param("l", 0..=6, 0..=3)],
            |p| {
                let (k, l) = (get(p, "k"), get(p, "l"));
                let (x, y, z, xi, zeta) =
                    (v(Var::X), v(Var::Y), v(Var::Z), v(Var::Xi), v(Var::Zeta));
                let ker = kernels(k + l, &y, &zeta, &xi, &z)?;
                let fs: Vec<MultiPoly> = (0..=k + l).map(|j| f_poly(j, &x, &y, &z)).collect();
                let terms = double_sum(k, l, |n, r| {
                    let e = -binom2(n as i64 + 1)
                        - (r * (n + l + 1)) as i64
                        - ((k + l) * (n + r)) as i64;
                    let w = &(&(&qb(k, n) * &qb(l, r)) * &signed(n + r)) * &QRational::q_power(e);
                    (&ker[n + r] * &fs[k + l - n - r]).scale(&w)
                });
                Ok(Termwise {
                    lhs: f_poly(k + l, &x, &xi, &zeta),
                    terms,
                })
            },
        ));

        self.add(IdentitySpec::with_terms(
            "thm3.1-l",
            "F_l(x,xi,zeta) = sum_r [l,r] (-1)^r q^(-r(2l+1)) P_r(xi-y, zeta-z) F_{l-r}(x,y,z)",
            vec![param("l", 0..=8, 0..=4)],
            |p| {
                let l = get(p, "l");
                let (x, y, z, xi, zeta) =
                    (v(Var::X), v(Var::Y), v(Var::Z), v(Var::Xi), v(Var::Zeta));
                let ker = kernels(l, &y, &zeta, &xi, &z)?;
                let terms = single_sum(l, |r| {
                    let e = -((r * (2 * l + 1)) as i64);
                    let w = &(&qb(l, r) * &signed(r)) * &QRational::q_power(e);
                    (&ker[r] * &f_poly(l - r, &x, &y, &z)).scale(&w)
                });
                Ok(Termwise {
                    lhs: f_poly(l, &x, &xi, &zeta),
                    terms,
                })
            },
        ));

        self.add(IdentitySpec::with_terms(
            "cor3.2",
            "F_{k+l}(x,xi,z) = sum_{n<=k,r<=l} [k,n][l,r] (-1)^(n+r) \
             q^(-binom(n+1,2)-r(n+l+1)-(k+l)(n+r)) (xi (-)_q y)^(n+r) F_{k+l-n-r}(x,y,z)",
            vec![param("k", 0..=6, 0..=3), param("l", 0..=6, 0..=3)],
            |p| {
                let (k, l) = (get(p, "k"), get(p, "l"));
                let (x, y, z, xi) = (v(Var::X), v(Var::Y), v(Var::Z), v(Var::Xi));
                let fs: Vec<MultiPoly> = (0..=k + l).map(|j| f_poly(j, &x, &y, &z)).collect();
                let terms = double_sum(k, l, |n, r| {
                    let e = -binom2(n as i64 + 1)
                        - (r * (n + l + 1)) as i64
                        - ((k + l) * (n + r)) as i64;
                    let w = &(&(&qb(k, n) * &qb(l, r)) * &signed(n + r)) * &QRational::q_power(e);
                    (&cauchy_p(n + r, &xi, &y) * &fs[k + l - n - r]).scale(&w)
                });
                Ok(Termwise {
                    lhs: f_poly(k + l, &x, &xi, &z),
                    terms,
                })
            },
        ));

        self.add(IdentitySpec::with_terms(
            "cor3.2-l",
            "F_l(x,xi,z) = sum_r [l,r] (-1)^r q^(-r(2l+1)) (xi (-)_q y)^r F_{l-r}(x,y,z)",
            vec![param("l", 0..=8, 0..=4)],
            |p| {
                let l = get(p, "l");
                let (x, y, z, xi) = (v(Var::X), v(Var::Y), v(Var::Z), v(Var::Xi));
                let terms = single_sum(l, |r| {
                    let e = -((r * (2 * l + 1)) as i64);
                    let w = &(&qb(l, r) * &signed(r)) * &QRational::q_power(e);
                    (&cauchy_p(r, &xi, &y) * &f_poly(l - r, &x, &y, &z)).scale(&w)
                });
                Ok(Termwise {
                    lhs: f_poly(l, &x, &xi, &z),
                    terms,
                })
            },
        ));

        self.add(IdentitySpec::with_terms(
            "thm4",
            "F_n(x,xi,zeta) F_r(X,Omega,U) = sum_{k<=n,m<=r} [n,k][r,m] (-1)^(k+m) \
             q^(binom(k+1,2)+binom(m+1,2)-mr-nk) P_k(xi-zeta, y-z) F_{n-k}(x,y,z) \
             P_m(Omega-U, Y-Z) F_{r-m}(X,Y,Z)",
            vec![param("n", 0..=5, 0..=3), param("r", 0..=5, 0..=3)],
            |p| {
                let (n, r) = (get(p, "n"), get(p, "r"));
                let (x, y, z, xi, zeta) =
                    (v(Var::X), v(Var::Y), v(Var::Z), v(Var::Xi), v(Var::Zeta));
                let (bx, by, bz, om, u) = (
                    v(Var::BigX),
                    v(Var::BigY),
                    v(Var::BigZ),
                    v(Var::Omega),
                    v(Var::U),
                );
                let ker1 = kernels(n, &zeta, &y, &xi, &z)?;
                let ker2 = kernels(r, &u, &by, &om, &bz)?;
                let left: Vec<MultiPoly> = (0..=n)
                    .map(|k| &ker1[k] * &f_poly(n - k, &x, &y, &z))
                    .collect();
                let right: Vec<MultiPoly> = (0..=r)
                    .map(|m| &ker2[m] * &f_poly(r - m, &bx, &by, &bz))
                    .collect();
                let mut terms = Vec::new();
                for (k, lk) in left.iter().enumerate() {
                    for (m, rm) in right.iter().enumerate() {
                        let e = binom2(k as i64 + 1) + binom2(m as i64 + 1)
                            - (m * r) as i64
                            - (n * k) as i64;
                        let w =
                            &(&(&qb(n, k) * &qb(r, m)) * &signed(k + m)) * &QRational::q_power(e);
                        terms.push(Term {
                            indices: indices(&[("n", n), ("r", r), ("k", k), ("m", m)]),
                            value: (lk * rm).scale(&w),
                        });
                    }
                }
                Ok(Termwise {
                    lhs: &f_poly(n, &x, &xi, &zeta) * &f_poly(r, &bx, &om, &u),
                    terms,
                })
            },
        ));

        self.add(IdentitySpec::with_terms(
            "cor-psi",
            "psi_{k+l}(x,xi) = sum_{n<=k,r<=l} [k,n][l,r] \
             q^(binom(n+r,2)-binom(n+1,2)-r(n+l+1)-(k+l)(n+r)) (xi (-)_q y)^(n+r) psi_{k+l-n-r}(x,y), \
             psi_n^(a)(x,y) = F_n(x, a x, y)",
            vec![param("k", 0..=6, 0..=3), param("l", 0..=6, 0..=3)],
            |p| {
                let (k, l) = (get(p, "k"), get(p, "l"));
                let (a, x, y, xi) = (v(Var::A), v(Var::X), v(Var::Y), v(Var::Xi));
                let psis: Vec<MultiPoly> = (0..=k + l).map(|j| psi_poly(j, &a, &x, &y)).collect();
                let terms = double_sum(k, l, |n, r| {
                    let e = binom2((n + r) as i64) - binom2(n as i64 + 1)
                        - (r * (n + l + 1)) as i64
                        - ((k + l) * (n + r)) as i64;
                    let w = &(&qb(k, n) * &qb(l, r)) * &QRational::q_power(e);
                    (&cauchy_p(n + r, &xi, &y) * &psis[k + l - n - r]).scale(&w)
                });
                Ok(Termwise {
                    lhs: psi_poly(k + l, &a, &x, &xi),
                    terms,
                })
            },
        ));

        self.add(IdentitySpec::with_terms(
            "cor-psi-l",
            "psi_l(x,xi) = sum_r [l,r] q^(binom(r,2)-r(2l+1)) (xi (-)_q y)^r psi_{l-r}(x,y)",
            vec![param("l", 0..=8, 0..=4)],
            |p| {
                let l = get(p, "l");
                let (a, x, y, xi) = (v(Var::A), v(Var::X), v(Var::Y), v(Var::Xi));
                let terms = single_sum(l, |r| {
                    let e = binom2(r as i64) - (r * (2 * l + 1)) as i64;
                    let w = &qb(l, r) * &QRational::q_power(e);
                    (&cauchy_p(r, &xi, &y) * &psi_poly(l - r, &a, &x, &y)).scale(&w)
                });
                Ok(Termwise {
                    lhs: psi_poly(l, &a, &x, &xi),
                    terms,
                })
            },
        ));
    }

    fn register_qdiff(&mut self) {
        for (id, variant, text) in [
            (
                "qdiff-thm1",
                QDiffVariant::Theorem1,
                "(x/q - y)[f - f(x,y,qz)] = z[f(x/q,y,qz) - z f(x,qy,qz)] at f = F_n",
            ),
            (
                "qdiff-thm2",
                QDiffVariant::Theorem2,
                "(x/q - y)[f - f(x,y,qz)] = z[f(x/q,y,qz) - f(x,qy,qz)] at f = F_n",
            ),
        ] {
            self.add(IdentitySpec::with_sides(
                id,
                text,
                vec![param("n", 0..=12, 0..=8)],
                move |p| {
                    let f = f_poly(get(p, "n"), &v(Var::X), &v(Var::Y), &v(Var::Z));
                    Ok(Sides::polynomial(
                        qdiff_residual(&f, variant)?,
                        MultiPoly::zero(),
                    ))
                },
            ));
        }
    }

    /// Named parameter grids. `all` is the union of the others.
    pub fn suite(&self, name: &str) -> Option<Grid> {
        let fixed = |v: i64| v.min(self.max_order)..=v.min(self.max_order);
        let mut grid = Grid::new();
        let mut put = |id: &str, ranges: &[(&str, std::ops::RangeInclusive<i64>)]| {
            grid.insert(
                id.to_string(),
                ranges
                    .iter()
                    .map(|(n, r)| (n.to_string(), r.clone()))
                    .collect(),
            );
        };
        let foundational = |put: &mut Put| {
            put("eq2.7", &[("n", 0..=12)]);
            put("eq2.12", &[("N", fixed(16))]);
            put("eq2.12-add", &[("N", fixed(12))]);
            put("gener", &[("N", fixed(10))]);
            put("putt", &[("N", fixed(12))]);
            put("gf3.6", &[("N", fixed(10))]);
            put(
                "jhc3.14",
                &[("M", fixed(8)), ("N", fixed(8)), ("seq", 0..=3)],
            );
        };
        let theorems = |put: &mut Put| {
            put("thm3.1-general", &[("k", 0..=3), ("l", 0..=3)]);
            put("thm3.1-l", &[("l", 0..=4)]);
            put("cor3.2", &[("k", 0..=3), ("l", 0..=3)]);
            put("thm4", &[("n", 0..=3), ("r", 0..=3)]);
            put("cor-psi", &[("k", 0..=3), ("l", 0..=3)]);
        };
        let special = |put: &mut Put| {
            put("cor3.2-l", &[("l", 0..=4)]);
            put("cor-psi-l", &[("l", 0..=4)]);
        };
        let qdiff = |put: &mut Put| {
            put("qdiff-thm1", &[("n", 0..=8)]);
            put("qdiff-thm2", &[("n", 0..=8)]);
        };
        match name {
            "foundational" => foundational(&mut put),
            "theorems" => theorems(&mut put),
            "special" => special(&mut put),
            "qdiff" => qdiff(&mut put),
            "all" => {
                foundational(&mut put);
                theorems(&mut put);
                special(&mut put);
                qdiff(&mut put);
            }
            _ => return None,
        }
        Some(grid)
    }

    pub fn suite_names() -> &'static [&'static str] {
        &["all", "foundational", "qdiff", "special", "theorems"]
    }

    /// Default cells for one identity, with some parameters pinned.
    pub fn cells_for(&self, id: &str, fixed: &Params) -> Result<Vec<Params>> {
        Ok(self.get(id)?.default_cells(fixed))
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::new()
    }
}

fn single_sum(l: usize, mut f: impl FnMut(usize) -> MultiPoly) -> Vec<Term> {
    (0..=l)
        .map(|r| Term {
            indices: indices(&[("l", l), ("r", r)]),
            value: f(r),
        })
        .collect()
}

fn double_sum(k: usize, l: usize, mut f: impl FnMut(usize, usize) -> MultiPoly) -> Vec<Term> {
    let mut out = Vec::with_capacity((k + 1) * (l + 1));
    for n in 0..=k {
        for r in 0..=l {
            out.push(Term {
                indices: indices(&[("k", k), ("l", l), ("n", n), ("r", r)]),
                value: f(n, r),
            });
        }
    }
    out
}
