//! Identity registry and exact brute-force verification.
//!
//! Every registered identity expands both sides over fully symbolic
//! variables for one assignment of its index parameters. A cell passes only
//! when the two canonical forms are identical, so a verdict is conclusive
//! for that cell.

mod fit;
mod registry;
mod report;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::arith::QRational;
use crate::error::{Error, Result};
use crate::multipoly::{Monomial, MultiPoly};

pub use fit::{fit_exponent_correction, CorrectionFit, IndexMonomial};
pub use registry::{Registry, DEFAULT_MAX_ORDER};
pub use report::{status_table, SuiteReport, Summary};

/// Index parameter assignment, ordered by name.
pub type Params = BTreeMap<String, i64>;

/// Parameter ranges per identity id.
pub type Grid = BTreeMap<String, BTreeMap<String, RangeInclusive<i64>>>;

pub fn params(items: &[(&str, i64)]) -> Params {
    items.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Declared index parameter of an identity.
#[derive(Clone, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub bounds: RangeInclusive<i64>,
    pub default: RangeInclusive<i64>,
}

/// How the components of an expanded side are indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Polynomial,
    /// Component `k` is the coefficient of `t^k`.
    Series,
    /// Row-major `u^i t^j` with the given number of `t` columns.
    BiSeries {
        cols: usize,
    },
}

impl Layout {
    fn prefix(self, index: usize) -> String {
        let power = |v: &str, e: usize| match e {
            0 => String::new(),
            1 => format!("{v}*"),
            _ => format!("{v}^{e}*"),
        };
        match self {
            Layout::Polynomial => String::new(),
            Layout::Series => power("t", index),
            Layout::BiSeries { cols } => {
                format!("{}{}", power("u", index / cols), power("t", index % cols))
            }
        }
    }
}

/// Both sides of one identity cell, expanded.
#[derive(Clone, Debug)]
pub struct Sides {
    pub lhs: Vec<MultiPoly>,
    pub rhs: Vec<MultiPoly>,
    pub layout: Layout,
}

impl Sides {
    pub fn polynomial(lhs: MultiPoly, rhs: MultiPoly) -> Self {
        Sides {
            lhs: vec![lhs],
            rhs: vec![rhs],
            layout: Layout::Polynomial,
        }
    }
}

/// One summand of a sum side together with the index values it was built at
/// (outer parameters included).
#[derive(Clone, Debug)]
pub struct Term {
    pub indices: Params,
    pub value: MultiPoly,
}

/// An identity `closed = sum of terms`, each term carrying its own q-power.
#[derive(Clone, Debug)]
pub struct Termwise {
    pub lhs: MultiPoly,
    pub terms: Vec<Term>,
}

impl Termwise {
    pub fn rhs(&self) -> MultiPoly {
        self.terms
            .iter()
            .fold(MultiPoly::zero(), |acc, t| &acc + &t.value)
    }
}

type SidesFn = dyn Fn(&Params) -> Result<Sides> + Send + Sync;
type TermsFn = dyn Fn(&Params) -> Result<Termwise> + Send + Sync;

#[derive(Clone)]
enum Builder {
    Sides(Arc<SidesFn>),
    Terms(Arc<TermsFn>),
}

/// Registry entry.
#[derive(Clone)]
pub struct IdentitySpec {
    pub id: String,
    pub description: String,
    pub params: Vec<ParamSpec>,
    builder: Builder,
}

impl IdentitySpec {
    pub fn with_sides(
        id: &str,
        description: &str,
        params: Vec<ParamSpec>,
        f: impl Fn(&Params) -> Result<Sides> + Send + Sync + 'static,
    ) -> Self {
        IdentitySpec {
            id: id.to_string(),
            description: description.to_string(),
            params,
            builder: Builder::Sides(Arc::new(f)),
        }
    }

    pub fn with_terms(
        id: &str,
        description: &str,
        params: Vec<ParamSpec>,
        f: impl Fn(&Params) -> Result<Termwise> + Send + Sync + 'static,
    ) -> Self {
        IdentitySpec {
            id: id.to_string(),
            description: description.to_string(),
            params,
            builder: Builder::Terms(Arc::new(f)),
        }
    }

    pub fn is_termwise(&self) -> bool {
        matches!(self.builder, Builder::Terms(_))
    }

    pub fn validate(&self, p: &Params) -> Result<()> {
        for name in p.keys() {
            if !self.params.iter().any(|s| s.name == name) {
                return Err(Error::InvalidArgument(format!(
                    "{} has no parameter `{name}`",
                    self.id
                )));
            }
        }
        for spec in &self.params {
            let v = p.get(spec.name).ok_or_else(|| {
                Error::InvalidArgument(format!("{} needs parameter `{}`", self.id, spec.name))
            })?;
            if !spec.bounds.contains(v) {
                return Err(Error::InvalidArgument(format!(
                    "{}: {}={v} outside {}..{}",
                    self.id,
                    spec.name,
                    spec.bounds.start(),
                    spec.bounds.end()
                )));
            }
        }
        Ok(())
    }

    pub fn sides(&self, p: &Params) -> Result<Sides> {
        self.validate(p)?;
        match &self.builder {
            Builder::Sides(f) => f(p),
            Builder::Terms(f) => {
                let t = f(p)?;
                Ok(Sides::polynomial(t.lhs.clone(), t.rhs()))
            }
        }
    }

    pub fn termwise(&self, p: &Params) -> Result<Termwise> {
        self.validate(p)?;
        match &self.builder {
            Builder::Terms(f) => f(p),
            Builder::Sides(_) => Err(Error::UnsupportedIdentity(self.id.clone())),
        }
    }

    /// The same identity with every sum term multiplied by
    /// `q^(sum_i coeffs[i] * basis[i](indices))`.
    pub fn perturbed(&self, basis: &[IndexMonomial], coeffs: &[i64]) -> Result<IdentitySpec> {
        let Builder::Terms(inner) = &self.builder else {
            return Err(Error::UnsupportedIdentity(self.id.clone()));
        };
        if basis.len() != coeffs.len() {
            return Err(Error::InvalidArgument(
                "basis and coefficient lengths differ".into(),
            ));
        }
        let inner = Arc::clone(inner);
        let basis = basis.to_vec();
        let coeffs = coeffs.to_vec();
        let mut out = self.clone();
        out.builder = Builder::Terms(Arc::new(move |p: &Params| {
            let mut t = inner(p)?;
            for term in &mut t.terms {
                let e = fit::exponent(&basis, &coeffs, &term.indices)?;
                term.value = term.value.scale(&QRational::q_power(e));
            }
            Ok(t)
        }));
        Ok(out)
    }

    /// Cartesian product of the default ranges, overridden by `fixed`.
    pub fn default_cells(&self, fixed: &Params) -> Vec<Params> {
        let ranges: BTreeMap<String, RangeInclusive<i64>> = self
            .params
            .iter()
            .map(|s| {
                let r = match fixed.get(s.name) {
                    Some(&v) => v..=v,
                    None => s.default.clone(),
                };
                (s.name.to_string(), r)
            })
            .collect();
        let mut extra: Vec<Params> = expand_cells(&ranges);
        // keep unknown names so validation reports them
        for cell in &mut extra {
            for (k, v) in fixed {
                cell.entry(k.clone()).or_insert(*v);
            }
        }
        extra
    }
}

/// Cartesian product in lexicographic order of (name-sorted) value tuples.
pub fn expand_cells(ranges: &BTreeMap<String, RangeInclusive<i64>>) -> Vec<Params> {
    let mut cells = vec![Params::new()];
    for (name, range) in ranges {
        cells = cells
            .into_iter()
            .flat_map(|c| {
                range.clone().map(move |v| {
                    let mut c = c.clone();
                    c.insert(name.clone(), v);
                    c
                })
            })
            .collect();
    }
    cells
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// The graded-lex least point of disagreement between two sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub id: String,
    pub params: Params,
    pub status: Status,
    pub mismatch: Option<Mismatch>,
    pub message: Option<String>,
    pub elapsed: Duration,
}

/// Graded-lex least monomial where the coefficients differ.
pub fn first_mismatch(
    lhs: &MultiPoly,
    rhs: &MultiPoly,
) -> Option<(Monomial, QRational, QRational)> {
    // both sides are canonical, so the least differing monomial is found by a
    // merge walk without forming the difference
    let mut a = lhs.terms().peekable();
    let mut b = rhs.terms().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (None, None) => return None,
            (Some((m, c)), None) => return Some((**m, (*c).clone(), QRational::zero())),
            (None, Some((m, c))) => return Some((**m, QRational::zero(), (*c).clone())),
            (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                Ordering::Less => return Some((**ma, (*ca).clone(), QRational::zero())),
                Ordering::Greater => return Some((**mb, QRational::zero(), (*cb).clone())),
                Ordering::Equal if ca != cb => return Some((**ma, (*ca).clone(), (*cb).clone())),
                Ordering::Equal => {
                    a.next();
                    b.next();
                }
            },
        }
    }
}

fn compare(sides: &Sides) -> Option<Mismatch> {
    let zero = MultiPoly::zero();
    let n = sides.lhs.len().max(sides.rhs.len());
    (0..n).find_map(|i| {
        let l = sides.lhs.get(i).unwrap_or(&zero);
        let r = sides.rhs.get(i).unwrap_or(&zero);
        first_mismatch(l, r).map(|(m, lc, rc)| {
            let prefix = sides.layout.prefix(i);
            let monomial = match (prefix.is_empty(), m.is_one()) {
                (true, _) => m.to_string(),
                (false, true) => prefix.trim_end_matches('*').to_string(),
                (false, false) => format!("{prefix}{m}"),
            };
            Mismatch {
                monomial,
                lhs: lc.to_string(),
                rhs: rc.to_string(),
            }
        })
    })
}

impl Registry {
    /// Expands both sides exactly and compares canonical forms.
    pub fn check_identity(&self, id: &str, p: &Params) -> Result<IdentityReport> {
        let spec = self.get(id)?;
        let start = Instant::now();
        let sides = spec.sides(p)?;
        let mismatch = compare(&sides);
        Ok(IdentityReport {
            id: id.to_string(),
            params: p.clone(),
            status: if mismatch.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            mismatch,
            message: None,
            elapsed: start.elapsed(),
        })
    }

    fn check_or_error(&self, id: &str, p: &Params) -> IdentityReport {
        let start = Instant::now();
        self.check_identity(id, p)
            .unwrap_or_else(|e| IdentityReport {
                id: id.to_string(),
                params: p.clone(),
                status: Status::Error,
                mismatch: None,
                message: Some(e.to_string()),
                elapsed: start.elapsed(),
            })
    }

    /// Checks explicit cells, in parallel, keeping the given order.
    pub fn check_cells(&self, cells: &[(String, Params)]) -> Vec<IdentityReport> {
        cells
            .par_iter()
            .map(|(id, p)| self.check_or_error(id, p))
            .collect()
    }

    /// One report per grid cell, ordered by id and then parameter tuple.
    /// Per-cell failures become `error` reports.
    pub fn check_suite(&self, grid: &Grid) -> Vec<IdentityReport> {
        let cells: Vec<(String, Params)> = grid
            .iter()
            .flat_map(|(id, ranges)| {
                expand_cells(ranges)
                    .into_iter()
                    .map(move |p| (id.clone(), p))
            })
            .collect();
        self.check_cells(&cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::Var;

    #[test]
    fn first_mismatch_examples() {
        let x = MultiPoly::var(Var::X);
        let y = MultiPoly::var(Var::Y);
        assert_eq!(first_mismatch(&x, &x), None);
        let (m, l, r) = first_mismatch(&(&x + &y), &x).unwrap();
        assert_eq!(m, Monomial::var(Var::Y));
        assert!(l.is_one());
        assert!(r.is_zero());
    }

    #[test]
    fn mismatch_labels_series_position() {
        let x = MultiPoly::var(Var::X);
        let sides = Sides {
            lhs: vec![MultiPoly::one(), MultiPoly::zero(), x.clone()],
            rhs: vec![MultiPoly::one(), MultiPoly::zero(), MultiPoly::zero()],
            layout: Layout::Series,
        };
        let m = compare(&sides).unwrap();
        assert_eq!(m.monomial, "t^2*x");
        let sides = Sides {
            lhs: vec![
                MultiPoly::zero(),
                MultiPoly::zero(),
                MultiPoly::zero(),
                MultiPoly::one(),
            ],
            rhs: vec![MultiPoly::zero(); 4],
            layout: Layout::BiSeries { cols: 2 },
        };
        assert_eq!(compare(&sides).unwrap().monomial, "u*t");
    }

    #[test]
    fn cells_are_lexicographic() {
        let mut ranges = BTreeMap::new();
        ranges.insert("l".to_string(), 0..=1);
        ranges.insert("k".to_string(), 0..=1);
        let cells = expand_cells(&ranges);
        let flat: Vec<(i64, i64)> = cells.iter().map(|c| (c["k"], c["l"])).collect();
        assert_eq!(flat, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }
}
