//! Command-line front end: `verify`, `expand`, `fit` and `list`.
//!
//! Exit status is 0 when every requested check passes, 1 when at least one
//! check fails (or a fit finds nothing), and 2 on usage, parse or argument
//! errors.

pub mod expr;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::verifier::{IndexMonomial, Params, Registry, SuiteReport, DEFAULT_MAX_ORDER};

pub use expr::{eval, parse_expression, Expr, Func};

/// Environment variable capping every truncation order.
pub const MAX_ORDER_ENV: &str = "QFORGE_MAX_ORDER";

#[derive(Parser)]
#[command(
    name = "qforge",
    version,
    about = "Exact q-series expansion and identity verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check registered identities exactly.
    Verify(VerifyArgs),
    /// Expand an expression to canonical polynomial form.
    Expand(ExpandArgs),
    /// Search for an integer exponent correction q^e(indices).
    Fit(FitArgs),
    /// List registered identities and suites.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    /// Named suite (all, foundational, qdiff, special, theorems).
    #[arg(long, conflicts_with = "id", required_unless_present = "id")]
    suite: Option<String>,
    /// Single identity; unspecified parameters sweep their default ranges.
    #[arg(long)]
    id: Option<String>,
    /// Pin a parameter, e.g. `--param l=1`.
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param, requires = "id")]
    params: Vec<(String, i64)>,
    /// Truncation-order cap, at most the environment cap.
    #[arg(long)]
    order: Option<i64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include per-cell elapsed time.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ExpandArgs {
    expr: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Largest partial-sum order allowed for `phi`.
    #[arg(long)]
    order: Option<i64>,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    id: String,
    /// Comma-separated index monomials, e.g. `1,r,l,r*l,r^2`.
    #[arg(long)]
    basis: String,
    /// Coefficient range `LO..HI` (inclusive).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: RangeInclusive<i64>,
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, i64)>,
    #[arg(long)]
    order: Option<i64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn parse_param(s: &str) -> std::result::Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let v = v
        .trim()
        .parse()
        .map_err(|_| format!("`{v}` is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<i64>, String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

/// Order cap from the environment, further lowered by `--order`.
fn order_cap(requested: Option<i64>) -> Result<i64> {
    let cap = match std::env::var(MAX_ORDER_ENV) {
        Ok(v) => v
            .trim()
            .parse::<i64>()
            .ok()
            .filter(|n| *n >= 0)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{MAX_ORDER_ENV}=`{v}` is not a nonnegative integer"
                ))
            })?,
        Err(_) => DEFAULT_MAX_ORDER,
    };
    match requested {
        Some(n) if n < 0 || n > cap => Err(Error::InvalidArgument(format!(
            "--order {n} outside 0..={cap} ({MAX_ORDER_ENV} cap)"
        ))),
        Some(n) => Ok(n),
        None => Ok(cap),
    }
}

fn pinned(params: &[(String, i64)]) -> Params {
    params.iter().cloned().collect()
}

/// Cells for one identity, validated before any expansion runs.
fn validated_cells(reg: &Registry, id: &str, params: &[(String, i64)]) -> Result<Vec<Params>> {
    let spec = reg.get(id)?;
    let cells = reg.cells_for(id, &pinned(params))?;
    for c in &cells {
        spec.validate(c)?;
    }
    Ok(cells)
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(format!("cannot write output: {e}"))),
    }
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let reg = Registry::with_max_order(order_cap(a.order)?);
    let (name, reports) = match (&a.suite, &a.id) {
        (Some(suite), _) => {
            let grid = reg.suite(suite).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown suite `{suite}` (expected one of {})",
                    Registry::suite_names().join(", ")
                ))
            })?;
            (suite.clone(), reg.check_suite(&grid))
        }
        (None, Some(id)) => {
            let cells: Vec<(String, Params)> = validated_cells(&reg, id, &a.params)?
                .into_iter()
                .map(|c| (id.clone(), c))
                .collect();
            (id.clone(), reg.check_cells(&cells))
        }
        (None, None) => unreachable!("clap requires --suite or --id"),
    };
    let report = SuiteReport {
        suite: name,
        reports: &reports,
        timing: a.timing,
    };
    let text = match a.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    emit(out, a.out.as_ref(), &text)?;
    Ok(if report.summary().all_pass() { 0 } else { 1 })
}

#[derive(Serialize)]
struct ExpandJson {
    expression: String,
    result: String,
}

fn expand(a: &ExpandArgs, out: &mut dyn Write) -> Result<i32> {
    let cap = order_cap(a.order)?;
    let ast = parse_expression(&a.expr)?;
    let value = eval(&ast, cap as usize)?;
    let text = match a.format {
        Format::Text => format!("{value}\n"),
        Format::Json => {
            let doc = ExpandJson {
                expression: ast.to_string(),
                result: value.to_string(),
            };
            serde_json::to_string_pretty(&doc).expect("serializes") + "\n"
        }
    };
    emit(out, None, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct FitJson {
    id: String,
    basis: Vec<String>,
    range: [i64; 2],
    cells: usize,
    coefficients: Option<Vec<i64>>,
    exponent: Option<String>,
}

fn fit(a: &FitArgs, out: &mut dyn Write) -> Result<i32> {
    let reg = Registry::with_max_order(order_cap(a.order)?);
    let basis = IndexMonomial::parse_list(&a.basis)?;
    let cells = validated_cells(&reg, &a.id, &a.params)?;
    let found = reg.fit_exponent_correction(&a.id, &basis, a.range.clone(), &cells)?;
    let doc = FitJson {
        id: a.id.clone(),
        basis: basis.iter().map(ToString::to_string).collect(),
        range: [*a.range.start(), *a.range.end()],
        cells: cells.len(),
        coefficients: found.as_ref().map(|f| f.coefficients.clone()),
        exponent: found.as_ref().map(|f| f.exponent_text()),
    };
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializes") + "\n",
        Format::Text => match &found {
            Some(f) => format!(
                "{}: q^({}) makes all {} cells pass; coefficients {:?} on basis [{}]\n",
                doc.id,
                f.exponent_text(),
                doc.cells,
                f.coefficients,
                doc.basis.join(", ")
            ),
            None => format!(
                "{}: no correction with coefficients in {}..{} on basis [{}] fits all {} cells\n",
                doc.id,
                doc.range[0],
                doc.range[1],
                doc.basis.join(", "),
                doc.cells
            ),
        },
    };
    emit(out, None, &text)?;
    Ok(if found.is_some() { 0 } else { 1 })
}

fn list(out: &mut dyn Write) -> Result<i32> {
    let reg = Registry::new();
    let mut text = String::new();
    for spec in reg.specs() {
        let params: Vec<String> = spec
            .params
            .iter()
            .map(|p| {
                format!(
                    "{} in {}..={} (default {}..={})",
                    p.name,
                    p.bounds.start(),
                    p.bounds.end(),
                    p.default.start(),
                    p.default.end()
                )
            })
            .collect();
        text.push_str(&format!(
            "{}\n    {}\n    {}\n",
            spec.id,
            params.join(", "),
            spec.description
        ));
    }
    text.push_str(&format!("suites: {}\n", Registry::suite_names().join(", ")));
    emit(out, None, &text)?;
    Ok(0)
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    2
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => verify(a, out),
        Command::Expand(a) => expand(a, out),
        Command::Fit(a) => fit(a, out),
        Command::List => list(out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("qforge").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_param("l=1"), Ok(("l".to_string(), 1)));
        assert!(parse_param("l").is_err());
        assert_eq!(parse_range("-5..5"), Ok(-5..=5));
        assert_eq!(parse_range("0..=2"), Ok(0..=2));
        assert!(parse_range("3..1").is_err());
    }

    #[test]
    fn expand_matches_kernel() {
        let (code, out, _) = call(&["expand", "P(2; x, y)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "x^2 - (1 + q)*x*y + q*y^2\n");
    }

    #[test]
    fn parse_errors_exit_two() {
        let (code, _, err) = call(&["expand", "F(1; x y z)"]);
        assert_eq!(code, 2);
        assert!(err.contains("line 1, column 8"), "{err}");
    }

    #[test]
    fn single_cell_statuses() {
        assert_eq!(call(&["verify", "--id", "thm3.1-l", "--param", "l=0"]).0, 0);
        let (code, out, _) = call(&["verify", "--id", "thm3.1-l", "--param", "l=1"]);
        assert_eq!(code, 1);
        assert!(out.contains("first mismatch"), "{out}");
    }
}
