//! Expressions over the kernel's special functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' uint)?
//! atom   := call | var | uint ('/' uint)? | 'q' ('^' int)? | '(' expr ')'
//! call   := NAME '(' int (',' int)* (';' expr (',' expr)*)? ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::QRational;
use crate::error::{Error, Result};
use crate::multipoly::{MultiPoly, Var};
use crate::qcore::{cauchy_p, phi_series, q_add_pow, qbinom, qpochhammer};
use crate::trivariate::{f_poly, psi_poly};

/// Largest integer index accepted by a call.
pub const MAX_INDEX: i64 = 40;
/// Largest number of upper or lower parameters of `phi`.
pub const MAX_PHI_PARAMS: i64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    QPoch,
    QBinom,
    P,
    QAddPow,
    F,
    Psi,
    Phi,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::QPoch,
        Func::QBinom,
        Func::P,
        Func::QAddPow,
        Func::F,
        Func::Psi,
        Func::Phi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::QPoch => "qpoch",
            Func::QBinom => "qbinom",
            Func::P => "P",
            Func::QAddPow => "qaddpow",
            Func::F => "F",
            Func::Psi => "psi",
            Func::Phi => "phi",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    fn index_count(self) -> usize {
        match self {
            Func::QBinom => 2,
            Func::Phi => 3,
            _ => 1,
        }
    }

    fn index_signature(self) -> &'static str {
        match self {
            Func::QBinom => "indices (n, k)",
            Func::Phi => "indices (r, s, N)",
            _ => "index (n)",
        }
    }

    fn slot_count(self, indices: &[i64]) -> usize {
        match self {
            Func::QBinom => 0,
            Func::QPoch => 1,
            Func::P | Func::QAddPow => 2,
            Func::F | Func::Psi => 3,
            Func::Phi => (indices[0] + indices[1] + 1) as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(Var),
    /// Nonnegative rational literal.
    Rat(BigRational),
    QPow(i64),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Call {
        func: Func,
        indices: Vec<i64>,
        args: Vec<Expr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".to_string(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let s: String = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_digit())
                .collect();
            i += s.len();
            column += s.len();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            let s: String = chars[i..]
                .iter()
                .take_while(|c| c.is_alphanumeric() || **c == '_')
                .collect();
            i += s.chars().count();
            column += s.chars().count();
            Tok::Ident(s)
        } else {
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' | '·' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                _ => {
                    return Err(Error::ParseError {
                        line,
                        column,
                        expected: vec!["expression".into()],
                        found: format!("`{c}`"),
                    })
                }
            };
            i += 1;
            column += 1;
            t
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Variable names accepted in expressions, including Greek aliases.
pub fn var_from_name(name: &str) -> Option<Var> {
    let canonical = match name {
        "ξ" => "xi",
        "ζ" => "zeta",
        "Ω" => "Omega",
        other => other,
    };
    Var::from_name(canonical)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const ATOM_START: [&str; 5] = ["identifier", "number", "`q`", "`(`", "`-`"];

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let t = self.peek();
        Error::ParseError {
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat(&Tok::Star) {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let atom = self.atom()?;
        if self.eat(&Tok::Caret) {
            let e = self.uint("exponent")?;
            let e = u32::try_from(e).map_err(|_| self.range_error("exponent", &e.to_string()))?;
            return Ok(Expr::Pow(Box::new(atom), e));
        }
        Ok(atom)
    }

    fn range_error(&self, what: &str, value: &str) -> Error {
        let t = &self.toks[self.pos.saturating_sub(1)];
        Error::InvalidArgument(format!(
            "line {}, column {}: {what} {value} out of range",
            t.line, t.column
        ))
    }

    fn uint(&mut self, what: &str) -> Result<i64> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.bump();
                i64::try_from(&n).map_err(|_| self.range_error(what, &n.to_string()))
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64> {
        if self.eat(&Tok::Minus) {
            Ok(-self.uint(what)?)
        } else {
            self.uint(what)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.peek().clone();
        match t.tok.clone() {
            Tok::Int(n) => {
                self.bump();
                if self.eat(&Tok::Slash) {
                    let d = match self.peek().tok.clone() {
                        Tok::Int(d) => {
                            self.bump();
                            d
                        }
                        _ => return Err(self.error(&["integer"])),
                    };
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    Ok(Expr::Rat(BigRational::new(n, d)))
                } else {
                    Ok(Expr::Rat(BigRational::from_integer(n)))
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error(&["`+`", "`-`", "`*`", "`)`"]));
                }
                Ok(e)
            }
            Tok::Ident(name) if name == "q" => {
                self.bump();
                if self.eat(&Tok::Caret) {
                    Ok(Expr::QPow(self.int("q exponent")?))
                } else {
                    Ok(Expr::QPow(1))
                }
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(func) = Func::from_name(&name) {
                    self.call(func, &t)
                } else if let Some(v) = var_from_name(&name) {
                    Ok(Expr::Var(v))
                } else {
                    Err(Error::UnboundVariable(name))
                }
            }
            _ => Err(self.error(&ATOM_START)),
        }
    }

    fn call(&mut self, func: Func, at: &Spanned) -> Result<Expr> {
        if !self.eat(&Tok::LParen) {
            return Err(self.error(&["`(`"]));
        }
        let mut indices = vec![self.int("index")?];
        while self.eat(&Tok::Comma) {
            indices.push(self.int("index")?);
        }
        if indices.len() != func.index_count() {
            return Err(Error::ArityError {
                name: func.name().into(),
                expected: func.index_signature().into(),
                got: format!("{} indices", indices.len()),
            });
        }
        for (i, &v) in indices.iter().enumerate() {
            let ok = match (func, i) {
                (Func::Phi, 0 | 1) => (0..=MAX_PHI_PARAMS).contains(&v),
                (Func::QBinom, 1) => (0..=indices[0]).contains(&v),
                _ => (0..=MAX_INDEX).contains(&v),
            };
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "line {}, column {}: index {v} of `{}` out of range",
                    at.line,
                    at.column,
                    func.name()
                )));
            }
        }
        let mut args = Vec::new();
        if self.eat(&Tok::Semi) {
            args.push(self.expr()?);
            while self.eat(&Tok::Comma) {
                args.push(self.expr()?);
            }
        }
        if !self.eat(&Tok::RParen) {
            let mut expected = vec!["`,`", "`)`"];
            if args.is_empty() {
                expected.push("`;`");
            } else {
                expected.extend(["`+`", "`-`", "`*`", "`^`"]);
            }
            return Err(self.error(&expected));
        }
        let want = func.slot_count(&indices);
        if args.len() != want {
            return Err(Error::ArityError {
                name: func.name().into(),
                expected: format!("{want} arguments"),
                got: args.len().to_string(),
            });
        }
        Ok(Expr::Call {
            func,
            indices,
            args,
        })
    }
}

pub fn parse_expression(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(&["`+`", "`-`", "`*`", "end of input"]));
    }
    Ok(e)
}

// Binding strength used by the renderer: a child is parenthesized when its
// own level is below the level required at its position.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) => PRODUCT,
        Expr::Neg(_) => UNARY,
        Expr::Pow(..) => POWER,
        Expr::QPow(_) => POWER,
        Expr::Rat(r) if !r.is_integer() => POWER,
        _ => ATOM,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        f.write_str("(")?;
        write!(f, "{e}")?;
        f.write_str(")")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Rat(r) => write!(f, "{r}"),
            Expr::QPow(1) => f.write_str("q"),
            Expr::QPow(e) => write!(f, "q^{e}"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, UNARY)
            }
            Expr::Pow(a, e) => {
                write_at(f, a, ATOM)?;
                write!(f, "^{e}")
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_at(f, a, SUM)?;
                f.write_str(if matches!(self, Expr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                write_at(f, b, PRODUCT)
            }
            Expr::Mul(a, b) => {
                write_at(f, a, PRODUCT)?;
                f.write_str("*")?;
                write_at(f, b, UNARY)
            }
            Expr::Call {
                func,
                indices,
                args,
            } => {
                let idx: Vec<String> = indices.iter().map(i64::to_string).collect();
                write!(f, "{}({}", func.name(), idx.join(", "))?;
                for (i, a) in args.iter().enumerate() {
                    f.write_str(if i == 0 { "; " } else { ", " })?;
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Expands an expression; `max_order` bounds the partial sums of `phi`.
pub fn eval(e: &Expr, max_order: usize) -> Result<MultiPoly> {
    let ev = |x: &Expr| eval(x, max_order);
    Ok(match e {
        Expr::Var(v) => MultiPoly::var(*v),
        Expr::Rat(r) => MultiPoly::constant(QRational::from_rational(r.clone())),
        Expr::QPow(k) => MultiPoly::q_power(*k),
        Expr::Neg(a) => -&ev(a)?,
        Expr::Pow(a, k) => ev(a)?.pow(*k),
        Expr::Add(a, b) => &ev(a)? + &ev(b)?,
        Expr::Sub(a, b) => &ev(a)? - &ev(b)?,
        Expr::Mul(a, b) => &ev(a)? * &ev(b)?,
        Expr::Call {
            func,
            indices,
            args,
        } => {
            let a: Vec<MultiPoly> = args.iter().map(ev).collect::<Result<_>>()?;
            let n = indices[0] as usize;
            match func {
                Func::QPoch => qpochhammer(&a[0], n),
                Func::QBinom => MultiPoly::constant(qbinom(indices[0], indices[1])?),
                Func::P => cauchy_p(n, &a[0], &a[1]),
                Func::QAddPow => q_add_pow(n, &a[0], &a[1]),
                Func::F => f_poly(n, &a[0], &a[1], &a[2]),
                Func::Psi => psi_poly(n, &a[0], &a[1], &a[2]),
                Func::Phi => {
                    let (r, s) = (indices[0] as usize, indices[1] as usize);
                    let order = indices[2] as usize;
                    if order > max_order {
                        return Err(Error::InvalidArgument(format!(
                            "phi order {order} exceeds the cap {max_order}"
                        )));
                    }
                    let series = phi_series(&a[..r], &a[r..r + s], &a[r + s], order)?;
                    series
                        .coeffs()
                        .iter()
                        .fold(MultiPoly::zero(), |acc, c| &acc + c)
                }
            }
        }
    })
}
