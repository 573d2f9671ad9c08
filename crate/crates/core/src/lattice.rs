//! Lattice sums of products of tetrahedron indices.
//!
//! An expression has the shape
//!
//! ```text
//! sum k1 k2 : [-] [q^(L(k)) *] I(A1(k), B1(k)) * I(A2(k), B2(k)) * ...
//! ```
//!
//! with affine forms `L`, `Ai`, `Bi` in the lattice variables. Coefficients
//! may be halves (`1/2*k`, `3/2`, `k/2`), but the charge forms must be
//! integer-valued on the lattice; only the `q` exponent may be half-integral.
//!
//! Grammar (whitespace-insensitive, `#` starts a comment line in files):
//!
//! ```text
//! expr    := "sum" var+ ":" ["-"] [prefac "*"] factor ("*" factor)*
//! prefac  := "q^(" affine ")"
//! factor  := "I(" affine "," affine ")"
//! affine  := ["-"] term (("+"|"-") term)*
//! term    := int ["/2"] ["*" var ["/2"]] | var ["/2"]
//! ```

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::engine::{Engine, Factor, TermBound, Windowed};
use crate::error::{Error, Result};
use crate::series::{HalfExp, QSeries};
use crate::tetrahedron::IndexCharge;

/// The text of the figure-eight knot index, `sum_{k1,k2} I(k1,k2) I(k2,k1)`.
pub const IND41: &str = "sum k1 k2 : I(k1,k2)*I(k2,k1)";

/// `sum_i coeffs[i] * k_i + constant`, every entry in half-units.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

impl AffineForm {
    pub fn zero(rank: usize) -> Self {
        AffineForm {
            coeffs: vec![0; rank],
            constant: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.coeffs.iter().all(|&c| c == 0)
    }

    /// Value at a lattice point, in half-units.
    pub fn eval(&self, point: &[i64]) -> i64 {
        self.coeffs
            .iter()
            .zip(point)
            .map(|(c, k)| c * k)
            .sum::<i64>()
            + self.constant
    }

    pub fn is_integer_valued(&self) -> bool {
        self.constant % 2 == 0 && self.coeffs.iter().all(|c| c % 2 == 0)
    }

    fn write(&self, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (c, v) in self.coeffs.iter().zip(vars) {
            let mag = c.abs();
            let body = match mag {
                0 => continue,
                2 => v.clone(),
                m if m % 2 == 0 => format!("{}*{v}", m / 2),
                m => format!("{m}/2*{v}"),
            };
            parts.push((*c < 0, body));
        }
        if self.constant != 0 || parts.is_empty() {
            let mag = self.constant.abs();
            let body = if mag % 2 == 0 {
                format!("{}", mag / 2)
            } else {
                format!("{mag}/2")
            };
            parts.push((self.constant < 0, body));
        }
        for (i, (neg, body)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// A parsed lattice sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSumExpr {
    pub vars: Vec<String>,
    pub sign: i64,
    pub prefactor: AffineForm,
    pub factors: Vec<(AffineForm, AffineForm)>,
}

impl LatticeSumExpr {
    pub fn rank(&self) -> usize {
        self.vars.len()
    }

    fn term_at(&self, point: &[i64]) -> (HalfExp, Vec<IndexCharge>) {
        let charges = self
            .factors
            .iter()
            .map(|(a, b)| IndexCharge::new(a.eval(point) / 2, b.eval(point) / 2))
            .collect();
        (HalfExp(self.prefactor.eval(point)), charges)
    }
}

struct Shown<'a>(&'a AffineForm, &'a [String]);

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write(self.1, f)
    }
}

impl fmt::Display for LatticeSumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sum {} : ", self.vars.join(" "))?;
        if self.sign < 0 {
            f.write_str("-")?;
        }
        if !self.prefactor.is_zero() {
            write!(f, "q^({}) * ", Shown(&self.prefactor, &self.vars))?;
        }
        for (i, (a, b)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(
                f,
                "I({},{})",
                Shown(a, &self.vars),
                Shown(b, &self.vars)
            )?;
        }
        Ok(())
    }
}

impl FromStr for LatticeSumExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    End,
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: Vec<String>,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v = src[start..i]
                .parse::<i64>()
                .map_err(|_| syntax(start, "integer literal too large"))?;
            out.push((start, Tok::Int(v)));
        } else if ":*^(),+-/".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(syntax(i, format!("unexpected character `{c}`")));
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

const RESERVED: [&str; 3] = ["sum", "q", "I"];

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{c}`, found {}", self.describe())))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(syntax(self.pos(), format!("expected `{kw}`, found {}", self.describe()))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    /// Optional `/2`; returns the divisor in half-units (2 -> whole, 1 -> half).
    fn halving(&mut self) -> Result<i64> {
        if !self.eat_sym('/') {
            return Ok(2);
        }
        let pos = self.pos();
        match self.bump().1 {
            Tok::Int(2) => Ok(1),
            _ => Err(syntax(pos, "only `/2` is supported as a divisor")),
        }
    }

    fn var_index(&mut self) -> Result<usize> {
        let pos = self.pos();
        match self.bump().1 {
            Tok::Ident(name) => self
                .vars
                .iter()
                .position(|v| *v == name)
                .ok_or(Error::UnknownVariable { name, pos }),
            _ => Err(syntax(pos, "expected a variable")),
        }
    }

    fn term(&mut self, form: &mut AffineForm, sign: i64) -> Result<()> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                let scale = self.halving()?;
                if self.eat_sym('*') {
                    let idx = self.var_index()?;
                    let inner = self.halving()?;
                    if scale == 1 && inner == 1 {
                        return Err(syntax(pos, "quarter coefficients are not supported"));
                    }
                    form.coeffs[idx] += sign * v * scale * inner / 2;
                } else {
                    form.constant += sign * v * scale;
                }
                Ok(())
            }
            Tok::Ident(_) => {
                let idx = self.var_index()?;
                let scale = self.halving()?;
                form.coeffs[idx] += sign * scale;
                Ok(())
            }
            _ => Err(syntax(pos, format!("expected a term, found {}", self.describe()))),
        }
    }

    fn affine(&mut self) -> Result<(usize, AffineForm)> {
        let start = self.pos();
        let mut form = AffineForm::zero(self.vars.len());
        let mut sign = if self.eat_sym('-') {
            -1
        } else {
            self.eat_sym('+');
            1
        };
        loop {
            self.term(&mut form, sign)?;
            if self.eat_sym('+') {
                sign = 1;
            } else if self.eat_sym('-') {
                sign = -1;
            } else {
                break;
            }
        }
        Ok((start, form))
    }

    fn charge(&mut self) -> Result<AffineForm> {
        let (start, form) = self.affine()?;
        if !form.is_integer_valued() {
            let end = self.pos();
            return Err(Error::NonIntegerCharge {
                form: self.src[start..end].trim().to_string(),
            });
        }
        Ok(form)
    }

    fn factor(&mut self) -> Result<(AffineForm, AffineForm)> {
        self.expect_keyword("I")?;
        self.expect_sym('(')?;
        let a = self.charge()?;
        self.expect_sym(',')?;
        let b = self.charge()?;
        self.expect_sym(')')?;
        Ok((a, b))
    }

    fn expr(&mut self) -> Result<LatticeSumExpr> {
        self.expect_keyword("sum")?;
        let mut seen = HashSet::new();
        while let Tok::Ident(name) = self.peek().clone() {
            if RESERVED.contains(&name.as_str()) {
                return Err(syntax(self.pos(), format!("`{name}` is reserved")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateVariable { name });
            }
            self.vars.push(name);
            self.bump();
        }
        if self.vars.is_empty() {
            return Err(syntax(self.pos(), "expected at least one summation variable"));
        }
        self.expect_sym(':')?;
        let sign = if self.eat_sym('-') { -1 } else { 1 };
        let mut prefactor = AffineForm::zero(self.vars.len());
        if self.is_keyword("q") {
            self.bump();
            self.expect_sym('^')?;
            self.expect_sym('(')?;
            prefactor = self.affine()?.1;
            self.expect_sym(')')?;
            self.expect_sym('*')?;
        }
        let mut factors = vec![self.factor()?];
        while self.eat_sym('*') {
            factors.push(self.factor()?);
        }
        if *self.peek() != Tok::End {
            return Err(syntax(self.pos(), format!("unexpected {}", self.describe())));
        }
        Ok(LatticeSumExpr {
            vars: std::mem::take(&mut self.vars),
            sign,
            prefactor,
            factors,
        })
    }
}

/// Parses one expression.
pub fn parse_expr(text: &str) -> Result<LatticeSumExpr> {
    let mut p = Parser {
        src: text,
        toks: lex(text)?,
        at: 0,
        vars: Vec::new(),
    };
    p.expr()
}

/// Parses the contents of an expression file: lines whose first
/// non-blank character is `#` are ignored.
pub fn parse_file_contents(text: &str) -> Result<LatticeSumExpr> {
    let body: String = text
        .lines()
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    parse_expr(&body)
}

/// Every point of `[-r, r]^rank` with sup-norm exactly `r`.
fn shell(rank: usize, r: i64) -> Vec<Vec<i64>> {
    cube(rank, r)
        .into_iter()
        .filter(|p| p.iter().any(|k| k.abs() == r))
        .collect()
}

fn cube(rank: usize, r: i64) -> Vec<Vec<i64>> {
    let mut pts = vec![Vec::with_capacity(rank)];
    for _ in 0..rank {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    pts
}

impl Engine {
    fn point_bound(&self, expr: &LatticeSumExpr, point: &[i64]) -> TermBound {
        let (shift, charges) = expr.term_at(point);
        self.charge_bound(shift, &charges)
    }

    /// Sums the expression over a cube `[-E, E]^rank`, grown until the `W`
    /// outermost shells contain no term reaching below `prec` and some inner
    /// term has an exact degree no larger than every outermost one.
    pub fn eval_expr(&self, expr: &LatticeSumExpr, prec: HalfExp) -> Result<QSeries> {
        Ok(self.eval_expr_windowed(expr, prec)?.value)
    }

    pub fn eval_expr_windowed(
        &self,
        expr: &LatticeSumExpr,
        prec: HalfExp,
    ) -> Result<Windowed<QSeries>> {
        let rank = expr.rank();
        let cap = self.config().box_cap_for_rank(rank) as i64;
        let margin = self.config().margin.max(1) as i64;
        // Per shell: whether it vanishes, its least bound, its least exact bound.
        let mut shells: Vec<(bool, HalfExp, Option<HalfExp>)> = Vec::new();
        let mut extent = None;
        for r in 0..=cap {
            let bounds: Vec<TermBound> = shell(rank, r)
                .par_iter()
                .map(|p| self.point_bound(expr, p))
                .collect();
            let least = bounds.iter().map(|b| b.bound).min().expect("nonempty shell");
            let least_exact = bounds.iter().filter(|b| b.exact).map(|b| b.bound).min();
            shells.push((least >= prec, least, least_exact));
            let quiet = r + 1 >= margin && shells[(r + 1 - margin) as usize..].iter().all(|s| s.0);
            // Some inner term must have a degree no larger than any outer one.
            let witnessed = shells[..r as usize]
                .iter()
                .filter_map(|s| s.2)
                .min()
                .is_some_and(|inner| inner <= least);
            if quiet && witnessed {
                extent = Some(r);
                break;
            }
        }
        let Some(extent) = extent else {
            return Err(Error::BoxNotStabilized {
                cap: cap as u32,
            });
        };
        let extent = extent + self.config().box_pad as i64;
        let terms = cube(rank, extent)
            .into_par_iter()
            .filter(|p| self.point_bound(expr, p).bound < prec)
            .map(|p| {
                let (shift, charges) = expr.term_at(&p);
                let fs: Vec<Factor<'_>> = charges.into_iter().map(Factor::Tet).collect();
                self.product(expr.sign, shift, &fs, prec)
            })
            .collect::<Result<Vec<_>>>()?;
        let value = terms
            .iter()
            .fold(QSeries::zero(prec), |acc, t| &acc + t);
        Ok(Windowed {
            value,
            extent: Some(extent as u32),
        })
    }

    /// The figure-eight knot index `sum_{k1,k2} I(k1,k2) I(k2,k1)`.
    pub fn ind41(&self, prec: HalfExp) -> Result<QSeries> {
        Ok(self.ind41_windowed(prec)?.value)
    }

    pub fn ind41_windowed(&self, prec: HalfExp) -> Result<Windowed<QSeries>> {
        let expr = parse_expr(IND41).expect("built-in expression parses");
        self.eval_expr_windowed(&expr, prec)
    }
}
