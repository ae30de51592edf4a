//! Text input: series expressions and family files.
//!
//! Expression grammar (whitespace is insignificant):
//!
//! ```text
//! entry   := sum [ '@' 'prec' '=' ['-'] INT ]
//! sum     := ['+' | '-'] product (('+' | '-') product)*
//! product := power (('*' | '/') power)*
//! power   := atom ['^' ['-'] INT]
//! atom    := INT | VAR | '(' sum ')'
//! ```
//!
//! Variables are `x` for one variable and `x1`, `x2`, ... otherwise.
//! Univariate expressions evaluate to rational functions; multivariate ones
//! to polynomials, where `/` only divides by nonzero constants.
//!
//! A family file holds optional `field:`, `vars:` and `precision:` header
//! lines followed by entries separated by `;` or newlines. `#` starts a
//! comment.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, ParseError, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::series::{MSeries, MultiIndex, Poly, RationalFunction, Series};

/// Largest accepted exponent magnitude in `^`.
pub const MAX_EXPONENT: i64 = 1024;
/// Largest total degree an expression may reach.
pub const MAX_DEGREE: u64 = 1024;
/// Largest number of terms a multivariate expression may expand to.
pub const MAX_TERMS: u64 = 200_000;
/// Largest number of variables.
pub const MAX_VARS: usize = 32;
const MAX_DEPTH: usize = 200;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    At,
    Eq,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '@' => Tok::At,
            '=' => Tok::Eq,
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Int(s.parse().expect("digits")),
                    line,
                    col,
                });
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    col,
                });
                continue;
            }
            other => return Err(ParseError::new(line, col, format!("unexpected character {other:?}"))),
        };
        out.push(Token { tok, line, col });
        i += 1;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col: col0 + chars.len(),
    });
    Ok(out)
}

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    Var(usize),
    /// Terms with a flag for subtraction.
    Sum(Vec<(bool, Expr)>),
    /// Factors with a flag for division.
    Product(Vec<(bool, Expr)>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug)]
struct Expr {
    node: Node,
    line: usize,
    col: usize,
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    vars: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(t.line, t.col, msg))
    }

    fn expr(&self, node: Node, at: &Token) -> Expr {
        Expr {
            node,
            line: at.line,
            col: at.col,
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let t = self.peek().clone();
            return self.err(&t, "expression nested too deeply");
        }
        let start = self.peek().clone();
        let mut negate = match start.tok {
            Tok::Minus | Tok::Plus => self.bump().tok == Tok::Minus,
            _ => false,
        };
        let mut terms = Vec::new();
        loop {
            terms.push((negate, self.product()?));
            negate = match self.peek().tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
        }
        self.depth -= 1;
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().expect("one term").1);
        }
        Ok(self.expr(Node::Sum(terms), &start))
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let start = self.peek().clone();
        let mut factors = vec![(false, self.power()?)];
        loop {
            let divide = match self.peek().tok {
                Tok::Star => false,
                Tok::Slash => true,
                _ => break,
            };
            let op = self.bump();
            let f = self.power()?;
            // report division errors at the operator
            let f = if divide { self.expr(f.node, &op) } else { f };
            factors.push((divide, f));
        }
        if factors.len() == 1 {
            return Ok(factors.pop().expect("one factor").1);
        }
        Ok(self.expr(Node::Product(factors), &start))
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let caret = self.bump();
        let negative = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let t = self.bump();
        let Tok::Int(k) = &t.tok else {
            return self.err(&t, "expected an integer exponent");
        };
        let k: i64 = match i64::try_from(k) {
            Ok(k) if k <= MAX_EXPONENT => k,
            _ => return self.err(&t, format!("exponent exceeds {MAX_EXPONENT}")),
        };
        let k = if negative { -k } else { k };
        Ok(self.expr(Node::Pow(Box::new(base), k), &caret))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(v) => Ok(self.expr(Node::Int(v.clone()), &t)),
            Tok::Ident(name) => match var_index(name, self.vars) {
                Some(i) => Ok(self.expr(Node::Var(i), &t)),
                None => self.err(&t, format!("unknown variable {name:?}")),
            },
            Tok::LParen => {
                let inner = self.sum()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return self.err(&close, "expected ')'");
                }
                Ok(inner)
            }
            Tok::End => self.err(&t, "unexpected end of expression"),
            _ => self.err(&t, "expected a number, a variable or '('"),
        }
    }
}

fn var_index(name: &str, vars: usize) -> Option<usize> {
    if name == "x" && vars == 1 {
        return Some(0);
    }
    let k: usize = name.strip_prefix('x')?.parse().ok()?;
    if name.as_bytes().get(1) == Some(&b'0') {
        return None;
    }
    (1..=vars).contains(&k).then(|| k - 1)
}

/// Upper bounds on degree, expanded term count and exponent nesting.
#[derive(Clone, Copy)]
struct Size {
    degree: u64,
    terms: u64,
    weight: u64,
}

fn size(e: &Expr, vars: usize) -> Size {
    let cap = |d: u64| -> u64 {
        // number of monomials of total degree <= d in `vars` variables
        let mut acc: u64 = 1;
        for i in 1..=vars as u64 {
            acc = acc.saturating_mul(d.saturating_add(i)) / i;
            if acc > MAX_TERMS {
                return u64::MAX;
            }
        }
        acc
    };
    match &e.node {
        Node::Int(_) | Node::Var(_) => Size {
            degree: u64::from(matches!(e.node, Node::Var(_))),
            terms: 1,
            weight: 1,
        },
        Node::Sum(items) | Node::Product(items) => {
            let product = matches!(e.node, Node::Product(_));
            let mut acc = Size {
                degree: 0,
                terms: u64::from(product),
                weight: 1,
            };
            for (_, x) in items {
                let b = size(x, vars);
                if product {
                    acc.degree = acc.degree.saturating_add(b.degree);
                    acc.terms = acc.terms.saturating_mul(b.terms);
                } else {
                    acc.degree = acc.degree.max(b.degree);
                    acc.terms = acc.terms.saturating_add(b.terms);
                }
                acc.terms = acc.terms.min(cap(acc.degree));
                acc.weight = acc.weight.max(b.weight);
            }
            acc
        }
        Node::Pow(a, k) => {
            let a = size(a, vars);
            let k = k.unsigned_abs();
            let degree = a.degree.saturating_mul(k);
            let terms = a.terms.saturating_pow(k.min(64) as u32);
            Size {
                degree,
                terms: terms.min(cap(degree)),
                weight: a.weight.saturating_mul(k.max(1)),
            }
        }
    }
}

fn check_size(e: &Expr, vars: usize) -> Result<(), ParseError> {
    let s = size(e, vars);
    if s.degree > MAX_DEGREE {
        return Err(ParseError::new(
            e.line,
            e.col,
            format!("expression degree exceeds {MAX_DEGREE}"),
        ));
    }
    if vars > 1 && s.terms > MAX_TERMS {
        return Err(ParseError::new(
            e.line,
            e.col,
            format!("expression expands past {MAX_TERMS} terms"),
        ));
    }
    if s.weight > MAX_EXPONENT as u64 {
        return Err(ParseError::new(e.line, e.col, "nested powers are too large"));
    }
    Ok(())
}

/// A parsed entry before evaluation.
struct Parsed {
    expr: Expr,
    precision: Option<(i64, usize, usize)>,
}

fn parse_entry(text: &str, vars: usize, line: usize, col0: usize) -> Result<Parsed, ParseError> {
    if vars == 0 || vars > MAX_VARS {
        return Err(ParseError::new(
            line,
            col0,
            format!("number of variables must be in 1..={MAX_VARS}"),
        ));
    }
    let toks = lex(text, line, col0)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        vars,
        depth: 0,
    };
    let expr = p.sum()?;
    let mut precision = None;
    if p.peek().tok == Tok::At {
        let at = p.bump();
        let kw = p.bump();
        if kw.tok != Tok::Ident("prec".into()) {
            return p.err(&kw, "expected 'prec' after '@'");
        }
        let eq = p.bump();
        if eq.tok != Tok::Eq {
            return p.err(&eq, "expected '='");
        }
        let negative = p.peek().tok == Tok::Minus;
        if negative {
            p.bump();
        }
        let t = p.bump();
        let Tok::Int(v) = &t.tok else {
            return p.err(&t, "expected an integer precision");
        };
        let v = match i64::try_from(v) {
            Ok(v) if v <= MAX_DEGREE as i64 => v,
            _ => return p.err(&t, format!("precision exceeds {MAX_DEGREE}")),
        };
        precision = Some((if negative { -v } else { v }, at.line, at.col));
    }
    let end = p.bump();
    if end.tok != Tok::End {
        return p.err(&end, "unexpected input after expression");
    }
    check_size(&expr, vars)?;
    Ok(Parsed { expr, precision })
}

fn eval_rational(e: &Expr, field: FieldSpec) -> Result<RationalFunction, ParseError> {
    let at = |msg: String| ParseError::new(e.line, e.col, msg);
    Ok(match &e.node {
        Node::Int(v) => RationalFunction::from_poly(Poly::constant(field.bigint(v))),
        Node::Var(_) => RationalFunction::from_poly(Poly::x_pow(field, 1)),
        Node::Sum(items) => {
            let mut acc = RationalFunction::from_poly(Poly::zero(field));
            for (negate, x) in items {
                let v = eval_rational(x, field)?;
                acc = if *negate { acc.sub(&v) } else { acc.add(&v) };
            }
            acc
        }
        Node::Product(items) => {
            let mut acc = RationalFunction::from_poly(Poly::constant(field.one()));
            for (divide, x) in items {
                let v = eval_rational(x, field)?;
                acc = if *divide {
                    acc.div(&v)
                        .map_err(|err| ParseError::new(x.line, x.col, err.to_string()))?
                } else {
                    acc.mul(&v)
                };
            }
            acc
        }
        Node::Pow(a, k) => eval_rational(a, field)?.pow(*k).map_err(|err| at(err.to_string()))?,
    })
}

fn eval_poly(e: &Expr, field: FieldSpec, vars: usize) -> Result<MSeries, ParseError> {
    let at = |msg: &str| ParseError::new(e.line, e.col, msg);
    Ok(match &e.node {
        Node::Int(v) => MSeries::monomial(field.bigint(v), vec![0; vars]),
        Node::Var(i) => {
            let mut j: MultiIndex = vec![0; vars];
            j[*i] = 1;
            MSeries::monomial(field.one(), j)
        }
        Node::Sum(items) => {
            let mut acc = MSeries::zero(field, vars);
            for (negate, x) in items {
                let v = eval_poly(x, field, vars)?;
                acc = if *negate { acc.sub(&v) } else { acc.add(&v) };
            }
            acc
        }
        Node::Product(items) => {
            let mut acc = MSeries::monomial(field.one(), vec![0; vars]);
            for (divide, x) in items {
                let v = eval_poly(x, field, vars)?;
                if !*divide {
                    acc = acc.mul(&v);
                    continue;
                }
                let here = |m: &str| ParseError::new(x.line, x.col, m);
                let constant = match v.num_terms() {
                    0 => return Err(here("division by zero")),
                    1 if v.total_degree() == Some(0) => v.coeff(&vec![0; vars]),
                    _ => None,
                };
                let c = constant.ok_or_else(|| here("multivariate entries may only divide by constants"))?;
                acc = acc.scale(&c.inv().expect("nonzero"));
            }
            acc
        }
        Node::Pow(a, k) => {
            if *k < 0 {
                return Err(at("negative powers are not allowed in multivariate entries"));
            }
            let base = eval_poly(a, field, vars)?;
            let mut acc = MSeries::monomial(field.one(), vec![0; vars]);
            let mut sq = base;
            let mut k = *k;
            while k > 0 {
                if k & 1 == 1 {
                    acc = acc.mul(&sq);
                }
                k >>= 1;
                if k > 0 {
                    sq = sq.mul(&sq);
                }
            }
            acc
        }
    })
}

/// Parses a univariate expression as an exact rational function, with its
/// `@prec=` annotation if present.
pub fn parse_rational(text: &str, field: FieldSpec) -> Result<(RationalFunction, Option<i64>), ParseError> {
    parse_rational_at(text, field, 1, 1)
}

fn parse_rational_at(
    text: &str,
    field: FieldSpec,
    line: usize,
    col: usize,
) -> Result<(RationalFunction, Option<i64>), ParseError> {
    let p = parse_entry(text, 1, line, col)?;
    Ok((eval_rational(&p.expr, field)?, p.precision.map(|(t, ..)| t)))
}

/// Parses a univariate series. Without `@prec=` the expression must be a
/// Laurent polynomial and the result is exact; with `@prec=T` any rational
/// expression is expanded around 0 and truncated at `T`.
pub fn parse_series(text: &str, field: FieldSpec) -> Result<Series, ParseError> {
    let p = parse_entry(text, 1, 1, 1)?;
    let f = eval_rational(&p.expr, field)?;
    rational_to_series(&f, p.precision, &p.expr)
}

fn rational_to_series(
    f: &RationalFunction,
    precision: Option<(i64, usize, usize)>,
    e: &Expr,
) -> Result<Series, ParseError> {
    match precision {
        None => f
            .as_laurent_polynomial()
            .ok_or_else(|| ParseError::new(e.line, e.col, "not a Laurent polynomial; add @prec=T to expand it")),
        Some((t, line, col)) => f
            .laurent_series(t)
            .map_err(|err| ParseError::new(line, col, err.to_string())),
    }
}

/// Parses a multivariate polynomial in `x1..x_vars`, truncated when `@prec=T` is given.
pub fn parse_mseries(text: &str, field: FieldSpec, vars: usize) -> Result<MSeries, ParseError> {
    parse_mseries_at(text, field, vars, 1, 1)
}

fn parse_mseries_at(text: &str, field: FieldSpec, vars: usize, line: usize, col: usize) -> Result<MSeries, ParseError> {
    let p = parse_entry(text, vars, line, col)?;
    let s = eval_poly(&p.expr, field, vars)?;
    match p.precision {
        None => Ok(s),
        Some((t, l, c)) if t >= 1 => {
            let t = u32::try_from(t).map_err(|_| ParseError::new(l, c, "precision out of range"))?;
            Ok(s.truncate(t))
        }
        Some((_, l, c)) => Err(ParseError::new(l, c, "total-degree precision must be positive")),
    }
}

/// One family member as written in a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntrySource {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

/// A parsed family file. Header values are kept separate from the entries so
/// command-line flags can override them before evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyFile {
    pub field: Option<FieldSpec>,
    pub vars: Option<usize>,
    pub precision: Option<i64>,
    pub entries: Vec<EntrySource>,
}

/// A univariate family, as the certifier wants it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnivariateFamily {
    /// Laurent polynomials or truncated series.
    Series(Vec<Series>),
    /// Genuine rational functions, expanded at certification time.
    Rational {
        members: Vec<RationalFunction>,
        precision: Option<i64>,
    },
}

impl FamilyFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut file = FamilyFile {
            field: None,
            vars: None,
            precision: None,
            entries: Vec::new(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            if let Some((key, value)) = header(content) {
                if !file.entries.is_empty() {
                    return Err(ParseError::new(line, 1, "headers must precede the entries"));
                }
                let vcol = content.find(':').map_or(1, |i| {
                    let rest = &content[i + 1..];
                    content[..i + 1].chars().count() + rest.chars().take_while(|c| c.is_whitespace()).count() + 1
                });
                let value_err = |m: String| ParseError::new(line, vcol, m);
                match key {
                    "field" => {
                        let spec = FieldSpec::from_str(value).map_err(|e| value_err(e.to_string()))?;
                        set_once(&mut file.field, spec, line)?;
                    }
                    "vars" => {
                        let v: usize = value
                            .parse()
                            .map_err(|_| value_err(format!("invalid vars {value:?}")))?;
                        if v == 0 || v > MAX_VARS {
                            return Err(value_err(format!("vars must be in 1..={MAX_VARS}")));
                        }
                        set_once(&mut file.vars, v, line)?;
                    }
                    _ => {
                        let v: i64 = value
                            .parse()
                            .map_err(|_| value_err(format!("invalid precision {value:?}")))?;
                        if v.unsigned_abs() > MAX_DEGREE {
                            return Err(value_err(format!("precision exceeds {MAX_DEGREE}")));
                        }
                        set_once(&mut file.precision, v, line)?;
                    }
                }
                continue;
            }
            let mut start = 0;
            for piece in content.split(';') {
                let lead = piece.len() - piece.trim_start().len();
                if !piece.trim().is_empty() {
                    file.entries.push(EntrySource {
                        text: piece.trim().to_string(),
                        line,
                        column: content[..start + lead].chars().count() + 1,
                    });
                }
                start += piece.len() + 1;
            }
        }
        Ok(file)
    }

    pub fn field_or_default(&self) -> FieldSpec {
        self.field.unwrap_or(FieldSpec::RATIONALS)
    }

    pub fn vars_or_default(&self) -> usize {
        self.vars.unwrap_or(1)
    }

    fn require_entries(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(())
    }

    /// Evaluates a one-variable file.
    ///
    /// Entries with `@prec=` become truncated series; the others stay exact
    /// Laurent polynomials, or are expanded to the file precision. With no
    /// annotation anywhere, a family containing a genuine rational function
    /// is returned as such.
    pub fn univariate(&self) -> Result<UnivariateFamily> {
        self.require_entries()?;
        if self.vars_or_default() != 1 {
            return Err(Error::Malformed("file declares more than one variable".into()));
        }
        let field = self.field_or_default();
        let mut parsed = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let p = parse_entry(&e.text, 1, e.line, e.column)?;
            let f = eval_rational(&p.expr, field)?;
            parsed.push((p, f));
        }
        let annotated = parsed.iter().any(|(p, _)| p.precision.is_some());
        let all_laurent = parsed.iter().all(|(_, f)| f.as_laurent_polynomial().is_some());
        if !annotated && !all_laurent {
            return Ok(UnivariateFamily::Rational {
                members: parsed.into_iter().map(|(_, f)| f).collect(),
                precision: self.precision,
            });
        }
        let mut out = Vec::with_capacity(parsed.len());
        for ((p, f), src) in parsed.iter().zip(&self.entries) {
            let precision = p
                .precision
                .or_else(|| self.precision.map(|t| (t, src.line, src.column)));
            let s = match precision {
                None if f.as_laurent_polynomial().is_none() => {
                    return Err(ParseError::new(
                        src.line,
                        src.column,
                        "rational entry needs a precision in this family",
                    )
                    .into())
                }
                _ => rational_to_series(f, precision, &p.expr)?,
            };
            out.push(s);
        }
        Ok(UnivariateFamily::Series(out))
    }

    /// Evaluates a file in `vars` variables (`x1, x2, ...`).
    pub fn multivariate(&self) -> Result<Vec<MSeries>> {
        self.require_entries()?;
        let field = self.field_or_default();
        let vars = self.vars_or_default();
        let mut out = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let mut s = parse_mseries_at(&e.text, field, vars, e.line, e.column)?;
            if let Some(t) = self.precision {
                if t < 1 {
                    return Err(Error::Malformed("total-degree precision must be positive".into()));
                }
                s = s.truncate(t as u32);
            }
            out.push(s);
        }
        Ok(out)
    }
}

fn header(content: &str) -> Option<(&str, &str)> {
    let (key, value) = content.split_once(':')?;
    let key = key.trim();
    matches!(key, "field" | "vars" | "precision").then(|| (key, value.trim()))
}

fn set_once<T>(slot: &mut Option<T>, v: T, line: usize) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(ParseError::new(line, 1, "duplicate header"));
    }
    *slot = Some(v);
    Ok(())
}

/// Parses a coefficient such as `-3/2` into the field.
pub fn parse_scalar(text: &str, field: FieldSpec) -> Result<FieldElement, ParseError> {
    let p = parse_entry(text, 1, 1, 1)?;
    let f = eval_rational(&p.expr, field)?;
    let s = f
        .as_laurent_polynomial()
        .filter(|s| s.degree().unwrap_or(0) == 0 && s.order().unwrap_or(0) == 0)
        .ok_or_else(|| ParseError::new(1, 1, "expected a constant"))?;
    Ok(s.coeff(0).expect("exact"))
}
