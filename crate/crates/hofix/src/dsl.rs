//! The input language: line-oriented declarations of generators,
//! differentials, bases, retractions, builders, and psi assignments, with
//! positioned diagnostics and a canonical printer that parses back to the
//! same document.

use crate::algebra::{q, Q};
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, Copy)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

// Spans never participate in document equality: two declarations are the
// same declaration wherever they were written.
impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned message; parse and validation failures always carry one.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub message: String,
    pub suggestion: Option<String>,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            span,
            message: message.into(),
            suggestion: None,
        }
    }

    pub fn with_suggestion(mut self, s: impl Into<String>) -> Diagnostic {
        self.suggestion = Some(s.into());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {}: {}", self.span, kind, self.message)?;
        if let Some(s) = &self.suggestion {
            write!(f, " (hint: {})", s)?;
        }
        Ok(())
    }
}

/// A normalized polynomial expression: merged duplicate terms, no zero
/// coefficients, deterministic term order. Factors keep the order they
/// were written in — reordering factors of odd degree would change the
/// sign, and degrees are unknown until the document is resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<ExprTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprTerm {
    pub coeff: Q,
    /// (name, exponent), in written order; adjacent equal names merge.
    pub factors: Vec<(String, u32)>,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr { terms: Vec::new() }
    }

    fn from_terms(mut terms: Vec<ExprTerm>) -> Expr {
        use std::collections::BTreeMap;
        let mut merged: BTreeMap<Vec<(String, u32)>, Q> = BTreeMap::new();
        for t in terms.drain(..) {
            let e = merged.entry(t.factors).or_insert_with(Q::zero);
            *e = &*e + &t.coeff;
        }
        Expr {
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(factors, coeff)| ExprTerm { coeff, factors })
                .collect(),
        }
    }

    fn mul(&self, other: &Expr) -> Expr {
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                out.push(ExprTerm {
                    coeff: &a.coeff * &b.coeff,
                    factors: merge_adjacent(factors),
                });
            }
        }
        Expr::from_terms(out)
    }

    fn pow(&self, e: u32) -> Expr {
        let mut out = Expr {
            terms: vec![ExprTerm {
                coeff: q(1),
                factors: Vec::new(),
            }],
        };
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    fn add(&self, other: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Expr::from_terms(terms)
    }

    fn neg(&self) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|t| ExprTerm {
                    coeff: -&t.coeff,
                    factors: t.factors.clone(),
                })
                .collect(),
        }
    }
}

/// Collapse runs of the same name; only adjacent merges are sign-free.
fn merge_adjacent(factors: Vec<(String, u32)>) -> Vec<(String, u32)> {
    let mut out: Vec<(String, u32)> = Vec::with_capacity(factors.len());
    for (name, e) in factors {
        match out.last_mut() {
            Some((last, exp)) if *last == name => *exp += e,
            _ => out.push((name, e)),
        }
    }
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::{One, Signed};
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.terms {
            let neg = t.coeff.is_negative();
            let abs = t.coeff.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut pieces = Vec::new();
            if !abs.is_one() || t.factors.is_empty() {
                pieces.push(abs.to_string());
            }
            for (name, e) in &t.factors {
                if *e == 1 {
                    pieces.push(name.clone());
                } else {
                    pieces.push(format!("{}^{}", name, e));
                }
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

/// The base block: a truncated polynomial algebra or an explicit table.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseDecl {
    Poly {
        vars: Vec<(String, i64)>,
        truncate: i64,
        span: Span,
    },
    Table {
        elems: Vec<(String, i64)>,
        unit: Option<String>,
        products: Vec<(String, String, Expr, Span)>,
        diffs: Vec<(String, Expr, Span)>,
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BorelDecl {
    pub family: String,
    pub n: i64,
    pub torus: usize,
    pub lambdas: Vec<Q>,
    pub truncate: Option<i64>,
    pub fixed: Option<i64>,
    pub span: Span,
}

/// Everything a source file can declare.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelDocument {
    pub gens: Vec<(String, i64, Span)>,
    pub diffs: Vec<(String, Expr, Span)>,
    pub base: Option<BaseDecl>,
    pub retracts: Vec<(String, Expr, Span)>,
    pub borel: Option<BorelDecl>,
    pub fixed_gens: Vec<(String, i64, Span)>,
    pub fixed_diffs: Vec<(String, Expr, Span)>,
    pub psi: Vec<(String, Expr, Span)>,
    pub command: Option<(String, Span)>,
}

impl ModelDocument {
    /// Canonical text form; parsing it back produces an equal document.
    pub fn print(&self) -> String {
        let mut out = String::new();
        use std::fmt::Write;
        match &self.base {
            Some(BaseDecl::Poly { vars, truncate, .. }) => {
                let vs: Vec<String> =
                    vars.iter().map(|(n, d)| format!("{}:{}", n, d)).collect();
                let _ = writeln!(out, "base poly {} truncate {}", vs.join(" "), truncate);
            }
            Some(BaseDecl::Table {
                elems,
                unit,
                products,
                diffs,
                ..
            }) => {
                let es: Vec<String> =
                    elems.iter().map(|(n, d)| format!("{}:{}", n, d)).collect();
                let _ = writeln!(out, "base elems {}", es.join(" "));
                if let Some(u) = unit {
                    let _ = writeln!(out, "base unit {}", u);
                }
                for (a, b, e, _) in products {
                    let _ = writeln!(out, "base mul {} * {} = {}", a, b, e);
                }
                for (g, e, _) in diffs {
                    let _ = writeln!(out, "base d {} = {}", g, e);
                }
            }
            None => {}
        }
        if let Some(b) = &self.borel {
            let mut line = format!("borel {} n={}", b.family, b.n);
            if b.torus != 1 {
                line.push_str(&format!(" torus={}", b.torus));
            }
            if !b.lambdas.is_empty() {
                let ls: Vec<String> = b.lambdas.iter().map(|l| l.to_string()).collect();
                line.push_str(&format!(" lambda={}", ls.join(",")));
            }
            if let Some(t) = b.truncate {
                line.push_str(&format!(" trunc={}", t));
            }
            if let Some(j) = b.fixed {
                line.push_str(&format!(" fixed={}", j));
            }
            let _ = writeln!(out, "{}", line);
        }
        for (n, d, _) in &self.gens {
            let _ = writeln!(out, "gen {} : {}", n, d);
        }
        for (n, e, _) in &self.diffs {
            let _ = writeln!(out, "d {} = {}", n, e);
        }
        for (n, e, _) in &self.retracts {
            let _ = writeln!(out, "retract {} = {}", n, e);
        }
        for (n, d, _) in &self.fixed_gens {
            let _ = writeln!(out, "fixed gen {} : {}", n, d);
        }
        for (n, e, _) in &self.fixed_diffs {
            let _ = writeln!(out, "fixed d {} = {}", n, e);
        }
        for (n, e, _) in &self.psi {
            let _ = writeln!(out, "psi {} = {}", n, e);
        }
        if let Some((c, _)) = &self.command {
            let _ = writeln!(out, "command {}", c);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(i64),
    Rational(Q),
    Plus,
    Minus,
    Star,
    Caret,
    Colon,
    Equals,
    Comma,
    LParen,
    RParen,
}

struct Lexer<'a> {
    line: &'a str,
    line_no: usize,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(line: &'a str, line_no: usize) -> Lexer<'a> {
        Lexer {
            line,
            line_no,
            pos: 0,
        }
    }

    fn span(&self) -> Span {
        Span {
            line: self.line_no,
            col: self.pos + 1,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Token, Span)>, Diagnostic> {
        let bytes = self.line.as_bytes();
        let mut out = Vec::new();
        while self.pos < bytes.len() {
            let c = bytes[self.pos] as char;
            let span = self.span();
            match c {
                ' ' | '\t' | '\r' => {
                    self.pos += 1;
                }
                '#' => break,
                '+' => {
                    out.push((Token::Plus, span));
                    self.pos += 1;
                }
                '-' => {
                    out.push((Token::Minus, span));
                    self.pos += 1;
                }
                '*' => {
                    out.push((Token::Star, span));
                    self.pos += 1;
                }
                '^' => {
                    out.push((Token::Caret, span));
                    self.pos += 1;
                }
                ':' => {
                    out.push((Token::Colon, span));
                    self.pos += 1;
                }
                '=' => {
                    out.push((Token::Equals, span));
                    self.pos += 1;
                }
                ',' => {
                    out.push((Token::Comma, span));
                    self.pos += 1;
                }
                '(' => {
                    out.push((Token::LParen, span));
                    self.pos += 1;
                }
                ')' => {
                    out.push((Token::RParen, span));
                    self.pos += 1;
                }
                '0'..='9' => {
                    let start = self.pos;
                    while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let num: i64 = self.line[start..self.pos].parse().map_err(|_| {
                        Diagnostic::error(span, "integer literal out of range")
                    })?;
                    // A following '/' digit run is a rational literal.
                    if self.pos < bytes.len()
                        && bytes[self.pos] == b'/'
                        && self.pos + 1 < bytes.len()
                        && bytes[self.pos + 1].is_ascii_digit()
                    {
                        self.pos += 1;
                        let dstart = self.pos;
                        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                            self.pos += 1;
                        }
                        let den: i64 =
                            self.line[dstart..self.pos].parse().map_err(|_| {
                                Diagnostic::error(span, "integer literal out of range")
                            })?;
                        if den == 0 {
                            return Err(Diagnostic::error(span, "zero denominator"));
                        }
                        out.push((Token::Rational(Q::new(num.into(), den.into())), span));
                    } else {
                        out.push((Token::Int(num), span));
                    }
                }
                c if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while self.pos < bytes.len()
                        && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let mut name = self.line[start..self.pos].to_string();
                    // Angle-bracketed suffixes name section-model generators,
                    // so canonical output parses back.
                    if self.pos < bytes.len() && bytes[self.pos] == b'<' {
                        let close = self.line[self.pos..].find('>').ok_or_else(|| {
                            Diagnostic::error(span, "unterminated generator name")
                        })?;
                        name.push_str(&self.line[self.pos..self.pos + close + 1]);
                        self.pos += close + 1;
                    }
                    out.push((Token::Ident(name), span));
                }
                _ => {
                    return Err(Diagnostic::error(
                        span,
                        format!("unexpected character `{}`", c),
                    ));
                }
            }
        }
        Ok(out)
    }
}

struct LineParser {
    tokens: Vec<(Token, Span)>,
    pos: usize,
    line_span: Span,
}

impl LineParser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        self.tokens
            .get(self.pos)
            .map(|&(_, s)| s)
            .unwrap_or(self.line_span)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, Diagnostic> {
        let span = self.span();
        match self.next() {
            Some(Token::Ident(s)) => Ok(s),
            _ => Err(Diagnostic::error(span, format!("expected {}", what))),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<i64, Diagnostic> {
        let span = self.span();
        match self.next() {
            Some(Token::Int(n)) => Ok(n),
            Some(Token::Minus) => match self.next() {
                Some(Token::Int(n)) => Ok(-n),
                _ => Err(Diagnostic::error(span, format!("expected {}", what))),
            },
            _ => Err(Diagnostic::error(span, format!("expected {}", what))),
        }
    }

    fn expect_token(&mut self, t: Token, what: &str) -> Result<(), Diagnostic> {
        let span = self.span();
        match self.next() {
            Some(found) if found == t => Ok(()),
            _ => Err(Diagnostic::error(span, format!("expected `{}`", what))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.tokens.len()
    }

    fn expect_end(&self) -> Result<(), Diagnostic> {
        if self.at_end() {
            Ok(())
        } else {
            Err(Diagnostic::error(self.span(), "trailing input on line"))
        }
    }

    fn parse_rational(&mut self) -> Result<Q, Diagnostic> {
        let span = self.span();
        let negative = if self.peek() == Some(&Token::Minus) {
            self.next();
            true
        } else {
            false
        };
        let value = match self.next() {
            Some(Token::Int(n)) => q(n),
            Some(Token::Rational(r)) => r,
            _ => return Err(Diagnostic::error(span, "expected a rational number")),
        };
        Ok(if negative { -value } else { value })
    }

    // expr := term (('+' | '-') term)*
    fn parse_expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    acc = acc.add(&self.parse_term()?);
                }
                Some(Token::Minus) => {
                    self.next();
                    acc = acc.add(&self.parse_term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor ('*' factor)*
    fn parse_term(&mut self) -> Result<Expr, Diagnostic> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(&Token::Star) {
            self.next();
            acc = acc.mul(&self.parse_factor()?);
        }
        Ok(acc)
    }

    // factor := atom ('^' INT)?
    fn parse_factor(&mut self) -> Result<Expr, Diagnostic> {
        let atom = self.parse_atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.next();
            let span = self.span();
            match self.next() {
                Some(Token::Int(n)) if n >= 0 => Ok(atom.pow(n as u32)),
                _ => Err(Diagnostic::error(span, "expected a non-negative exponent")),
            }
        } else {
            Ok(atom)
        }
    }

    fn parse_atom(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.span();
        match self.next() {
            Some(Token::Int(n)) => Ok(Expr {
                terms: if n == 0 {
                    Vec::new()
                } else {
                    vec![ExprTerm {
                        coeff: q(n),
                        factors: Vec::new(),
                    }]
                },
            }),
            Some(Token::Rational(r)) => Ok(Expr {
                terms: vec![ExprTerm {
                    coeff: r,
                    factors: Vec::new(),
                }],
            }),
            Some(Token::Ident(name)) => Ok(Expr {
                terms: vec![ExprTerm {
                    coeff: q(1),
                    factors: vec![(name, 1)],
                }],
            }),
            Some(Token::Minus) => Ok(self.parse_factor()?.neg()),
            Some(Token::LParen) => {
                let e = self.parse_expr()?;
                self.expect_token(Token::RParen, ")")?;
                Ok(e)
            }
            _ => Err(Diagnostic::error(span, "expected a polynomial term")),
        }
    }
}

/// Parse a whole document. All diagnostics are collected; the document is
/// returned only when there are none.
pub fn parse(input: &str) -> Result<ModelDocument, Vec<Diagnostic>> {
    let mut doc = ModelDocument::default();
    let mut diagnostics = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line_span = Span {
            line: line_no,
            col: 1,
        };
        let tokens = match Lexer::new(raw, line_no).tokens() {
            Ok(t) => t,
            Err(d) => {
                diagnostics.push(d);
                continue;
            }
        };
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser {
            tokens,
            pos: 0,
            line_span,
        };
        if let Err(d) = parse_statement(&mut p, &mut doc, line_span) {
            diagnostics.push(d);
        }
    }
    if diagnostics.is_empty() {
        Ok(doc)
    } else {
        Err(diagnostics)
    }
}

fn parse_statement(
    p: &mut LineParser,
    doc: &mut ModelDocument,
    span: Span,
) -> Result<(), Diagnostic> {
    let head = p.expect_ident("a statement keyword")?;
    match head.as_str() {
        "gen" => {
            let name = p.expect_ident("a generator name")?;
            p.expect_token(Token::Colon, ":")?;
            let degree = p.expect_int("an integer degree")?;
            p.expect_end()?;
            doc.gens.push((name, degree, span));
        }
        "d" => {
            let name = p.expect_ident("a generator name")?;
            p.expect_token(Token::Equals, "=")?;
            let e = p.parse_expr()?;
            p.expect_end()?;
            doc.diffs.push((name, e, span));
        }
        "base" => parse_base(p, doc, span)?,
        "retract" => {
            let name = p.expect_ident("a generator name")?;
            p.expect_token(Token::Equals, "=")?;
            let e = p.parse_expr()?;
            p.expect_end()?;
            doc.retracts.push((name, e, span));
        }
        "borel" => {
            let decl = parse_borel(p, span)?;
            if doc.borel.is_some() {
                return Err(Diagnostic::error(span, "duplicate borel builder"));
            }
            doc.borel = Some(decl);
        }
        "fixed" => {
            let sub = p.expect_ident("`gen` or `d`")?;
            match sub.as_str() {
                "gen" => {
                    let name = p.expect_ident("a generator name")?;
                    p.expect_token(Token::Colon, ":")?;
                    let degree = p.expect_int("an integer degree")?;
                    p.expect_end()?;
                    doc.fixed_gens.push((name, degree, span));
                }
                "d" => {
                    let name = p.expect_ident("a generator name")?;
                    p.expect_token(Token::Equals, "=")?;
                    let e = p.parse_expr()?;
                    p.expect_end()?;
                    doc.fixed_diffs.push((name, e, span));
                }
                _ => return Err(Diagnostic::error(span, "expected `fixed gen` or `fixed d`")),
            }
        }
        "psi" => {
            let name = p.expect_ident("a generator name")?;
            p.expect_token(Token::Equals, "=")?;
            let e = p.parse_expr()?;
            p.expect_end()?;
            doc.psi.push((name, e, span));
        }
        "command" => {
            let name = p.expect_ident("a command name")?;
            p.expect_end()?;
            if doc.command.is_some() {
                return Err(Diagnostic::error(span, "duplicate command directive"));
            }
            doc.command = Some((name, span));
        }
        other => {
            return Err(Diagnostic::error(
                span,
                format!("unknown statement `{}`", other),
            )
            .with_suggestion(
                "expected one of: gen, d, base, retract, borel, fixed, psi, command",
            ));
        }
    }
    Ok(())
}

fn parse_base(
    p: &mut LineParser,
    doc: &mut ModelDocument,
    span: Span,
) -> Result<(), Diagnostic> {
    let kind = p.expect_ident("`poly`, `elems`, `unit`, `mul`, or `d`")?;
    match kind.as_str() {
        "poly" => {
            let mut vars = Vec::new();
            loop {
                let name = p.expect_ident("a variable name")?;
                if name == "truncate" {
                    return Err(Diagnostic::error(span, "missing variables before truncate"));
                }
                p.expect_token(Token::Colon, ":")?;
                let degree = p.expect_int("an integer degree")?;
                vars.push((name, degree));
                if let Some(Token::Ident(s)) = p.peek() {
                    if s == "truncate" {
                        p.next();
                        break;
                    }
                } else if p.at_end() {
                    return Err(Diagnostic::error(span, "missing `truncate <N>`"));
                }
            }
            let truncate = p.expect_int("a truncation degree")?;
            p.expect_end()?;
            if doc.base.is_some() {
                return Err(Diagnostic::error(span, "duplicate base declaration"));
            }
            doc.base = Some(BaseDecl::Poly {
                vars,
                truncate,
                span,
            });
        }
        "elems" => {
            let mut elems = Vec::new();
            while !p.at_end() {
                let name = p.expect_ident("an element name")?;
                p.expect_token(Token::Colon, ":")?;
                let degree = p.expect_int("an integer degree")?;
                elems.push((name, degree));
            }
            if doc.base.is_some() {
                return Err(Diagnostic::error(span, "duplicate base declaration"));
            }
            doc.base = Some(BaseDecl::Table {
                elems,
                unit: None,
                products: Vec::new(),
                diffs: Vec::new(),
                span,
            });
        }
        "unit" => {
            let name = p.expect_ident("an element name")?;
            p.expect_end()?;
            match &mut doc.base {
                Some(BaseDecl::Table { unit, .. }) => *unit = Some(name),
                _ => {
                    return Err(Diagnostic::error(
                        span,
                        "base unit needs a preceding `base elems` line",
                    ))
                }
            }
        }
        "mul" => {
            let a = p.expect_ident("an element name")?;
            p.expect_token(Token::Star, "*")?;
            let b = p.expect_ident("an element name")?;
            p.expect_token(Token::Equals, "=")?;
            let e = p.parse_expr()?;
            p.expect_end()?;
            match &mut doc.base {
                Some(BaseDecl::Table { products, .. }) => products.push((a, b, e, span)),
                _ => {
                    return Err(Diagnostic::error(
                        span,
                        "base mul needs a preceding `base elems` line",
                    ))
                }
            }
        }
        "d" => {
            let g = p.expect_ident("an element name")?;
            p.expect_token(Token::Equals, "=")?;
            let e = p.parse_expr()?;
            p.expect_end()?;
            match &mut doc.base {
                Some(BaseDecl::Table { diffs, .. }) => diffs.push((g, e, span)),
                _ => {
                    return Err(Diagnostic::error(
                        span,
                        "base d needs a preceding `base elems` line",
                    ))
                }
            }
        }
        other => {
            return Err(Diagnostic::error(
                span,
                format!("unknown base declaration `{}`", other),
            ));
        }
    }
    Ok(())
}

fn parse_borel(p: &mut LineParser, span: Span) -> Result<BorelDecl, Diagnostic> {
    let family = p.expect_ident("a builder family")?;
    match family.as_str() {
        "odd_sphere" | "even_sphere" | "cp" => {}
        other => {
            return Err(Diagnostic::error(
                span,
                format!("unknown builder family `{}`", other),
            )
            .with_suggestion("expected odd_sphere, even_sphere, or cp"));
        }
    }
    let mut decl = BorelDecl {
        family,
        n: 0,
        torus: 1,
        lambdas: Vec::new(),
        truncate: None,
        fixed: None,
        span,
    };
    let mut saw_n = false;
    while !p.at_end() {
        let key = p.expect_ident("a parameter name")?;
        p.expect_token(Token::Equals, "=")?;
        match key.as_str() {
            "n" => {
                decl.n = p.expect_int("an integer")?;
                saw_n = true;
            }
            "torus" => {
                let t = p.expect_int("a positive rank")?;
                if t < 1 {
                    return Err(Diagnostic::error(span, "torus rank must be positive"));
                }
                decl.torus = t as usize;
            }
            "lambda" => {
                decl.lambdas.push(p.parse_rational()?);
                while p.peek() == Some(&Token::Comma) {
                    p.next();
                    decl.lambdas.push(p.parse_rational()?);
                }
            }
            "trunc" => decl.truncate = Some(p.expect_int("a truncation degree")?),
            "fixed" => decl.fixed = Some(p.expect_int("a fixed sphere dimension")?),
            other => {
                return Err(Diagnostic::error(
                    span,
                    format!("unknown builder parameter `{}`", other),
                ));
            }
        }
    }
    if !saw_n {
        return Err(Diagnostic::error(span, "builder needs n=<dimension>"));
    }
    Ok(decl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qr;

    #[test]
    fn parse_sphere_document() {
        let doc = parse("gen x : 2\ngen y : 3\nd y = x^2\n").unwrap();
        assert_eq!(doc.gens.len(), 2);
        assert_eq!(doc.diffs.len(), 1);
        assert_eq!(doc.diffs[0].1.to_string(), "x^2");
    }

    #[test]
    fn parse_twisted_line_with_rational() {
        let doc = parse(
            "base poly a:2 truncate 4\ngen x : 2\ngen y : 3\nd y = x^2 + 1/2*a*x\n",
        )
        .unwrap();
        let e = &doc.diffs[0].1;
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[0].coeff, qr(1, 2));
        assert_eq!(e.to_string(), "1/2*a*x + x^2");
    }

    #[test]
    fn diagnostics_carry_spans() {
        let err = parse("gen x : two\n").unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(err[0].span.line, 1);
        assert!(err[0].message.contains("degree"));

        let err = parse("gen x : 2\nd y = x +\n").unwrap_err();
        assert_eq!(err[0].span.line, 2);
    }

    #[test]
    fn unknown_statement_suggests() {
        let err = parse("generate x : 2\n").unwrap_err();
        assert!(err[0].suggestion.is_some());
    }

    #[test]
    fn parse_borel_builders() {
        let doc = parse("borel odd_sphere n=3 torus=2 trunc=4\n").unwrap();
        let b = doc.borel.unwrap();
        assert_eq!(b.family, "odd_sphere");
        assert_eq!((b.n, b.torus, b.truncate), (3, 2, Some(4)));

        let doc = parse("borel cp n=2 lambda=1,-3/2\n").unwrap();
        let b = doc.borel.unwrap();
        assert_eq!(b.lambdas, vec![q(1), qr(-3, 2)]);
    }

    #[test]
    fn print_is_a_parser_fixpoint() {
        let source = "\
base poly a:2 truncate 6
gen x : 2
gen y : 5
d y = x^3 + 2*a*x^2 - 1/3*a^2*x
retract x = 0
command components
";
        let doc = parse(source).unwrap();
        let printed = doc.print();
        let doc2 = parse(&printed).unwrap();
        assert_eq!(doc, doc2);
        assert_eq!(doc2.print(), printed);
    }

    #[test]
    fn table_base_and_fixed_side_parse() {
        let source = "\
base elems one:0 e:2
base unit one
base mul e * e = 0
gen x : 3
fixed gen z : 3
fixed d z = 0
psi x = e*z
";
        let doc = parse(source).unwrap();
        assert!(matches!(doc.base, Some(BaseDecl::Table { .. })));
        assert_eq!(doc.fixed_gens.len(), 1);
        assert_eq!(doc.psi.len(), 1);
        let printed = doc.print();
        assert_eq!(parse(&printed).unwrap(), doc);
    }

    #[test]
    fn angle_bracket_names_round_trip() {
        let doc = parse("gen x<a^2> : -1\nd x<a^2> = 0\n").unwrap();
        assert_eq!(doc.gens[0].0, "x<a^2>");
        assert_eq!(parse(&doc.print()).unwrap(), doc);
    }

    #[test]
    fn comments_and_blank_lines_ignored ()  {
        let doc = parse("# a model\n\ngen x : 3   # odd generator\n").unwrap();
        assert_eq!(doc.gens.len(), 1);
    }

    #[test]
    fn factor_order_is_preserved() {
        // Reordering odd factors changes the sign, so written order must
        // survive until degrees are known. Only adjacent powers merge.
        let a = parse("d z = u*w\n").unwrap();
        let b = parse("d z = w*u\n").unwrap();
        assert_ne!(a.diffs[0].1, b.diffs[0].1);
        assert_eq!(a.diffs[0].1.to_string(), "u*w");
        assert_eq!(b.diffs[0].1.to_string(), "w*u");

        let c = parse("d z = u*u^2*w*u\n").unwrap();
        assert_eq!(
            c.diffs[0].1.terms[0].factors,
            vec![("u".to_string(), 3), ("w".to_string(), 1), ("u".to_string(), 1)]
        );
    }
}
