//! Text format for automorphism words and polynomials.
//!
//! ```text
//! word  := atom ( "." atom )*
//! atom  := "id"
//!        | "affine(" row ( ";" row )* ")"      n matrix rows, then the translation
//!        | "shear(" INDEX "," poly ")"         z_INDEX ← z_INDEX + poly
//! row   := const ( "," const )*
//! poly  := term ( ("+" | "-") term )*
//! term  := unary ( "*" unary )*
//! unary := ("-" | "+") unary | power
//! power := primary ( "^" INT )?
//! primary := NUMBER | NUMBER "i" | "i" | "z" INDEX | "(" poly ")"
//! ```
//!
//! `f . g` is `f ∘ g`: the right-hand atom is applied first. Variables are
//! one-based (`z1 .. zn`), and the dimension is always supplied by the caller.

use std::fmt;

use crate::algebra::{AffineMap, AutomorphismWord, ComplexPolynomial, Generator, Monomial, Shear};
use crate::linalg::{is_invertible, relative_determinant, CMatrix, CVector, C64};

/// Largest exponent accepted after `^`.
const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    fn join(self, other: SourceSpan) -> SourceSpan {
        SourceSpan::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownVariable,
    SelfReferentialShear,
    SingularMatrix,
    DimensionMismatch,
}

impl ParseErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::UnknownVariable => "unknown-variable",
            ParseErrorKind::SelfReferentialShear => "self-referential-shear",
            ParseErrorKind::SingularMatrix => "singular-matrix",
            ParseErrorKind::DimensionMismatch => "dimension-mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }

    fn syntax(span: SourceSpan, message: impl Into<String>) -> Self {
        Self::new(ParseErrorKind::Syntax, span, message)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} error at {}..{}: {}",
            self.kind.as_str(),
            self.span.start,
            self.span.end,
            self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    /// Real literal with its source text.
    Number(f64, String),
    /// Imaginary literal such as `2i`.
    Imag(f64),
    /// Bare imaginary unit.
    I,
    /// `z<k>`, one-based.
    Var(usize),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semicolon,
    Dot,
    Plus,
    Minus,
    Star,
    Caret,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(_, s) => format!("number `{s}`"),
            Tok::Imag(v) => format!("imaginary literal `{v}i`"),
            Tok::I => "`i`".into(),
            Tok::Var(k) => format!("`z{k}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semicolon => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let single = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b';' => Some(Tok::Semicolon),
            b'.' => Some(Tok::Dot),
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = single {
            pos += 1;
            tokens.push(Token {
                tok,
                span: SourceSpan::new(start, pos),
            });
            continue;
        }
        if c.is_ascii_digit() {
            pos = scan_number(bytes, pos);
            let raw = &text[start..pos];
            let value: f64 = raw
                .parse()
                .map_err(|_| ParseError::syntax(SourceSpan::new(start, pos), format!("malformed number `{raw}`")))?;
            let imaginary = bytes.get(pos) == Some(&b'i')
                && !bytes.get(pos + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
            if imaginary {
                pos += 1;
                tokens.push(Token {
                    tok: Tok::Imag(value),
                    span: SourceSpan::new(start, pos),
                });
            } else {
                tokens.push(Token {
                    tok: Tok::Number(value, raw.to_string()),
                    span: SourceSpan::new(start, pos),
                });
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            let word = &text[start..pos];
            let span = SourceSpan::new(start, pos);
            let tok = if word == "i" {
                Tok::I
            } else if let Some(digits) = word.strip_prefix('z').filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())) {
                let index = digits
                    .parse::<usize>()
                    .map_err(|_| ParseError::new(ParseErrorKind::UnknownVariable, span, format!("variable `{word}` is out of range")))?;
                Tok::Var(index)
            } else {
                Tok::Ident(word.to_string())
            };
            tokens.push(Token { tok, span });
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(ParseError::syntax(
            SourceSpan::new(start, start + ch.len_utf8()),
            format!("unexpected character `{ch}`"),
        ));
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::new(text.len(), text.len()),
    });
    Ok(tokens)
}

/// Digits, an optional fraction (a `.` directly followed by a digit) and an
/// optional exponent.
fn scan_number(bytes: &[u8], mut pos: usize) -> usize {
    let digits = |bytes: &[u8], mut p: usize| {
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        p
    };
    pos = digits(bytes, pos);
    if bytes.get(pos) == Some(&b'.') && bytes.get(pos + 1).is_some_and(u8::is_ascii_digit) {
        pos = digits(bytes, pos + 1);
    }
    if matches!(bytes.get(pos), Some(b'e' | b'E')) {
        let mut p = pos + 1;
        if matches!(bytes.get(p), Some(b'+' | b'-')) {
            p += 1;
        }
        if bytes.get(p).is_some_and(u8::is_ascii_digit) {
            pos = digits(bytes, p);
        }
    }
    pos
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    dim: usize,
    /// Variable occurrences of the expression being parsed.
    var_uses: Vec<(usize, SourceSpan)>,
}

impl Parser {
    fn new(text: &str, dim: usize) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: lex(text)?,
            pos: 0,
            dim,
            var_uses: Vec::new(),
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::syntax(t.span, format!("expected {expected}, found {}", t.tok.describe()))
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek().tok {
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of input")),
        }
    }

    fn word(&mut self) -> Result<AutomorphismWord, ParseError> {
        let mut atoms = vec![self.atom()?];
        while self.peek().tok == Tok::Dot {
            self.advance();
            atoms.push(self.atom()?);
        }
        self.expect_eof()?;
        let generators: Vec<Generator> = atoms.into_iter().rev().flatten().collect();
        Ok(AutomorphismWord::new(self.dim, generators).expect("atoms are built with the parser's dimension"))
    }

    fn atom(&mut self) -> Result<Option<Generator>, ParseError> {
        let head = self.peek().clone();
        match &head.tok {
            Tok::Ident(name) if name == "id" => {
                self.advance();
                Ok(None)
            }
            Tok::Ident(name) if name == "affine" => self.affine().map(Some),
            Tok::Ident(name) if name == "shear" => self.shear().map(Some),
            _ => Err(self.unexpected("`id`, `affine(...)` or `shear(...)`")),
        }
    }

    fn affine(&mut self) -> Result<Generator, ParseError> {
        let start = self.advance().span;
        self.expect(Tok::LParen, "`(`")?;
        let mut groups: Vec<(Vec<C64>, SourceSpan)> = Vec::new();
        loop {
            let mut entries = Vec::new();
            let mut span = self.peek().span;
            loop {
                let (value, entry_span) = self.constant()?;
                span = span.join(entry_span);
                entries.push(value);
                if self.peek().tok == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
            groups.push((entries, span));
            match self.peek().tok {
                Tok::Semicolon => {
                    self.advance();
                }
                Tok::RParen => break,
                _ => return Err(self.unexpected("`,`, `;` or `)`")),
            }
        }
        let end = self.advance().span;
        let atom_span = start.join(end);
        let n = self.dim;
        if groups.len() != n + 1 {
            return Err(ParseError::new(
                ParseErrorKind::DimensionMismatch,
                atom_span,
                format!("expected {n} matrix rows and a translation, found {} groups", groups.len()),
            ));
        }
        if let Some((entries, span)) = groups.iter().find(|(e, _)| e.len() != n) {
            return Err(ParseError::new(
                ParseErrorKind::DimensionMismatch,
                *span,
                format!("expected {n} entries, found {}", entries.len()),
            ));
        }
        let matrix = CMatrix::from_row_iterator(n, n, groups[..n].iter().flat_map(|(e, _)| e.iter().copied()));
        let translation = CVector::from_column_slice(&groups[n].0);
        if !is_invertible(&matrix) {
            return Err(ParseError::new(
                ParseErrorKind::SingularMatrix,
                atom_span,
                format!("matrix is singular (relative |det| = {:e})", relative_determinant(&matrix)),
            ));
        }
        Ok(Generator::Affine(
            AffineMap::new(matrix, translation).expect("dimensions and invertibility checked"),
        ))
    }

    fn shear(&mut self) -> Result<Generator, ParseError> {
        self.advance();
        self.expect(Tok::LParen, "`(`")?;
        let index_tok = self.advance();
        let coordinate = match &index_tok.tok {
            Tok::Number(_, raw) if raw.bytes().all(|b| b.is_ascii_digit()) => raw.parse::<usize>().unwrap_or(usize::MAX),
            _ => {
                return Err(ParseError::syntax(
                    index_tok.span,
                    format!("expected a coordinate index, found {}", index_tok.tok.describe()),
                ))
            }
        };
        if coordinate == 0 || coordinate > self.dim {
            return Err(ParseError::new(
                ParseErrorKind::UnknownVariable,
                index_tok.span,
                format!("coordinate {coordinate} is outside 1..={}", self.dim),
            ));
        }
        self.expect(Tok::Comma, "`,`")?;
        self.var_uses.clear();
        let (poly, poly_span) = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        let k = coordinate - 1;
        if poly.depends_on(k) {
            let span = self
                .var_uses
                .iter()
                .find(|(v, _)| *v == coordinate)
                .map_or(poly_span, |(_, s)| *s);
            return Err(ParseError::new(
                ParseErrorKind::SelfReferentialShear,
                span,
                format!("shear of z{coordinate} may not depend on z{coordinate}"),
            ));
        }
        Ok(Generator::Shear(Shear::new(k, poly).expect("coordinate and dependence checked")))
    }

    fn constant(&mut self) -> Result<(C64, SourceSpan), ParseError> {
        let mark = self.var_uses.len();
        let (p, span) = self.expr()?;
        if let Some((_, var_span)) = self.var_uses.get(mark) {
            return Err(ParseError::syntax(*var_span, "matrix and vector entries must be constants"));
        }
        Ok((p.coefficient(&vec![0; self.dim]), span))
    }

    fn expr(&mut self) -> Result<(ComplexPolynomial, SourceSpan), ParseError> {
        let (mut acc, mut span) = self.term()?;
        loop {
            let negate = match self.peek().tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.advance();
            let (rhs, rhs_span) = self.term()?;
            acc = if negate { &acc - &rhs } else { &acc + &rhs };
            span = span.join(rhs_span);
        }
        Ok((acc, span))
    }

    fn term(&mut self) -> Result<(ComplexPolynomial, SourceSpan), ParseError> {
        let (mut acc, mut span) = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.advance();
            let (rhs, rhs_span) = self.unary()?;
            acc = &acc * &rhs;
            span = span.join(rhs_span);
        }
        Ok((acc, span))
    }

    fn unary(&mut self) -> Result<(ComplexPolynomial, SourceSpan), ParseError> {
        match self.peek().tok {
            Tok::Minus => {
                let start = self.advance().span;
                let (p, span) = self.unary()?;
                Ok((-&p, start.join(span)))
            }
            Tok::Plus => {
                let start = self.advance().span;
                let (p, span) = self.unary()?;
                Ok((p, start.join(span)))
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<(ComplexPolynomial, SourceSpan), ParseError> {
        let (base, span) = self.primary()?;
        if self.peek().tok != Tok::Caret {
            return Ok((base, span));
        }
        self.advance();
        let exp_tok = self.advance();
        let exponent = match &exp_tok.tok {
            Tok::Number(_, raw) if raw.bytes().all(|b| b.is_ascii_digit()) => raw.parse::<u32>().ok(),
            _ => {
                return Err(ParseError::syntax(
                    exp_tok.span,
                    format!("expected a non-negative integer exponent, found {}", exp_tok.tok.describe()),
                ))
            }
        };
        match exponent {
            Some(e) if e <= MAX_EXPONENT => Ok((base.pow(e), span.join(exp_tok.span))),
            _ => Err(ParseError::syntax(
                exp_tok.span,
                format!("exponent exceeds the maximum of {MAX_EXPONENT}"),
            )),
        }
    }

    fn primary(&mut self) -> Result<(ComplexPolynomial, SourceSpan), ParseError> {
        let t = self.peek().clone();
        let n = self.dim;
        match t.tok {
            Tok::Number(v, _) => {
                self.advance();
                Ok((ComplexPolynomial::constant(n, C64::new(v, 0.0)), t.span))
            }
            Tok::Imag(v) => {
                self.advance();
                Ok((ComplexPolynomial::constant(n, C64::new(0.0, v)), t.span))
            }
            Tok::I => {
                self.advance();
                Ok((ComplexPolynomial::constant(n, C64::new(0.0, 1.0)), t.span))
            }
            Tok::Var(k) => {
                if k == 0 || k > n {
                    return Err(ParseError::new(
                        ParseErrorKind::UnknownVariable,
                        t.span,
                        format!("variable z{k} is outside z1..z{n}"),
                    ));
                }
                self.advance();
                self.var_uses.push((k, t.span));
                Ok((ComplexPolynomial::variable(n, k - 1).expect("index checked"), t.span))
            }
            Tok::LParen => {
                self.advance();
                let (p, _) = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok((p, t.span.join(close.span)))
            }
            _ => Err(self.unexpected("a number, `i`, a variable or `(`")),
        }
    }
}

/// Parses a word in dimension `n`.
pub fn parse_automorphism(text: &str, n: usize) -> Result<AutomorphismWord, ParseError> {
    if n == 0 {
        return Err(ParseError::new(
            ParseErrorKind::DimensionMismatch,
            SourceSpan::new(0, 0),
            "dimension must be at least 1",
        ));
    }
    Parser::new(text, n)?.word()
}

/// Parses a polynomial in `z1 .. zn`.
pub fn parse_polynomial(text: &str, n: usize) -> Result<ComplexPolynomial, ParseError> {
    if n == 0 {
        return Err(ParseError::new(
            ParseErrorKind::DimensionMismatch,
            SourceSpan::new(0, 0),
            "dimension must be at least 1",
        ));
    }
    let mut parser = Parser::new(text, n)?;
    let (p, _) = parser.expr()?;
    parser.expect_eof()?;
    Ok(p)
}

/// Parses a point of `C^n` written as `n` comma-separated constants, e.g.
/// `1, (0.5-2i)`.
pub fn parse_point(text: &str, n: usize) -> Result<CVector, ParseError> {
    if n == 0 {
        return Err(ParseError::new(
            ParseErrorKind::DimensionMismatch,
            SourceSpan::new(0, 0),
            "dimension must be at least 1",
        ));
    }
    let mut parser = Parser::new(text, n)?;
    let mut entries = Vec::new();
    let mut span = parser.peek().span;
    loop {
        let (value, entry_span) = parser.constant()?;
        span = span.join(entry_span);
        entries.push(value);
        if parser.peek().tok == Tok::Comma {
            parser.advance();
        } else {
            break;
        }
    }
    parser.expect_eof()?;
    if entries.len() != n {
        return Err(ParseError::new(
            ParseErrorKind::DimensionMismatch,
            span,
            format!("expected {n} coordinates, found {}", entries.len()),
        ));
    }
    Ok(CVector::from_column_slice(&entries))
}

/// Shortest text that parses back to exactly `x`.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Coefficient text; non-real values are parenthesized as `(a+bi)`.
pub fn format_complex(c: C64) -> String {
    if c.im == 0.0 {
        format_real(c.re)
    } else if c.re == 0.0 {
        format!("{}i", format_real(c.im))
    } else if c.im < 0.0 {
        format!("({}-{}i)", format_real(c.re), format_real(-c.im))
    } else {
        format!("({}+{}i)", format_real(c.re), format_real(c.im))
    }
}

fn format_monomial(m: &Monomial) -> String {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{e}", i + 1) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical text of `p`: terms in descending graded-lexicographic order.
pub fn format_polynomial(p: &ComplexPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let term = if m.degree() == 0 {
            format_complex(*c)
        } else if *c == C64::new(1.0, 0.0) {
            format_monomial(m)
        } else if *c == C64::new(-1.0, 0.0) {
            format!("-{}", format_monomial(m))
        } else {
            format!("{}*{}", format_complex(*c), format_monomial(m))
        };
        if k == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    out
}

fn format_generator(g: &Generator) -> String {
    match g {
        Generator::Affine(a) => {
            let n = a.dim();
            let mut groups: Vec<String> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| format_complex(a.matrix()[(i, j)]))
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .collect();
            groups.push(a.translation().iter().map(|c| format_complex(*c)).collect::<Vec<_>>().join(", "));
            format!("affine({})", groups.join("; "))
        }
        Generator::Shear(s) => format!("shear({}, {})", s.coordinate() + 1, format_polynomial(s.polynomial())),
    }
}

/// Canonical text of `word`. Atoms are written in `∘` order, so the first
/// generator of the word appears last.
pub fn serialize(word: &AutomorphismWord) -> String {
    if word.is_empty() {
        return "id".into();
    }
    word.generators()
        .iter()
        .rev()
        .map(format_generator)
        .collect::<Vec<_>>()
        .join(" . ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, real_matrix, real_vector};

    fn err(text: &str, n: usize) -> ParseError {
        parse_automorphism(text, n).unwrap_err()
    }

    #[test]
    fn identity_atom() {
        assert!(parse_automorphism("id", 2).unwrap().is_empty());
        assert!(parse_automorphism(" id . id ", 3).unwrap().is_empty());
    }

    #[test]
    fn single_shear() {
        let w = parse_automorphism("shear(2, z1^2)", 2).unwrap();
        match w.generators() {
            [Generator::Shear(s)] => {
                assert_eq!(s.coordinate(), 1);
                assert_eq!(s.polynomial().coefficient(&[2, 0]), c64(1.0, 0.0));
                assert_eq!(s.polynomial().num_terms(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn composition_applies_right_atom_first() {
        let w = parse_automorphism("affine(2,0;0,1 ; 1,0) . shear(2, z1^2)", 2).unwrap();
        assert_eq!(w.len(), 2);
        assert!(matches!(w.generators()[0], Generator::Shear(_)));
        let affine = Generator::affine(real_matrix(2, &[2.0, 0.0, 0.0, 1.0]), real_vector(&[1.0, 0.0])).unwrap();
        assert_eq!(w.generators()[1], affine);
        assert_eq!(w.evaluate(&real_vector(&[1.0, 0.0])).unwrap(), real_vector(&[3.0, 1.0]));
    }

    #[test]
    fn complex_literals() {
        let p = parse_polynomial("(1+2i)*z1*z2 - i*z2^3 + 2.5e-3i + 3", 2).unwrap();
        assert_eq!(p.coefficient(&[1, 1]), c64(1.0, 2.0));
        assert_eq!(p.coefficient(&[0, 3]), c64(0.0, -1.0));
        assert_eq!(p.coefficient(&[0, 0]), c64(3.0, 2.5e-3));
        let q = parse_polynomial("(z1 + z2)^2 - z1^2 - z2^2", 2).unwrap();
        assert_eq!(q.coefficient(&[1, 1]), c64(2.0, 0.0));
        assert_eq!(q.num_terms(), 1);
        assert_eq!(parse_polynomial("-z1^2", 1).unwrap().coefficient(&[2]), c64(-1.0, 0.0));
    }

    #[test]
    fn one_dimensional_affine() {
        let w = parse_automorphism("affine(3;2)", 1).unwrap();
        assert_eq!(w.evaluate(&real_vector(&[1.0])).unwrap(), real_vector(&[5.0]));
    }

    #[test]
    fn serialize_canonical_forms() {
        assert_eq!(serialize(&AutomorphismWord::identity(2)), "id");
        assert_eq!(serialize(&parse_automorphism("shear(2, z1^2)", 2).unwrap()), "shear(2, z1^2)");
        let w = parse_automorphism("shear(1, z3 + z2^2 - 0.5*z2*z3 + (1-2i)*z3^4 + 7)", 3).unwrap();
        assert_eq!(serialize(&w), "shear(1, (1-2i)*z3^4 + z2^2 - 0.5*z2*z3 + z3 + 7)");
        let a = parse_automorphism("affine(2,0;0,1 ; 1,0) . shear(2, z1^2)", 2).unwrap();
        assert_eq!(serialize(&a), "affine(2, 0; 0, 1; 1, 0) . shear(2, z1^2)");
    }

    #[test]
    fn serialize_is_a_parse_fixed_point() {
        let text = "affine((1+2i), -0.1; 1e-7i, 3; 0.30000000000000004, -2) . shear(2, -z1^3 + 1e20*z1)";
        let w = parse_automorphism(text, 2).unwrap();
        let s = serialize(&w);
        let w2 = parse_automorphism(&s, 2).unwrap();
        assert_eq!(w, w2);
        assert_eq!(serialize(&w2), s);
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(2.0), "2");
        assert_eq!(format_real(-0.5), "-0.5");
        assert_eq!(format_real(1e-7), "1e-7");
        assert_eq!(format_real(1.5e20), "1.5e20");
        assert_eq!(format_complex(c64(0.0, -1.0)), "-1i");
    }

    #[test]
    fn syntax_errors_point_past_valid_prefix() {
        let e = err("shear(2, z1^^2)", 2);
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.span, SourceSpan::new(12, 13));

        let e = err("shear(2, z1", 2);
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.span, SourceSpan::new(11, 11));

        let e = err("rotate(1)", 2);
        assert_eq!(e.span, SourceSpan::new(0, 6));

        let e = err("id id", 2);
        assert_eq!(e.span, SourceSpan::new(3, 5));

        let e = err("shear(2, z1 $ 3)", 2);
        assert_eq!(e.span, SourceSpan::new(12, 13));

        let e = err("shear(2, z1^-1)", 2);
        assert_eq!(e.span, SourceSpan::new(12, 13));

        let e = err("shear(2, z1^100)", 2);
        assert_eq!(e.span, SourceSpan::new(12, 15));
    }

    #[test]
    fn unknown_variables() {
        let e = err("shear(2, z3)", 2);
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable);
        assert_eq!(e.span, SourceSpan::new(9, 11));
        let e = err("shear(3, z1)", 2);
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable);
        assert_eq!(e.span, SourceSpan::new(6, 7));
        assert_eq!(err("shear(1, z0)", 2).kind, ParseErrorKind::UnknownVariable);
    }

    #[test]
    fn self_referential_shear() {
        let e = err("shear(2, z1 + z1*z2)", 2);
        assert_eq!(e.kind, ParseErrorKind::SelfReferentialShear);
        assert_eq!(e.span, SourceSpan::new(17, 19));
        // Cancelling occurrences leave a valid shear.
        assert!(parse_automorphism("shear(2, z1 + z2 - z2)", 2).is_ok());
    }

    #[test]
    fn singular_and_mismatched_affine() {
        let e = err("id . affine(1,2;2,4;0,0)", 2);
        assert_eq!(e.kind, ParseErrorKind::SingularMatrix);
        assert_eq!(e.span, SourceSpan::new(5, 24));

        let e = err("affine(1,0;0,1)", 2);
        assert_eq!(e.kind, ParseErrorKind::DimensionMismatch);

        let e = err("affine(1,0;0,1,5;0,0)", 2);
        assert_eq!(e.kind, ParseErrorKind::DimensionMismatch);
        assert_eq!(e.span, SourceSpan::new(11, 16));

        let e = err("affine(1,z1;0,1;0,0)", 2);
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.span, SourceSpan::new(9, 11));
    }

    #[test]
    fn points() {
        let p = parse_point("1, (0.5-2i)", 2).unwrap();
        assert_eq!(p[0], c64(1.0, 0.0));
        assert_eq!(p[1], c64(0.5, -2.0));
        let e = parse_point("1, 2, 3", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DimensionMismatch);
        assert_eq!(e.span, SourceSpan::new(0, 7));
        assert_eq!(parse_point("1, z1", 2).unwrap_err().kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert_eq!(err("id", 0).kind, ParseErrorKind::DimensionMismatch);
    }
}
