//! Lexer and recursive-descent parser for the arithmetic expression language
//! shared by operator text, polynomial coefficients and rational substitutions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' INT)?
//! atom  := NUMBER | NUMBER 'i' | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::gauss::GaussRational;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub pos: usize,
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Num(BigRational),
    Imag(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Colon,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Imag(n) => format!("imaginary literal `{n}i`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: usize,
}

pub fn error_at(src: &str, pos: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError {
        pos,
        line,
        col,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Token { tok: t, pos: start });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit())) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut frac_digits = 0;
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                    frac_digits += 1;
                }
            }
            let text: String = src[start..i].chars().filter(|c| *c != '.').collect();
            let num: BigInt = text.parse().map_err(|_| error_at(src, start, "malformed number", &[]))?;
            let value = BigRational::new(num, num_traits::pow(BigInt::from(10), frac_digits));
            let imag = i < bytes.len()
                && bytes[i] == b'i'
                && !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
            if imag {
                i += 1;
                out.push(Token { tok: Tok::Imag(value), pos: start });
            } else {
                out.push(Token { tok: Tok::Num(value), pos: start });
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            // `~` marks adjoint fields in bilinear text such as `q~_x`
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'~') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(src[start..i].to_string()), pos: start });
            continue;
        }
        return Err(error_at(src, start, format!("unexpected character `{c}`"), &[]));
    }
    out.push(Token { tok: Tok::Eof, pos: src.len() });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(BigRational),
    Imag(BigRational),
    Ident { name: String, pos: usize },
    Call { name: String, arg: Box<Ast>, pos: usize },
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Neg(Box<Ast>),
    Pow(Box<Ast>, u32),
}

/// Cursor over a token stream; exposed so that header-bearing formats
/// (operator text, `name=value` lists) can drive it directly.
pub struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    at: usize,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Result<Self, ParseError> {
        Ok(Self { src, toks: tokenize(src)?, at: 0 })
    }

    pub fn src(&self) -> &'a str {
        self.src
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    pub fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        error_at(self.src, self.pos(), message, expected)
    }

    pub fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(format!("unexpected {}", self.peek().describe()), expected)
    }

    pub fn expect(&mut self, t: Tok, label: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[label]))
        }
    }

    pub fn ident(&mut self) -> Result<(String, usize), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.pos();
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.unexpected(&["`+`", "`-`", "`*`", "`/`", "end of input"]))
        }
    }

    pub fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    let pos = self.pos();
                    self.bump();
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Ast::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.peek().clone() {
                Tok::Num(n) if n.is_integer() => {
                    let e: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.error("exponent too large", &[]))?;
                    self.bump();
                    Ok(Ast::Pow(Box::new(base), e))
                }
                _ => Err(self.unexpected(&["non-negative integer exponent"])),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Ast::Num(n))
            }
            Tok::Imag(n) => {
                self.bump();
                Ok(Ast::Imag(n))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Ast::Call { name, arg: Box::new(arg), pos })
                } else {
                    Ok(Ast::Ident { name, pos })
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.unexpected(&["number", "identifier", "`(`", "`-`"])),
        }
    }
}

/// Parse a complete expression.
pub fn parse_expr(src: &str) -> Result<Ast, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

impl Ast {
    /// Lower to a polynomial, resolving identifiers through `resolve`. The bare
    /// identifier `i` is the imaginary unit unless `resolve` claims it.
    /// Division is only allowed by nonzero constants.
    pub fn to_poly(&self, src: &str, resolve: &dyn Fn(&str) -> Option<usize>) -> Result<Poly, ParseError> {
        Ok(match self {
            Ast::Num(n) => Poly::constant(GaussRational::real(n.clone())),
            Ast::Imag(n) => Poly::constant(GaussRational::new(BigRational::zero(), n.clone())),
            Ast::Ident { name, pos } => match resolve(name) {
                Some(idx) => Poly::var(idx),
                None if name == "i" => Poly::i(),
                None => return Err(error_at(src, *pos, format!("unknown name `{name}`"), &[])),
            },
            Ast::Call { name, pos, .. } => {
                return Err(error_at(src, *pos, format!("function `{name}` not allowed here"), &[]))
            }
            Ast::Add(a, b) => &a.to_poly(src, resolve)? + &b.to_poly(src, resolve)?,
            Ast::Sub(a, b) => &a.to_poly(src, resolve)? - &b.to_poly(src, resolve)?,
            Ast::Mul(a, b) => &a.to_poly(src, resolve)? * &b.to_poly(src, resolve)?,
            Ast::Div(a, b, pos) => {
                let den = b.to_poly(src, resolve)?;
                let c = den
                    .constant_value()
                    .ok_or_else(|| error_at(src, *pos, "division by a non-constant", &[]))?;
                a.to_poly(src, resolve)?
                    .div_constant(&c)
                    .ok_or_else(|| error_at(src, *pos, "division by zero", &[]))?
            }
            Ast::Neg(a) => -&a.to_poly(src, resolve)?,
            Ast::Pow(a, e) => a.to_poly(src, resolve)?.pow(*e),
        })
    }

    /// Exact evaluation; `Ok(None)` signals a division by zero (a pole).
    pub fn eval_exact(
        &self,
        src: &str,
        env: &HashMap<String, GaussRational>,
    ) -> Result<Option<GaussRational>, ParseError> {
        let v = match self {
            Ast::Num(n) => GaussRational::real(n.clone()),
            Ast::Imag(n) => GaussRational::new(BigRational::zero(), n.clone()),
            Ast::Ident { name, pos } => match env.get(name) {
                Some(v) => v.clone(),
                None if name == "i" => GaussRational::i(),
                None => return Err(error_at(src, *pos, format!("unknown name `{name}`"), &[])),
            },
            Ast::Call { name, pos, .. } => {
                return Err(error_at(src, *pos, format!("function `{name}` not allowed here"), &[]))
            }
            Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b, _) => {
                let (Some(x), Some(y)) = (a.eval_exact(src, env)?, b.eval_exact(src, env)?) else {
                    return Ok(None);
                };
                match self {
                    Ast::Add(..) => &x + &y,
                    Ast::Sub(..) => &x - &y,
                    Ast::Mul(..) => &x * &y,
                    _ => match x.checked_div(&y) {
                        Some(v) => v,
                        None => return Ok(None),
                    },
                }
            }
            Ast::Neg(a) => match a.eval_exact(src, env)? {
                Some(v) => -v,
                None => return Ok(None),
            },
            Ast::Pow(a, e) => match a.eval_exact(src, env)? {
                Some(v) => v.pow(*e),
                None => return Ok(None),
            },
        };
        Ok(Some(v))
    }

    /// Identifiers appearing anywhere in the tree, in first-seen order.
    pub fn identifiers(&self) -> Vec<String> {
        fn walk(a: &Ast, out: &mut Vec<String>) {
            match a {
                Ast::Ident { name, .. } => {
                    if !out.contains(name) {
                        out.push(name.clone());
                    }
                }
                Ast::Call { arg, .. } | Ast::Neg(arg) | Ast::Pow(arg, _) => walk(arg, out),
                Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b, _) => {
                    walk(a, out);
                    walk(b, out);
                }
                Ast::Num(_) | Ast::Imag(_) => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// Parse polynomial text over a named variable table.
pub fn parse_poly(src: &str, names: &[String]) -> Result<Poly, ParseError> {
    let ast = parse_expr(src)?;
    ast.to_poly(src, &|n| names.iter().position(|x| x == n))
}

/// Parse a comma-separated identifier list (at least one).
pub fn ident_list(p: &mut Parser<'_>) -> Result<Vec<(String, usize)>, ParseError> {
    let mut out = vec![p.ident()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        out.push(p.ident()?);
    }
    Ok(out)
}

/// Parse `name = expr, name = expr, ...` assignments.
pub fn parse_assignments(src: &str) -> Result<Vec<(String, Ast)>, ParseError> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    if p.at_eof() {
        return Ok(out);
    }
    loop {
        let (name, _) = p.ident()?;
        p.expect(Tok::Eq, "`=`")?;
        out.push((name, p.expr()?));
        match p.peek() {
            Tok::Comma => {
                p.bump();
            }
            Tok::Eof => return Ok(out),
            _ => return Err(p.unexpected(&["`,`", "end of input"])),
        }
    }
}

/// Exact rational from a literal such as `3/4` or `-0.25`.
pub fn parse_rational(src: &str) -> Result<BigRational, ParseError> {
    let ast = parse_expr(src)?;
    let v = ast
        .eval_exact(src, &HashMap::new())?
        .ok_or_else(|| error_at(src, 0, "division by zero", &[]))?;
    if v.is_real() {
        Ok(v.re)
    } else {
        Err(error_at(src, 0, "expected a real rational", &[]))
    }
}
