//! Polynomial grammar.
//!
//! ```text
//! expr    := unary (("+" | "-" | "*" | "/") unary)*     precedence climbing
//! unary   := ("+" | "-") unary | power
//! power   := atom ("^" natural)?
//! atom    := number | variable | "(" expr ")"
//! number  := digits ("." digits)?
//! variable:= "x" [1-9] | "x{" digits "}"
//! ```
//!
//! `/` is only accepted with a nonzero constant on the right, so rational
//! coefficients are written `3/4*x1`.

use num_traits::Zero;

use super::SparsePoly;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Return the zero polynomial instead of rejecting it.
    pub allow_zero: bool,
}

/// Parses `text` as a polynomial in `nvars` variables, rejecting zero.
pub fn parse_poly(text: &str, nvars: usize) -> Result<SparsePoly> {
    parse_poly_with(text, nvars, ParseOptions::default())
}

pub fn parse_poly_with(text: &str, nvars: usize, opts: ParseOptions) -> Result<SparsePoly> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        nvars,
        end: text.len(),
    };
    let poly = parser.expr(0)?;
    if let Some(tok) = parser.peek() {
        return Err(Error::parse(
            tok.pos,
            format!("unexpected {}", tok.kind.describe()),
        ));
    }
    if poly.is_zero() && !opts.allow_zero {
        return Err(Error::ZeroPolynomial);
    }
    Ok(poly)
}

/// Number of variables a polynomial text mentions: the largest index used
/// (at least 1).
pub fn infer_nvars(text: &str) -> Result<usize> {
    Ok(tokenize(text)?
        .iter()
        .filter_map(|t| match t.kind {
            Kind::Var(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1))
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Number(Rational),
    Var(usize),
    Op(char),
    LParen,
    RParen,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Number(n) => format!("number `{n}`"),
            Kind::Var(i) => format!("variable `{}`", super::var_name(*i)),
            Kind::Op(c) => format!("`{c}`"),
            Kind::LParen => "`(`".into(),
            Kind::RParen => "`)`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                tokens.push(Token {
                    kind: Kind::Op(c as char),
                    pos: i,
                });
                i += 1;
            }
            b'(' => {
                tokens.push(Token {
                    kind: Kind::LParen,
                    pos: i,
                });
                i += 1;
            }
            b')' => {
                tokens.push(Token {
                    kind: Kind::RParen,
                    pos: i,
                });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let value = parse_rational(&text[start..i]).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::parse(start + pos, msg),
                    other => other,
                })?;
                tokens.push(Token {
                    kind: Kind::Number(value),
                    pos: start,
                });
            }
            b'x' => {
                i += 1;
                let index = if bytes.get(i) == Some(&b'{') {
                    let close = text[i..]
                        .find('}')
                        .map(|k| k + i)
                        .ok_or_else(|| Error::parse(i, "unterminated `x{`"))?;
                    let digits = &text[i + 1..close];
                    let idx: usize = digits
                        .parse()
                        .map_err(|_| Error::parse(i + 1, "expected variable index"))?;
                    i = close + 1;
                    idx
                } else {
                    match bytes.get(i) {
                        Some(d @ b'1'..=b'9') => {
                            i += 1;
                            if bytes.get(i).is_some_and(u8::is_ascii_digit) {
                                return Err(Error::parse(
                                    start,
                                    "variables beyond x9 are written x{10}, x{11}, …",
                                ));
                            }
                            usize::from(d - b'0')
                        }
                        _ => return Err(Error::parse(i, "expected variable index 1-9 after `x`")),
                    }
                };
                if index == 0 {
                    return Err(Error::parse(start, "variables are numbered from x1"));
                }
                tokens.push(Token {
                    kind: Kind::Var(index - 1),
                    pos: start,
                });
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::parse(i, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    nvars: usize,
    end: usize,
}

fn binary_precedence(op: char) -> Option<u8> {
    match op {
        '+' | '-' => Some(1),
        '*' | '/' => Some(2),
        _ => None,
    }
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    /// Precedence climbing over left-associative binary operators.
    fn expr(&mut self, min_prec: u8) -> Result<SparsePoly> {
        let mut lhs = self.unary()?;
        while let Some(Token {
            kind: Kind::Op(op),
            pos,
        }) = self.peek().cloned()
        {
            let Some(prec) = binary_precedence(op) else {
                break;
            };
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            let rhs = self.expr(prec + 1)?;
            lhs = match op {
                '+' => &lhs + &rhs,
                '-' => &lhs - &rhs,
                '*' => &lhs * &rhs,
                '/' => {
                    if !rhs.is_constant() {
                        return Err(Error::parse(pos, "can only divide by a constant"));
                    }
                    let divisor = rhs
                        .coefficient(&vec![0; self.nvars])
                        .cloned()
                        .unwrap_or_else(Rational::zero);
                    if divisor.is_zero() {
                        return Err(Error::parse(pos, "division by zero"));
                    }
                    lhs.scale(&divisor.recip())
                }
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<SparsePoly> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(Kind::Op('-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Kind::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<SparsePoly> {
        let base = self.atom()?;
        if let Some(Token {
            kind: Kind::Op('^'),
            ..
        }) = self.peek()
        {
            self.pos += 1;
            let at = self.here();
            let exp = match self.next().map(|t| t.kind) {
                Some(Kind::Number(n)) if n.is_integer() => u32::try_from(n.numer())
                    .map_err(|_| Error::parse(at, "exponent out of range"))?,
                _ => return Err(Error::parse(at, "expected a nonnegative integer exponent")),
            };
            if let Some(Token {
                kind: Kind::Op('^'),
                pos,
            }) = self.peek()
            {
                return Err(Error::parse(
                    *pos,
                    "chained `^` is ambiguous; add parentheses",
                ));
            }
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        let at = self.here();
        match self.next() {
            Some(Token {
                kind: Kind::Number(n),
                ..
            }) => Ok(SparsePoly::constant(self.nvars, n)),
            Some(Token {
                kind: Kind::Var(i),
                pos,
            }) => {
                if i >= self.nvars {
                    return Err(Error::parse(
                        pos,
                        format!("variable x{} out of range for n = {}", i + 1, self.nvars),
                    ));
                }
                Ok(SparsePoly::var(self.nvars, i))
            }
            Some(Token {
                kind: Kind::LParen, ..
            }) => {
                let inner = self.expr(0)?;
                match self.next() {
                    Some(Token {
                        kind: Kind::RParen, ..
                    }) => Ok(inner),
                    _ => Err(Error::parse(at, "unclosed `(`")),
                }
            }
            Some(tok) => Err(Error::parse(
                tok.pos,
                format!("unexpected {}", tok.kind.describe()),
            )),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}
