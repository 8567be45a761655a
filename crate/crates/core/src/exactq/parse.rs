//! Reader for the polynomial normal form, also accepting the looser notation
//! used in hand-written configs (`7λ - 2g - 54`, `(lambda+1)^2/3`).

use std::str::FromStr;

use num_bigint::BigInt;

use super::poly::{Polynomial, Var};
use super::rational::Rational;
use crate::error::Error;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>, Error> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Num(s.parse().expect("digits")));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(s));
            }
            _ => {
                chars.next();
                out.push(match c {
                    '+' => Token::Plus,
                    '-' | '−' => Token::Minus,
                    '*' | '·' => Token::Star,
                    '/' => Token::Slash,
                    '^' => Token::Caret,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    other => return Err(Error::Parse(format!("unexpected character {other:?} in {src:?}"))),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in {:?}", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<Polynomial, Error> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    acc = acc + self.term()?;
                }
                Some(Token::Minus) => {
                    self.next();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, Error> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    acc = acc * self.unary()?;
                }
                Some(Token::Slash) => {
                    self.next();
                    let d = self.unary()?;
                    let d = d
                        .constant_value()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| self.err("division by a non-constant or zero"))?;
                    acc = acc.scale(&d.recip()?);
                }
                // Juxtaposition, as in `14g` or `2(lambda+1)`.
                Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    acc = acc * self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, Error> {
        match self.peek() {
            Some(Token::Minus) => {
                self.next();
                Ok(-self.unary()?)
            }
            Some(Token::Plus) => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, Error> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.next();
            match self.next() {
                Some(Token::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, Error> {
        match self.next() {
            Some(Token::Num(n)) => Ok(Polynomial::constant(Rational::from(n))),
            Some(Token::Ident(name)) => Var::from_name(&name)
                .map(Polynomial::var)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?} in {:?}", self.src))),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(self.err("expected ')'")),
                }
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self, Error> {
        let tokens = tokenize(src)?;
        if tokens.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Parser { tokens, pos: 0, src };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}
