//! Recursive-descent parser for the textual element format.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' uint)?
//! atom   := rational | var | '(' expr ')'
//! var    := 'x' uint | 'xi' uint | 'tau'
//! ```
//!
//! Rational literals are `a` or `a/b` with decimal integers. Unary minus lets
//! every rendered element parse back.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{Scalar, Signature, SuperElement};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Scalar),
    X { index: usize, pos: usize },
    Xi { index: usize, pos: usize },
    Tau { pos: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Scalar),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> String {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect()
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' | '-' | '*' | '^' | '(' | ')' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push((tok, pos));
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let num: BigInt = digits(&mut i).parse().expect("digits");
                let mut value = Scalar::from_integer(num);
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let den_pos = i + 1;
                    let den = digits(&mut i);
                    if den.is_empty() {
                        return Err(err(den_pos, "expected a denominator after '/'"));
                    }
                    let den: BigInt = den.parse().expect("digits");
                    if den.is_zero() {
                        return Err(err(den_pos, "zero denominator"));
                    }
                    value /= Scalar::from_integer(den);
                }
                if i < chars.len() && chars[i] == '.' {
                    return Err(err(i + 1, "decimal literals are not accepted; use a/b"));
                }
                out.push((Tok::Num(value), pos));
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            }
            other => return Err(err(pos, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(_, p)| *p)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.i += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.i += 1;
            let pos = self.pos();
            match self.toks.get(self.i) {
                Some((Tok::Num(n), _)) if n.is_integer() && !num_traits::Signed::is_negative(n) => {
                    let k: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| err(pos, "exponent too large"))?;
                    self.i += 1;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return Err(err(pos, "expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let tok = self.toks.get(self.i).cloned();
        match tok {
            Some((Tok::Num(n), _)) => {
                self.i += 1;
                Ok(Expr::Num(n))
            }
            Some((Tok::Ident(name), _)) => {
                self.i += 1;
                variable(&name, pos)
            }
            Some((Tok::LParen, _)) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.pos(), "expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some((t, _)) => Err(err(pos, format!("unexpected token {t:?}"))),
            None => Err(err(pos, "unexpected end of input")),
        }
    }
}

fn variable(name: &str, pos: usize) -> Result<Expr> {
    let unknown = || Error::UnknownVariable { name: name.to_string(), position: pos };
    let index = |digits: &str| -> Result<usize> {
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || digits.starts_with('0') {
            return Err(unknown());
        }
        digits.parse().map_err(|_| unknown())
    };
    if name == "tau" {
        Ok(Expr::Tau { pos })
    } else if let Some(rest) = name.strip_prefix("xi") {
        Ok(Expr::Xi { index: index(rest)?, pos })
    } else if let Some(rest) = name.strip_prefix('x') {
        Ok(Expr::X { index: index(rest)?, pos })
    } else {
        Err(unknown())
    }
}

/// Parse text into an expression tree without reference to a signature.
pub fn parse_expr(input: &str) -> Result<Expr> {
    let toks = lex(input)?;
    let end = input.chars().count() + 1;
    let mut p = Parser { toks, i: 0, end };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return Err(err(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    /// Evaluate in a signature; unknown or out-of-range variables are rejected.
    pub fn evaluate(&self, sig: Signature) -> Result<SuperElement> {
        let unknown = |name: String, position: usize| Error::UnknownVariable { name, position };
        Ok(match self {
            Expr::Num(c) => SuperElement::constant(sig, c.clone()),
            Expr::X { index, pos } => {
                SuperElement::x(sig, *index).map_err(|_| unknown(format!("x{index}"), *pos))?
            }
            Expr::Xi { index, pos } => {
                SuperElement::xi(sig, *index).map_err(|_| unknown(format!("xi{index}"), *pos))?
            }
            Expr::Tau { pos } => SuperElement::tau(sig).map_err(|_| unknown("tau".into(), *pos))?,
            Expr::Add(a, b) => a.evaluate(sig)? + b.evaluate(sig)?,
            Expr::Sub(a, b) => a.evaluate(sig)? - b.evaluate(sig)?,
            Expr::Mul(a, b) => a.evaluate(sig)? * b.evaluate(sig)?,
            Expr::Neg(a) => -a.evaluate(sig)?,
            Expr::Pow(a, k) => a.evaluate(sig)?.pow(*k),
        })
    }
}

/// Parse and evaluate text into a canonical element of `sig`.
pub fn parse(input: &str, sig: Signature) -> Result<SuperElement> {
    parse_expr(input)?.evaluate(sig)
}
