//! Expression parser for rational functions in `z`: integer and rational
//! literals, `+ - * / ^` with integer exponents (negative allowed),
//! parentheses. Precedence `^` > unary `-` > `* /` > `+ -`; `^` is
//! right-associative. Results are exactly normalized.

use std::fmt;

use hayman_core::ratfunc::RatFunc;
use hayman_core::Q;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub message: String,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            'z' => {
                out.push((Tok::Var, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let v: Q = lit.parse::<num_bigint::BigInt>().map(Q::from_integer).map_err(
                    |_| ParseError {
                        message: format!("invalid integer literal '{}'", lit),
                        position: start,
                    },
                )?;
                out.push((Tok::Num(v), start));
            }
            other => {
                return Err(ParseError {
                    message: format!("unexpected character '{}'", other),
                    position: i,
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            message: message.into(),
            position: self.here(),
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let pos = self.here();
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|_| ParseError {
                        message: "division by the zero polynomial".into(),
                        position: pos,
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            Ok(-&self.unary()?)
        } else {
            self.power()
        }
    }

    // power := atom ('^' exponent)?   with exponent := unary, required to be
    // a constant integer; right-associativity comes from exponent recursion.
    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.here();
            let exp = self.exponent()?;
            return base.powi(exp).map_err(|_| ParseError {
                message: "zero raised to a negative power".into(),
                position: pos,
            });
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let pos = self.here();
        let v = self.unary()?;
        let c = v.constant_value().ok_or_else(|| ParseError {
            message: "exponent must be an integer constant".into(),
            position: pos,
        })?;
        if !c.is_integer() {
            return Err(ParseError {
                message: "exponent must be an integer constant".into(),
                position: pos,
            });
        }
        c.to_integer().to_i64().ok_or(ParseError {
            message: "exponent out of range".into(),
            position: pos,
        })
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.bump();
                Ok(RatFunc::from_q(q))
            }
            Some(Tok::Var) => {
                self.bump();
                Ok(RatFunc::var())
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if matches!(self.peek(), Some(Tok::RParen)) {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(self.err("expected ')'"))
                }
            }
            Some(other) => Err(self.err(format!("unexpected token {:?}", other))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn parse_ratfunc(text: &str) -> Result<RatFunc, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError {
            message: "empty expression".into(),
            position: 0,
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Canonical printed form: expanded numerator over monic denominator;
/// guaranteed to re-parse to the same RatFunc.
pub fn print_ratfunc(f: &RatFunc) -> String {
    format!("{}", f)
}
